#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "mlsim/errors.hpp"
#include "mlsim/network.hpp"
#include "mlsim/rng.hpp"

using namespace mlsim;

namespace {

DirectedCountLayer make_counts(std::string name, std::vector<NodeId> nodes,
                               std::vector<std::tuple<NodeId, NodeId, double>> rows) {
    DirectedCountLayer c;
    c.name = std::move(name);
    c.node_set = std::move(nodes);
    for (auto& [s, d, m] : rows) c.add(s, d, m);
    return c;
}

double edge_weight(const WeightedLayer& layer, NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    for (const auto& e : layer.edges)
        if (e.a == a && e.b == b) return e.w;
    return 0.0;
}

double directed_weight(const std::vector<DirectedWeight>& ws, NodeId s, NodeId d) {
    for (const auto& w : ws)
        if (w.src == s && w.dst == d) return w.w;
    return 0.0;
}

} // namespace

TEST_CASE("count accumulation rejects bad input and skips zeros") {
    DirectedCountLayer c;
    c.node_set = {0, 1};
    c.add(0, 1, 2.0);
    c.add(0, 1, 3.0);
    CHECK(c.at(0, 1) == 5.0);
    c.add(1, 0, 0.0);
    CHECK(c.edge_count() == 1);
    CHECK_THROWS_AS(c.add(0, 0, 1.0), InputError);
    CHECK_THROWS_AS(c.add(0, 1, -1.0), InputError);
}

TEST_CASE("equal counts split evenly at alpha 1") {
    auto c = make_counts("t", {0, 1, 2}, {{0, 1, 2.0}, {0, 2, 2.0}});
    auto ws = alpha_weights(c, 1.0);
    CHECK(directed_weight(ws, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(directed_weight(ws, 0, 2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("alpha 0 gives one over out-degree regardless of counts") {
    auto c = make_counts("t", {0, 1, 2}, {{0, 1, 9.0}, {0, 2, 1.0}});
    auto ws = alpha_weights(c, 0.0);
    CHECK(directed_weight(ws, 0, 1) == 0.5);
    CHECK(directed_weight(ws, 0, 2) == 0.5);
}

TEST_CASE("alpha 2 amplifies the heavier link") {
    auto c = make_counts("t", {0, 1, 2}, {{0, 1, 9.0}, {0, 2, 1.0}});
    auto ws = alpha_weights(c, 2.0);
    CHECK(directed_weight(ws, 0, 1) == doctest::Approx(81.0 / 82.0).epsilon(1e-15));
    CHECK(directed_weight(ws, 0, 2) == doctest::Approx(1.0 / 82.0).epsilon(1e-15));
}

TEST_CASE("negative alpha is rejected") {
    auto c = make_counts("t", {0, 1}, {{0, 1, 1.0}});
    CHECK_THROWS_AS(alpha_weights(c, -0.5), InputError);
    CHECK_THROWS_AS(alpha_weights(c, std::nan("")), InputError);
}

TEST_CASE("rows sum to one for any alpha") {
    rng::Engine g = rng::make_engine(21, "rowsum");
    for (int trial = 0; trial < 50; ++trial) {
        DirectedCountLayer c;
        c.name = "t";
        const NodeId n = 8;
        for (NodeId i = 0; i < n; ++i) c.node_set.push_back(i);
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                if (i != j && rng::uniform01(g) < 0.6) c.add(i, j, 1.0 + 40.0 * rng::uniform01(g));
        for (double alpha : {0.0, 0.3, 1.0, 2.0, 7.0}) {
            auto ws = alpha_weights(c, alpha);
            std::map<NodeId, double> row;
            for (const auto& w : ws) {
                CHECK(w.w > 0.0);
                CHECK(w.w <= 1.0 + 1e-12);
                row[w.src] += w.w;
            }
            for (const auto& [src, sum] : row) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("weights are invariant under count rescaling") {
    auto c1 = make_counts("t", {0, 1, 2, 3}, {{0, 1, 3.0}, {0, 2, 5.0}, {0, 3, 11.0}, {2, 0, 4.0}});
    auto c2 = make_counts("t", {0, 1, 2, 3},
                          {{0, 1, 300.0}, {0, 2, 500.0}, {0, 3, 1100.0}, {2, 0, 400.0}});
    for (double alpha : {0.5, 1.0, 2.0, 16.0}) {
        auto w1 = alpha_weights(c1, alpha);
        auto w2 = alpha_weights(c2, alpha);
        REQUIRE(w1.size() == w2.size());
        for (std::size_t i = 0; i < w1.size(); ++i) {
            CHECK(w1[i].src == w2[i].src);
            CHECK(w1[i].dst == w2[i].dst);
            CHECK(w1[i].w == doctest::Approx(w2[i].w).epsilon(1e-12));
        }
    }
}

TEST_CASE("raising alpha concentrates weight on the largest count") {
    auto c = make_counts("t", {0, 1, 2, 3}, {{0, 1, 5.0}, {0, 2, 3.0}, {0, 3, 2.0}});
    double prev = 0.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double w = directed_weight(alpha_weights(c, alpha), 0, 1);
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("large alpha approaches the argmax indicator") {
    auto c = make_counts("t", {0, 1, 2, 3}, {{0, 1, 5.0}, {0, 2, 3.0}, {0, 3, 2.0}});
    auto ws = alpha_weights(c, 16.0);
    CHECK(directed_weight(ws, 0, 1) > 0.999);
    CHECK(directed_weight(ws, 0, 2) < 1e-3);
    CHECK(directed_weight(ws, 0, 3) < 1e-3);

    // tied maxima share the limit weight
    auto tie = make_counts("t", {0, 1, 2, 3}, {{0, 1, 5.0}, {0, 2, 5.0}, {0, 3, 1.0}});
    auto wt = alpha_weights(tie, 16.0);
    CHECK(directed_weight(wt, 0, 1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(directed_weight(wt, 0, 2) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("huge counts survive large alpha via row-max normalization") {
    auto c = make_counts("t", {0, 1, 2}, {{0, 1, 9e6}, {0, 2, 3e6}});
    auto ws = alpha_weights(c, 16.0);
    const double w01 = directed_weight(ws, 0, 1);
    CHECK(std::isfinite(w01));
    CHECK(w01 > 0.999);
}

TEST_CASE("two nodes with reciprocal contact meet at weight one") {
    auto c = make_counts("t", {0, 1}, {{0, 1, 7.0}, {1, 0, 3.0}});
    auto layer = build_layer(c, 1.0);
    REQUIRE(layer.edges.size() == 1);
    CHECK(layer.edges[0].w == 1.0);
}

TEST_CASE("one-sided contact averages with an implicit zero") {
    auto c = make_counts("t", {0, 1}, {{0, 1, 7.0}});
    auto layer = build_layer(c, 1.0);
    REQUIRE(layer.edges.size() == 1);
    CHECK(layer.edges[0].w == 0.5);
}

TEST_CASE("three node chain, one-way traffic") {
    // A->B and B->C only: each sender's single out-link is its whole row, so
    // both pairs average a full direction with an absent reverse one.
    auto c = make_counts("t", {0, 1, 2}, {{0, 1, 4.0}, {1, 2, 4.0}});
    auto layer = build_layer(c, 1.0);
    CHECK(edge_weight(layer, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(edge_weight(layer, 1, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(edge_weight(layer, 0, 2) == 0.0);
}

TEST_CASE("three node chain, reciprocated traffic") {
    // Every contact returned in kind: B splits between A and C.
    auto c = make_counts("t", {0, 1, 2},
                         {{0, 1, 4.0}, {1, 0, 4.0}, {1, 2, 4.0}, {2, 1, 4.0}});
    auto layer = build_layer(c, 1.0);
    CHECK(edge_weight(layer, 0, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(edge_weight(layer, 1, 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("symmetrized weights never exceed one") {
    rng::Engine g = rng::make_engine(23, "wcap");
    for (int trial = 0; trial < 30; ++trial) {
        DirectedCountLayer c;
        c.name = "t";
        const NodeId n = 7;
        for (NodeId i = 0; i < n; ++i) c.node_set.push_back(i);
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                if (i != j && rng::uniform01(g) < 0.5) c.add(i, j, 1.0 + 20.0 * rng::uniform01(g));
        for (double alpha : {0.0, 1.0, 3.0}) {
            auto layer = build_layer(c, alpha);
            for (const auto& e : layer.edges) {
                CHECK(e.a < e.b);
                CHECK(e.w > 0.0);
                CHECK(e.w <= 1.0 + 1e-12);
            }
            CHECK(std::is_sorted(layer.edges.begin(), layer.edges.end(),
                                 [](const WeightedEdge& x, const WeightedEdge& y) {
                                     return std::pair(x.a, x.b) < std::pair(y.a, y.b);
                                 }));
        }
    }
}

TEST_CASE("node strengths align with node_set and include isolates") {
    auto c = make_counts("t", {0, 1, 2, 3}, {{0, 1, 2.0}, {1, 0, 2.0}});
    auto layer = build_layer(c, 1.0);
    auto s = node_strengths(layer);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 1.0);
    CHECK(s[2] == 0.0);
    CHECK(s[3] == 0.0);
}
