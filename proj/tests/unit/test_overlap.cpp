#include "doctest.h"

#include <cmath>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "mlsim/errors.hpp"
#include "mlsim/overlap.hpp"
#include "mlsim/rng.hpp"
#include "oracles.hpp"

using namespace mlsim;

namespace {

WeightedLayer wl(std::string name, std::vector<NodeId> nodes,
                 std::vector<std::tuple<NodeId, NodeId, double>> edges) {
    WeightedLayer l;
    l.name = std::move(name);
    l.node_set = std::move(nodes);
    for (auto& [a, b, w] : edges) l.edges.push_back({a, b, w});
    return l;
}

// Pearson over the requested domain, built naively from dense lookups.
double brute_overlap(const WeightedLayer& a, const WeightedLayer& b, PairDomain domain,
                     std::size_t* count = nullptr) {
    std::map<std::pair<NodeId, NodeId>, double> wa, wb;
    for (const auto& e : a.edges) wa[{e.a, e.b}] = e.w;
    for (const auto& e : b.edges) wb[{e.a, e.b}] = e.w;
    std::vector<std::pair<double, double>> vals;
    for (std::size_t i = 0; i < a.node_set.size(); ++i)
        for (std::size_t j = i + 1; j < a.node_set.size(); ++j) {
            const std::pair<NodeId, NodeId> key{a.node_set[i], a.node_set[j]};
            const auto ia = wa.find(key);
            const auto ib = wb.find(key);
            const double va = ia == wa.end() ? 0.0 : ia->second;
            const double vb = ib == wb.end() ? 0.0 : ib->second;
            const bool in_a = ia != wa.end(), in_b = ib != wb.end();
            const bool keep = domain == PairDomain::all_pairs ||
                              (domain == PairDomain::union_of_links && (in_a || in_b)) ||
                              (domain == PairDomain::intersection && in_a && in_b);
            if (keep) vals.push_back({va, vb});
        }
    if (count) *count = vals.size();
    return oracle::pearson(vals);
}

} // namespace

TEST_CASE("identical layers correlate to exactly one") {
    auto a = wl("a", {0, 1, 2, 3}, {{0, 1, 0.3}, {1, 2, 0.9}, {2, 3, 0.05}});
    auto b = a;
    b.name = "b";
    for (PairDomain d : {PairDomain::union_of_links, PairDomain::intersection}) {
        CHECK(layer_overlap(a, b, d) == 1.0); // bitwise, not approximately
    }
    CHECK(layer_overlap(a, b, PairDomain::all_pairs) == 1.0);
}

TEST_CASE("disjoint single links on three nodes") {
    auto a = wl("a", {0, 1, 2}, {{0, 1, 1.0}});
    auto b = wl("b", {0, 1, 2}, {{0, 2, 1.0}});

    std::size_t count = 0;
    SUBCASE("over all pairs the anticorrelation is -1/2") {
        const double r = layer_overlap(a, b, PairDomain::all_pairs, &count);
        CHECK(count == 3);
        CHECK(r == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("over the union the two supported pairs oppose exactly") {
        const double r = layer_overlap(a, b, PairDomain::union_of_links, &count);
        CHECK(count == 2);
        CHECK(r == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("the intersection is empty, hence undefined") {
        CHECK_THROWS_AS(layer_overlap(a, b, PairDomain::intersection), UndefinedStatError);
    }
}

TEST_CASE("constant weights over the domain are undefined") {
    auto a = wl("a", {0, 1, 2}, {{0, 1, 0.5}, {1, 2, 0.5}});
    auto b = wl("b", {0, 1, 2}, {{0, 1, 0.3}, {1, 2, 0.9}});
    // a is constant over the union of links
    CHECK_THROWS_AS(layer_overlap(a, b, PairDomain::union_of_links), UndefinedStatError);
    // but over all pairs the implicit zero at (0,2) gives it variance
    const double r = layer_overlap(a, b, PairDomain::all_pairs);
    CHECK(std::isfinite(r));

    // a one-pair domain can never carry variance
    auto c = wl("c", {0, 1, 2}, {{0, 1, 0.5}});
    auto d = wl("d", {0, 1, 2}, {{0, 1, 0.9}});
    CHECK_THROWS_AS(layer_overlap(c, d, PairDomain::union_of_links), UndefinedStatError);
}

TEST_CASE("node sets must agree") {
    auto a = wl("a", {0, 1, 2}, {{0, 1, 1.0}});
    auto b = wl("b", {0, 1}, {{0, 1, 1.0}});
    CHECK_THROWS_AS(layer_overlap(a, b), InputError);
}

TEST_CASE("overlap is symmetric in its arguments") {
    rng::Engine g = rng::make_engine(43, "sym");
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5};
        auto make = [&] {
            WeightedLayer l;
            l.name = "r";
            l.node_set = nodes;
            for (NodeId i = 0; i < 6; ++i)
                for (NodeId j = i + 1; j < 6; ++j)
                    if (rng::uniform01(g) < 0.55) l.edges.push_back({i, j, 0.05 + rng::uniform01(g)});
            return l;
        };
        auto a = make();
        auto b = make();
        for (PairDomain d : {PairDomain::union_of_links, PairDomain::intersection,
                             PairDomain::all_pairs}) {
            double rab, rba;
            try {
                rab = layer_overlap(a, b, d);
            } catch (const UndefinedStatError&) {
                CHECK_THROWS_AS(layer_overlap(b, a, d), UndefinedStatError);
                continue;
            }
            rba = layer_overlap(b, a, d);
            CHECK(rab == rba); // bitwise
        }
    }
}

TEST_CASE("overlap is invariant under per-layer weight rescaling") {
    auto a = wl("a", {0, 1, 2, 3}, {{0, 1, 0.2}, {1, 2, 0.7}, {0, 3, 0.4}});
    auto b = wl("b", {0, 1, 2, 3}, {{0, 1, 0.9}, {2, 3, 0.3}});
    auto a2 = a;
    for (auto& e : a2.edges) e.w *= 37.0;
    for (PairDomain d : {PairDomain::union_of_links, PairDomain::all_pairs}) {
        CHECK(layer_overlap(a, b, d) == doctest::Approx(layer_overlap(a2, b, d)).epsilon(1e-12));
    }
}

TEST_CASE("matches a brute-force Pearson on random layers") {
    rng::Engine g = rng::make_engine(47, "ov-oracle");
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const NodeId n = 3 + NodeId(rng::uniform_below(g, 8));
        std::vector<NodeId> nodes;
        for (NodeId i = 0; i < n; ++i) nodes.push_back(i);
        auto make = [&] {
            WeightedLayer l;
            l.name = "r";
            l.node_set = nodes;
            for (NodeId i = 0; i < n; ++i)
                for (NodeId j = i + 1; j < n; ++j)
                    if (rng::uniform01(g) < 0.5) l.edges.push_back({i, j, 0.05 + rng::uniform01(g)});
            return l;
        };
        auto a = make();
        auto b = make();
        for (PairDomain d : {PairDomain::union_of_links, PairDomain::intersection,
                             PairDomain::all_pairs}) {
            std::size_t fast_count = 0, slow_count = 0;
            double fast;
            try {
                fast = layer_overlap(a, b, d, &fast_count);
            } catch (const UndefinedStatError&) {
                continue; // degenerate draw
            }
            const double slow = brute_overlap(a, b, d, &slow_count);
            CHECK(fast_count == slow_count);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
            ++compared;
        }
    }
    CHECK(compared > 300); // most draws are non-degenerate
}

TEST_CASE("overlap matrix fills both triangles and marks undefined cells") {
    auto a = wl("a", {0, 1, 2}, {{0, 1, 1.0}});
    auto b = wl("b", {0, 1, 2}, {{0, 2, 1.0}});
    auto c = wl("c", {0, 1, 2}, {{0, 1, 0.4}}); // same support as a -> constant over union
    std::vector<WeightedLayer> layers{a, b, c};
    auto m = overlap_matrix(layers, PairDomain::union_of_links);
    REQUIRE(m.layer_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(m.r_p[m.index(0, 0)] == 1.0);
    CHECK(m.r_p[m.index(0, 1)] == doctest::Approx(-1.0));
    CHECK(m.r_p[m.index(1, 0)] == m.r_p[m.index(0, 1)]);
    CHECK(std::isnan(m.r_p[m.index(0, 2)])); // single shared pair: no variance
    CHECK_FALSE(m.errors[m.index(0, 2)].empty());
    CHECK(m.pair_counts[m.index(0, 1)] == 2);
}

TEST_CASE("alpha sweep keeps identical count layers at correlation one") {
    DirectedCountLayer a, b;
    a.name = "a";
    b.name = "b";
    a.node_set = b.node_set = {0, 1, 2, 3};
    for (auto* c : {&a, &b}) {
        c->add(0, 1, 4.0);
        c->add(1, 0, 2.0);
        c->add(1, 2, 7.0);
        c->add(2, 3, 3.0);
    }
    std::vector<DirectedCountLayer> counts{a, b};
    std::vector<double> alphas{0.0, 0.5, 1.0, 2.0};
    auto sweeps = overlap_alpha_sweep(counts, alphas);
    REQUIRE(sweeps.size() == 4);
    for (const auto& m : sweeps) {
        CHECK(m.r_p[m.index(0, 1)] == 1.0);
        CHECK(m.pair_counts[m.index(0, 1)] == 3);
    }
}

TEST_CASE("alpha sweep needs at least two layers") {
    DirectedCountLayer a;
    a.name = "a";
    a.node_set = {0, 1};
    a.add(0, 1, 1.0);
    std::vector<DirectedCountLayer> counts{a};
    std::vector<double> alphas{1.0};
    CHECK_THROWS_AS(overlap_alpha_sweep(counts, alphas), InputError);
}

TEST_CASE("pair domain names round-trip") {
    CHECK(pair_domain_from_name("union") == PairDomain::union_of_links);
    CHECK(pair_domain_from_name("intersection") == PairDomain::intersection);
    CHECK(pair_domain_from_name("all") == PairDomain::all_pairs);
    CHECK(std::string(pair_domain_name(PairDomain::union_of_links)) == "union");
    CHECK(std::string(pair_domain_name(PairDomain::intersection)) == "intersection");
    CHECK(std::string(pair_domain_name(PairDomain::all_pairs)) == "all");
    CHECK_THROWS_AS(pair_domain_from_name("bogus"), InputError);
}
