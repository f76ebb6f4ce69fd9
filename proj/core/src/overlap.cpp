#include "mlsim/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accum.hpp"
#include "mlsim/errors.hpp"
#include "mlsim/parallel.hpp"

namespace mlsim {

const char* pair_domain_name(PairDomain d) {
    switch (d) {
        case PairDomain::union_of_links: return "union";
        case PairDomain::intersection: return "intersection";
        case PairDomain::all_pairs: return "all";
    }
    return "?";
}

PairDomain pair_domain_from_name(const std::string& s) {
    if (s == "union") return PairDomain::union_of_links;
    if (s == "intersection") return PairDomain::intersection;
    if (s == "all") return PairDomain::all_pairs;
    throw InputError("unknown pair domain '" + s + "' (union | intersection | all)");
}

double layer_overlap(const WeightedLayer& a, const WeightedLayer& b, PairDomain domain,
                     std::size_t* pair_count_out) {
    if (a.node_set != b.node_set)
        throw InputError("layers '" + a.name + "' and '" + b.name +
                         "' do not share a node set");

    // Merge the two sorted edge lists into (wa, wb) value pairs over the
    // union of supported node pairs; absent weight reads as 0.
    std::vector<std::pair<double, double>> vals;
    vals.reserve(a.edges.size() + b.edges.size());
    std::size_t i = 0, j = 0;
    auto key = [](const WeightedEdge& e) { return pack_pair(e.a, e.b); };
    while (i < a.edges.size() || j < b.edges.size()) {
        if (j == b.edges.size() || (i < a.edges.size() && key(a.edges[i]) < key(b.edges[j]))) {
            vals.emplace_back(a.edges[i].w, 0.0);
            ++i;
        } else if (i == a.edges.size() || key(b.edges[j]) < key(a.edges[i])) {
            vals.emplace_back(0.0, b.edges[j].w);
            ++j;
        } else {
            vals.emplace_back(a.edges[i].w, b.edges[j].w);
            ++i;
            ++j;
        }
    }

    if (domain == PairDomain::intersection) {
        std::erase_if(vals, [](const auto& v) { return v.first == 0.0 || v.second == 0.0; });
    }

    const std::uint64_t n = a.node_set.size();
    const std::uint64_t all = n < 2 ? 0 : n * (n - 1) / 2;
    // Pairs absent from both layers contribute exact (0,0) observations; they
    // are folded in analytically below rather than materialized.
    const std::uint64_t zero_pairs = domain == PairDomain::all_pairs
                                         ? all - std::uint64_t(vals.size())
                                         : 0;
    const std::uint64_t count = std::uint64_t(vals.size()) + zero_pairs;
    if (pair_count_out) *pair_count_out = std::size_t(count);
    if (count < 2)
        throw UndefinedStatError("overlap of '" + a.name + "' and '" + b.name +
                                 "' has fewer than 2 pairs in the " +
                                 pair_domain_name(domain) + " domain");

    const double inf = std::numeric_limits<double>::infinity();
    double min_a = inf, max_a = -inf, min_b = inf, max_b = -inf;
    detail::KahanSum sa, sb;
    for (const auto& [wa, wb] : vals) {
        sa.add(wa);
        sb.add(wb);
        min_a = std::min(min_a, wa);
        max_a = std::max(max_a, wa);
        min_b = std::min(min_b, wb);
        max_b = std::max(max_b, wb);
    }
    if (zero_pairs > 0) {
        min_a = std::min(min_a, 0.0);
        max_a = std::max(max_a, 0.0);
        min_b = std::min(min_b, 0.0);
        max_b = std::max(max_b, 0.0);
    }
    if (min_a == max_a || min_b == max_b)
        throw UndefinedStatError("layer '" + (min_a == max_a ? a.name : b.name) +
                                 "' has constant weight over the " + pair_domain_name(domain) +
                                 " domain");
    const double mean_a = sa.get() / double(count);
    const double mean_b = sb.get() / double(count);

    detail::KahanSum cov, var_a, var_b;
    for (const auto& [wa, wb] : vals) {
        const double da = wa - mean_a;
        const double db = wb - mean_b;
        cov.add(da * db);
        var_a.add(da * da);
        var_b.add(db * db);
    }
    if (zero_pairs > 0) {
        // (mean_a * mean_b) first, so the result is bitwise symmetric in the
        // argument order.
        cov.add(double(zero_pairs) * (mean_a * mean_b));
        var_a.add(double(zero_pairs) * (mean_a * mean_a));
        var_b.add(double(zero_pairs) * (mean_b * mean_b));
    }

    const double va = var_a.get();
    const double vb = var_b.get();
    if (va <= 0.0 || vb <= 0.0)
        throw UndefinedStatError("layer '" + (va <= 0.0 ? a.name : b.name) +
                                 "' has zero weight variance over the " +
                                 pair_domain_name(domain) + " domain");
    return cov.get() / std::sqrt(va * vb);
}

OverlapMatrix overlap_matrix(std::span<const WeightedLayer> layers, PairDomain domain) {
    const std::size_t n = layers.size();
    OverlapMatrix m;
    m.domain = domain;
    m.alpha = n ? layers[0].alpha : 1.0;
    for (const auto& l : layers) m.layer_names.push_back(l.name);
    m.r_p.assign(n * n, 1.0);
    m.pair_counts.assign(n * n, 0);
    m.errors.assign(n * n, "");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = std::numeric_limits<double>::quiet_NaN();
            std::size_t pairs = 0;
            std::string err;
            try {
                r = layer_overlap(layers[i], layers[j], domain, &pairs);
            } catch (const UndefinedStatError& e) {
                err = e.what();
            }
            m.r_p[m.index(i, j)] = m.r_p[m.index(j, i)] = r;
            m.pair_counts[m.index(i, j)] = m.pair_counts[m.index(j, i)] = pairs;
            m.errors[m.index(i, j)] = m.errors[m.index(j, i)] = err;
        }
    }
    return m;
}

std::vector<OverlapMatrix> overlap_alpha_sweep(std::span<const DirectedCountLayer> counts,
                                               std::span<const double> alphas, PairDomain domain,
                                               unsigned threads) {
    if (counts.size() < 2) throw InputError("overlap needs at least 2 layers");
    std::vector<OverlapMatrix> out(alphas.size());
    parallel_for(alphas.size(), threads, [&](std::size_t k) {
        std::vector<WeightedLayer> layers;
        layers.reserve(counts.size());
        for (const auto& c : counts) layers.push_back(build_layer(c, alphas[k]));
        out[k] = overlap_matrix(layers, domain);
        out[k].alpha = alphas[k];
    });
    return out;
}

} // namespace mlsim
