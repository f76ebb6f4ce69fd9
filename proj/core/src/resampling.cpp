#include "mlsim/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "accum.hpp"
#include "mlsim/errors.hpp"
#include "mlsim/parallel.hpp"
#include "mlsim/rng.hpp"

namespace mlsim {

const char* null_model_name(NullModel m) {
    return m == NullModel::link_reshuffle ? "link-reshuffle" : "attribute-permutation";
}

NullModel null_model_from_name(const std::string& s) {
    if (s == "link-reshuffle") return NullModel::link_reshuffle;
    if (s == "attribute-permutation") return NullModel::attribute_permutation;
    throw InputError("unknown null model '" + s + "' (link-reshuffle | attribute-permutation)");
}

const char* sidedness_name(Sidedness s) {
    return s == Sidedness::greater ? "greater" : "two-sided";
}

Sidedness sidedness_from_name(const std::string& s) {
    if (s == "greater") return Sidedness::greater;
    if (s == "two-sided") return Sidedness::two_sided;
    throw InputError("unknown sidedness '" + s + "' (greater | two-sided)");
}

const char* estimator_name(PValueEstimator e) {
    return e == PValueEstimator::literal ? "literal" : "smoothed";
}

PValueEstimator estimator_from_name(const std::string& s) {
    if (s == "literal") return PValueEstimator::literal;
    if (s == "smoothed") return PValueEstimator::smoothed;
    throw InputError("unknown estimator '" + s + "' (literal | smoothed)");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t pair_offset(std::uint64_t i, std::uint64_t n) {
    return i * (n - 1) - i * (i - 1) / 2;
}

// Inverse of the row-major enumeration of unordered pairs (i < j) over n
// positions: index 0 -> (0,1), 1 -> (0,2), ...
std::pair<std::uint32_t, std::uint32_t> unrank_pair(std::uint64_t idx, std::uint64_t n) {
    const double dn = double(2 * n - 1);
    const double root = std::sqrt(std::max(0.0, dn * dn - 8.0 * double(idx)));
    std::uint64_t i = std::uint64_t(std::max(0.0, (dn - root) / 2.0));
    if (i >= n - 1) i = n - 2;
    while (i + 1 < n - 1 && pair_offset(i + 1, n) <= idx) ++i;
    while (i > 0 && pair_offset(i, n) > idx) --i;
    const std::uint64_t j = i + 1 + (idx - pair_offset(i, n));
    return {std::uint32_t(i), std::uint32_t(j)};
}

// Draws `count` distinct values from [0, total) by a partial Fisher-Yates
// shuffle of the identity permutation, stored sparsely so memory is O(count)
// even for huge pair spaces. Rejection-free, so dense layers cost the same.
void sample_distinct(std::uint64_t total, std::size_t count, rng::Engine& g,
                     std::unordered_map<std::uint64_t, std::uint64_t>& scratch,
                     std::vector<std::uint64_t>& out) {
    scratch.clear();
    out.clear();
    out.reserve(count);
    auto view = [&scratch](std::uint64_t pos) {
        auto it = scratch.find(pos);
        return it == scratch.end() ? pos : it->second;
    };
    for (std::size_t k = 0; k < count; ++k) {
        const std::uint64_t r = k + rng::uniform_below(g, total - k);
        const std::uint64_t picked = view(r);
        scratch[r] = view(k);
        out.push_back(picked);
    }
}

} // namespace

WeightedLayer reshuffle_layer(const WeightedLayer& layer, std::uint64_t seed) {
    const std::uint64_t n = layer.node_set.size();
    const std::size_t e = layer.edges.size();
    if (e == 0) throw InputError("cannot reshuffle a layer with no edges");
    const std::uint64_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
    if (e > pairs)
        throw InputError("layer '" + layer.name + "' has " + std::to_string(e) +
                         " edges but only " + std::to_string(pairs) + " node pairs");

    rng::Engine g(seed);
    std::unordered_map<std::uint64_t, std::uint64_t> scratch;
    std::vector<std::uint64_t> picks;
    sample_distinct(pairs, e, g, scratch, picks);

    WeightedLayer out;
    out.name = layer.name;
    out.alpha = layer.alpha;
    out.node_set = layer.node_set;
    out.edges.reserve(e);
    for (std::size_t k = 0; k < e; ++k) {
        auto [pi, pj] = unrank_pair(picks[k], n);
        NodeId a = layer.node_set[pi];
        NodeId b = layer.node_set[pj];
        if (a > b) std::swap(a, b);
        out.edges.push_back({a, b, layer.edges[k].w});
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const auto& x, const auto& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return out;
}

SignificanceResult p_from_nulls(double observed_r, std::span<const double> null_r,
                                Sidedness sidedness, PValueEstimator estimator) {
    SignificanceResult res;
    res.observed_r = observed_r;
    res.sidedness = sidedness;
    res.estimator = estimator;
    res.replicas_requested = null_r.size();

    detail::KahanSum sum;
    std::size_t defined = 0;
    for (double r : null_r) {
        if (std::isnan(r)) continue;
        sum.add(r);
        ++defined;
    }
    if (defined == 0) throw UndefinedStatError("every null replica left the statistic undefined");
    res.replicas_defined = defined;
    res.replicas_discarded = null_r.size() - defined;
    res.null_mean = sum.get() / double(defined);

    detail::KahanSum var;
    std::size_t exceed = 0;
    for (double r : null_r) {
        if (std::isnan(r)) continue;
        const double d = r - res.null_mean;
        var.add(d * d);
        const bool hit = sidedness == Sidedness::greater
                             ? r > observed_r
                             : std::abs(d) >= std::abs(observed_r - res.null_mean);
        if (hit) ++exceed;
    }
    res.null_std = defined > 1 ? std::sqrt(var.get() / double(defined - 1)) : 0.0;
    res.p_value = estimator == PValueEstimator::literal
                      ? double(exceed) / double(defined)
                      : double(1 + exceed) / double(defined + 1);
    return res;
}

namespace {

struct ReplicaContext {
    std::vector<double> values;  // attribute value per node_set position, NaN = missing
    std::vector<double> weights; // edge weights in layer order
    // attribute permutation: prebound edge endpoints as ranks into `pool`
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_ranks;
    std::vector<double> pool; // values of nodes that have them
    std::uint64_t pair_space = 0;
    std::size_t node_count = 0;
};

ReplicaContext make_context(const WeightedLayer& layer, const AttributeTable& attrs,
                            const std::string& variable) {
    const Variable& var = attrs.require(variable);
    ReplicaContext ctx;
    ctx.node_count = layer.node_set.size();
    ctx.pair_space = ctx.node_count < 2 ? 0 : std::uint64_t(ctx.node_count) * (ctx.node_count - 1) / 2;

    std::unordered_map<NodeId, std::uint32_t> pos;
    pos.reserve(ctx.node_count);
    for (std::uint32_t i = 0; i < ctx.node_count; ++i) pos[layer.node_set[i]] = i;

    ctx.values.assign(ctx.node_count, kNaN);
    std::vector<std::uint32_t> rank(ctx.node_count, 0);
    for (std::uint32_t i = 0; i < ctx.node_count; ++i) {
        auto it = var.values.find(layer.node_set[i]);
        if (it != var.values.end()) {
            rank[i] = std::uint32_t(ctx.pool.size());
            ctx.values[i] = it->second;
            ctx.pool.push_back(it->second);
        }
    }

    const std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    ctx.weights.reserve(layer.edges.size());
    ctx.edge_ranks.reserve(layer.edges.size());
    for (const auto& e : layer.edges) {
        ctx.weights.push_back(e.w);
        const std::uint32_t pa = pos.at(e.a);
        const std::uint32_t pb = pos.at(e.b);
        const bool ok = !std::isnan(ctx.values[pa]) && !std::isnan(ctx.values[pb]);
        ctx.edge_ranks.push_back(ok ? std::make_pair(rank[pa], rank[pb])
                                    : std::make_pair(none, none));
    }
    return ctx;
}

double replica_icc(std::span<const EdgeSample> samples, IccConvention convention) {
    try {
        return weighted_icc_samples(samples, convention).r;
    } catch (const UndefinedStatError&) {
        return kNaN;
    }
}

} // namespace

SignificanceResult icc_p_value(const WeightedLayer& layer, const AttributeTable& attrs,
                               const std::string& variable, std::size_t replicas,
                               std::uint64_t seed, NullModel null_model, Sidedness sidedness,
                               PValueEstimator estimator, IccConvention convention,
                               unsigned threads) {
    if (replicas == 0) throw InputError("replica count must be at least 1");
    const IccResult observed = weighted_icc(layer, attrs, variable, convention);
    const ReplicaContext ctx = make_context(layer, attrs, variable);
    const std::size_t e = layer.edges.size();
    if (null_model == NullModel::link_reshuffle && e > ctx.pair_space)
        throw InputError("more edges than node pairs; reshuffle impossible");

    std::vector<double> null_r(replicas, kNaN);
    const std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    parallel_for(replicas, threads, [&](std::size_t b) {
        thread_local std::unordered_map<std::uint64_t, std::uint64_t> scratch;
        thread_local std::vector<std::uint64_t> picks;
        thread_local std::vector<EdgeSample> samples;
        thread_local std::vector<double> pool;
        samples.clear();

        rng::Engine g = rng::make_engine(seed, "null-replica", b);
        if (null_model == NullModel::link_reshuffle) {
            sample_distinct(ctx.pair_space, e, g, scratch, picks);
            for (std::size_t k = 0; k < e; ++k) {
                auto [pi, pj] = unrank_pair(picks[k], ctx.node_count);
                const double xi = ctx.values[pi];
                const double xj = ctx.values[pj];
                if (std::isnan(xi) || std::isnan(xj)) continue;
                samples.push_back({xi, xj, ctx.weights[k]});
            }
        } else {
            pool = ctx.pool;
            for (std::size_t k = pool.size(); k > 1; --k)
                std::swap(pool[k - 1], pool[rng::uniform_below(g, k)]);
            for (std::size_t k = 0; k < e; ++k) {
                const auto [ra, rb] = ctx.edge_ranks[k];
                if (ra == none) continue;
                samples.push_back({pool[ra], pool[rb], ctx.weights[k]});
            }
        }
        null_r[b] = samples.empty() ? kNaN : replica_icc(samples, convention);
    });

    SignificanceResult res = p_from_nulls(observed.r, null_r, sidedness, estimator);
    res.seed = seed;
    res.null_model = null_model;
    return res;
}

double icc_std_envelope(const WeightedLayer& layer, const AttributeTable& attrs,
                        const std::string& variable, std::size_t replicas, std::uint64_t seed,
                        IccConvention convention, unsigned threads) {
    if (replicas < 2) throw InputError("bootstrap needs at least 2 replicas");
    if (layer.edges.empty()) throw InputError("cannot bootstrap a layer with no edges");
    const ReplicaContext ctx = make_context(layer, attrs, variable);
    const std::size_t e = layer.edges.size();
    const std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    std::vector<double> boot_r(replicas, kNaN);
    parallel_for(replicas, threads, [&](std::size_t b) {
        thread_local std::vector<EdgeSample> samples;
        samples.clear();
        rng::Engine g = rng::make_engine(seed, "bootstrap-replica", b);
        for (std::size_t k = 0; k < e; ++k) {
            const std::size_t pick = std::size_t(rng::uniform_below(g, e));
            const auto [ra, rb] = ctx.edge_ranks[pick];
            if (ra == none) continue;
            samples.push_back({ctx.pool[ra], ctx.pool[rb], ctx.weights[pick]});
        }
        boot_r[b] = samples.empty() ? kNaN : replica_icc(samples, convention);
    });

    detail::KahanSum sum;
    std::size_t defined = 0;
    for (double r : boot_r) {
        if (std::isnan(r)) continue;
        sum.add(r);
        ++defined;
    }
    if (defined < 2)
        throw UndefinedStatError("fewer than 2 bootstrap replicas left the statistic defined");
    const double mean = sum.get() / double(defined);
    detail::KahanSum var;
    for (double r : boot_r) {
        if (std::isnan(r)) continue;
        const double d = r - mean;
        var.add(d * d);
    }
    return std::sqrt(var.get() / double(defined - 1));
}

double icc_std_envelope(const DirectedCountLayer& counts, const AttributeTable& attrs,
                        const std::string& variable, double alpha, std::size_t replicas,
                        std::uint64_t seed, IccConvention convention, unsigned threads) {
    return icc_std_envelope(build_layer(counts, alpha), attrs, variable, replicas, seed,
                            convention, threads);
}

} // namespace mlsim
