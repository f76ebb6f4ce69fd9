#include "mlsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mlsim/errors.hpp"

namespace mlsim {

void DirectedCountLayer::add(NodeId src, NodeId dst, double magnitude) {
    if (src == dst) throw InputError("layer '" + name + "': self-pair for node id " + std::to_string(src));
    if (magnitude < 0.0 || !std::isfinite(magnitude))
        throw InputError("layer '" + name + "': negative or non-finite magnitude");
    if (magnitude == 0.0) return;
    entries[pack_pair(src, dst)] += magnitude;
}

std::vector<std::pair<std::uint64_t, double>> DirectedCountLayer::sorted_entries() const {
    std::vector<std::pair<std::uint64_t, double>> out(entries.begin(), entries.end());
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

std::vector<DirectedWeight> alpha_weights(const DirectedCountLayer& counts, double alpha) {
    if (alpha < 0.0 || !std::isfinite(alpha))
        throw InputError("alpha must be a finite value >= 0, got " + std::to_string(alpha));

    auto entries = counts.sorted_entries();
    std::vector<DirectedWeight> out;
    out.reserve(entries.size());

    std::size_t row_begin = 0;
    while (row_begin < entries.size()) {
        const NodeId src = pair_first(entries[row_begin].first);
        std::size_t row_end = row_begin;
        double max_count = 0.0;
        while (row_end < entries.size() && pair_first(entries[row_end].first) == src) {
            max_count = std::max(max_count, entries[row_end].second);
            ++row_end;
        }
        // Normalizing by the row maximum before exponentiation keeps large
        // alpha in range: ratios are <= 1 so powers cannot overflow.
        double denom = 0.0;
        for (std::size_t k = row_begin; k < row_end; ++k)
            denom += std::pow(entries[k].second / max_count, alpha);
        for (std::size_t k = row_begin; k < row_end; ++k) {
            const double w = std::pow(entries[k].second / max_count, alpha) / denom;
            if (w > 0.0)
                out.push_back({src, pair_second(entries[k].first), w});
        }
        row_begin = row_end;
    }
    return out;
}

WeightedLayer symmetrize(std::span<const DirectedWeight> directed, std::string name,
                         double alpha, std::vector<NodeId> node_set) {
    std::map<std::uint64_t, double> half; // ordered: edges come out sorted
    for (const auto& d : directed) {
        const NodeId a = std::min(d.src, d.dst);
        const NodeId b = std::max(d.src, d.dst);
        half[pack_pair(a, b)] += 0.5 * d.w;
    }
    WeightedLayer layer;
    layer.name = std::move(name);
    layer.alpha = alpha;
    layer.node_set = std::move(node_set);
    layer.edges.reserve(half.size());
    for (const auto& [key, w] : half)
        if (w > 0.0)
            layer.edges.push_back({pair_first(key), pair_second(key), w});
    return layer;
}

WeightedLayer build_layer(const DirectedCountLayer& counts, double alpha) {
    auto directed = alpha_weights(counts, alpha);
    return symmetrize(directed, counts.name, alpha, counts.node_set);
}

std::vector<double> node_strengths(const WeightedLayer& layer) {
    std::unordered_map<NodeId, std::size_t> pos;
    pos.reserve(layer.node_set.size());
    for (std::size_t i = 0; i < layer.node_set.size(); ++i) pos[layer.node_set[i]] = i;
    std::vector<double> strength(layer.node_set.size(), 0.0);
    for (const auto& e : layer.edges) {
        strength[pos.at(e.a)] += e.w;
        strength[pos.at(e.b)] += e.w;
    }
    return strength;
}

} // namespace mlsim
