#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsim/nodes.hpp"

namespace mlsim {

inline std::uint64_t pack_pair(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}
inline NodeId pair_first(std::uint64_t key) { return static_cast<NodeId>(key >> 32); }
inline NodeId pair_second(std::uint64_t key) { return static_cast<NodeId>(key & 0xffffffffULL); }

/// Accumulated directed interaction magnitudes for one layer: call/sms
/// counts or co-presence seconds. Zero entries are never stored.
struct DirectedCountLayer {
    std::string name;
    std::vector<NodeId> node_set;                      // sorted, unique
    std::unordered_map<std::uint64_t, double> entries; // (src,dst) -> magnitude > 0

    /// Accumulates magnitude onto (src, dst). No-op for magnitude == 0;
    /// throws on negatives and self-pairs.
    void add(NodeId src, NodeId dst, double magnitude);

    double at(NodeId src, NodeId dst) const {
        auto it = entries.find(pack_pair(src, dst));
        return it == entries.end() ? 0.0 : it->second;
    }

    std::size_t edge_count() const { return entries.size(); }

    /// Entries as a vector sorted by (src, dst); the deterministic iteration
    /// order used by everything downstream.
    std::vector<std::pair<std::uint64_t, double>> sorted_entries() const;
};

struct DirectedWeight {
    NodeId src, dst;
    double w;
};

struct WeightedEdge {
    NodeId a, b; // a < b
    double w;
};

/// Symmetric weighted graph for one layer at a fixed alpha. Edges are sorted
/// by (a, b) and all stored weights are positive. Immutable by convention
/// after construction.
struct WeightedLayer {
    std::string name;
    double alpha = 1.0;
    std::vector<NodeId> node_set; // sorted, unique
    std::vector<WeightedEdge> edges;
};

/// Directed link weights w_ij = n_ij^alpha / sum_k n_ik^alpha, normalized
/// per source row. alpha = 0 gives every existing out-link weight
/// 1/out-degree; absent links stay absent for every alpha >= 0.
/// Throws InputError for alpha < 0. Output sorted by (src, dst).
std::vector<DirectedWeight> alpha_weights(const DirectedCountLayer& counts, double alpha);

/// Average the two directions of every unordered pair (missing direction
/// contributes 0) and store each pair once.
WeightedLayer symmetrize(std::span<const DirectedWeight> directed, std::string name,
                         double alpha, std::vector<NodeId> node_set);

/// symmetrize(alpha_weights(counts, alpha)).
WeightedLayer build_layer(const DirectedCountLayer& counts, double alpha);

/// Sum of incident weights per node, aligned with layer.node_set.
std::vector<double> node_strengths(const WeightedLayer& layer);

} // namespace mlsim
