#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlsim {

using NodeId = std::uint32_t;

/// Bidirectional map between external node names and dense ids.
/// Ids are assigned in interning order; canonicalize_nodes() (io.hpp)
/// remaps a whole dataset to lexicographic name order so that results do
/// not depend on the order nodes were first seen.
class NodeTable {
public:
    NodeId intern(std::string_view name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        NodeId id = static_cast<NodeId>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return id;
    }

    std::optional<NodeId> find(std::string_view name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(NodeId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };
    struct Eq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const { return a == b; }
    };

    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId, Hash, Eq> index_;
};

} // namespace mlsim
