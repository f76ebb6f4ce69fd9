#pragma once

// Node attribute storage: numeric variables plus categorical variables with
// declared (or auto-derived binary) numeric encodings.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlsim/nodes.hpp"

namespace mlsim {

enum class AttrKind { numeric, categorical };

struct Variable {
    std::string name;
    AttrKind kind = AttrKind::numeric;
    std::unordered_map<NodeId, double> values; // numeric, or encoded categorical
    std::map<std::string, double> encoding;    // categorical only
};

class AttributeTable {
  public:
    void set_numeric(NodeId node, const std::string& variable, double value);
    void set_categorical(NodeId node, const std::string& variable, const std::string& label);
    // Must be injective (distinct codes per label); may be declared before or
    // after labels are added, but before finalize().
    void declare_encoding(const std::string& variable, std::map<std::string, double> encoding);

    // Resolves categorical labels to codes. Variables without a declared
    // encoding get the automatic binary one (sorted labels -> 0, 1); three or
    // more distinct labels require an explicit encoding. Declared encodings
    // with more than two categories trigger a note on `warnings` (if given)
    // because the downstream correlation treats codes as ordinal.
    void finalize(std::ostream* warnings = nullptr);

    bool finalized() const { return finalized_; }
    const Variable* find(const std::string& variable) const;
    const Variable& require(const std::string& variable) const;
    std::optional<double> value(NodeId node, const std::string& variable) const;
    std::vector<std::string> variable_names() const; // sorted

  private:
    Variable& slot(const std::string& variable, AttrKind kind);

    std::map<std::string, Variable> vars_;
    std::map<std::string, std::unordered_map<NodeId, std::string>> labels_;
    bool finalized_ = false;
};

} // namespace mlsim
