#include "mlsim/attributes.hpp"

#include <cmath>
#include <ostream>
#include <set>

#include "mlsim/errors.hpp"

namespace mlsim {

Variable& AttributeTable::slot(const std::string& variable, AttrKind kind) {
    if (finalized_) throw InputError("attribute table is finalized");
    auto [it, inserted] = vars_.try_emplace(variable);
    if (inserted) {
        it->second.name = variable;
        it->second.kind = kind;
    } else if (it->second.kind != kind) {
        throw InputError("variable '" + variable + "' declared with conflicting kinds");
    }
    return it->second;
}

void AttributeTable::set_numeric(NodeId node, const std::string& variable, double value) {
    if (!std::isfinite(value))
        throw InputError("non-finite value for variable '" + variable + "'");
    Variable& v = slot(variable, AttrKind::numeric);
    if (!v.values.emplace(node, value).second)
        throw InputError("duplicate value for node id " + std::to_string(node) + ", variable '" +
                         variable + "'");
}

void AttributeTable::set_categorical(NodeId node, const std::string& variable,
                                     const std::string& label) {
    slot(variable, AttrKind::categorical);
    auto& labels = labels_[variable];
    if (!labels.emplace(node, label).second)
        throw InputError("duplicate value for node id " + std::to_string(node) + ", variable '" +
                         variable + "'");
}

void AttributeTable::declare_encoding(const std::string& variable,
                                      std::map<std::string, double> encoding) {
    std::set<double> codes;
    for (const auto& [label, code] : encoding) {
        if (!std::isfinite(code))
            throw InputError("non-finite code for label '" + label + "' of '" + variable + "'");
        if (!codes.insert(code).second)
            throw InputError("encoding for '" + variable + "' is not injective (code " +
                             std::to_string(code) + " repeats)");
    }
    Variable& v = slot(variable, AttrKind::categorical);
    v.encoding = std::move(encoding);
}

void AttributeTable::finalize(std::ostream* warnings) {
    if (finalized_) return;
    for (auto& [name, labels] : labels_) {
        Variable& v = vars_.at(name);
        if (v.encoding.empty()) {
            std::set<std::string> distinct;
            for (const auto& [node, label] : labels) distinct.insert(label);
            if (distinct.size() > 2)
                throw InputError("variable '" + name + "' has " +
                                 std::to_string(distinct.size()) +
                                 " categories; declare an explicit ordinal encoding");
            double code = 0.0;
            for (const auto& label : distinct) v.encoding[label] = code++;
        }
        if (v.encoding.size() > 2 && warnings)
            *warnings << "note: variable '" << name << "' has " << v.encoding.size()
                      << " categories; codes are treated as ordinal\n";
        for (const auto& [node, label] : labels) {
            auto enc = v.encoding.find(label);
            if (enc == v.encoding.end())
                throw InputError("label '" + label + "' of variable '" + name +
                                 "' missing from its encoding");
            v.values.emplace(node, enc->second);
        }
    }
    labels_.clear();
    finalized_ = true;
}

const Variable* AttributeTable::find(const std::string& variable) const {
    if (!finalized_) throw InputError("attribute table not finalized");
    auto it = vars_.find(variable);
    return it == vars_.end() ? nullptr : &it->second;
}

const Variable& AttributeTable::require(const std::string& variable) const {
    const Variable* v = find(variable);
    if (!v) throw InputError("unknown variable '" + variable + "'");
    return *v;
}

std::optional<double> AttributeTable::value(NodeId node, const std::string& variable) const {
    const Variable& v = require(variable);
    auto it = v.values.find(node);
    if (it == v.values.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> AttributeTable::variable_names() const {
    std::vector<std::string> out;
    out.reserve(vars_.size());
    for (const auto& [name, v] : vars_) out.push_back(name);
    return out;
}

} // namespace mlsim
