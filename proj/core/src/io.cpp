#include "mlsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "csv.hpp"
#include "json.hpp"
#include "mlsim/errors.hpp"
#include "mlsim/rng.hpp"

namespace mlsim::io {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string config_hash_hex(std::string_view serialized_config) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(rng::hash_tag(serialized_config)));
    return buf;
}

namespace {

void emit_hash(std::ostream& out, const std::string& hash) {
    if (!hash.empty()) out << "# config_hash=" << hash << "\n";
}

json json_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

} // namespace

CountsFile read_counts_csv(std::istream& in, const std::string& filename, NodeTable& nodes) {
    struct RawRow {
        std::string layer, source, target;
        double value;
        std::size_t lineno;
    };
    std::vector<RawRow> raw;
    std::set<std::string> names;
    std::vector<std::string> layer_order;

    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (detail::next_row(in, line, lineno)) {
        if (!header_seen) {
            auto h = detail::split_csv(line);
            if (h != std::vector<std::string>{"layer", "source", "target", "value"})
                throw ParseError(filename, lineno, "expected header 'layer,source,target,value'");
            header_seen = true;
            continue;
        }
        auto f = detail::split_csv(line);
        if (f.size() != 4)
            throw ParseError(filename, lineno, "expected 4 fields, got " + std::to_string(f.size()));
        if (f[0].empty() || f[1].empty() || f[2].empty())
            throw ParseError(filename, lineno, "empty layer or node identifier");
        const double value = detail::parse_f64(f[3], filename, lineno, "value");
        if (value <= 0.0) throw ParseError(filename, lineno, "value must be > 0");
        if (f[1] == f[2])
            throw ParseError(filename, lineno, "source equals target ('" + f[1] + "')");
        if (std::find(layer_order.begin(), layer_order.end(), f[0]) == layer_order.end())
            layer_order.push_back(f[0]);
        names.insert(f[1]);
        names.insert(f[2]);
        raw.push_back({f[0], f[1], f[2], value, lineno});
    }

    for (const auto& n : names) nodes.intern(n);
    std::vector<NodeId> node_set;
    node_set.reserve(names.size());
    for (const auto& n : names) node_set.push_back(*nodes.find(n));
    std::sort(node_set.begin(), node_set.end());

    CountsFile file;
    for (const auto& name : layer_order) {
        DirectedCountLayer layer;
        layer.name = name;
        layer.node_set = node_set;
        file.layers.push_back(std::move(layer));
    }
    for (const auto& r : raw) {
        auto it = std::find_if(file.layers.begin(), file.layers.end(),
                               [&](const auto& l) { return l.name == r.layer; });
        try {
            it->add(*nodes.find(r.source), *nodes.find(r.target), r.value);
        } catch (const InputError& e) {
            throw ParseError(filename, r.lineno, e.what());
        }
    }
    return file;
}

void write_counts_csv(std::ostream& out, std::span<const DirectedCountLayer> layers,
                      const NodeTable& nodes, const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "layer,source,target,value\n";
    for (const auto& layer : layers) {
        struct Row {
            std::string source, target, value;
        };
        std::vector<Row> rows;
        rows.reserve(layer.entries.size());
        for (const auto& [key, value] : layer.entries)
            rows.push_back({std::string(nodes.name(pair_first(key))),
                            std::string(nodes.name(pair_second(key))), format_double(value)});
        std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
            return x.source != y.source ? x.source < y.source : x.target < y.target;
        });
        for (const auto& r : rows)
            out << layer.name << ',' << r.source << ',' << r.target << ',' << r.value << '\n';
    }
}

void read_attributes_csv(std::istream& in, const std::string& filename, NodeTable& nodes,
                         AttributeTable& attrs) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (detail::next_row(in, line, lineno)) {
        if (!header_seen) {
            auto h = detail::split_csv(line);
            if (h != std::vector<std::string>{"node", "variable", "value", "kind"})
                throw ParseError(filename, lineno, "expected header 'node,variable,value,kind'");
            header_seen = true;
            continue;
        }
        auto f = detail::split_csv(line);
        if (f.size() != 4)
            throw ParseError(filename, lineno, "expected 4 fields, got " + std::to_string(f.size()));
        if (f[0].empty() || f[1].empty())
            throw ParseError(filename, lineno, "empty node or variable name");
        const NodeId node = nodes.intern(f[0]);
        try {
            if (f[3] == "numeric")
                attrs.set_numeric(node, f[1], detail::parse_f64(f[2], filename, lineno, "value"));
            else if (f[3] == "categorical")
                attrs.set_categorical(node, f[1], f[2]);
            else
                throw InputError("unknown kind '" + f[3] + "' (numeric | categorical)");
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(filename, lineno, e.what());
        }
    }
}

void write_attributes_csv(std::ostream& out, const AttributeTable& attrs, const NodeTable& nodes,
                          const std::string& config_hash) {
    if (!attrs.finalized()) throw InputError("attribute table not finalized");
    emit_hash(out, config_hash);
    out << "node,variable,value,kind\n";
    struct Row {
        std::string node, variable, value, kind;
    };
    std::vector<Row> rows;
    for (const auto& name : attrs.variable_names()) {
        const Variable& var = *attrs.find(name);
        std::map<double, std::string> label_of;
        for (const auto& [label, code] : var.encoding) label_of[code] = label;
        for (const auto& [node, value] : var.values) {
            Row r;
            r.node = std::string(nodes.name(node));
            r.variable = name;
            if (var.kind == AttrKind::categorical) {
                r.value = label_of.at(value);
                r.kind = "categorical";
            } else {
                r.value = format_double(value);
                r.kind = "numeric";
            }
            rows.push_back(std::move(r));
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return x.node != y.node ? x.node < y.node : x.variable < y.variable;
    });
    for (const auto& r : rows)
        out << r.node << ',' << r.variable << ',' << r.value << ',' << r.kind << '\n';
}

void write_icc_csv(std::ostream& out, std::span<const IccRow> rows, bool include_std,
                   const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "layer,variable,alpha,r,s_sq,t_sq,x_bar,pair_count,excluded_pairs,convention";
    if (include_std) out << ",r_std";
    out << '\n';
    for (const auto& row : rows) {
        out << row.layer << ',' << row.variable << ',' << format_double(row.alpha) << ',';
        if (row.result) {
            const IccResult& r = *row.result;
            out << format_double(r.r) << ',' << format_double(r.s_sq) << ','
                << format_double(r.t_sq) << ',' << format_double(r.x_bar) << ',' << r.pair_count
                << ',' << r.excluded_pairs << ',' << icc_convention_name(r.convention);
        } else {
            out << "undefined,undefined,undefined,undefined,0,0,"
                << icc_convention_name(row.convention);
        }
        if (include_std) {
            out << ',';
            if (row.r_std)
                out << format_double(*row.r_std);
            else
                out << "undefined";
        }
        out << '\n';
    }
}

void write_icc_json(std::ostream& out, std::span<const IccRow> rows, bool include_std,
                    const std::string& config_hash) {
    json doc;
    if (!config_hash.empty()) doc["config_hash"] = config_hash;
    doc["results"] = json::array();
    for (const auto& row : rows) {
        json r;
        r["layer"] = row.layer;
        r["variable"] = row.variable;
        r["alpha"] = row.alpha;
        if (row.result) {
            r["r"] = json_or_null(row.result->r);
            r["s_sq"] = row.result->s_sq;
            r["t_sq"] = row.result->t_sq;
            r["x_bar"] = row.result->x_bar;
            r["pair_count"] = row.result->pair_count;
            r["excluded_pairs"] = row.result->excluded_pairs;
            r["convention"] = icc_convention_name(row.result->convention);
        } else {
            r["error"] = row.error;
            r["convention"] = icc_convention_name(row.convention);
        }
        if (include_std) r["r_std"] = row.r_std ? json(*row.r_std) : json(nullptr);
        doc["results"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

void write_pvalues_csv(std::ostream& out, std::span<const PValueRow> rows,
                       const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "layer,variable,alpha,r,p_value,B,null_mean,null_std,null_model,sidedness,seed\n";
    for (const auto& row : rows) {
        out << row.layer << ',' << row.variable << ',' << format_double(row.alpha) << ','
            << format_double(row.sig.observed_r) << ',' << format_double(row.sig.p_value) << ','
            << row.sig.replicas_defined << ',' << format_double(row.sig.null_mean) << ','
            << format_double(row.sig.null_std) << ',' << null_model_name(row.sig.null_model)
            << ',' << sidedness_name(row.sig.sidedness) << ',' << row.sig.seed << '\n';
    }
}

void write_pvalues_json(std::ostream& out, std::span<const PValueRow> rows,
                        const std::string& config_hash) {
    json doc;
    if (!config_hash.empty()) doc["config_hash"] = config_hash;
    doc["results"] = json::array();
    for (const auto& row : rows) {
        json r;
        r["layer"] = row.layer;
        r["variable"] = row.variable;
        r["alpha"] = row.alpha;
        r["r"] = row.sig.observed_r;
        r["p_value"] = row.sig.p_value;
        r["B"] = row.sig.replicas_defined;
        r["replicas_discarded"] = row.sig.replicas_discarded;
        r["null_mean"] = row.sig.null_mean;
        r["null_std"] = row.sig.null_std;
        r["null_model"] = null_model_name(row.sig.null_model);
        r["sidedness"] = sidedness_name(row.sig.sidedness);
        r["estimator"] = estimator_name(row.sig.estimator);
        r["seed"] = row.sig.seed;
        doc["results"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

void write_overlap_csv(std::ostream& out, std::span<const OverlapMatrix> matrices,
                       const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "alpha,layer_a,layer_b,r_p,pair_domain,pair_count\n";
    for (const auto& m : matrices) {
        const std::size_t n = m.layer_names.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double r = m.r_p[m.index(i, j)];
                out << format_double(m.alpha) << ',' << m.layer_names[i] << ','
                    << m.layer_names[j] << ','
                    << (std::isnan(r) ? std::string("undefined") : format_double(r)) << ','
                    << pair_domain_name(m.domain) << ',' << m.pair_counts[m.index(i, j)] << '\n';
            }
        }
    }
}

void write_overlap_json(std::ostream& out, std::span<const OverlapMatrix> matrices,
                        const std::string& config_hash) {
    json doc;
    if (!config_hash.empty()) doc["config_hash"] = config_hash;
    doc["results"] = json::array();
    for (const auto& m : matrices) {
        const std::size_t n = m.layer_names.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                json r;
                r["alpha"] = m.alpha;
                r["layer_a"] = m.layer_names[i];
                r["layer_b"] = m.layer_names[j];
                r["r_p"] = json_or_null(m.r_p[m.index(i, j)]);
                if (!m.errors[m.index(i, j)].empty()) r["error"] = m.errors[m.index(i, j)];
                r["pair_domain"] = pair_domain_name(m.domain);
                r["pair_count"] = m.pair_counts[m.index(i, j)];
                doc["results"].push_back(std::move(r));
            }
        }
    }
    out << doc.dump(2) << '\n';
}

void write_edges_csv(std::ostream& out, const WeightedLayer& layer, const NodeTable& nodes,
                     double prune, const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "source,target,weight\n";
    struct Row {
        std::string source, target, weight;
    };
    std::vector<Row> rows;
    rows.reserve(layer.edges.size());
    for (const auto& e : layer.edges) {
        if (e.w < prune) continue;
        std::string sa(nodes.name(e.a));
        std::string sb(nodes.name(e.b));
        if (sb < sa) std::swap(sa, sb);
        rows.push_back({std::move(sa), std::move(sb), format_double(e.w)});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        return x.source != y.source ? x.source < y.source : x.target < y.target;
    });
    for (const auto& r : rows) out << r.source << ',' << r.target << ',' << r.weight << '\n';
}

void write_strengths_csv(std::ostream& out, const WeightedLayer& layer, const NodeTable& nodes,
                         const std::string& config_hash) {
    emit_hash(out, config_hash);
    out << "node,strength\n";
    const auto strengths = node_strengths(layer);
    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(layer.node_set.size());
    for (std::size_t i = 0; i < layer.node_set.size(); ++i)
        rows.emplace_back(std::string(nodes.name(layer.node_set[i])), strengths[i]);
    std::sort(rows.begin(), rows.end());
    for (const auto& [node, s] : rows) out << node << ',' << format_double(s) << '\n';
}

} // namespace mlsim::io
