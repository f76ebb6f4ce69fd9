#pragma once

// CSV/JSON readers and writers for every table the tools exchange. All
// writers are deterministic: rows come out in a fixed sort order and doubles
// use shortest round-trip formatting. Readers skip blank lines and '#'
// comments and reject malformed rows with file:line context.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsim/attributes.hpp"
#include "mlsim/icc.hpp"
#include "mlsim/network.hpp"
#include "mlsim/nodes.hpp"
#include "mlsim/overlap.hpp"
#include "mlsim/resampling.hpp"

namespace mlsim::io {

/// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);

/// FNV-1a of the serialized config, as 16 hex digits. Embedded in every
/// output file so results can be traced to the exact run configuration.
std::string config_hash_hex(std::string_view serialized_config);

// --- counts table: `layer,source,target,value` ---------------------------

struct CountsFile {
    std::vector<DirectedCountLayer> layers; // file appearance order
};

/// Node names are interned in lexicographic order; every layer gets the
/// union of all nodes in the file as its node_set.
CountsFile read_counts_csv(std::istream& in, const std::string& filename, NodeTable& nodes);

void write_counts_csv(std::ostream& out, std::span<const DirectedCountLayer> layers,
                      const NodeTable& nodes, const std::string& config_hash = "");

// --- attribute table: `node,variable,value,kind` --------------------------

/// Fills `attrs` without finalizing it, so encodings can still be declared
/// afterwards. New node names are interned on sight.
void read_attributes_csv(std::istream& in, const std::string& filename, NodeTable& nodes,
                         AttributeTable& attrs);

/// Requires a finalized table; categorical values are written back as their
/// labels (encodings are injective, so this is lossless).
void write_attributes_csv(std::ostream& out, const AttributeTable& attrs, const NodeTable& nodes,
                          const std::string& config_hash = "");

// --- analysis result tables ------------------------------------------------

struct IccRow {
    std::string layer;
    std::string variable;
    double alpha = 1.0;
    std::optional<IccResult> result; // empty = undefined at this point
    std::string error;
    IccConvention convention = IccConvention::canonical; // echoed for undefined rows
    std::optional<double> r_std; // bootstrap envelope, sweep output only
};

void write_icc_csv(std::ostream& out, std::span<const IccRow> rows, bool include_std,
                   const std::string& config_hash = "");
void write_icc_json(std::ostream& out, std::span<const IccRow> rows, bool include_std,
                    const std::string& config_hash = "");

struct PValueRow {
    std::string layer;
    std::string variable;
    double alpha = 1.0;
    SignificanceResult sig;
};

void write_pvalues_csv(std::ostream& out, std::span<const PValueRow> rows,
                       const std::string& config_hash = "");
void write_pvalues_json(std::ostream& out, std::span<const PValueRow> rows,
                        const std::string& config_hash = "");

void write_overlap_csv(std::ostream& out, std::span<const OverlapMatrix> matrices,
                       const std::string& config_hash = "");
void write_overlap_json(std::ostream& out, std::span<const OverlapMatrix> matrices,
                        const std::string& config_hash = "");

// --- graph export ----------------------------------------------------------

/// `source,target,weight` rows; edges below `prune` are skipped.
void write_edges_csv(std::ostream& out, const WeightedLayer& layer, const NodeTable& nodes,
                     double prune = 0.0, const std::string& config_hash = "");

/// `node,strength` rows, strength = sum of incident weights (unpruned).
void write_strengths_csv(std::ostream& out, const WeightedLayer& layer, const NodeTable& nodes,
                         const std::string& config_hash = "");

} // namespace mlsim::io
