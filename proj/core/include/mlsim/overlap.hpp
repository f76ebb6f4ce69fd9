#pragma once

// Pearson correlation of link weights between two layers, and the alpha
// sweep over all layer pairs.

#include <span>
#include <string>
#include <vector>

#include "mlsim/network.hpp"

namespace mlsim {

// Which node pairs enter the correlation: the union of pairs carrying weight
// in at least one layer (default; absent weights read as 0), only pairs
// present in both layers, or every pair the node set admits.
enum class PairDomain { union_of_links, intersection, all_pairs };

const char* pair_domain_name(PairDomain d);
PairDomain pair_domain_from_name(const std::string& s);

// Throws InputError when the layers disagree on the node set and
// UndefinedStatError when either layer has no weight variance over the
// chosen domain. `pair_count_out` receives the domain size when non-null.
double layer_overlap(const WeightedLayer& a, const WeightedLayer& b,
                     PairDomain domain = PairDomain::union_of_links,
                     std::size_t* pair_count_out = nullptr);

struct OverlapMatrix {
    double alpha = 1.0;
    PairDomain domain = PairDomain::union_of_links;
    std::vector<std::string> layer_names;
    // Row-major symmetric matrix, diagonal 1; NaN marks an undefined pair.
    std::vector<double> r_p;
    std::vector<std::size_t> pair_counts;
    std::vector<std::string> errors; // reason per cell, empty when defined

    std::size_t index(std::size_t i, std::size_t j) const { return i * layer_names.size() + j; }
};

OverlapMatrix overlap_matrix(std::span<const WeightedLayer> layers, PairDomain domain);

// Rebuilds every layer at each alpha and correlates all pairs. Per-alpha
// failures are recorded in the matrix cells instead of aborting.
std::vector<OverlapMatrix> overlap_alpha_sweep(std::span<const DirectedCountLayer> counts,
                                               std::span<const double> alphas,
                                               PairDomain domain = PairDomain::union_of_links,
                                               unsigned threads = 0);

} // namespace mlsim
