#pragma once

// Weighted intraclass correlation of a node attribute over a weighted layer.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsim/attributes.hpp"
#include "mlsim/network.hpp"

namespace mlsim {

// The `canonical` convention divides the cross term by the total weight, so
// r reaches 1 when every link joins equal values; `strict_literal` divides by
// twice the total weight, bounding r by 1/2. Canonical is the default.
enum class IccConvention { canonical, strict_literal };

const char* icc_convention_name(IccConvention c);
IccConvention icc_convention_from_name(const std::string& s);

struct IccResult {
    double r = 0.0;
    double s_sq = 0.0;  // weighted variance over linked endpoints
    double t_sq = 0.0;  // weighted cross term
    double x_bar = 0.0; // weighted mean over linked endpoints
    std::size_t pair_count = 0;     // pairs entering the sums
    std::size_t excluded_pairs = 0; // pairs dropped for a missing value
    double total_weight = 0.0;
    double alpha = 1.0;
    std::string variable;
    std::string layer;
    IccConvention convention = IccConvention::canonical;
};

// One linked pair of attribute values with its weight.
struct EdgeSample {
    double xi, xj, w;
};

// Core kernel over pre-extracted samples. Fills only the numeric fields.
// Throws UndefinedStatError when no samples are given or the endpoint values
// carry no variance (s_sq == 0).
IccResult weighted_icc_samples(std::span<const EdgeSample> samples, IccConvention convention);

IccResult weighted_icc(const WeightedLayer& layer, const AttributeTable& attrs,
                       const std::string& variable,
                       IccConvention convention = IccConvention::canonical);

struct IccSweepPoint {
    double alpha = 0.0;
    std::optional<IccResult> result; // empty when the point is undefined
    std::string error;               // reason when empty
};

// Rebuilds the layer's weights at every alpha and recomputes the ICC.
// Per-point failures are captured in the row instead of aborting the sweep.
std::vector<IccSweepPoint> icc_alpha_sweep(const DirectedCountLayer& counts,
                                           const AttributeTable& attrs,
                                           const std::string& variable,
                                           std::span<const double> alphas,
                                           IccConvention convention = IccConvention::canonical);

} // namespace mlsim
