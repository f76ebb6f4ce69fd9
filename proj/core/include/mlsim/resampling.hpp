#pragma once

// Significance via randomized reference layers and bootstrap envelopes.

#include <cstdint>
#include <span>
#include <string>

#include "mlsim/attributes.hpp"
#include "mlsim/icc.hpp"
#include "mlsim/network.hpp"

namespace mlsim {

enum class NullModel { link_reshuffle, attribute_permutation };
enum class Sidedness { greater, two_sided };
enum class PValueEstimator { literal, smoothed };

const char* null_model_name(NullModel m);
NullModel null_model_from_name(const std::string& s);
const char* sidedness_name(Sidedness s);
Sidedness sidedness_from_name(const std::string& s);
const char* estimator_name(PValueEstimator e);
PValueEstimator estimator_from_name(const std::string& s);

struct SignificanceResult {
    double observed_r = 0.0;
    double p_value = 0.0;
    std::size_t replicas_requested = 0;
    std::size_t replicas_defined = 0;  // denominator actually used
    std::size_t replicas_discarded = 0;
    double null_mean = 0.0;
    double null_std = 0.0;
    std::uint64_t seed = 0;
    NullModel null_model = NullModel::link_reshuffle;
    Sidedness sidedness = Sidedness::greater;
    PValueEstimator estimator = PValueEstimator::literal;
};

// Same node set and weight multiset, weights reassigned to uniformly random
// distinct unordered pairs. Throws InputError when the layer has no edges or
// more edges than the node set admits.
WeightedLayer reshuffle_layer(const WeightedLayer& layer, std::uint64_t seed);

// Null statistics from replica values (NaN marks an undefined replica).
// Exposed for tests; icc_p_value uses it for the reduction.
SignificanceResult p_from_nulls(double observed_r, std::span<const double> null_r,
                                Sidedness sidedness, PValueEstimator estimator);

SignificanceResult icc_p_value(const WeightedLayer& layer, const AttributeTable& attrs,
                               const std::string& variable, std::size_t replicas,
                               std::uint64_t seed, NullModel null_model = NullModel::link_reshuffle,
                               Sidedness sidedness = Sidedness::greater,
                               PValueEstimator estimator = PValueEstimator::literal,
                               IccConvention convention = IccConvention::canonical,
                               unsigned threads = 0);

// Sample standard deviation of r over replicas that resample the layer's
// edges with replacement. Throws UndefinedStatError with fewer than two
// defined replicas.
double icc_std_envelope(const WeightedLayer& layer, const AttributeTable& attrs,
                        const std::string& variable, std::size_t replicas, std::uint64_t seed,
                        IccConvention convention = IccConvention::canonical, unsigned threads = 0);

double icc_std_envelope(const DirectedCountLayer& counts, const AttributeTable& attrs,
                        const std::string& variable, double alpha, std::size_t replicas,
                        std::uint64_t seed, IccConvention convention = IccConvention::canonical,
                        unsigned threads = 0);

} // namespace mlsim
