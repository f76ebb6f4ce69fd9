#pragma once

// Small statistical helpers for calibration-style tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mlsim/rng.hpp"

namespace teststat {

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
inline double ks_uniform_d(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lo = double(i) / n;
        const double hi = double(i + 1) / n;
        d = std::max(d, std::max(std::abs(x[i] - lo), std::abs(x[i] - hi)));
    }
    return d;
}

// Asymptotic critical value c(level)/sqrt(n); c(0.01) = 1.6276.
inline double ks_critical(double c, std::size_t n) { return c / std::sqrt(double(n)); }

// Chi-square statistic for observed counts against uniform cells.
inline double chi_sq_uniform(const std::vector<std::size_t>& observed) {
    std::size_t total = 0;
    for (auto c : observed) total += c;
    const double expected = double(total) / double(observed.size());
    double stat = 0.0;
    for (auto c : observed) {
        const double d = double(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) { // ties share the average rank
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (double(i) + double(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = double(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

// One-sided permutation p-value for a positive Spearman trend.
inline double spearman_trend_p(const std::vector<double>& x, const std::vector<double>& y,
                               std::size_t permutations, std::uint64_t seed) {
    const double observed = spearman(x, y);
    std::vector<double> shuffled = y;
    std::size_t exceed = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        mlsim::rng::Engine g = mlsim::rng::make_engine(seed, "spearman-perm", p);
        for (std::size_t k = shuffled.size(); k > 1; --k)
            std::swap(shuffled[k - 1], shuffled[mlsim::rng::uniform_below(g, k)]);
        if (spearman(x, shuffled) >= observed) ++exceed;
    }
    return double(1 + exceed) / double(permutations + 1);
}

} // namespace teststat
