#pragma once

// Compensated (Kahan) summation for long accumulations with cancellation.

namespace mlsim::detail {

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double y = value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double get() const { return sum; }
};

} // namespace mlsim::detail
