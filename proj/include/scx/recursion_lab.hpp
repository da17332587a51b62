#pragma once

#include <vector>

#include "scx/errors.hpp"

namespace scx {

enum class GeometricMode { Weak, Strong };

/// Partial sums of the two geometric iterations for x = 1 - a x, both
/// targeting 1/(1+a): Weak sums powers of a (valid |a| < 1), Strong sums
/// powers of 1/a (valid |a| > 1).
struct GeometricSeriesSpec {
    double a = 0.0;
    GeometricMode mode = GeometricMode::Weak;
    int n_terms = 1;

    GeometricSeriesSpec(double a, GeometricMode mode, int n_terms);

    double limit() const { return 1.0 / (1.0 + a); }
};

struct GeometricResult {
    std::vector<double> partial_sums;  // S_1 .. S_{n_terms} (truncated on guard)
    double limit = 0.0;
    bool divergence_flag = false;  // set when |S_m| exceeded 1e12
    int flagged_at = -1;           // 1-based m where the guard fired
};

GeometricResult geometric_partial_sums(const GeometricSeriesSpec& spec);

enum class RecursionDirection { Forward, Backward };

/// Values of I_n along one run of the recurrence. Indices ascend for
/// Forward, descend for Backward; the seed row is included.
struct RecursionTable {
    RecursionDirection direction;
    std::vector<int> indices;
    std::vector<double> values;
    int seed_index = 0;
    double seed_value = 0.0;
};

/// Quadrature oracle for I_n = e^{-1} \int_0^1 x^n e^x dx, 0 <= n <= 60.
double In_oracle(int n);

/// I_n = 1 - n I_{n-1} ascending from I_0 = seed. Deliberately unstabilized.
RecursionTable forward_recursion(int n_max, double seed_I0);

/// Same ascent started from an arbitrary index (seed at n = n_start).
RecursionTable forward_recursion_from(int n_start, double seed, int n_stop);

/// I_{n-1} = (1 - I_n) / n descending from I_{n_start} = seed.
RecursionTable backward_recursion(int n_start, double seed, int n_stop);

}  // namespace scx
