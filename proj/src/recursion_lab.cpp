#include "scx/recursion_lab.hpp"

#include <cmath>
#include <string>

#include "scx/numkit.hpp"

namespace scx {

namespace {
constexpr double kDivergenceGuard = 1e12;
}

GeometricSeriesSpec::GeometricSeriesSpec(double a_, GeometricMode mode_, int n_terms_)
    : a(a_), mode(mode_), n_terms(n_terms_) {
    if (std::abs(a) == 1.0) throw ValidationError("geometric series requires |a| != 1");
    if (mode == GeometricMode::Strong && a == 0.0)
        throw ValidationError("strong geometric iteration requires a != 0");
    if (n_terms < 1) throw ValidationError("n_terms must be >= 1");
}

GeometricResult geometric_partial_sums(const GeometricSeriesSpec& spec) {
    GeometricResult res;
    res.limit = spec.limit();
    res.partial_sums.reserve(spec.n_terms);

    double sum = 0.0;
    double term = (spec.mode == GeometricMode::Weak) ? 1.0 : 1.0 / spec.a;
    const double ratio = (spec.mode == GeometricMode::Weak) ? -spec.a : -1.0 / spec.a;
    for (int m = 1; m <= spec.n_terms; ++m) {
        sum += term;
        res.partial_sums.push_back(sum);
        if (std::abs(sum) > kDivergenceGuard) {
            res.divergence_flag = true;
            res.flagged_at = m;
            break;  // truncate, do not raise: divergence is a reported outcome
        }
        term *= ratio;
    }
    return res;
}

double In_oracle(int n) {
    if (n < 0 || n > 60) throw ValidationError("In_oracle requires 0 <= n <= 60");
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    const double integral = quad_adaptive_real(
        [n](double x) { return std::pow(x, n) * std::exp(x); }, 0.0, 1.0, spec);
    return std::exp(-1.0) * integral;
}

RecursionTable forward_recursion(int n_max, double seed_I0) {
    if (n_max < 1) throw ValidationError("forward_recursion requires n_max >= 1");
    return forward_recursion_from(0, seed_I0, n_max);
}

RecursionTable forward_recursion_from(int n_start, double seed, int n_stop) {
    if (n_start < 0 || n_stop <= n_start)
        throw ValidationError("forward recursion requires 0 <= n_start < n_stop");
    RecursionTable t;
    t.direction = RecursionDirection::Forward;
    t.seed_index = n_start;
    t.seed_value = seed;
    t.indices.push_back(n_start);
    t.values.push_back(seed);
    double v = seed;
    for (int n = n_start + 1; n <= n_stop; ++n) {
        v = 1.0 - n * v;
        t.indices.push_back(n);
        t.values.push_back(v);
    }
    return t;
}

RecursionTable backward_recursion(int n_start, double seed, int n_stop) {
    if (!(n_start > n_stop && n_stop >= 0))
        throw ValidationError("backward_recursion requires n_start > n_stop >= 0");
    RecursionTable t;
    t.direction = RecursionDirection::Backward;
    t.seed_index = n_start;
    t.seed_value = seed;
    t.indices.push_back(n_start);
    t.values.push_back(seed);
    double v = seed;
    for (int n = n_start; n > n_stop; --n) {
        v = (1.0 - v) / n;
        t.indices.push_back(n - 1);
        t.values.push_back(v);
    }
    return t;
}

}  // namespace scx
