#pragma once

#include <functional>
#include <vector>

#include "scx/parallel.hpp"
#include "scx/propagator.hpp"

namespace scx {

/// Descending intermediate times (t_1, t_2, ..., t_n) with t_1 largest,
/// anchored at t0: t0 <= t_n <= ... <= t_1 and t_1 > t0. The last point t_n
/// is the target time of the backward recursion.
struct TimeGrid {
    double t0 = 0.0;
    std::vector<double> points;

    TimeGrid(double t0, std::vector<double> pts);

    int n() const { return static_cast<int>(points.size()); }
    double target() const { return points.back(); }
};

/// L(t_j, t0) = i \int_{t0}^{t_j} H(t) dt. Positive definite H makes this
/// invertible whenever t_j > t0.
CMatrix compute_L(const HamiltonianModel& model, double t_j, double t0,
                  const QuadratureSpec& spec = {});

/// One backward step: u_{k+1} = L_k^{-1} (I - u_k). Its n-fold unrolling is
/// the strong-coupling series.
CMatrix backward_map(const CMatrix& u_k, const CMatrix& L_k);

/// Explicit unrolled strong-coupling series along the grid, seeded with
/// u1 = u(t_1, t0). terms[0..n-2] are the alternating pure inverse products,
/// terms[n-1] carries the seed; the last partial sum estimates u(t_n, t0).
SeriesResult strong_unroll(const HamiltonianModel& model, const TimeGrid& grid, const CMatrix& u1,
                           const QuadratureSpec& spec = {});

/// Composition of backward_map along the grid; algebraically identical to
/// summing strong_unroll and kept as the cross-check route.
CMatrix backward_fold(const HamiltonianModel& model, const TimeGrid& grid, const CMatrix& u1,
                      const QuadratureSpec& spec = {});

struct ScalingRow {
    double factor = 1.0;  // coupling multiplier lambda
    int j = 1;            // term index (pure products only)
    double term_norm = 0.0;
    double ratio = 0.0;  // term_norm relative to the base-coupling run
};

/// Rescales the coupling by each factor and reports the pure-product term
/// norms; L is linear in g, so ratio(lambda, j) = lambda^{-j} exactly.
std::vector<ScalingRow> term_scaling_probe(const HamiltonianModel& model, const TimeGrid& grid,
                                           const std::vector<double>& g_factors,
                                           ExecPolicy policy = ExecPolicy::Parallel);

/// Weighted mean value problem: find c in (a, b) with
/// \int f w = f(c) \int w, for continuous real f and weight w >= 0.
struct MvtProblem {
    std::function<double(double)> f;
    std::function<double(double)> w;
    double a = 0.0;
    double b = 1.0;
};

struct MvtResult {
    double c = 0.0;
    double f_at_c = 0.0;
    double target = 0.0;           // \int f w / \int w
    bool sign_change_found = true;  // false: f effectively constant, c is midpoint
};

/// 257-point scan for a sign change of f - target, refined by bisection to
/// |f(c) - target| <= tol.
MvtResult mvt_point(const MvtProblem& problem, double tol = 1e-12);

struct DefectReport {
    double t_candidate = 0.0;
    double defect_rel = 0.0;
};

/// Residual of the mean-value replacement at t_candidate:
/// || \int_{t0}^{t_k} H u dt - u(t_candidate) \int_{t0}^{t_k} H dt ||_F
/// normalized by || \int H dt ||_F. t0 is the model window minimum.
DefectReport defect_rel(const HamiltonianModel& model, double t_k, double t_candidate,
                        const std::function<CMatrix(double)>& u_ref,
                        const QuadratureSpec& spec = {});

/// Minimizes the defect over t_candidate in [t0, t_k]: 129-point scan (the
/// OpenMP kernel; serial path kept as reference) plus golden-section
/// refinement to 1e-9 time resolution. scan_out, when given, receives the
/// scan profile so callers do not pay for a second pass. The quadrature
/// tolerance should not be tighter than the accuracy of u_ref itself.
DefectReport solve_mvt_time(const HamiltonianModel& model, double t_k,
                            const std::function<CMatrix(double)>& u_ref,
                            ExecPolicy policy = ExecPolicy::Parallel,
                            std::vector<DefectReport>* scan_out = nullptr,
                            const QuadratureSpec& spec = {});

/// The scan phase of solve_mvt_time, exposed for the defect-profile table
/// and the serial/parallel equivalence tests.
std::vector<DefectReport> defect_scan(const HamiltonianModel& model, double t_k,
                                      const std::function<CMatrix(double)>& u_ref, int n_points,
                                      ExecPolicy policy = ExecPolicy::Parallel,
                                      const QuadratureSpec& spec = {});

}  // namespace scx
