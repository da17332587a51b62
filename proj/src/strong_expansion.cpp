#include "scx/strong_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scx {

namespace {
constexpr int kScanPoints = 129;
constexpr int kMvtScanPoints = 257;
constexpr double kTimeResolution = 1e-9;
}  // namespace

TimeGrid::TimeGrid(double t0_, std::vector<double> pts) : t0(t0_), points(std::move(pts)) {
    if (points.size() < 2) throw ValidationError("TimeGrid requires n >= 2 points");
    if (!(points.front() > t0)) throw ValidationError("TimeGrid requires t_1 > t0");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i] < points[i + 1])
            throw ValidationError("TimeGrid points must descend: t_1 >= t_2 >= ... >= t_n");
    if (points.back() < t0) throw ValidationError("TimeGrid requires t_n >= t0");
}

CMatrix compute_L(const HamiltonianModel& model, double t_j, double t0,
                  const QuadratureSpec& spec) {
    if (!(t_j > t0)) throw SingularMatrix("compute_L requires t_j > t0 (zero-length interval)");
    CMatrix integral = quad_adaptive([&](double t) { return model.eval_H(t); }, t0, t_j, spec);
    integral *= Complex(0.0, 1.0);
    return integral;
}

CMatrix backward_map(const CMatrix& u_k, const CMatrix& L_k) {
    CMatrix rhs = CMatrix::identity(u_k.dim());
    rhs -= u_k;
    return mat_inverse(L_k) * rhs;
}

SeriesResult strong_unroll(const HamiltonianModel& model, const TimeGrid& grid, const CMatrix& u1,
                           const QuadratureSpec& spec) {
    const int n = grid.n();
    if (u1.dim() != model.dim()) throw ValidationError("seed dimension does not match model");

    // Inverses of L(t_1) .. L(t_{n-1}); the target time t_n never enters.
    std::vector<CMatrix> l_inv;
    l_inv.reserve(n - 1);
    for (int k = 0; k < n - 1; ++k)
        l_inv.push_back(mat_inverse(compute_L(model, grid.points[k], grid.t0, spec)));

    SeriesResult res;
    res.kind = SeriesKind::Strong;

    // Product P_j = L^{-1}(t_{n-1}) L^{-1}(t_{n-2}) ... L^{-1}(t_{n-j}),
    // extended on the right as j grows; term_j = (-1)^{j-1} P_j.
    CMatrix prod = CMatrix::identity(model.dim());
    double sign = 1.0;
    for (int j = 1; j <= n - 1; ++j) {
        prod = prod * l_inv[n - 1 - j];
        CMatrix term = prod;
        term *= Complex(sign, 0.0);
        res.terms.push_back(term);
        sign = -sign;
    }
    CMatrix seed_term = prod * u1;
    seed_term *= Complex(sign, 0.0);  // sign is now (-1)^{n-1}
    res.terms.push_back(seed_term);

    CMatrix acc = CMatrix::zero(model.dim());
    for (const CMatrix& term : res.terms) {
        acc += term;
        res.partial_sums.push_back(acc);
        res.term_norms.push_back(term.norm_fro());
    }
    return res;
}

CMatrix backward_fold(const HamiltonianModel& model, const TimeGrid& grid, const CMatrix& u1,
                      const QuadratureSpec& spec) {
    CMatrix u = u1;
    for (int k = 0; k < grid.n() - 1; ++k)
        u = backward_map(u, compute_L(model, grid.points[k], grid.t0, spec));
    return u;
}

std::vector<ScalingRow> term_scaling_probe(const HamiltonianModel& model, const TimeGrid& grid,
                                           const std::vector<double>& g_factors,
                                           ExecPolicy policy) {
    for (double f : g_factors)
        if (!(f > 0.0)) throw ValidationError("g factors must be > 0");

    const CMatrix seed = CMatrix::identity(model.dim());  // pure products ignore the seed
    const SeriesResult base = strong_unroll(model, grid, seed);
    const int n_products = grid.n() - 1;

    auto rows_for = [&](std::size_t idx) {
        const double lambda = g_factors[idx];
        const HamiltonianModel scaled = model.with_coupling(lambda * model.coupling());
        const SeriesResult run = strong_unroll(scaled, grid, seed);
        std::vector<ScalingRow> rows;
        rows.reserve(n_products);
        for (int j = 1; j <= n_products; ++j) {
            ScalingRow r;
            r.factor = lambda;
            r.j = j;
            r.term_norm = run.term_norms[j - 1];
            r.ratio = run.term_norms[j - 1] / base.term_norms[j - 1];
            rows.push_back(r);
        }
        return rows;
    };

    const auto grouped = map_indexed(g_factors.size(), rows_for, policy);
    std::vector<ScalingRow> out;
    for (const auto& g : grouped) out.insert(out.end(), g.begin(), g.end());
    return out;
}

MvtResult mvt_point(const MvtProblem& problem, double tol) {
    if (!(problem.a < problem.b)) throw ValidationError("mvt_point requires a < b");
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    const double int_w = quad_adaptive_real(problem.w, problem.a, problem.b, spec);
    if (!(int_w > 0.0)) throw ValidationError("mvt_point requires \\int w > 0");
    const double int_fw = quad_adaptive_real(
        [&](double x) { return problem.f(x) * problem.w(x); }, problem.a, problem.b, spec);
    const double target = int_fw / int_w;

    auto phi = [&](double x) { return problem.f(x) - target; };

    const double span = problem.b - problem.a;
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    double prev_x = problem.a;
    double prev_phi = phi(prev_x);
    for (int i = 1; i < kMvtScanPoints; ++i) {
        const double x = problem.a + span * i / (kMvtScanPoints - 1);
        const double p = phi(x);
        if (prev_phi == 0.0) return {prev_x, problem.f(prev_x), target, true};
        if ((prev_phi < 0.0) != (p < 0.0)) {
            lo = prev_x;
            hi = x;
            bracketed = true;
            break;
        }
        prev_x = x;
        prev_phi = p;
    }
    if (!bracketed) {
        // f effectively constant relative to the weight: report the midpoint.
        const double mid = 0.5 * (problem.a + problem.b);
        return {mid, problem.f(mid), target, false};
    }

    double phi_lo = phi(lo);
    double c = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        c = 0.5 * (lo + hi);
        const double pc = phi(c);
        if (std::abs(pc) <= tol || hi - lo < 1e-17 * span) break;
        if ((pc < 0.0) == (phi_lo < 0.0)) {
            lo = c;
            phi_lo = pc;
        } else {
            hi = c;
        }
    }
    return {c, problem.f(c), target, true};
}

namespace {

struct DefectContext {
    CMatrix int_hu;   // \int H u_ref dt
    CMatrix int_h;    // \int H dt
    double norm_int_h;
};

DefectContext make_defect_context(const HamiltonianModel& model, double t_k,
                                  const std::function<CMatrix(double)>& u_ref,
                                  const QuadratureSpec& spec) {
    const double t0 = model.window_min();
    DefectContext ctx{
        quad_adaptive([&](double s) { return model.eval_H(s) * u_ref(s); }, t0, t_k, spec),
        quad_adaptive([&](double s) { return model.eval_H(s); }, t0, t_k, spec), 0.0};
    ctx.norm_int_h = ctx.int_h.norm_fro();
    if (!(ctx.norm_int_h > 0.0)) throw SingularMatrix("\\int H dt vanished on [t0, t_k]");
    return ctx;
}

double defect_at(const DefectContext& ctx, const CMatrix& u_candidate) {
    return (ctx.int_hu - u_candidate * ctx.int_h).norm_fro() / ctx.norm_int_h;
}

}  // namespace

DefectReport defect_rel(const HamiltonianModel& model, double t_k, double t_candidate,
                        const std::function<CMatrix(double)>& u_ref, const QuadratureSpec& spec) {
    const double t0 = model.window_min();
    if (!(t0 <= t_candidate && t_candidate <= t_k))
        throw ValidationError("defect_rel requires t0 <= t_candidate <= t_k");
    const DefectContext ctx = make_defect_context(model, t_k, u_ref, spec);
    return {t_candidate, defect_at(ctx, u_ref(t_candidate))};
}

namespace {

std::vector<DefectReport> scan_with_context(const DefectContext& ctx, double t0, double t_k,
                                            const std::function<CMatrix(double)>& u_ref,
                                            int n_points, ExecPolicy policy) {
    const double span = t_k - t0;
    auto point = [&](std::size_t i) -> DefectReport {
        const double tc = t0 + span * static_cast<double>(i) / (n_points - 1);
        return {tc, defect_at(ctx, u_ref(tc))};
    };
    return map_indexed(static_cast<std::size_t>(n_points), point, policy);
}

}  // namespace

std::vector<DefectReport> defect_scan(const HamiltonianModel& model, double t_k,
                                      const std::function<CMatrix(double)>& u_ref, int n_points,
                                      ExecPolicy policy, const QuadratureSpec& spec) {
    const double t0 = model.window_min();
    if (!(t0 < t_k)) throw ValidationError("defect scan requires t0 < t_k");
    if (n_points < 2) throw ValidationError("defect scan requires >= 2 points");
    const DefectContext ctx = make_defect_context(model, t_k, u_ref, spec);
    return scan_with_context(ctx, t0, t_k, u_ref, n_points, policy);
}

DefectReport solve_mvt_time(const HamiltonianModel& model, double t_k,
                            const std::function<CMatrix(double)>& u_ref, ExecPolicy policy,
                            std::vector<DefectReport>* scan_out, const QuadratureSpec& spec) {
    const double t0 = model.window_min();
    if (!(t0 < t_k)) throw ValidationError("solve_mvt_time requires t0 < t_k");
    const DefectContext ctx = make_defect_context(model, t_k, u_ref, spec);
    const auto scan = scan_with_context(ctx, t0, t_k, u_ref, kScanPoints, policy);
    if (scan_out) *scan_out = scan;

    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (scan[i].defect_rel < scan[best].defect_rel) best = i;

    double lo = scan[best > 0 ? best - 1 : 0].t_candidate;
    double hi = scan[best + 1 < scan.size() ? best + 1 : scan.size() - 1].t_candidate;

    auto d = [&](double tc) { return defect_at(ctx, u_ref(tc)); };

    // Golden-section: derivative-free, defect evaluations are cheap once the
    // two integrals are in hand.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double d1 = d(x1);
    double d2 = d(x2);
    while (hi - lo > kTimeResolution) {
        if (d1 <= d2) {
            hi = x2;
            x2 = x1;
            d2 = d1;
            x1 = hi - gr * (hi - lo);
            d1 = d(x1);
        } else {
            lo = x1;
            x1 = x2;
            d1 = d2;
            x2 = lo + gr * (hi - lo);
            d2 = d(x2);
        }
    }
    const double t_star = 0.5 * (lo + hi);
    return {t_star, d(t_star)};
}

}  // namespace scx
