#include "scx/propagator.hpp"

#include <cmath>
#include <string>

namespace scx {

namespace {

constexpr int kWindowSamples = 129;
constexpr int kMaxStepDoublings = 24;

double profile_value(ProfileKind kind, double param, double t) {
    switch (kind) {
        case ProfileKind::Const:
            return param;
        case ProfileKind::Poly:
            return 1.0 + param * t * t;
        case ProfileKind::Gauss:
            return param + std::exp(-t * t);
    }
    return 0.0;
}

// Hermitian positive definiteness via elimination pivot signs (leading
// principal minors all positive).
bool hermitian_positive_definite(const CMatrix& m) {
    const int d = m.dim();
    CMatrix work = m;
    for (int col = 0; col < d; ++col) {
        const double p = work.at(col, col).real();
        if (!(p > 1e-14 * (1.0 + m.norm_fro()))) return false;
        for (int r = col + 1; r < d; ++r) {
            const Complex f = work.at(r, col) / work.at(col, col);
            for (int j = col; j < d; ++j) work.at(r, j) -= f * work.at(col, j);
        }
    }
    return true;
}

}  // namespace

CMatrix HamiltonianModel::eval_A(double t) const {
    switch (desc_.family) {
        case ModelFamily::Constant:
            return *desc_.constant_matrix;
        case ModelFamily::ScalarProfile:
            return CMatrix::scalar(profile_value(desc_.profile_kind, desc_.profile_param, t));
        case ModelFamily::TwoLevel: {
            CMatrix m(2);
            m.at(0, 0) = desc_.two_level_a;
            m.at(1, 1) = desc_.two_level_a;
            m.at(0, 1) = desc_.two_level_b;
            m.at(1, 0) = desc_.two_level_b;
            return m;
        }
    }
    throw ValidationError("unknown model family");
}

CMatrix HamiltonianModel::eval_H(double t) const {
    const double slack = 1e-9 * (desc_.window_max - desc_.window_min);
    if (t < desc_.window_min - slack || t > desc_.window_max + slack)
        throw OutOfWindow("t = " + std::to_string(t) + " outside window [" +
                          std::to_string(desc_.window_min) + ", " +
                          std::to_string(desc_.window_max) + "]");
    CMatrix h = eval_A(t);
    h *= Complex(desc_.g, 0.0);
    return h;
}

HamiltonianModel HamiltonianModel::with_coupling(double new_g) const {
    ModelDescription d = desc_;
    d.g = new_g;
    return build_model(d);
}

HamiltonianModel build_model(const ModelDescription& desc) {
    if (desc.window_min >= desc.window_max)
        throw BadWindow("window requires t_min < t_max");
    if (!(desc.g > 0.0)) throw NotPositiveDefinite("coupling g must be > 0");

    switch (desc.family) {
        case ModelFamily::ScalarProfile:
            if (desc.dim != 1) throw ValidationError("scalar_profile requires dim = 1");
            break;
        case ModelFamily::TwoLevel:
            if (desc.dim != 2) throw ValidationError("two_level requires dim = 2");
            break;
        case ModelFamily::Constant:
            if (!desc.constant_matrix) throw ValidationError("constant family requires a matrix");
            if (desc.constant_matrix->dim() != desc.dim)
                throw ValidationError("constant matrix dimension does not match dim");
            if (!desc.constant_matrix->is_finite())
                throw ValidationError("constant matrix must be finite");
            if (!desc.constant_matrix->is_hermitian(1e-12))
                throw NotHermitian("constant matrix is not Hermitian");
            if (!hermitian_positive_definite(*desc.constant_matrix))
                throw NotPositiveDefinite("constant matrix is not positive definite");
            break;
    }

    HamiltonianModel model(desc);

    // Positive definiteness sampled across the window; closed forms for the
    // time-dependent families, elimination signs already done for Constant.
    const double span = desc.window_max - desc.window_min;
    for (int i = 0; i < kWindowSamples; ++i) {
        const double t = desc.window_min + span * i / (kWindowSamples - 1);
        switch (desc.family) {
            case ModelFamily::ScalarProfile: {
                const double h = profile_value(desc.profile_kind, desc.profile_param, t);
                if (!std::isfinite(h)) throw ValidationError("profile not finite on window");
                if (!(h > 0.0))
                    throw NotPositiveDefinite("profile h(t) <= 0 at t = " + std::to_string(t));
                break;
            }
            case ModelFamily::TwoLevel: {
                const double min_eig = desc.two_level_a - std::abs(desc.two_level_b);
                if (!(min_eig > 0.0))
                    throw NotPositiveDefinite("two_level requires a > |b| (min eigenvalue " +
                                              std::to_string(min_eig) + ")");
                break;
            }
            case ModelFamily::Constant:
                break;
        }
    }
    return model;
}

void SeriesResult::attach_reference(const CMatrix& u_exact) {
    reference = u_exact;
    errors.clear();
    errors.reserve(partial_sums.size());
    for (const CMatrix& s : partial_sums) errors.push_back((s - u_exact).norm_fro());
}

namespace {

CMatrix midpoint_product(const HamiltonianModel& model, double t, double t0, long steps) {
    const double h = (t - t0) / static_cast<double>(steps);
    CMatrix u = CMatrix::identity(model.dim());
    for (long i = 0; i < steps; ++i) {
        const double mid = t0 + (static_cast<double>(i) + 0.5) * h;
        CMatrix a = model.eval_H(mid);
        a *= Complex(0.0, -h);
        u = mat_exp(a) * u;  // later times act on the left
    }
    return u;
}

}  // namespace

PropagatorSample exact_propagator(const HamiltonianModel& model, double t, double t0, double tol) {
    if (t0 > t) throw BadWindow("exact_propagator requires t0 <= t");
    if (t == t0) return {t, t0, CMatrix::identity(model.dim())};

    long steps = 1;
    CMatrix prev = midpoint_product(model, t, t0, steps);
    for (int k = 0; k < kMaxStepDoublings; ++k) {
        steps *= 2;
        CMatrix cur = midpoint_product(model, t, t0, steps);
        if ((cur - prev).norm_fro() <= tol) return {t, t0, cur};
        prev = cur;
    }
    throw NoConvergence("exact_propagator: step doublings exhausted");
}

double volterra_residual(const HamiltonianModel& model, const CMatrix& u_candidate,
                         const std::function<CMatrix(double)>& u_history, double t, double t0,
                         const QuadratureSpec& spec) {
    const CMatrix integral = quad_adaptive(
        [&](double s) { return model.eval_H(s) * u_history(s); }, t0, t, spec);
    CMatrix rhs = CMatrix::identity(model.dim());
    CMatrix tail = integral;
    tail *= Complex(0.0, 1.0);
    rhs -= tail;
    return (u_candidate - rhs).norm_fro();
}

namespace {

// One RK4 step of the cascade dU_n/dt = -i H(t) U_{n-1}, U_0 = I.
void cascade_rk4_step(const HamiltonianModel& model, double t, double h,
                      std::vector<CMatrix>& u) {
    const int m = static_cast<int>(u.size()) - 1;
    if (m < 1) return;
    const Complex mi(0.0, -1.0);
    const CMatrix h1 = model.eval_H(t);
    const CMatrix h2 = model.eval_H(t + 0.5 * h);
    const CMatrix h4 = model.eval_H(t + h);

    std::vector<CMatrix> k1, k2, k3, k4;
    k1.reserve(m);
    k2.reserve(m);
    k3.reserve(m);
    k4.reserve(m);
    for (int n = 1; n <= m; ++n) k1.push_back(mi * (h1 * u[n - 1]));
    for (int n = 1; n <= m; ++n) {
        CMatrix arg = u[n - 1];
        if (n >= 2) {
            CMatrix d = k1[n - 2];
            d *= Complex(0.5 * h, 0.0);
            arg += d;
        }
        k2.push_back(mi * (h2 * arg));
    }
    for (int n = 1; n <= m; ++n) {
        CMatrix arg = u[n - 1];
        if (n >= 2) {
            CMatrix d = k2[n - 2];
            d *= Complex(0.5 * h, 0.0);
            arg += d;
        }
        k3.push_back(mi * (h2 * arg));
    }
    for (int n = 1; n <= m; ++n) {
        CMatrix arg = u[n - 1];
        if (n >= 2) {
            CMatrix d = k3[n - 2];
            d *= Complex(h, 0.0);
            arg += d;
        }
        k4.push_back(mi * (h4 * arg));
    }
    for (int n = 1; n <= m; ++n) {
        CMatrix incr = k1[n - 1];
        CMatrix two_k2 = k2[n - 1];
        two_k2 *= Complex(2.0, 0.0);
        CMatrix two_k3 = k3[n - 1];
        two_k3 *= Complex(2.0, 0.0);
        incr += two_k2;
        incr += two_k3;
        incr += k4[n - 1];
        incr *= Complex(h / 6.0, 0.0);
        u[n] += incr;
    }
}

std::vector<CMatrix> cascade_terms(const HamiltonianModel& model, double t, double t0, int order,
                                   long steps) {
    std::vector<CMatrix> u(order + 1, CMatrix::zero(model.dim()));
    u[0] = CMatrix::identity(model.dim());
    const double h = (t - t0) / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) cascade_rk4_step(model, t0 + i * h, h, u);
    return u;
}

double max_term_diff(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm_fro());
    return d;
}

}  // namespace

SeriesResult dyson_expansion(const HamiltonianModel& model, double t, double t0, int order,
                             double tol) {
    if (order < 0 || order > 12) throw ValidationError("dyson_expansion requires 0 <= order <= 12");
    if (t0 > t) throw BadWindow("dyson_expansion requires t0 <= t");

    std::vector<CMatrix> terms;
    if (t == t0 || order == 0) {
        terms.assign(order + 1, CMatrix::zero(model.dim()));
        terms[0] = CMatrix::identity(model.dim());
    } else {
        long steps = 1;
        std::vector<CMatrix> prev = cascade_terms(model, t, t0, order, steps);
        bool converged = false;
        for (int k = 0; k < kMaxStepDoublings; ++k) {
            steps *= 2;
            std::vector<CMatrix> cur = cascade_terms(model, t, t0, order, steps);
            if (max_term_diff(cur, prev) <= tol) {
                terms = std::move(cur);
                converged = true;
                break;
            }
            prev = std::move(cur);
        }
        if (!converged) throw NoConvergence("dyson_expansion: step doublings exhausted");
    }

    SeriesResult res;
    res.kind = SeriesKind::Dyson;
    res.terms = std::move(terms);
    CMatrix acc = CMatrix::zero(model.dim());
    for (const CMatrix& term : res.terms) {
        acc += term;
        res.partial_sums.push_back(acc);
        res.term_norms.push_back(term.norm_fro());
    }
    return res;
}

CMatrix dyson_term_oracle(const HamiltonianModel& model, double t, double t0, int n) {
    if (n < 0 || n > 3) throw ValidationError("dyson_term_oracle requires 0 <= n <= 3");
    if (n == 0) return CMatrix::identity(model.dim());

    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.max_panel_doublings = 12;

    // K_j(s) = \int_{t0}^{s} H(sigma) K_{j-1}(sigma) dsigma, built bottom-up.
    std::function<CMatrix(int, double)> k = [&](int j, double s) -> CMatrix {
        if (j == 0) return CMatrix::identity(model.dim());
        return quad_adaptive(
            [&](double sigma) { return model.eval_H(sigma) * k(j - 1, sigma); }, t0, s, spec);
    };
    CMatrix term = k(n, t);
    Complex phase(1.0, 0.0);
    for (int i = 0; i < n; ++i) phase *= Complex(0.0, -1.0);
    term *= phase;
    return term;
}

std::function<CMatrix(double)> make_exact_reference(const HamiltonianModel& model, double t0,
                                                    double tol) {
    return [&model, t0, tol](double s) { return exact_propagator(model, s, t0, tol).u; };
}

}  // namespace scx
