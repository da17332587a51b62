#include "scx/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scx {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > CMatrix::kMaxDim)
        throw ValidationError("CMatrix dimension must lie in [1, 8], got " + std::to_string(dim));
}

}  // namespace

CMatrix::CMatrix(int dim) : dim_(dim) {
    check_dim(dim);
    std::fill(a_.begin(), a_.begin() + dim * dim, Complex{});
}

CMatrix::CMatrix(int dim, std::initializer_list<Complex> entries) : dim_(dim) {
    check_dim(dim);
    if (static_cast<int>(entries.size()) != dim * dim)
        throw ValidationError("CMatrix entry count does not match dimension");
    std::copy(entries.begin(), entries.end(), a_.begin());
}

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::scalar(Complex z) {
    CMatrix m(1);
    m.at(0, 0) = z;
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (dim_ != o.dim_) throw ValidationError("CMatrix dimension mismatch in +");
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] += o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (dim_ != o.dim_) throw ValidationError("CMatrix dimension mismatch in -");
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] -= o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex z) {
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] *= z;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.dim_ != b.dim_) throw ValidationError("CMatrix dimension mismatch in *");
    const int d = a.dim_;
    CMatrix r(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < d; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    }
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

double CMatrix::norm_fro() const {
    double s = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i) s += std::norm(a_[i]);
    return std::sqrt(s);
}

bool CMatrix::is_finite() const {
    for (int i = 0; i < dim_ * dim_; ++i)
        if (!std::isfinite(a_[i].real()) || !std::isfinite(a_[i].imag())) return false;
    return true;
}

bool CMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    return true;
}

void QuadratureSpec::validate() const {
    if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2))
        throw ValidationError("QuadratureSpec.rel_tol must lie in [1e-14, 1e-2]");
    if (max_panel_doublings < 1)
        throw ValidationError("QuadratureSpec.max_panel_doublings must be >= 1");
    if (points_per_panel < 2)
        throw ValidationError("QuadratureSpec.points_per_panel must be >= 2");
}

CMatrix mat_inverse(const CMatrix& m) {
    const int d = m.dim();
    const double scale = m.norm_fro();
    const double pivot_floor = 1e-13 * scale;

    // Augmented [work | inv], Gauss-Jordan with partial (row) pivoting.
    CMatrix work = m;
    CMatrix inv = CMatrix::identity(d);

    for (int col = 0; col < d; ++col) {
        int piv = col;
        double best = std::abs(work.at(col, col));
        for (int r = col + 1; r < d; ++r) {
            const double v = std::abs(work.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= pivot_floor)
            throw SingularMatrix("pivot " + std::to_string(best) + " below 1e-13 * ||m||_F");
        if (piv != col) {
            for (int j = 0; j < d; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        const Complex p = work.at(col, col);
        for (int j = 0; j < d; ++j) {
            work.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col) continue;
            const Complex f = work.at(r, col);
            if (f == Complex{}) continue;
            for (int j = 0; j < d; ++j) {
                work.at(r, j) -= f * work.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    if (!inv.is_finite()) throw SingularMatrix("inverse produced non-finite entries");
    return inv;
}

namespace {

// sinh(z)/z with a series branch to avoid cancellation near z = 0.
Complex sinch(Complex z) {
    if (std::abs(z) < 1e-3) {
        const Complex z2 = z * z;
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
    }
    return std::sinh(z) / z;
}

// Closed form for d = 2: write m = mu*I + B with tr(B) = 0; then
// B^2 = (mu^2 - det m) * I and exp(m) = e^mu (cosh(w) I + sinch(w) B).
CMatrix exp_2x2(const CMatrix& m) {
    const Complex mu = (m.at(0, 0) + m.at(1, 1)) / 2.0;
    CMatrix b = m;
    b.at(0, 0) -= mu;
    b.at(1, 1) -= mu;
    const Complex w2 = b.at(0, 0) * b.at(0, 0) + b.at(0, 1) * b.at(1, 0);
    const Complex w = std::sqrt(w2);
    const Complex emu = std::exp(mu);
    const Complex ch = std::cosh(w);
    const Complex sh = sinch(w);
    CMatrix r(2);
    r.at(0, 0) = emu * (ch + sh * b.at(0, 0));
    r.at(0, 1) = emu * sh * b.at(0, 1);
    r.at(1, 0) = emu * sh * b.at(1, 0);
    r.at(1, 1) = emu * (ch + sh * b.at(1, 1));
    return r;
}

CMatrix exp_taylor(const CMatrix& m) {
    const int d = m.dim();
    CMatrix sum = CMatrix::identity(d);
    CMatrix term = CMatrix::identity(d);
    for (int k = 1; k <= 64; ++k) {
        term = term * m;
        term *= Complex(1.0 / k, 0.0);
        sum += term;
        if (term.norm_fro() <= 1e-17 * sum.norm_fro()) break;
    }
    return sum;
}

}  // namespace

CMatrix mat_exp(const CMatrix& m) {
    if (!m.is_finite()) throw ValidationError("mat_exp requires finite entries");
    const int d = m.dim();
    if (d == 1) {
        CMatrix r(1);
        r.at(0, 0) = std::exp(m.at(0, 0));
        return r;
    }
    if (d == 2) return exp_2x2(m);

    // Scaling and squaring: bring ||m/2^s||_F below 1/4, then square back.
    int s = 0;
    double nrm = m.norm_fro();
    while (nrm > 0.25 && s < 60) {
        nrm /= 2.0;
        ++s;
    }
    CMatrix scaled = m;
    scaled *= Complex(std::ldexp(1.0, -s), 0.0);
    CMatrix r = exp_taylor(scaled);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, refined by Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

namespace {

CMatrix composite_gl(const std::function<CMatrix(double)>& f, double a, double b, int panels,
                     const std::vector<double>& x, const std::vector<double>& w, int dim,
                     double& f_scale) {
    CMatrix acc(dim);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            CMatrix v = f(mid + half * x[i]);
            f_scale = std::max(f_scale, v.norm_fro());
            v *= Complex(w[i] * half, 0.0);
            acc += v;
        }
    }
    return acc;
}

}  // namespace

CMatrix quad_adaptive(const std::function<CMatrix(double)>& f, double a, double b,
                      const QuadratureSpec& spec) {
    spec.validate();
    if (a > b) throw ValidationError("quad_adaptive requires a <= b");

    CMatrix probe = f(0.5 * (a + b));
    const int dim = probe.dim();
    if (a == b) return CMatrix::zero(dim);

    std::vector<double> x, w;
    gauss_legendre(spec.points_per_panel, x, w);

    double f_scale = 0.0;
    int panels = 1;
    CMatrix prev = composite_gl(f, a, b, panels, x, w, dim, f_scale);
    for (int k = 0; k < spec.max_panel_doublings; ++k) {
        panels *= 2;
        CMatrix cur = composite_gl(f, a, b, panels, x, w, dim, f_scale);
        const double diff = (cur - prev).norm_fro();
        // Absolute floor keeps integrals that vanish by cancellation from
        // chasing pure round-off.
        const double floor = 1e-16 * (b - a) * f_scale;
        if (diff <= spec.rel_tol * cur.norm_fro() + floor) {
            if (!cur.is_finite()) throw ValidationError("quadrature produced non-finite result");
            return cur;
        }
        prev = cur;
    }
    throw NoConvergence("quad_adaptive: panel doublings exhausted (" +
                        std::to_string(spec.max_panel_doublings) + ")");
}

double quad_adaptive_real(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    const CMatrix r = quad_adaptive([&f](double t) { return CMatrix::scalar(f(t)); }, a, b, spec);
    return r.at(0, 0).real();
}

}  // namespace scx
