#pragma once

#include <array>
#include <complex>
#include <functional>
#include <initializer_list>
#include <vector>

#include "scx/errors.hpp"

namespace scx {

using Complex = std::complex<double>;

/// Small dense complex matrix, row-major, dimension 1..8. Value type:
/// copies are cheap and every operation returns a fresh matrix.
class CMatrix {
public:
    static constexpr int kMaxDim = 8;

    explicit CMatrix(int dim);
    CMatrix(int dim, std::initializer_list<Complex> entries);

    // Only the dim^2 prefix of the backing array is live; copying the rest
    // would dominate the cost of scalar and 2x2 work.
    CMatrix(const CMatrix& o) : dim_(o.dim_) {
        std::copy(o.a_.begin(), o.a_.begin() + dim_ * dim_, a_.begin());
    }
    CMatrix& operator=(const CMatrix& o) {
        dim_ = o.dim_;
        std::copy(o.a_.begin(), o.a_.begin() + dim_ * dim_, a_.begin());
        return *this;
    }

    static CMatrix identity(int dim);
    static CMatrix zero(int dim) { return CMatrix(dim); }
    static CMatrix scalar(Complex z);

    int dim() const { return dim_; }

    Complex& at(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
    const Complex& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(Complex z);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(Complex z, CMatrix m) { return m *= z; }
    friend CMatrix operator*(CMatrix m, Complex z) { return m *= z; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

    CMatrix adjoint() const;

    double norm_fro() const;
    bool is_finite() const;

    /// Entrywise conjugate-symmetry check, |m - m^dagger| <= tol per entry.
    bool is_hermitian(double tol = 1e-12) const;

private:
    int dim_;
    std::array<Complex, static_cast<std::size_t>(kMaxDim) * kMaxDim> a_;
};

/// Controls the composite Gauss-Legendre integrator: fixed nodes per panel,
/// panel count doubled until successive estimates agree to rel_tol.
struct QuadratureSpec {
    double rel_tol = 1e-12;
    int max_panel_doublings = 20;
    int points_per_panel = 16;

    void validate() const;  // rel_tol in [1e-14, 1e-2], doublings >= 1
};

/// Inverse by Gauss-Jordan elimination with row pivoting. Throws
/// SingularMatrix when a pivot falls below 1e-13 * ||m||_F.
CMatrix mat_inverse(const CMatrix& m);

/// Matrix exponential. d <= 2 uses the closed spectral form, larger
/// dimensions use scaling-and-squaring on a truncated series.
CMatrix mat_exp(const CMatrix& m);

/// Entrywise integral of f over [a, b] by composite Gauss-Legendre panels.
/// Panel count doubles until two consecutive estimates agree; throws
/// NoConvergence when spec.max_panel_doublings is exhausted.
CMatrix quad_adaptive(const std::function<CMatrix(double)>& f, double a, double b,
                      const QuadratureSpec& spec = {});

double quad_adaptive_real(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

/// Gauss-Legendre nodes and weights on [-1, 1], n >= 2.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace scx
