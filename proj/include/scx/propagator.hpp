#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "scx/numkit.hpp"

namespace scx {

enum class ModelFamily { Constant, ScalarProfile, TwoLevel };
enum class ProfileKind { Const, Poly, Gauss };

/// Description of a model as it arrives from configuration; build_model
/// validates it into a HamiltonianModel.
struct ModelDescription {
    int dim = 1;
    ModelFamily family = ModelFamily::ScalarProfile;
    double g = 1.0;
    double window_min = 0.0;
    double window_max = 1.0;

    // ScalarProfile payload: Const -> c, Poly -> 1 + alpha t^2, Gauss -> beta + e^{-t^2}.
    ProfileKind profile_kind = ProfileKind::Const;
    double profile_param = 1.0;

    // TwoLevel payload: A = a I + b sigma_x.
    double two_level_a = 0.0;
    double two_level_b = 0.0;

    // Constant payload.
    std::optional<CMatrix> constant_matrix;
};

/// Interaction generator H(t) = g A(t) with A(t) Hermitian positive definite
/// on a finite window. Immutable after build_model.
class HamiltonianModel {
public:
    CMatrix eval_A(double t) const;
    CMatrix eval_H(double t) const;  // g * A(t); throws OutOfWindow

    int dim() const { return desc_.dim; }
    double coupling() const { return desc_.g; }
    double window_min() const { return desc_.window_min; }
    double window_max() const { return desc_.window_max; }
    ModelFamily family() const { return desc_.family; }
    const ModelDescription& description() const { return desc_; }

    /// Same generator with the coupling replaced (revalidated).
    HamiltonianModel with_coupling(double new_g) const;

private:
    friend HamiltonianModel build_model(const ModelDescription&);
    explicit HamiltonianModel(ModelDescription desc) : desc_(std::move(desc)) {}
    ModelDescription desc_;
};

/// Validates Hermiticity, the window, and positive definiteness on 129
/// uniform window samples. Throws NotHermitian / NotPositiveDefinite /
/// BadWindow / ValidationError.
HamiltonianModel build_model(const ModelDescription& desc);

struct PropagatorSample {
    double t = 0.0;
    double t0 = 0.0;
    CMatrix u;
};

enum class SeriesKind { Dyson, Strong };

/// Ordered expansion terms with running partial sums; optionally carries an
/// exact reference and the per-order errors against it.
struct SeriesResult {
    SeriesKind kind = SeriesKind::Dyson;
    std::vector<CMatrix> terms;
    std::vector<CMatrix> partial_sums;
    std::vector<double> term_norms;
    std::optional<CMatrix> reference;
    std::vector<double> errors;

    void attach_reference(const CMatrix& u_exact);
};

/// Midpoint-exponential product solver for i du/dt = H(t) u, u(t0,t0) = I.
/// Step count doubles until successive results agree to tol; throws
/// NoConvergence after 24 doublings.
PropagatorSample exact_propagator(const HamiltonianModel& model, double t, double t0,
                                  double tol = 1e-10);

/// || u_candidate - (I - i \int_{t0}^{t} H(s) u_history(s) ds) ||_F.
double volterra_residual(const HamiltonianModel& model, const CMatrix& u_candidate,
                         const std::function<CMatrix(double)>& u_history, double t, double t0,
                         const QuadratureSpec& spec = {});

/// Weak-coupling expansion of the evolution operator: terms U_0 = I,
/// U_n(t) = -i \int_{t0}^{t} H(s) U_{n-1}(s) ds, computed by simultaneous
/// stepping of all orders (0 <= order <= 12).
SeriesResult dyson_expansion(const HamiltonianModel& model, double t, double t0, int order,
                             double tol = 1e-10);

/// Direct nested time-ordered quadrature for term n (n <= 3); cross-check
/// oracle, cost grows exponentially with n.
CMatrix dyson_term_oracle(const HamiltonianModel& model, double t, double t0, int n);

/// u(s, t0) evaluated by exact_propagator; convenience wrapper used by
/// residual and defect studies.
std::function<CMatrix(double)> make_exact_reference(const HamiltonianModel& model, double t0,
                                                    double tol = 1e-10);

}  // namespace scx
