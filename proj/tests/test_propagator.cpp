#include <cmath>
#include <random>

#include <doctest.h>

#include "scx/propagator.hpp"
#include "scx/strong_expansion.hpp"

using scx::CMatrix;
using scx::Complex;
using scx::HamiltonianModel;
using scx::ModelDescription;
using scx::ModelFamily;
using scx::ProfileKind;

namespace {

const double kPi = std::acos(-1.0);

double diff_norm(const CMatrix& a, const CMatrix& b) { return (a - b).norm_fro(); }

ModelDescription scalar_const(double g, double c = 1.0, double t_max = 4.0) {
    ModelDescription d;
    d.dim = 1;
    d.family = ModelFamily::ScalarProfile;
    d.profile_kind = ProfileKind::Const;
    d.profile_param = c;
    d.g = g;
    d.window_min = 0.0;
    d.window_max = t_max;
    return d;
}

ModelDescription two_level(double a, double b, double g, double t_max = 4.0) {
    ModelDescription d;
    d.dim = 2;
    d.family = ModelFamily::TwoLevel;
    d.two_level_a = a;
    d.two_level_b = b;
    d.g = g;
    d.window_min = 0.0;
    d.window_max = t_max;
    return d;
}

ModelDescription scalar_poly(double alpha, double g, double t_max = 2.0) {
    ModelDescription d;
    d.dim = 1;
    d.family = ModelFamily::ScalarProfile;
    d.profile_kind = ProfileKind::Poly;
    d.profile_param = alpha;
    d.g = g;
    d.window_min = 0.0;
    d.window_max = t_max;
    return d;
}

ModelDescription scalar_gauss(double beta, double g, double t_max = 2.0) {
    ModelDescription d;
    d.dim = 1;
    d.family = ModelFamily::ScalarProfile;
    d.profile_kind = ProfileKind::Gauss;
    d.profile_param = beta;
    d.g = g;
    d.window_min = 0.0;
    d.window_max = t_max;
    return d;
}

double unitarity_defect(const CMatrix& u) {
    return diff_norm(u.adjoint() * u, CMatrix::identity(u.dim()));
}

}  // namespace

TEST_CASE("build_model: direct constructions") {
    const auto scalar = scx::build_model(scalar_const(3.0));
    CHECK(scalar.eval_H(0.7).at(0, 0) == Complex(3.0, 0.0));

    const auto tl = scx::build_model(two_level(2.0, 1.0, 1.0));
    const CMatrix h = tl.eval_H(1.0);
    CHECK(h.at(0, 0) == Complex(2.0, 0.0));
    CHECK(h.at(0, 1) == Complex(1.0, 0.0));
    CHECK(h.at(1, 0) == Complex(1.0, 0.0));
    CHECK(h.at(1, 1) == Complex(2.0, 0.0));
}

TEST_CASE("build_model: rejections") {
    CHECK_THROWS_AS(scx::build_model(two_level(1.0, 2.0, 1.0)), scx::NotPositiveDefinite);
    CHECK_THROWS_AS(scx::build_model(scalar_const(-1.0)), scx::NotPositiveDefinite);
    CHECK_THROWS_AS(scx::build_model(scalar_gauss(-0.9, 1.0, 3.0)), scx::NotPositiveDefinite);

    ModelDescription bad_window = scalar_const(1.0);
    bad_window.window_max = bad_window.window_min;
    CHECK_THROWS_AS(scx::build_model(bad_window), scx::BadWindow);

    ModelDescription nh;
    nh.dim = 2;
    nh.family = ModelFamily::Constant;
    nh.g = 1.0;
    nh.window_min = 0.0;
    nh.window_max = 1.0;
    nh.constant_matrix = CMatrix(2, {Complex(2, 0), Complex(0.5, 0.1), Complex(0.5, 0.2), Complex(2, 0)});
    CHECK_THROWS_AS(scx::build_model(nh), scx::NotHermitian);

    // Hermitian but indefinite constant matrix.
    nh.constant_matrix = CMatrix(2, {Complex(1, 0), Complex(2, 0), Complex(2, 0), Complex(1, 0)});
    CHECK_THROWS_AS(scx::build_model(nh), scx::NotPositiveDefinite);

    // Hermitian positive definite constant matrix passes.
    nh.constant_matrix = CMatrix(2, {Complex(2, 0), Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(2, 0)});
    CHECK_NOTHROW(scx::build_model(nh));
}

TEST_CASE("eval_H: profiles and window enforcement") {
    const auto poly = scx::build_model(scalar_poly(1.0, 2.0));
    CHECK(poly.eval_H(1.0).at(0, 0).real() == doctest::Approx(4.0));  // 2 * (1 + 1)

    const auto gauss = scx::build_model(scalar_gauss(0.5, 1.0));
    CHECK(gauss.eval_H(0.0).at(0, 0).real() == doctest::Approx(1.5));

    CHECK_THROWS_AS(poly.eval_H(5.0), scx::OutOfWindow);
    CHECK_THROWS_AS(poly.eval_H(-1.0), scx::OutOfWindow);
}

TEST_CASE("exact_propagator: constant scalar phase and identity start") {
    const auto model = scx::build_model(scalar_const(1.0));
    const auto s = scx::exact_propagator(model, kPi, 0.0);
    CHECK(std::abs(s.u.at(0, 0) - Complex(-1.0, 0.0)) < 1e-8);

    const auto id = scx::exact_propagator(model, 1.3, 1.3);
    CHECK(diff_norm(id.u, CMatrix::identity(1)) == 0.0);
}

TEST_CASE("exact_propagator: two-level closed form u(pi/2) = i sigma_x") {
    const auto model = scx::build_model(two_level(2.0, 1.0, 1.0));
    const auto s = scx::exact_propagator(model, kPi / 2.0, 0.0);
    CMatrix expect(2, {0, Complex(0, 1), Complex(0, 1), 0});
    CHECK(diff_norm(s.u, expect) < 1e-8);
}

TEST_CASE("exact_propagator: unitarity and composition on all families") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::vector<ModelDescription> descs = {
        scalar_const(2.5), scalar_poly(0.7, 1.3), scalar_gauss(0.4, 2.0),
        two_level(2.0, 1.0, 1.7)};
    for (const auto& desc : descs) {
        const auto model = scx::build_model(desc);
        const double span = model.window_max() - model.window_min();
        for (int trial = 0; trial < 4; ++trial) {
            double a = model.window_min() + span * u01(rng) * 0.5;
            double b = a + span * u01(rng) * 0.25;
            double c = b + span * u01(rng) * 0.25;
            const CMatrix u_ca = scx::exact_propagator(model, c, a).u;
            const CMatrix u_cb = scx::exact_propagator(model, c, b).u;
            const CMatrix u_ba = scx::exact_propagator(model, b, a).u;
            CHECK(unitarity_defect(u_ca) <= 1e-8);
            CHECK(diff_norm(u_ca, u_cb * u_ba) <= 1e-8);
        }
    }
}

TEST_CASE("volterra_residual: defining equation, crude history, Dyson tail") {
    const auto g3 = scx::build_model(scalar_const(3.0));
    const auto exact_ref = scx::make_exact_reference(g3, 0.0);
    const CMatrix u1 = scx::exact_propagator(g3, 1.0, 0.0).u;
    CHECK(scx::volterra_residual(g3, u1, exact_ref, 1.0, 0.0) < 1e-6);

    // History frozen at I: residual is ||i * g * t|| = 3.
    const auto identity_ref = [](double) { return CMatrix::identity(1); };
    CHECK(scx::volterra_residual(g3, CMatrix::identity(1), identity_ref, 1.0, 0.0) ==
          doctest::Approx(3.0).epsilon(1e-10));

    // Dyson partial sum as candidate and history: residual = |gt|^{m+1}/(m+1)!.
    const auto g05 = scx::build_model(scalar_const(0.5));
    const int m = 2;
    const auto sm_ref = [&](double s) {
        return scx::dyson_expansion(g05, s, 0.0, m).partial_sums.back();
    };
    const double res = scx::volterra_residual(g05, sm_ref(1.0), sm_ref, 1.0, 0.0);
    CHECK(res == doctest::Approx(std::pow(0.5, 3) / 6.0).epsilon(1e-6));
}

TEST_CASE("dyson_expansion: order zero and constant-H partial sums") {
    const auto model = scx::build_model(two_level(2.0, 1.0, 1.0));
    const auto order0 = scx::dyson_expansion(model, 1.0, 0.0, 0);
    REQUIRE(order0.terms.size() == 1);
    CHECK(diff_norm(order0.terms[0], CMatrix::identity(2)) == 0.0);

    // Order 1 partial sum for constant H is I - i t H.
    const double t = 0.8;
    const auto order1 = scx::dyson_expansion(model, t, 0.0, 1);
    CMatrix expect = CMatrix::identity(2);
    CMatrix ith = model.eval_H(0.0);
    ith *= Complex(0.0, -t);
    expect += ith;
    CHECK(diff_norm(order1.partial_sums.back(), expect) < 1e-9);
}

TEST_CASE("dyson_expansion: scalar g=0.5 order-2 partial sum") {
    const auto model = scx::build_model(scalar_const(0.5));
    const auto res = scx::dyson_expansion(model, 1.0, 0.0, 2);
    CHECK(std::abs(res.partial_sums.back().at(0, 0) - Complex(0.875, -0.5)) < 1e-9);
}

TEST_CASE("dyson_expansion: partial sums re-sum exactly and norms match") {
    const auto model = scx::build_model(two_level(2.0, 1.0, 0.9));
    const auto res = scx::dyson_expansion(model, 1.0, 0.0, 5);
    CMatrix acc = CMatrix::zero(2);
    for (std::size_t j = 0; j < res.terms.size(); ++j) {
        acc += res.terms[j];
        CHECK(diff_norm(acc, res.partial_sums[j]) <= 1e-13);
        CHECK(res.term_norms[j] == doctest::Approx(res.terms[j].norm_fro()));
    }
}

TEST_CASE("dyson_term_oracle: identities and equivalence with the cascade") {
    const auto g2 = scx::build_model(scalar_const(2.0));
    // n = 2 closed form: (-i g t)^2 / 2.
    const double t = 0.9;
    // n = 1 equals -L(t, t0) entry for entry.
    const CMatrix term1 = scx::dyson_term_oracle(g2, t, 0.0, 1);
    CMatrix neg_l = scx::compute_L(g2, t, 0.0);
    neg_l *= Complex(-1.0, 0.0);
    CHECK(diff_norm(term1, neg_l) < 1e-11);
    const Complex igt(0.0, -2.0 * t);
    const CMatrix term2 = scx::dyson_term_oracle(g2, t, 0.0, 2);
    CHECK(std::abs(term2.at(0, 0) - igt * igt / 2.0) < 1e-9);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const auto model = scx::build_model(two_level(u(rng) + 1.5, u(rng) * 0.5, u(rng)));
    const auto cascade = scx::dyson_expansion(model, 1.1, 0.0, 3);
    for (int n = 0; n <= 3; ++n) {
        const CMatrix oracle = scx::dyson_term_oracle(model, 1.1, 0.0, n);
        CHECK(diff_norm(oracle, cascade.terms[n]) <= 1e-9);
    }
}

TEST_CASE("dyson residual identity: residual of S_m equals ||term_{m+1}||") {
    const auto model = scx::build_model(two_level(2.0, 1.0, 0.7));
    const double t = 1.0;
    const auto full = scx::dyson_expansion(model, t, 0.0, 4);
    for (int m = 1; m <= 3; ++m) {
        const auto sm_ref = [&](double s) {
            return scx::dyson_expansion(model, s, 0.0, m).partial_sums.back();
        };
        const double res = scx::volterra_residual(model, sm_ref(t), sm_ref, t, 0.0);
        CHECK(std::abs(res - full.term_norms[m + 1]) <= 1e-7);
    }
}

TEST_CASE("dyson order scaling: log2 error slope is m + 1") {
    const std::vector<double> gs = {0.1, 0.2, 0.4};
    for (const auto& base : {scalar_const(1.0, 1.0, 1.5), two_level(2.0, 1.0, 1.0, 1.5)}) {
        for (int m = 1; m <= 3; ++m) {
            std::vector<double> errs;
            for (double g : gs) {
                const auto model = scx::build_model(base).with_coupling(g);
                auto series = scx::dyson_expansion(model, 1.0, 0.0, m);
                series.attach_reference(scx::exact_propagator(model, 1.0, 0.0, 1e-12).u);
                errs.push_back(series.errors.back());
            }
            const double slope = std::log2(errs[2] / errs[0]) / 2.0;
            CHECK(slope > m + 0.8);
            CHECK(slope < m + 1.2);
        }
    }
}

TEST_CASE("series: attach_reference fills per-order errors") {
    const auto model = scx::build_model(scalar_const(0.5));
    auto series = scx::dyson_expansion(model, 1.0, 0.0, 3);
    series.attach_reference(scx::exact_propagator(model, 1.0, 0.0).u);
    REQUIRE(series.errors.size() == series.partial_sums.size());
    for (std::size_t i = 1; i < series.errors.size(); ++i)
        CHECK(series.errors[i] < series.errors[i - 1]);
}

TEST_CASE("model guards: with_coupling revalidates, order cap enforced") {
    const auto model = scx::build_model(scalar_const(1.0));
    CHECK_THROWS_AS(model.with_coupling(-2.0), scx::NotPositiveDefinite);
    CHECK_THROWS_AS(scx::dyson_expansion(model, 1.0, 0.0, 13), scx::ValidationError);
    CHECK_THROWS_AS(scx::exact_propagator(model, 0.0, 1.0), scx::BadWindow);
}
