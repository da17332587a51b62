#include <cmath>

#include <doctest.h>

#include "scx/recursion_lab.hpp"

using scx::GeometricMode;
using scx::GeometricSeriesSpec;
using scx::RecursionTable;

TEST_CASE("geometric: weak partial sums for a = 0.5") {
    const auto res = scx::geometric_partial_sums({0.5, GeometricMode::Weak, 4});
    REQUIRE(res.partial_sums.size() == 4);
    CHECK(res.partial_sums.back() == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(res.limit == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_FALSE(res.divergence_flag);
}

TEST_CASE("geometric: strong partial sums for a = 2") {
    const auto res = scx::geometric_partial_sums({2.0, GeometricMode::Strong, 4});
    REQUIRE(res.partial_sums.size() == 4);
    // 1/2 - 1/4 + 1/8 - 1/16
    CHECK(res.partial_sums.back() == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(res.limit == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("geometric: weak iteration outside its region diverges and is flagged") {
    const auto small = scx::geometric_partial_sums({2.0, GeometricMode::Weak, 4});
    CHECK(small.partial_sums.back() == doctest::Approx(-5.0));  // 1 - 2 + 4 - 8
    CHECK_FALSE(small.divergence_flag);

    const auto big = scx::geometric_partial_sums({2.0, GeometricMode::Weak, 60});
    CHECK(big.divergence_flag);
    CHECK(big.flagged_at > 0);
    CHECK(static_cast<int>(big.partial_sums.size()) == big.flagged_at);
    CHECK(std::abs(big.partial_sums.back()) > 1e12);
}

TEST_CASE("geometric: both regimes converge to 1/(1+a)") {
    const auto strong = scx::geometric_partial_sums({2.0, GeometricMode::Strong, 50});
    CHECK(std::abs(strong.partial_sums.back() - 1.0 / 3.0) < 1e-14);
    const auto weak = scx::geometric_partial_sums({0.5, GeometricMode::Weak, 50});
    CHECK(std::abs(weak.partial_sums.back() - 2.0 / 3.0) < 1e-14);
}

TEST_CASE("geometric: invalid specs") {
    CHECK_THROWS_AS(GeometricSeriesSpec(1.0, GeometricMode::Weak, 3), scx::ValidationError);
    CHECK_THROWS_AS(GeometricSeriesSpec(-1.0, GeometricMode::Weak, 3), scx::ValidationError);
    CHECK_THROWS_AS(GeometricSeriesSpec(0.0, GeometricMode::Strong, 3), scx::ValidationError);
    CHECK_THROWS_AS(GeometricSeriesSpec(2.0, GeometricMode::Strong, 0), scx::ValidationError);
}

TEST_CASE("In_oracle: closed forms and monotonicity") {
    const double inv_e = std::exp(-1.0);
    CHECK(scx::In_oracle(0) == doctest::Approx(1.0 - inv_e).epsilon(1e-13));
    CHECK(scx::In_oracle(1) == doctest::Approx(inv_e).epsilon(1e-13));
    CHECK(scx::In_oracle(2) == doctest::Approx(1.0 - 2.0 * inv_e).epsilon(1e-13));

    double prev = scx::In_oracle(0);
    for (int n = 1; n <= 60; ++n) {
        const double v = scx::In_oracle(n);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(scx::In_oracle(61), scx::ValidationError);
    CHECK_THROWS_AS(scx::In_oracle(-1), scx::ValidationError);
}

TEST_CASE("forward_recursion: oracle agreement at low n, trivial seed") {
    const auto t = scx::forward_recursion(2, 1.0 - std::exp(-1.0));
    REQUIRE(t.indices.size() == 3);
    CHECK(t.values[1] == doctest::Approx(scx::In_oracle(1)).epsilon(1e-12));
    CHECK(t.values[2] == doctest::Approx(scx::In_oracle(2)).epsilon(1e-12));

    const auto z = scx::forward_recursion(1, 0.0);
    CHECK(z.values.back() == doctest::Approx(1.0));
}

TEST_CASE("forward_recursion: double-precision seed blows up by n = 20") {
    const auto t = scx::forward_recursion(20, 1.0 - std::exp(-1.0));
    const double exact = scx::In_oracle(20);
    CHECK(std::abs(t.values.back() - exact) / exact > 1e2);
}

TEST_CASE("backward_recursion: trivial first step and oracle recovery") {
    const auto one = scx::backward_recursion(20, 0.0, 19);
    REQUIRE(one.indices.size() == 2);
    CHECK(one.indices[1] == 19);
    CHECK(one.values[1] == doctest::Approx(0.05).epsilon(1e-15));

    const auto t = scx::backward_recursion(25, 0.0, 10);
    CHECK(std::abs(t.values.back() - scx::In_oracle(10)) < 1e-12);

    const auto inv = scx::backward_recursion(2, scx::In_oracle(2), 0);
    CHECK(inv.values.back() == doctest::Approx(scx::In_oracle(0)).epsilon(1e-12));
}

TEST_CASE("round trip: forward then backward returns the seed") {
    const double i0 = 1.0 - std::exp(-1.0);
    for (int n = 2; n <= 12; ++n) {
        const auto fwd = scx::forward_recursion(n, i0);
        const auto back = scx::backward_recursion(n, fwd.values.back(), 0);
        CHECK(std::abs(back.values.back() - i0) < 1e-12);
    }
}

TEST_CASE("damping and amplification laws are exact in the seed difference") {
    auto factorial_ratio = [](int lo, int hi) {  // lo! / hi!
        double r = 1.0;
        for (int k = lo + 1; k <= hi; ++k) r /= k;
        return r;
    };

    const double s1 = 0.25, s2 = 0.75;
    const int n_start = 18, n_stop = 6;
    const auto b1 = scx::backward_recursion(n_start, s1, n_stop);
    const auto b2 = scx::backward_recursion(n_start, s2, n_stop);
    const double observed = std::abs(b1.values.back() - b2.values.back());
    const double predicted = std::abs(s1 - s2) * factorial_ratio(n_stop, n_start);
    CHECK(observed == doctest::Approx(predicted).epsilon(1e-13));

    const double seed_a = 0.6;
    const double seed_b = 0.6 + 1e-6;
    const auto f1 = scx::forward_recursion(12, seed_a);
    const auto f2 = scx::forward_recursion(12, seed_b);
    double fact = 1.0;
    for (int k = 1; k <= 12; ++k) fact *= k;
    CHECK(std::abs(f1.values.back() - f2.values.back()) ==
          doctest::Approx((seed_b - seed_a) * fact).epsilon(1e-9));
}

TEST_CASE("recursion tables: index ordering invariants") {
    const auto fwd = scx::forward_recursion(5, 0.1);
    for (std::size_t i = 1; i < fwd.indices.size(); ++i)
        CHECK(fwd.indices[i] == fwd.indices[i - 1] + 1);

    const auto back = scx::backward_recursion(5, 0.1, 0);
    for (std::size_t i = 1; i < back.indices.size(); ++i)
        CHECK(back.indices[i] == back.indices[i - 1] - 1);

    CHECK_THROWS_AS(scx::backward_recursion(3, 0.0, 3), scx::ValidationError);
    CHECK_THROWS_AS(scx::backward_recursion(3, 0.0, -1), scx::ValidationError);
    CHECK_THROWS_AS(scx::forward_recursion(0, 0.0), scx::ValidationError);
}
