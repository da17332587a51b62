// Compares the OpenMP scan/sweep kernels against the serial reference on
// representative workloads and verifies the outputs agree exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "scx/strong_expansion.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

scx::HamiltonianModel two_level_model() {
    scx::ModelDescription d;
    d.dim = 2;
    d.family = scx::ModelFamily::TwoLevel;
    d.two_level_a = 2.0;
    d.two_level_b = 1.0;
    d.g = 3.0;
    d.window_min = 0.0;
    d.window_max = 2.0;
    return scx::build_model(d);
}

scx::HamiltonianModel gauss_model() {
    scx::ModelDescription d;
    d.dim = 1;
    d.family = scx::ModelFamily::ScalarProfile;
    d.profile_kind = scx::ProfileKind::Gauss;
    d.profile_param = 0.5;
    d.g = 2.0;
    d.window_min = 0.0;
    d.window_max = 2.0;
    return scx::build_model(d);
}

void report(const char* name, double serial_s, double parallel_s, double max_abs_diff) {
    std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   max|diff| %g\n",
                name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s, max_abs_diff);
}

}  // namespace

int main() {
    // Workload 1: the raw kernel, one exact-propagator solve per grid point.
    // Time-dependent profile, so every point does real stepping work.
    {
        const auto model = gauss_model();
        auto point = [&](std::size_t i) {
            const double t = 0.4 + 1.2 * static_cast<double>(i) / 256.0;
            return scx::exact_propagator(model, t, 0.0, 1e-9).u.norm_fro();
        };

        auto t0 = Clock::now();
        const auto serial = scx::map_indexed_serial(257, point);
        const double ts = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel = scx::map_indexed_parallel(257, point);
        const double tp = seconds_since(t0);

        double diff = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            diff = std::max(diff, std::abs(serial[i] - parallel[i]));
        report("propagator_grid[257]", ts, tp, diff);
    }

    // Workload 2: end-to-end defect scan. The two window integrals are a
    // serial setup phase shared by both paths; only the scan parallelizes.
    {
        const auto model = gauss_model();
        const auto u_ref = scx::make_exact_reference(model, 0.0, 1e-9);
        scx::QuadratureSpec spec;
        spec.rel_tol = 1e-8;  // matched to the reference accuracy

        auto t0 = Clock::now();
        const auto serial =
            scx::defect_scan(model, 1.6, u_ref, 257, scx::ExecPolicy::Serial, spec);
        const double ts = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel =
            scx::defect_scan(model, 1.6, u_ref, 257, scx::ExecPolicy::Parallel, spec);
        const double tp = seconds_since(t0);

        double diff = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            diff = std::max(diff, std::abs(serial[i].defect_rel - parallel[i].defect_rel));
        report("defect_scan[257]", ts, tp, diff);
    }

    // Workload 3: term-scaling sweep, 64 coupling factors.
    {
        const auto model = two_level_model();
        const scx::TimeGrid grid(0.0, {1.8, 1.5, 1.2, 0.9, 0.6, 0.3});
        std::vector<double> factors;
        for (int i = 0; i < 64; ++i) factors.push_back(1.0 + 0.25 * i);

        auto t0 = Clock::now();
        const auto serial = scx::term_scaling_probe(model, grid, factors, scx::ExecPolicy::Serial);
        const double ts = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel =
            scx::term_scaling_probe(model, grid, factors, scx::ExecPolicy::Parallel);
        const double tp = seconds_since(t0);

        double diff = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            diff = std::max(diff, std::abs(serial[i].term_norm - parallel[i].term_norm));
        report("term_scaling[64]", ts, tp, diff);
    }
    return 0;
}
