#include "scx/xcli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "scx/model_config.hpp"
#include "scx/recursion_lab.hpp"
#include "scx/strong_expansion.hpp"
#include "scx/table.hpp"

namespace scx {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_complex(Complex z) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f %c %.6fi", z.real(), z.imag() < 0 ? '-' : '+',
                  std::abs(z.imag()));
    return buf;
}

void append_matrix_columns(std::vector<std::string>& cols, const std::string& base, int dim) {
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            const std::string name = dim == 1 ? base : base + std::to_string(r) + std::to_string(c);
            cols.push_back(name + "_re");
            cols.push_back(name + "_im");
        }
}

void append_matrix_values(std::vector<double>& row, const CMatrix& m) {
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) {
            row.push_back(m.at(r, c).real());
            row.push_back(m.at(r, c).imag());
        }
}

struct CliOptions {
    bool serial = false;
    ExecPolicy policy() const { return serial ? ExecPolicy::Serial : ExecPolicy::Parallel; }
};

// ---- demo geometric ------------------------------------------------------

struct GeometricArgs {
    double a = 0.0;
    std::string mode;
    int terms = 1;
    std::string out;
};

int cmd_demo_geometric(const GeometricArgs& args) {
    const GeometricMode mode =
        args.mode == "weak" ? GeometricMode::Weak : GeometricMode::Strong;
    const GeometricSeriesSpec spec(args.a, mode, args.terms);
    const GeometricResult res = geometric_partial_sums(spec);

    if (!args.out.empty()) {
        ResultTable table({"m", "S"});
        for (std::size_t i = 0; i < res.partial_sums.size(); ++i)
            table.add_row({static_cast<double>(i + 1), res.partial_sums[i]});
        write_csv(table, args.out);
    }

    std::string line = "geometric " + args.mode + " a=" + fmt6(args.a) + ": S_" +
                       std::to_string(res.partial_sums.size()) + " = " +
                       fmt6(res.partial_sums.back()) + ", limit = " + fmt6(res.limit);
    if (res.divergence_flag)
        line += " (divergence guard tripped at m=" + std::to_string(res.flagged_at) + ")";
    std::cout << line << "\n";
    return 0;
}

// ---- demo recursion ------------------------------------------------------

struct RecursionArgs {
    std::string direction;
    int start = 0;
    std::optional<double> seed;
    int stop = 0;
    std::string out;
};

int cmd_demo_recursion(const RecursionArgs& args) {
    RecursionTable table;
    if (args.direction == "forward") {
        const double seed = args.seed ? *args.seed : In_oracle(args.start);
        table = forward_recursion_from(args.start, seed, args.stop);
    } else {
        const double seed = args.seed ? *args.seed : 0.0;
        table = backward_recursion(args.start, seed, args.stop);
    }

    // CSV rows ascend in n regardless of recursion direction.
    std::vector<std::pair<int, double>> rows;
    for (std::size_t i = 0; i < table.indices.size(); ++i)
        rows.emplace_back(table.indices[i], table.values[i]);
    std::sort(rows.begin(), rows.end());

    ResultTable out({"n", "I"});
    for (const auto& [n, v] : rows) out.add_row({static_cast<double>(n), v});
    write_csv(out, args.out);

    std::cout << "recursion " << args.direction << " seed I_" << table.seed_index << " = "
              << fmt6(table.seed_value) << ": reached I_" << table.indices.back() << " = "
              << fmt6(table.values.back()) << " (" << rows.size() << " rows -> " << args.out
              << ")\n";
    return 0;
}

// ---- propagate -----------------------------------------------------------

struct PropagateArgs {
    std::string model_path;
    std::string method;
    int order = 4;
    double t = 0.0;
    std::optional<double> t0;
    std::string out;
};

int cmd_propagate(const PropagateArgs& args) {
    const HamiltonianModel model = load_model_config(args.model_path);
    const double t0 = args.t0 ? *args.t0 : model.window_min();

    if (args.method == "exact") {
        const PropagatorSample s = exact_propagator(model, args.t, t0);
        CMatrix gram = s.u.adjoint() * s.u;
        gram -= CMatrix::identity(model.dim());
        const double unitarity = gram.norm_fro();

        std::vector<std::string> cols{"t", "t0"};
        append_matrix_columns(cols, "u", model.dim());
        cols.push_back("unitarity_defect");
        ResultTable table(cols);
        std::vector<double> row{s.t, s.t0};
        append_matrix_values(row, s.u);
        row.push_back(unitarity);
        table.add_row(std::move(row));
        write_csv(table, args.out);

        std::cout << "exact u(" << fmt6(args.t) << ", " << fmt6(t0) << "): u[0,0] = "
                  << fmt_complex(s.u.at(0, 0)) << ", unitarity defect " << fmt6(unitarity)
                  << "\n";
        return 0;
    }

    SeriesResult series = dyson_expansion(model, args.t, t0, args.order);
    series.attach_reference(exact_propagator(model, args.t, t0).u);

    std::vector<std::string> cols{"m", "term_norm"};
    append_matrix_columns(cols, "S", model.dim());
    cols.push_back("error");
    ResultTable table(cols);
    for (std::size_t m = 0; m < series.terms.size(); ++m) {
        std::vector<double> row{static_cast<double>(m), series.term_norms[m]};
        append_matrix_values(row, series.partial_sums[m]);
        row.push_back(series.errors[m]);
        table.add_row(std::move(row));
    }
    write_csv(table, args.out);

    std::cout << "dyson order " << args.order << " at t=" << fmt6(args.t) << ": S[0,0] = "
              << fmt_complex(series.partial_sums.back().at(0, 0)) << ", error "
              << fmt6(series.errors.back()) << "\n";
    return 0;
}

// ---- strong --------------------------------------------------------------

struct StrongArgs {
    std::string model_path;
    std::vector<double> grid;
    double target = 0.0;
    std::string seed_mode;
    double seed_re = 0.0;
    double seed_im = 0.0;
    std::string out;
};

int cmd_strong(const StrongArgs& args) {
    const HamiltonianModel model = load_model_config(args.model_path);
    std::vector<double> points = args.grid;
    points.push_back(args.target);
    const TimeGrid grid(model.window_min(), points);

    CMatrix u1 = CMatrix::identity(model.dim());
    if (args.seed_mode == "exact") {
        u1 = exact_propagator(model, grid.points.front(), grid.t0).u;
    } else {
        u1 *= Complex(args.seed_re, args.seed_im);
    }

    const SeriesResult series = strong_unroll(model, grid, u1);

    std::vector<std::string> cols{"j", "term_norm"};
    append_matrix_columns(cols, "u", model.dim());
    ResultTable table(cols);
    for (std::size_t j = 0; j < series.terms.size(); ++j) {
        std::vector<double> row{static_cast<double>(j + 1), series.term_norms[j]};
        append_matrix_values(row, series.partial_sums[j]);
        table.add_row(std::move(row));
    }
    write_csv(table, args.out);

    const CMatrix& est = series.partial_sums.back();
    std::cout << "strong unroll n=" << grid.n() << " target t=" << fmt6(grid.target())
              << ": u_est[0,0] = " << fmt_complex(est.at(0, 0)) << "\n";
    return 0;
}

// ---- mvt -----------------------------------------------------------------

struct MvtArgs {
    std::string model_path;
    double tk = 0.0;
    std::optional<double> candidate;
    std::string out;
};

int cmd_mvt(const MvtArgs& args, const CliOptions& opts) {
    const HamiltonianModel model = load_model_config(args.model_path);
    const auto u_ref = make_exact_reference(model, model.window_min(), 1e-12);

    if (args.candidate) {
        const DefectReport rep = defect_rel(model, args.tk, *args.candidate, u_ref);
        ResultTable table({"t_candidate", "defect_rel", "refined"});
        table.add_row({rep.t_candidate, rep.defect_rel, 0.0});
        write_csv(table, args.out);
        std::cout << "defect at t_candidate=" << fmt6(rep.t_candidate) << ": "
                  << fmt6(rep.defect_rel) << "\n";
        return 0;
    }

    std::vector<DefectReport> scan;
    const DefectReport best = solve_mvt_time(model, args.tk, u_ref, opts.policy(), &scan);

    std::vector<std::array<double, 3>> rows;
    for (const auto& r : scan) rows.push_back({r.t_candidate, r.defect_rel, 0.0});
    rows.push_back({best.t_candidate, best.defect_rel, 1.0});
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });

    ResultTable table({"t_candidate", "defect_rel", "refined"});
    for (const auto& r : rows) table.add_row({r[0], r[1], r[2]});
    write_csv(table, args.out);

    std::cout << "mvt time for t_k=" << fmt6(args.tk) << ": t* = " << fmt6(best.t_candidate)
              << ", defect_rel = " << fmt6(best.defect_rel) << "\n";
    return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::string model_path;
    std::string param;
    std::vector<double> values;
    std::string probe;
    std::string out;
    std::string svg;
};

// Canonical sweep grid: six descending interior times across the window.
TimeGrid default_sweep_grid(const HamiltonianModel& model) {
    const double t0 = model.window_min();
    const double span = model.window_max() - t0;
    std::vector<double> pts;
    for (int j = 1; j <= 6; ++j) pts.push_back(t0 + span * (7 - j) / 7.0);
    return TimeGrid(t0, pts);
}

int cmd_sweep(const SweepArgs& args, const CliOptions& opts) {
    const HamiltonianModel model = load_model_config(args.model_path);
    if (args.values.empty()) throw ValidationError("sweep requires at least one value");
    for (double v : args.values)
        if (!(v > 0.0)) throw ValidationError("sweep values must be > 0");

    std::vector<double> values = args.values;
    std::sort(values.begin(), values.end());

    if (args.probe == "term-scaling") {
        const TimeGrid grid = default_sweep_grid(model);
        const auto rows = term_scaling_probe(model, grid, values, opts.policy());

        ResultTable table({"factor", "j", "term_norm", "ratio"});
        for (const auto& r : rows)
            table.add_row({r.factor, static_cast<double>(r.j), r.term_norm, r.ratio});
        write_csv(table, args.out);

        if (!args.svg.empty()) {
            std::map<int, SvgSeries> per_j;
            for (const auto& r : rows) {
                auto& s = per_j[r.j];
                s.label = "j=" + std::to_string(r.j);
                s.points.emplace_back(r.factor, r.ratio);
            }
            std::vector<SvgSeries> series;
            for (auto& [j, s] : per_j) series.push_back(std::move(s));
            write_svg_plot(series, "coupling factor", "term ratio", true, true, args.svg);
        }
        std::cout << "term-scaling sweep over " << values.size() << " factors, " << rows.size()
                  << " rows -> " << args.out << "\n";
        return 0;
    }

    // order-error: Dyson truncation error against the exact propagator at the
    // window end, orders 1..3, one model rebuild per coupling value.
    const double t0 = model.window_min();
    const double t = model.window_max();
    auto run_value = [&](std::size_t i) {
        const double g = values[i];
        const HamiltonianModel m = model.with_coupling(g);
        SeriesResult series = dyson_expansion(m, t, t0, 4);
        series.attach_reference(exact_propagator(m, t, t0, 1e-12).u);
        std::vector<std::array<double, 3>> rows;
        for (int order = 1; order <= 3; ++order)
            rows.push_back({g, static_cast<double>(order), series.errors[order]});
        return rows;
    };
    const auto grouped = map_indexed(values.size(), run_value, opts.policy());

    ResultTable table({"g", "order", "error"});
    std::map<int, SvgSeries> per_order;
    for (const auto& rows : grouped)
        for (const auto& r : rows) {
            table.add_row({r[0], r[1], r[2]});
            auto& s = per_order[static_cast<int>(r[1])];
            s.label = "order " + std::to_string(static_cast<int>(r[1]));
            s.points.emplace_back(r[0], r[2]);
        }
    write_csv(table, args.out);
    if (!args.svg.empty()) {
        std::vector<SvgSeries> series;
        for (auto& [o, s] : per_order) series.push_back(std::move(s));
        write_svg_plot(series, "g", "||S_m - u||_F", true, true, args.svg);
    }

    std::string slopes;
    if (values.size() >= 2) {
        for (int order = 1; order <= 3; ++order) {
            const auto& pts = per_order[order].points;
            const double slope = std::log2(pts.back().second / pts.front().second) /
                                 std::log2(pts.back().first / pts.front().first);
            slopes += " m" + std::to_string(order) + "=" + fmt6(slope);
        }
    }
    std::cout << "order-error sweep over " << values.size() << " couplings, slopes:" << slopes
              << " -> " << args.out << "\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"scx: weak- and strong-coupling expansions of the time-evolution operator"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_flag("--serial", opts.serial, "run scans and sweeps on the serial reference path");

    // demo
    auto* demo = app.add_subcommand("demo", "recursion and geometric-series demonstrations");
    demo->require_subcommand(1);

    GeometricArgs geo;
    auto* geo_cmd = demo->add_subcommand("geometric", "two geometric iterations for x = 1 - ax");
    geo_cmd->add_option("--a", geo.a, "series coefficient a (|a| != 1)")->required();
    geo_cmd->add_option("--mode", geo.mode)->check(CLI::IsMember({"weak", "strong"}))->required();
    geo_cmd->add_option("--terms", geo.terms, "number of partial sums")->required();
    geo_cmd->add_option("--out", geo.out, "optional CSV path");

    RecursionArgs rec;
    auto* rec_cmd = demo->add_subcommand("recursion", "forward/backward recursion for I_n");
    rec_cmd->add_option("--direction", rec.direction)
        ->check(CLI::IsMember({"forward", "backward"}))
        ->required();
    rec_cmd->add_option("--start", rec.start, "seed index")->required();
    rec_cmd->add_option("--seed", rec.seed, "seed value (default: oracle for forward, 0 for backward)");
    rec_cmd->add_option("--stop", rec.stop, "final index")->required();
    rec_cmd->add_option("--out", rec.out, "CSV path")->required();

    // propagate
    PropagateArgs prop;
    auto* prop_cmd = app.add_subcommand("propagate", "exact propagator or Dyson expansion");
    prop_cmd->add_option("--model", prop.model_path, "model config JSON")->required();
    prop_cmd->add_option("--method", prop.method)
        ->check(CLI::IsMember({"exact", "dyson"}))
        ->required();
    prop_cmd->add_option("--order", prop.order, "Dyson truncation order (default 4)");
    prop_cmd->add_option("--t", prop.t, "evolution end time")->required();
    prop_cmd->add_option("--t0", prop.t0, "start time (default: window minimum)");
    prop_cmd->add_option("--out", prop.out, "CSV path")->required();

    // strong
    StrongArgs strong;
    auto* strong_cmd = app.add_subcommand("strong", "strong-coupling backward recursion");
    strong_cmd->add_option("--model", strong.model_path)->required();
    strong_cmd->add_option("--grid", strong.grid, "descending intermediate times t1,t2,...")
        ->delimiter(',')
        ->required();
    strong_cmd->add_option("--target", strong.target, "target time t_n")->required();
    strong_cmd->add_option("--seed-mode", strong.seed_mode)
        ->check(CLI::IsMember({"exact", "value"}))
        ->required();
    strong_cmd->add_option("--seed-re", strong.seed_re, "seed real part (value mode)");
    strong_cmd->add_option("--seed-im", strong.seed_im, "seed imaginary part (value mode)");
    strong_cmd->add_option("--out", strong.out)->required();

    // mvt
    MvtArgs mvt;
    auto* mvt_cmd = app.add_subcommand("mvt", "mean-value defect study");
    mvt_cmd->add_option("--model", mvt.model_path)->required();
    mvt_cmd->add_option("--tk", mvt.tk, "upper integration time t_k")->required();
    mvt_cmd->add_option("--candidate", mvt.candidate,
                        "fixed candidate time (omit to minimize the defect)");
    mvt_cmd->add_option("--out", mvt.out)->required();

    // sweep
    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "coupling sweeps");
    sweep_cmd->add_option("--model", sweep.model_path)->required();
    sweep_cmd->add_option("--param", sweep.param)->check(CLI::IsMember({"g"}))->required();
    sweep_cmd->add_option("--values", sweep.values)->delimiter(',')->required();
    sweep_cmd->add_option("--probe", sweep.probe)
        ->check(CLI::IsMember({"term-scaling", "order-error"}))
        ->required();
    sweep_cmd->add_option("--out", sweep.out)->required();
    sweep_cmd->add_option("--svg", sweep.svg, "optional SVG plot path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            return 0;
        }
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (geo_cmd->parsed()) return cmd_demo_geometric(geo);
        if (rec_cmd->parsed()) return cmd_demo_recursion(rec);
        if (prop_cmd->parsed()) return cmd_propagate(prop);
        if (strong_cmd->parsed()) return cmd_strong(strong);
        if (mvt_cmd->parsed()) return cmd_mvt(mvt, opts);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep, opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "usage error: no subcommand\n";
    return 1;
}

}  // namespace scx
