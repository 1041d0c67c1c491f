// toruslab — command-line front end.  Every subcommand materializes one
// reproducible run: an output directory holding config.json (the only file
// carrying a timestamp), CSV data, and summary.json; the summary is also
// printed to stdout.  All randomness derives from --seed through the
// documented (seed, stream) scheme of the library, so identical invocations
// produce byte-identical data files.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "toruslab/estimates.hpp"
#include "toruslab/growth.hpp"
#include "toruslab/io.hpp"
#include "toruslab/nls.hpp"
#include "toruslab/parallel.hpp"
#include "toruslab/quadform.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/spectral.hpp"
#include "toruslab/xsb.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace toruslab;
using spectral::Field;
using spectral::FourierGrid;
using spectral::TorusGeometry;

namespace {

fs::path g_out_dir; // set once a run directory exists, for error reports

// ---------------------------------------------------------------- plumbing

struct CommonOpts {
    std::string out;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    c.out = "runs/" + cmd->get_name();
    cmd->add_option("--out", c.out, "output directory (overwritten)")
        ->capture_default_str();
    cmd->add_option("--threads", c.threads,
                    "worker cap; 0 = TORUSLAB_THREADS or hardware");
}

void begin_run(const CommonOpts& c, ojson& config) {
    if (c.threads > 0) set_thread_cap(c.threads);
    fs::create_directories(c.out);
    g_out_dir = c.out;
    config["timestamp"] = io::timestamp_utc();
    io::write_text(fs::path(c.out) / "config.json", config.dump(2) + "\n");
}

void finish_run(const CommonOpts& c, const ojson& summary) {
    io::write_text(fs::path(c.out) / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
}

void write_table(const CommonOpts& c, const std::string& name,
                 const io::CsvTable& table) {
    io::write_text(fs::path(c.out) / name, io::to_csv(table));
}

// ------------------------------------------------------------ shared opts

struct FormOpts {
    double a = 1.0, b = 0.0, c = 1.0;
};

void add_form(CLI::App* cmd, FormOpts& f) {
    cmd->add_option("--a", f.a, "coefficient of m^2")->capture_default_str();
    cmd->add_option("--b", f.b, "coefficient of mn")->capture_default_str();
    cmd->add_option("--c", f.c, "coefficient of n^2")->capture_default_str();
}

// exact dyadic conversion keeps CLI-expressible coefficients in exact mode
quadform::QuadForm make_form(const FormOpts& f) {
    return {quadform::Rational::from_double(f.a),
            quadform::Rational::from_double(f.b),
            quadform::Rational::from_double(f.c)};
}

struct GeomOpts {
    double theta1 = 1.0;
    double theta2 = 1.4142135623730951;
};

void add_geom(CLI::App* cmd, GeomOpts& g) {
    cmd->add_option("--theta1", g.theta1, "first torus scale")
        ->capture_default_str();
    cmd->add_option("--theta2", g.theta2, "second torus scale")
        ->capture_default_str();
}

TorusGeometry make_geom(const GeomOpts& g) { return {g.theta1, g.theta2}; }

struct DataOpts {
    int M = 32;
    double amp = 0.25;
    double kappa = 1.0;
    std::uint64_t seed = 1;
    bool zero = false;
};

void add_data(CLI::App* cmd, DataOpts& d, int default_M) {
    d.M = default_M;
    cmd->add_option("--M", d.M, "modes per axis (even)")->capture_default_str();
    cmd->add_option("--amp", d.amp, "spectral amplitude")->capture_default_str();
    cmd->add_option("--kappa", d.kappa, "Gaussian spectral decay rate")
        ->capture_default_str();
    cmd->add_option("--seed", d.seed, "master seed")->capture_default_str();
    cmd->add_flag("--zero", d.zero, "use identically zero initial data");
}

// Gaussian spectrum with unimodular phases from stream (seed, 0); the same
// recipe the test suite uses for smooth deterministic data
Field make_data(const FourierGrid& grid, const DataOpts& d) {
    Field u(grid);
    if (d.zero) return u;
    Rng rng(d.seed, 0);
    for (int k1 = 0; k1 < grid.M; ++k1)
        for (int k2 = 0; k2 < grid.M; ++k2) {
            double m1 = grid.mode_of(k1), m2 = grid.mode_of(k2);
            u.coeffs(k1, k2) = d.amp *
                               std::exp(-d.kappa * (m1 * m1 + m2 * m2)) *
                               rng.phase();
        }
    return u;
}

ojson record_json(const estimates::RatioRecord& r) {
    return {{"N1", r.N1},
            {"N2", r.N2},
            {"max_ratio", r.max_ratio},
            {"argmax_seed", r.argmax_seed},
            {"refinement_delta", r.refinement_delta},
            {"flagged", r.flagged}};
}

// ------------------------------------------------------------ subcommands

struct CountOpts {
    CommonOpts common;
    FormOpts form;
    double x = 100.0;
    double x_min = 10.0;
    int points = 1;
};

void run_count(const CountOpts& o) {
    ojson config{{"command", "count"},
                 {"a", o.form.a},
                 {"b", o.form.b},
                 {"c", o.form.c},
                 {"x", o.x},
                 {"x_min", o.x_min},
                 {"points", o.points}};
    begin_run(o.common, config);

    if (o.points < 1) throw ConfigError("count: points must be >= 1");
    quadform::QuadForm q = make_form(o.form);

    io::CsvTable table{{"x", "count", "main_term", "remainder"}, {}};
    quadform::CountResult last{};
    for (int i = 0; i < o.points; ++i) {
        double x = o.points == 1
                       ? o.x
                       : o.x_min * std::pow(o.x / o.x_min,
                                            double(i) / double(o.points - 1));
        last = quadform::count_report(q, x);
        table.rows.push_back({last.x, double(last.count), last.main_term,
                              last.remainder});
    }
    write_table(o.common, "scan.csv", table);

    finish_run(o.common, ojson{{"command", "count"},
                               {"count", last.count},
                               {"main_term", last.main_term},
                               {"remainder", last.remainder},
                               {"boundary_warning", last.boundary_warning}});
}

struct RemainderFitOpts {
    CommonOpts common;
    FormOpts form;
    double x_min = 1e3, x_max = 1e7;
    int blocks_per_decade = 4;
    int samples_per_block = 8;
    std::uint64_t seed = 1;
};

void run_remainder_fit(const RemainderFitOpts& o) {
    ojson config{{"command", "remainder-fit"},
                 {"a", o.form.a},
                 {"b", o.form.b},
                 {"c", o.form.c},
                 {"x_min", o.x_min},
                 {"x_max", o.x_max},
                 {"blocks_per_decade", o.blocks_per_decade},
                 {"samples_per_block", o.samples_per_block},
                 {"seed", o.seed}};
    begin_run(o.common, config);

    quadform::QuadForm q = make_form(o.form);
    quadform::FitReport fit = quadform::fit_remainder_exponent(
        q, o.x_min, o.x_max, o.blocks_per_decade, o.samples_per_block, o.seed);

    io::CsvTable table{{"x", "count", "main_term", "remainder"}, {}};
    for (const auto& p : fit.points) {
        quadform::CountResult r = quadform::count_report(q, p.x);
        table.rows.push_back(
            {r.x, double(r.count), r.main_term, r.remainder});
    }
    write_table(o.common, "scan.csv", table);

    ojson points = ojson::array();
    for (const auto& p : fit.points)
        points.push_back({{"x", p.x}, {"value", p.value}});
    finish_run(o.common, ojson{{"command", "remainder-fit"},
                               {"slope", fit.slope},
                               {"intercept", fit.intercept},
                               {"residual", fit.residual},
                               {"points", points},
                               {"huxley_exponent", huxley_s0}});
}

struct AnnulusOpts {
    CommonOpts common;
    FormOpts form;
    long long l_max = 100000;
};

void run_annulus(const AnnulusOpts& o) {
    ojson config{{"command", "annulus-scan"},
                 {"a", o.form.a},
                 {"b", o.form.b},
                 {"c", o.form.c},
                 {"l_max", o.l_max}};
    begin_run(o.common, config);

    quadform::QuadForm q = make_form(o.form);
    std::vector<long long> counts = quadform::annulus_scan(q, o.l_max);

    io::CsvTable table{{"l", "count"}, {}};
    long long max_count = 0, argmax_l = 0;
    for (long long l = 0; l < (long long)counts.size(); ++l) {
        table.rows.push_back({double(l), double(counts[l])});
        if (counts[l] > max_count) {
            max_count = counts[l];
            argmax_l = l;
        }
    }
    write_table(o.common, "annulus.csv", table);

    quadform::FitReport fit = quadform::fit_dyadic_block_exponent(counts);
    finish_run(o.common, ojson{{"command", "annulus-scan"},
                               {"max_count", max_count},
                               {"argmax_l", argmax_l},
                               {"slope", fit.slope},
                               {"intercept", fit.intercept},
                               {"residual", fit.residual},
                               {"huxley_exponent", huxley_s0}});
}

struct EvolveOpts {
    CommonOpts common;
    GeomOpts geom;
    DataOpts data;
    double alpha = 1.0;
    double dt = 0.01;
    double T = 1.0;
    int sample_every = 1;
    std::vector<double> sobolev_s{1.0};
};

void run_evolve(const EvolveOpts& o) {
    ojson config{{"command", "evolve"},  {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2}, {"M", o.data.M},
                 {"amp", o.data.amp},     {"kappa", o.data.kappa},
                 {"seed", o.data.seed},   {"zero", o.data.zero},
                 {"alpha", o.alpha},      {"dt", o.dt},
                 {"T", o.T},              {"sample_every", o.sample_every},
                 {"sobolev_s", o.sobolev_s}};
    begin_run(o.common, config);

    FourierGrid grid(make_geom(o.geom), o.data.M);
    Field u0 = make_data(grid, o.data);

    nls::NLSParams params;
    params.alpha = o.alpha;
    params.dt = o.dt;
    nls::ObservableSpec spec;
    spec.sobolev_s = o.sobolev_s;
    spec.sample_every = o.sample_every;
    nls::Trajectory traj = nls::evolve(u0, o.T, params, spec);

    io::CsvTable table;
    table.columns = {"t", "mass", "energy"};
    for (double s : o.sobolev_s)
        table.columns.push_back("hs_norm_" + io::format_double(s));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<double> row{traj.times[i], traj.mass_series[i],
                                traj.energy_series[i]};
        for (const auto& series : traj.hs_series) row.push_back(series[i]);
        table.rows.push_back(row);
    }
    write_table(o.common, "observables.csv", table);
    io::write_text(fs::path(o.common.out) / "final_field.snapshot",
                   io::field_snapshot(traj.final_field));

    auto drift = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double scale = std::abs(v.front()) > 0 ? std::abs(v.front()) : 1.0;
        double worst = 0;
        for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
        return worst / scale;
    };
    finish_run(o.common,
               ojson{{"command", "evolve"},
                     {"halted", traj.halted},
                     {"halt_reason", traj.halt_reason},
                     {"samples", traj.times.size()},
                     {"mass_drift", drift(traj.mass_series)},
                     {"energy_drift", drift(traj.energy_series)},
                     {"final_mass", traj.mass_series.back()},
                     {"final_energy", traj.energy_series.back()}});
}

struct PicardOpts {
    CommonOpts common;
    GeomOpts geom;
    DataOpts data;
    double alpha = 1.0;
    double T = 0.01;
    int iters = 8;
    int nodes = 32;
    double ball_s = 1.0;
};

void run_picard(const PicardOpts& o) {
    ojson config{{"command", "picard"},   {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2}, {"M", o.data.M},
                 {"amp", o.data.amp},     {"kappa", o.data.kappa},
                 {"seed", o.data.seed},   {"zero", o.data.zero},
                 {"alpha", o.alpha},      {"T", o.T},
                 {"iters", o.iters},      {"nodes", o.nodes},
                 {"ball_s", o.ball_s}};
    begin_run(o.common, config);

    FourierGrid grid(make_geom(o.geom), o.data.M);
    Field u0 = make_data(grid, o.data);
    nls::PicardResult res =
        nls::picard_iterate(u0, o.T, o.alpha, o.iters, o.nodes, o.ball_s);

    io::CsvTable table{{"iter", "sup_l2_diff", "in_ball"}, {}};
    for (std::size_t i = 0; i < res.sup_l2_diffs.size(); ++i)
        table.rows.push_back(
            {double(i + 1), res.sup_l2_diffs[i],
             i < res.in_ball.size() ? double(res.in_ball[i]) : 0.0});
    write_table(o.common, "iterations.csv", table);

    // distance between the Duhamel fixed point and the splitting integrator
    nls::NLSParams params;
    params.alpha = o.alpha;
    params.dt = o.T / 100.0;
    nls::Trajectory traj = nls::evolve(u0, o.T, params);
    Field diff = res.final_iterate.back();
    diff.coeffs -= traj.final_field.coeffs;

    finish_run(o.common,
               ojson{{"command", "picard"},
                     {"diverged", res.diverged},
                     {"ball_radius", res.ball_radius},
                     {"final_diff", res.sup_l2_diffs.empty()
                                        ? 0.0
                                        : res.sup_l2_diffs.back()},
                     {"fixed_point_vs_evolve_l2", spectral::l2_norm(diff)}});
}

struct StrichartzOpts {
    CommonOpts common;
    GeomOpts geom;
    estimates::SweepConfig cfg;
};

void add_sweep_cfg(CLI::App* cmd, estimates::SweepConfig& cfg) {
    cmd->add_option("--N-list", cfg.N_list, "dyadic frequency list")
        ->capture_default_str();
    cmd->add_option("--ensemble", cfg.ensemble_size, "trials per frequency")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    cmd->add_option("--time-samples", cfg.n_time_samples,
                    "midpoint samples of [0,1]")
        ->capture_default_str();
}

void run_strichartz(const StrichartzOpts& o) {
    ojson config{{"command", "strichartz"},
                 {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2},
                 {"N_list", o.cfg.N_list},
                 {"ensemble", o.cfg.ensemble_size},
                 {"seed", o.cfg.seed},
                 {"time_samples", o.cfg.n_time_samples}};
    begin_run(o.common, config);

    estimates::StrichartzSweepResult res =
        estimates::strichartz_sweep(o.cfg, make_geom(o.geom));

    io::CsvTable table{{"N", "max_ratio", "argmax_seed", "refinement_delta"},
                       {}};
    for (const auto& r : res.records)
        table.rows.push_back({double(r.N1), r.max_ratio,
                              double(r.argmax_seed), r.refinement_delta});
    write_table(o.common, "sweep.csv", table);

    ojson records = ojson::array();
    for (const auto& r : res.records) records.push_back(record_json(r));
    finish_run(o.common, ojson{{"command", "strichartz"},
                               {"fitted_exponent", res.fitted_exponent},
                               {"intercept", res.intercept},
                               {"paper_bound", res.paper_exponent},
                               {"sobolev_ratios", res.sobolev_ratios},
                               {"records", records}});
}

struct BilinearOpts {
    CommonOpts common;
    GeomOpts geom;
    int N1 = 4;
    estimates::SweepConfig cfg;
};

void run_bilinear(const BilinearOpts& o) {
    ojson config{{"command", "bilinear"},
                 {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2},
                 {"N1", o.N1},
                 {"N2_list", o.cfg.N_list},
                 {"ensemble", o.cfg.ensemble_size},
                 {"seed", o.cfg.seed},
                 {"time_samples", o.cfg.n_time_samples}};
    begin_run(o.common, config);

    estimates::BilinearSweepResult res =
        estimates::bilinear_sweep(o.N1, o.cfg, make_geom(o.geom));

    io::CsvTable table{
        {"N1", "N2", "max_ratio", "argmax_seed", "refinement_delta"}, {}};
    for (const auto& r : res.records)
        table.rows.push_back({double(r.N1), double(r.N2), r.max_ratio,
                              double(r.argmax_seed), r.refinement_delta});
    write_table(o.common, "sweep.csv", table);

    ojson records = ojson::array();
    for (const auto& r : res.records) records.push_back(record_json(r));
    finish_run(o.common, ojson{{"command", "bilinear"},
                               {"spread", res.spread},
                               {"paper_exponent", huxley_s0},
                               {"records", records}});
}

struct ExpSumOpts {
    CommonOpts common;
    int instances = 1000;
    std::uint64_t seed = 1;
    int max_terms = 8;
    double freq_scale = 40.0;
};

void run_expsum(const ExpSumOpts& o) {
    ojson config{{"command", "expsum"},
                 {"instances", o.instances},
                 {"seed", o.seed},
                 {"max_terms", o.max_terms},
                 {"freq_scale", o.freq_scale}};
    begin_run(o.common, config);
    if (o.instances < 1) throw ConfigError("expsum: instances must be >= 1");
    if (o.max_terms < 1) throw ConfigError("expsum: max_terms must be >= 1");

    io::CsvTable table{{"instance", "n_terms", "lhs", "rhs", "ratio"}, {}};
    double max_ratio = 0, sum_ratio = 0;
    for (int i = 0; i < o.instances; ++i) {
        Rng rng(o.seed, std::uint64_t(i));
        int n = 1 + int(rng.below(std::uint64_t(o.max_terms)));
        std::vector<double> a(n);
        std::vector<Complex> b(n);
        for (int j = 0; j < n; ++j) {
            a[j] = rng.uniform(0.0, o.freq_scale);
            b[j] = Complex(rng.normal(), rng.normal());
        }
        estimates::ExpSumResult r = estimates::exp_sum_check(a, b);
        table.rows.push_back(
            {double(i), double(n), r.lhs, r.rhs, r.ratio});
        max_ratio = std::max(max_ratio, r.ratio);
        sum_ratio += r.ratio;
    }
    write_table(o.common, "instances.csv", table);

    finish_run(o.common,
               ojson{{"command", "expsum"},
                     {"instances", o.instances},
                     {"max_ratio", max_ratio},
                     {"mean_ratio", sum_ratio / double(o.instances)}});
}

struct VanishOpts {
    CommonOpts common;
    GeomOpts geom;
    int count = 100;
    int M = 8;
    std::uint64_t seed = 1;
};

void run_vanish(const VanishOpts& o) {
    ojson config{{"command", "vanish"},
                 {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2},
                 {"count", o.count},
                 {"M", o.M},
                 {"seed", o.seed}};
    begin_run(o.common, config);
    if (o.count < 1) throw ConfigError("vanish: count must be >= 1");

    FourierGrid grid(make_geom(o.geom), o.M);
    io::CsvTable table{
        {"instance", "predicted_zero", "abs_integral", "norm_product"}, {}};
    double worst_zero = 0;
    long long zero_cases = 0;
    for (int i = 0; i < o.count; ++i) {
        Rng rng(o.seed, std::uint64_t(i));
        Field f[4] = {Field(grid), Field(grid), Field(grid), Field(grid)};
        for (auto& u : f) {
            int n = 1 + int(rng.below(3));
            for (int j = 0; j < n; ++j) {
                int k1 = int(rng.below(std::uint64_t(o.M)));
                int k2 = int(rng.below(std::uint64_t(o.M)));
                u.coeffs(k1, k2) = Complex(rng.normal(), rng.normal());
            }
        }
        estimates::VanishResult r =
            estimates::quadrilinear_vanish_check(f[0], f[1], f[2], f[3]);
        table.rows.push_back({double(i), double(r.predicted_zero),
                              std::abs(r.integral), r.norm_product});
        if (r.predicted_zero) {
            ++zero_cases;
            if (r.norm_product > 0)
                worst_zero =
                    std::max(worst_zero, std::abs(r.integral) / r.norm_product);
        }
    }
    write_table(o.common, "instances.csv", table);

    finish_run(o.common, ojson{{"command", "vanish"},
                               {"instances", o.count},
                               {"predicted_zero_cases", zero_cases},
                               {"max_zero_case_ratio", worst_zero}});
}

struct XsbNormOpts {
    CommonOpts common;
    GeomOpts geom;
    DataOpts data;
    double alpha = 1.0;
    int n_t = 64;
    double s = 0.0;
    double b = 0.55;
    bool free_only = false;
    std::string pad = "free-flow";
};

void run_xsb_norm(const XsbNormOpts& o) {
    ojson config{{"command", "xsb-norm"},  {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2}, {"M", o.data.M},
                 {"amp", o.data.amp},      {"kappa", o.data.kappa},
                 {"seed", o.data.seed},    {"zero", o.data.zero},
                 {"alpha", o.alpha},       {"n_t", o.n_t},
                 {"s", o.s},               {"b", o.b},
                 {"free", o.free_only},    {"pad", o.pad}};
    begin_run(o.common, config);

    xsb::PadPolicy pad;
    if (o.pad == "free-flow")
        pad = xsb::PadPolicy::free_flow;
    else if (o.pad == "hold")
        pad = xsb::PadPolicy::hold;
    else
        throw ConfigError("xsb-norm: pad must be free-flow or hold");
    if (o.n_t < 64) throw ConfigError("xsb-norm: n_t must be >= 64");

    FourierGrid grid(make_geom(o.geom), o.data.M);
    Field u0 = make_data(grid, o.data);

    std::vector<Field> snaps;
    snaps.reserve(std::size_t(o.n_t) + 1);
    if (o.free_only) {
        for (int j = 0; j <= o.n_t; ++j)
            snaps.push_back(spectral::free_flow(u0, double(j) / o.n_t));
    } else {
        nls::NLSParams params;
        params.alpha = o.alpha;
        params.dt = 1.0 / o.n_t;
        nls::ObservableSpec spec;
        spec.sample_every = 1;
        spec.store_snapshots = true;
        nls::Trajectory traj = nls::evolve(u0, 1.0, params, spec);
        snaps = std::move(traj.snapshots);
    }

    xsb::SpaceTimeField U = xsb::lift(snaps, pad);
    double norm = xsb::xsb_norm(U, o.s, o.b);
    std::vector<xsb::DyadicPiece> pieces = xsb::dyadic_decompose(U);

    io::CsvTable table{{"freq_shell", "mod_shell", "piece_norm"}, {}};
    double piece_sq = 0;
    for (const auto& p : pieces) {
        double pn = xsb::xsb_norm(p.part, o.s, o.b);
        piece_sq += pn * pn;
        table.rows.push_back({double(p.freq_shell), double(p.mod_shell), pn});
    }
    write_table(o.common, "pieces.csv", table);

    finish_run(o.common,
               ojson{{"command", "xsb-norm"},
                     {"xsb_norm", norm},
                     {"n_pieces", pieces.size()},
                     {"piece_norm_sq_sum", piece_sq},
                     {"free_flow_reference",
                      two_pi * std::sqrt(xsb::window_l2_sq) *
                          spectral::l2_norm(u0)}});
}

struct ProductCheckOpts {
    CommonOpts common;
    GeomOpts geom;
    xsb::ProductCheckConfig cfg;
    std::vector<int> N1_list{2, 4, 8};
    int n2_factor = 4;
    double s = 0.0;
    double b = 0.55;
    std::vector<double> b_prime_list{0.30, 0.40, 0.45};
};

void run_product_check(const ProductCheckOpts& o) {
    ojson config{{"command", "product-check"},
                 {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2},
                 {"N1_list", o.N1_list},
                 {"n2_factor", o.n2_factor},
                 {"ensemble", o.cfg.ensemble_size},
                 {"seed", o.cfg.seed},
                 {"n_t", o.cfg.n_t},
                 {"dressings", o.cfg.dressing_count},
                 {"s", o.s},
                 {"b", o.b},
                 {"b_prime_list", o.b_prime_list}};
    begin_run(o.common, config);
    if (o.b_prime_list.empty())
        throw ConfigError("product-check: need at least one b_prime");

    TorusGeometry geom = make_geom(o.geom);
    ojson sweeps = ojson::array();
    for (double bp : o.b_prime_list) {
        xsb::XsbParams params;
        params.s = o.s;
        params.b = o.b;
        params.b_prime = bp;
        xsb::ProductSweepResult res = xsb::localized_product_sweep(
            params, o.cfg, o.N1_list, o.n2_factor, geom);

        io::CsvTable table{
            {"N1", "N2", "max_ratio", "n1_exponent", "n2_spread"}, {}};
        for (const auto& r : res.diagonal)
            table.rows.push_back({double(r.N1), double(r.N2), r.max_ratio,
                                  res.n1_exponent, res.n2_spread});
        for (const auto& r : res.n2_scan)
            table.rows.push_back({double(r.N1), double(r.N2), r.max_ratio,
                                  res.n1_exponent, res.n2_spread});
        write_table(o.common, "product_b" + io::format_double(bp) + ".csv",
                    table);

        sweeps.push_back({{"b_prime", bp},
                          {"n1_exponent", res.n1_exponent},
                          {"intercept", res.intercept},
                          {"n2_spread", res.n2_spread},
                          {"exponent_bound", huxley_s0 + 0.15}});
    }
    finish_run(o.common, ojson{{"command", "product-check"},
                               {"paper_exponent", huxley_s0},
                               {"sweeps", sweeps}});
}

struct GrowthOpts {
    CommonOpts common;
    GeomOpts geom;
    DataOpts data;
    double dt = 0.02;
    double T = 200.0;
    double s = 2.0;
    int sample_every = 50;
    double r = 285.0 / 416.0;
    int window = 10;
};

void run_growth(const GrowthOpts& o) {
    ojson config{{"command", "growth"},   {"theta1", o.geom.theta1},
                 {"theta2", o.geom.theta2}, {"M", o.data.M},
                 {"amp", o.data.amp},     {"kappa", o.data.kappa},
                 {"seed", o.data.seed},   {"zero", o.data.zero},
                 {"dt", o.dt},            {"T", o.T},
                 {"s", o.s},              {"sample_every", o.sample_every},
                 {"r", o.r},              {"window", o.window}};
    begin_run(o.common, config);

    FourierGrid grid(make_geom(o.geom), o.data.M);
    Field u0 = make_data(grid, o.data);
    nls::NLSParams params;
    params.dt = o.dt;
    growth::GrowthSeries series =
        growth::track_growth(u0, o.s, o.T, params, o.sample_every);

    io::CsvTable table{{"t", "hs"}, {}};
    for (std::size_t i = 0; i < series.times.size(); ++i)
        table.rows.push_back({series.times[i], series.hs_values[i]});
    write_table(o.common, "series.csv", table);

    growth::GrowthFit fit = growth::fit_growth_exponent(series);
    growth::IncrementReport inc =
        growth::increment_check(series, o.window, o.r);
    finish_run(o.common, ojson{{"command", "growth"},
                               {"exponent", fit.exponent},
                               {"bound", fit.bound},
                               {"violated", fit.violated},
                               {"C_min", inc.c_min_squared},
                               {"r", o.r},
                               {"C_min_unsquared", inc.c_min_unsquared},
                               {"argmax_window", inc.argmax_window},
                               {"mass_drift", series.max_mass_drift},
                               {"energy_drift", series.max_energy_drift}});
}

struct RecurrenceOpts {
    CommonOpts common;
    growth::RecurrenceParams params;
    long long K = 100000;
};

void run_recurrence(const RecurrenceOpts& o) {
    ojson config{{"command", "recurrence"}, {"r", o.params.r},
                 {"C", o.params.C},         {"delta", o.params.delta},
                 {"y0", o.params.y0},       {"K", o.K}};
    begin_run(o.common, config);

    growth::RecurrenceVerdict v = growth::recurrence_bound_check(o.params, o.K);
    std::vector<double> ys = growth::recurrence_iterates(o.params, o.K);

    const long long stride = std::max<long long>(1, o.K / 1000);
    io::CsvTable table{{"k", "x", "ratio"}, {}};
    for (long long k = 0; k < (long long)ys.size(); k += stride) {
        double x = std::sqrt(ys[std::size_t(k)]);
        double denom =
            std::pow(1.0 + double(k) * o.params.delta, 1.0 / o.params.r);
        table.rows.push_back({double(k), x, x / denom});
    }
    write_table(o.common, "series.csv", table);

    finish_run(o.common, ojson{{"command", "recurrence"},
                               {"c_prime", v.c_prime},
                               {"max_ratio_index", v.max_ratio_index},
                               {"holds", v.holds},
                               {"overflow", v.overflow},
                               {"overflow_k", v.overflow_k}});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"toruslab: NLS dispersive estimates laboratory on "
                 "anisotropic tori"};
    app.require_subcommand(1);

    auto count = std::make_shared<CountOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "count", "lattice count N(x) for a quadratic form");
        add_form(cmd, count->form);
        cmd->add_option("--x", count->x, "threshold")->capture_default_str();
        cmd->add_option("--x-min", count->x_min,
                        "scan start when points > 1")
            ->capture_default_str();
        cmd->add_option("--points", count->points,
                        "geometric scan points up to x")
            ->capture_default_str();
        add_common(cmd, count->common);
        cmd->callback([count] { run_count(*count); });
    }

    auto rem = std::make_shared<RemainderFitOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "remainder-fit", "power-law fit of the counting remainder");
        add_form(cmd, rem->form);
        cmd->add_option("--x-min", rem->x_min)->capture_default_str();
        cmd->add_option("--x-max", rem->x_max)->capture_default_str();
        cmd->add_option("--blocks-per-decade", rem->blocks_per_decade)
            ->capture_default_str();
        cmd->add_option("--samples-per-block", rem->samples_per_block)
            ->capture_default_str();
        cmd->add_option("--seed", rem->seed)->capture_default_str();
        add_common(cmd, rem->common);
        cmd->callback([rem] { run_remainder_fit(*rem); });
    }

    auto ann = std::make_shared<AnnulusOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "annulus-scan", "unit-width annulus counts up to l_max");
        add_form(cmd, ann->form);
        cmd->add_option("--l-max", ann->l_max)->capture_default_str();
        add_common(cmd, ann->common);
        cmd->callback([ann] { run_annulus(*ann); });
    }

    auto evo = std::make_shared<EvolveOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "evolve", "Strang-split cubic NLS run with observables");
        add_geom(cmd, evo->geom);
        add_data(cmd, evo->data, 32);
        cmd->add_option("--alpha", evo->alpha, "+1 defocusing, -1 focusing")
            ->capture_default_str();
        cmd->add_option("--dt", evo->dt)->capture_default_str();
        cmd->add_option("--T", evo->T)->capture_default_str();
        cmd->add_option("--sample-every", evo->sample_every)
            ->capture_default_str();
        cmd->add_option("--s", evo->sobolev_s, "Sobolev indices to record")
            ->capture_default_str();
        add_common(cmd, evo->common);
        cmd->callback([evo] { run_evolve(*evo); });
    }

    auto pic = std::make_shared<PicardOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "picard", "Duhamel fixed-point iteration at small time");
        add_geom(cmd, pic->geom);
        add_data(cmd, pic->data, 16);
        cmd->add_option("--alpha", pic->alpha)->capture_default_str();
        cmd->add_option("--T", pic->T)->capture_default_str();
        cmd->add_option("--iters", pic->iters)->capture_default_str();
        cmd->add_option("--nodes", pic->nodes, "quadrature nodes")
            ->capture_default_str();
        cmd->add_option("--ball-s", pic->ball_s)->capture_default_str();
        add_common(cmd, pic->common);
        cmd->callback([pic] { run_picard(*pic); });
    }

    auto str = std::make_shared<StrichartzOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "strichartz", "L4 space-time ratio sweep over frequency balls");
        add_geom(cmd, str->geom);
        add_sweep_cfg(cmd, str->cfg);
        add_common(cmd, str->common);
        cmd->callback([str] { run_strichartz(*str); });
    }

    auto bil = std::make_shared<BilinearOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "bilinear", "bilinear product ratios: low frequency fixed");
        add_geom(cmd, bil->geom);
        bil->cfg.N_list = {8, 16, 32, 64};
        cmd->add_option("--N1", bil->N1, "low-ball radius")
            ->capture_default_str();
        add_sweep_cfg(cmd, bil->cfg);
        add_common(cmd, bil->common);
        cmd->callback([bil] { run_bilinear(*bil); });
    }

    auto exps = std::make_shared<ExpSumOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "expsum", "closed-form exponential-sum inequality instances");
        cmd->add_option("--instances", exps->instances)->capture_default_str();
        cmd->add_option("--seed", exps->seed)->capture_default_str();
        cmd->add_option("--max-terms", exps->max_terms)->capture_default_str();
        cmd->add_option("--freq-scale", exps->freq_scale)
            ->capture_default_str();
        add_common(cmd, exps->common);
        cmd->callback([exps] { run_expsum(*exps); });
    }

    auto van = std::make_shared<VanishOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "vanish", "quadrilinear orthogonality integrals on sparse data");
        add_geom(cmd, van->geom);
        cmd->add_option("--count", van->count)->capture_default_str();
        cmd->add_option("--M", van->M)->capture_default_str();
        cmd->add_option("--seed", van->seed)->capture_default_str();
        add_common(cmd, van->common);
        cmd->callback([van] { run_vanish(*van); });
    }

    auto xn = std::make_shared<XsbNormOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "xsb-norm", "windowed space-time norm and dyadic pieces");
        add_geom(cmd, xn->geom);
        add_data(cmd, xn->data, 16);
        cmd->add_option("--alpha", xn->alpha)->capture_default_str();
        cmd->add_option("--n-t", xn->n_t, "time samples on [0,1]")
            ->capture_default_str();
        cmd->add_option("--s", xn->s)->capture_default_str();
        cmd->add_option("--b", xn->b)->capture_default_str();
        cmd->add_flag("--free", xn->free_only,
                      "lift the free flow instead of the NLS run");
        cmd->add_option("--pad", xn->pad, "tail policy: free-flow | hold")
            ->capture_default_str();
        add_common(cmd, xn->common);
        cmd->callback([xn] { run_xsb_norm(*xn); });
    }

    auto pc = std::make_shared<ProductCheckOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "product-check",
            "shell-localized product ratios in the windowed norm");
        add_geom(cmd, pc->geom);
        cmd->add_option("--N1-list", pc->N1_list)->capture_default_str();
        cmd->add_option("--n2-factor", pc->n2_factor)->capture_default_str();
        cmd->add_option("--ensemble", pc->cfg.ensemble_size)
            ->capture_default_str();
        cmd->add_option("--seed", pc->cfg.seed)->capture_default_str();
        cmd->add_option("--n-t", pc->cfg.n_t)->capture_default_str();
        cmd->add_option("--dressings", pc->cfg.dressing_count,
                        "modulation dictionary size (0 = pure free flow)")
            ->capture_default_str();
        cmd->add_option("--s", pc->s)->capture_default_str();
        cmd->add_option("--b", pc->b)->capture_default_str();
        cmd->add_option("--b-prime-list", pc->b_prime_list)
            ->capture_default_str();
        add_common(cmd, pc->common);
        cmd->callback([pc] { run_product_check(*pc); });
    }

    auto gro = std::make_shared<GrowthOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "growth", "long-horizon Sobolev growth audit (defocusing)");
        add_geom(cmd, gro->geom);
        add_data(cmd, gro->data, 64);
        gro->data.amp = 0.15;
        gro->data.kappa = 0.5;
        cmd->add_option("--dt", gro->dt)->capture_default_str();
        cmd->add_option("--T", gro->T)->capture_default_str();
        cmd->add_option("--s", gro->s)->capture_default_str();
        cmd->add_option("--sample-every", gro->sample_every)
            ->capture_default_str();
        cmd->add_option("--r", gro->r, "increment-audit exponent in (0,1)")
            ->capture_default_str();
        cmd->add_option("--window", gro->window, "increment window in samples")
            ->capture_default_str();
        add_common(cmd, gro->common);
        cmd->callback([gro] { run_growth(*gro); });
    }

    auto rec = std::make_shared<RecurrenceOpts>();
    {
        CLI::App* cmd = app.add_subcommand(
            "recurrence", "worst-case increment recurrence bound check");
        cmd->add_option("--r", rec->params.r)->capture_default_str();
        cmd->add_option("--C", rec->params.C)->capture_default_str();
        cmd->add_option("--delta", rec->params.delta)->capture_default_str();
        cmd->add_option("--y0", rec->params.y0)->capture_default_str();
        cmd->add_option("--K", rec->K)->capture_default_str();
        add_common(cmd, rec->common);
        cmd->callback([rec] { run_recurrence(*rec); });
    }

    auto fail = [](const std::string& type, const std::string& message,
                   int code) {
        ojson err{{"error", {{"type", type}, {"message", message}}},
                  {"exit_code", code}};
        std::cout << err.dump(2) << "\n";
        if (!g_out_dir.empty()) {
            try {
                io::write_text(g_out_dir / "error.json", err.dump(2) + "\n");
            } catch (...) {
            }
        }
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        return fail("ConfigError", e.what(), 2);
    } catch (const ConfigError& e) {
        return fail("ConfigError", e.what(), 2);
    } catch (const NumericError& e) {
        return fail("NumericError", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("Error", e.what(), 3);
    }
    return 0;
}
