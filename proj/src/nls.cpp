#include "toruslab/nls.hpp"

#include <cmath>

#include "toruslab/dft.hpp"

namespace toruslab::nls {

using spectral::analyze;
using spectral::FourierGrid;
using spectral::free_flow;
using spectral::synthesize;

Field nonlinear_phase_step(const Field& u, double dt, double alpha,
                           int dealias_oversample) {
    if (dt == 0.0) return u;
    if (dealias_oversample < 2)
        throw AliasingError("nonlinear_phase_step: dealias oversample must be >= 2");
    CMat v = synthesize(u, dealias_oversample);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double phase = -alpha * std::norm(v(i)) * dt;
        v(i) *= Complex(std::cos(phase), std::sin(phase));
    }
    return analyze(v, u.grid);
}

Field strang_step(const Field& u, const NLSParams& params) {
    params.validate();
    if (params.dt == 0.0) return u;
    Field half = free_flow(u, params.dt / 2.0);
    Field mid = nonlinear_phase_step(half, params.dt, params.alpha,
                                     params.dealias_oversample);
    return free_flow(mid, params.dt / 2.0);
}

double mass(const Field& u) {
    double n = spectral::l2_norm(u);
    return n * n;
}

double energy(const Field& u, double alpha) {
    const auto& g = u.grid;
    quadform::QuadForm q = g.geometry.form();
    double kinetic = 0.0;
    for (int k1 = 0; k1 < g.M; ++k1)
        for (int k2 = 0; k2 < g.M; ++k2)
            kinetic += q.eval(g.mode_of(k1), g.mode_of(k2)) *
                       std::norm(u.coeffs(k1, k2));
    kinetic *= two_pi * two_pi;
    CMat v = synthesize(u, 2);
    int P = 2 * g.M;
    double cell = (two_pi / P) * (two_pi / P);
    double quartic = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double a2 = std::norm(v(i));
        quartic += a2 * a2;
    }
    return kinetic + 0.5 * alpha * cell * quartic;
}

namespace {

void record(Trajectory& traj, const Field& u, double t, double alpha,
            const ObservableSpec& spec) {
    traj.times.push_back(t);
    traj.mass_series.push_back(mass(u));
    traj.energy_series.push_back(energy(u, alpha));
    for (size_t i = 0; i < spec.sobolev_s.size(); ++i)
        traj.hs_series[i].push_back(
            spectral::sobolev_norm(u, spec.sobolev_s[i], spec.convention));
    if (spec.store_snapshots) traj.snapshots.push_back(u);
}

} // namespace

Trajectory evolve(const Field& u0, double T, const NLSParams& params,
                  const ObservableSpec& spec) {
    params.validate();
    if (!(T > 0.0)) throw ConfigError("evolve: T must be positive");
    if (!(params.dt > 0.0)) throw ConfigError("evolve: dt must be positive");
    if (spec.sample_every < 1) throw ConfigError("evolve: sample_every must be >= 1");

    Trajectory traj;
    traj.hs_series.resize(spec.sobolev_s.size());
    Field u = u0;
    record(traj, u, 0.0, params.alpha, spec);

    double t = 0.0;
    long long step = 0;
    const double eps = 1e-12 * T;
    while (t < T - eps) {
        NLSParams stepped = params;
        stepped.dt = std::min(params.dt, T - t);
        u = strang_step(u, stepped);
        t += stepped.dt;
        ++step;
        if (!u.coeffs.allFinite()) {
            traj.halted = true;
            traj.halt_reason = "non-finite value at t = " + std::to_string(t);
            record(traj, u, t, params.alpha, spec);
            traj.final_field = u;
            return traj;
        }
        if (step % spec.sample_every == 0 || t >= T - eps)
            record(traj, u, t, params.alpha, spec);
    }
    traj.final_field = u;
    return traj;
}

PicardResult picard_iterate(const Field& u0, double T, double alpha,
                            int n_iter, int n_quad, double ball_s) {
    if (n_quad < 8) throw ConfigError("picard_iterate: n_quad must be >= 8");
    if (!(T > 0.0)) throw ConfigError("picard_iterate: T must be positive");
    if (n_iter < 1) throw ConfigError("picard_iterate: n_iter must be >= 1");

    const double dtau = T / n_quad;
    const int n_nodes = n_quad + 1;

    PicardResult res;
    res.node_times.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) res.node_times[j] = dtau * j;
    res.ball_radius =
        2.0 * spectral::sobolev_norm(u0, ball_s, spectral::SobolevConvention::bracket);

    // iterate 0: the free flow
    std::vector<Field> cur(n_nodes);
    for (int j = 0; j < n_nodes; ++j) cur[j] = free_flow(u0, res.node_times[j]);

    auto cubic = [&](const Field& u) {
        CMat v = synthesize(u, 2);
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= std::norm(v(i));
        return analyze(v, u.grid);
    };

    int growth_streak = 0;
    for (int it = 0; it < n_iter; ++it) {
        // G_j = e^{−iτ_jΔ} (|u|²u)(τ_j); prefix-trapezoid P_j = ∫₀^{τ_j} G
        std::vector<Field> next(n_nodes);
        Field prefix(u0.grid);
        Field g_prev = free_flow(cubic(cur[0]), -res.node_times[0]);
        next[0] = u0;
        for (int j = 1; j < n_nodes; ++j) {
            Field g_here = free_flow(cubic(cur[j]), -res.node_times[j]);
            prefix.coeffs += (dtau / 2.0) * (g_prev.coeffs + g_here.coeffs);
            g_prev = g_here;
            // S(u)(t) = e^{itΔ}(u₀ − iα P(t))
            Field combo = u0;
            combo.coeffs -= Complex(0, alpha) * prefix.coeffs;
            next[j] = free_flow(combo, res.node_times[j]);
        }

        double sup_diff = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            Field d = next[j];
            d.coeffs -= cur[j].coeffs;
            sup_diff = std::max(sup_diff, spectral::l2_norm(d));
        }
        res.sup_l2_diffs.push_back(sup_diff);
        size_t k = res.sup_l2_diffs.size();
        if (k >= 2 && res.sup_l2_diffs[k - 1] > res.sup_l2_diffs[k - 2])
            ++growth_streak;
        else
            growth_streak = 0;
        if (growth_streak >= 3) res.diverged = true;

        double sup_hs = 0.0;
        for (int j = 0; j < n_nodes; ++j)
            sup_hs = std::max(sup_hs,
                              spectral::sobolev_norm(
                                  next[j], ball_s,
                                  spectral::SobolevConvention::bracket));
        res.in_ball.push_back(sup_hs <= res.ball_radius);

        cur = std::move(next);
    }
    res.final_iterate = std::move(cur);
    return res;
}

} // namespace toruslab::nls
