#include "toruslab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "toruslab/fit.hpp"
#include "toruslab/parallel.hpp"
#include "toruslab/rng.hpp"

namespace toruslab::estimates {

using spectral::free_flow;
using spectral::l2_norm;
using spectral::synthesize;

void SweepConfig::validate() const {
    if (N_list.empty()) throw ConfigError("SweepConfig: empty N list");
    for (size_t i = 0; i < N_list.size(); ++i) {
        if (!is_pow2(N_list[i])) throw ConfigError("SweepConfig: N must be dyadic");
        if (i > 0 && N_list[i] <= N_list[i - 1])
            throw ConfigError("SweepConfig: N list must be strictly increasing");
    }
    if (ensemble_size < 1) throw ConfigError("SweepConfig: ensemble_size must be >= 1");
    if (n_time_samples < 16)
        throw ConfigError("SweepConfig: n_time_samples must be >= 16");
}

FourierGrid grid_for_ball(int N, const TorusGeometry& geom) {
    return {geom, 2 * N + 4};
}

Field random_ball_field(const FourierGrid& grid, int N, std::uint64_t seed,
                        std::uint64_t stream) {
    Field u(grid);
    Rng rng(seed, stream);
    for (int m1 = -N; m1 <= N; ++m1)
        for (int m2 = -N; m2 <= N; ++m2)
            if (m1 * m1 + m2 * m2 <= N * N) u.at_mode(m1, m2) = rng.phase();
    return u;
}

namespace {

double l4x_norm4(const Field& u) {
    CMat v = synthesize(u, 2);
    int P = 2 * u.grid.M;
    double cell = (two_pi / P) * (two_pi / P);
    double acc = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double a2 = std::norm(v(i));
        acc += a2 * a2;
    }
    return cell * acc;
}

} // namespace

double lp_spacetime_norm(const Field& u0, int p, int n_time_samples) {
    if (p != 4) throw ConfigError("lp_spacetime_norm: only p = 4 is supported");
    if (n_time_samples < 1)
        throw ConfigError("lp_spacetime_norm: need at least one time sample");
    double acc = 0;
    for (int j = 0; j < n_time_samples; ++j) {
        double t = (j + 0.5) / n_time_samples;
        acc += l4x_norm4(free_flow(u0, t));
    }
    return std::pow(acc / n_time_samples, 0.25);
}

double strichartz_ratio(const Field& u0, int n_time_samples) {
    double denom = l2_norm(u0);
    if (denom == 0) throw NumericError("strichartz_ratio: zero field");
    return lp_spacetime_norm(u0, 4, n_time_samples) / denom;
}

StrichartzSweepResult strichartz_sweep(const SweepConfig& cfg,
                                       const TorusGeometry& geom) {
    cfg.validate();
    StrichartzSweepResult res;
    std::vector<double> ns, maxima;
    for (int N : cfg.N_list) {
        FourierGrid grid = grid_for_ball(N, geom);
        std::vector<double> ratios(size_t(cfg.ensemble_size));
        parallel_for(cfg.ensemble_size, [&](long long k) {
            std::uint64_t stream = (std::uint64_t(N) << 20) | std::uint64_t(k);
            Field u = random_ball_field(grid, N, cfg.seed, stream);
            ratios[size_t(k)] = strichartz_ratio(u, cfg.n_time_samples);
        });
        RatioRecord rec;
        rec.N1 = N;
        for (int k = 0; k < cfg.ensemble_size; ++k)
            if (ratios[size_t(k)] > rec.max_ratio) {
                rec.max_ratio = ratios[size_t(k)];
                rec.argmax_seed = (std::uint64_t(N) << 20) | std::uint64_t(k);
            }
        Field best = random_ball_field(grid, N, cfg.seed, rec.argmax_seed);
        double refined = strichartz_ratio(best, 2 * cfg.n_time_samples);
        rec.refinement_delta = std::abs(refined - rec.max_ratio) / rec.max_ratio;
        rec.flagged = rec.refinement_delta > 0.01;
        res.records.push_back(rec);
        res.sobolev_ratios.push_back(
            lp_spacetime_norm(best, 4, cfg.n_time_samples) /
            spectral::sobolev_norm(best, huxley_s0 / 2,
                                   spectral::SobolevConvention::bracket));
        ns.push_back(double(N));
        maxima.push_back(rec.max_ratio);
    }
    LinearFit fit = fit_loglog(ns, maxima);
    res.fitted_exponent = fit.slope;
    res.intercept = fit.intercept;
    return res;
}

double bilinear_ratio(const Field& u1, const Field& u2, int n_time_samples) {
    if (!(u1.grid == u2.grid))
        throw ConfigError("bilinear_ratio: fields must share a grid");
    double d1 = l2_norm(u1), d2 = l2_norm(u2);
    if (d1 == 0 || d2 == 0) throw NumericError("bilinear_ratio: zero field");
    int P = 2 * u1.grid.M;
    double cell = (two_pi / P) * (two_pi / P);
    double acc = 0;
    for (int j = 0; j < n_time_samples; ++j) {
        double t = (j + 0.5) / n_time_samples;
        CMat v1 = synthesize(free_flow(u1, t), 2);
        CMat v2 = synthesize(free_flow(u2, t), 2);
        double l2sq = 0;
        for (Eigen::Index i = 0; i < v1.size(); ++i)
            l2sq += std::norm(v1(i) * v2(i));
        acc += cell * l2sq;
    }
    return std::sqrt(acc / n_time_samples) / (d1 * d2);
}

BilinearSweepResult bilinear_sweep(int N1, const SweepConfig& cfg,
                                   const TorusGeometry& geom) {
    cfg.validate();
    if (!is_pow2(N1)) throw ConfigError("bilinear_sweep: N1 must be dyadic");
    if (N1 > cfg.N_list.front())
        throw ConfigError("bilinear_sweep: need N1 <= every N2");
    BilinearSweepResult res;
    double lo = 0, hi = 0;
    for (int N2 : cfg.N_list) {
        FourierGrid grid = grid_for_ball(N2, geom);
        std::vector<double> ratios(size_t(cfg.ensemble_size));
        parallel_for(cfg.ensemble_size, [&](long long k) {
            std::uint64_t stream = (std::uint64_t(N2) << 20) | std::uint64_t(k);
            Field a = random_ball_field(grid, N1, cfg.seed, stream * 2);
            Field b = random_ball_field(grid, N2, cfg.seed, stream * 2 + 1);
            ratios[size_t(k)] = bilinear_ratio(a, b, cfg.n_time_samples);
        });
        RatioRecord rec;
        rec.N1 = N1;
        rec.N2 = N2;
        for (int k = 0; k < cfg.ensemble_size; ++k)
            if (ratios[size_t(k)] > rec.max_ratio) {
                rec.max_ratio = ratios[size_t(k)];
                rec.argmax_seed = (std::uint64_t(N2) << 20) | std::uint64_t(k);
            }
        Field a = random_ball_field(grid, N1, cfg.seed, rec.argmax_seed * 2);
        Field b = random_ball_field(grid, N2, cfg.seed, rec.argmax_seed * 2 + 1);
        double refined = bilinear_ratio(a, b, 2 * cfg.n_time_samples);
        rec.refinement_delta = std::abs(refined - rec.max_ratio) / rec.max_ratio;
        rec.flagged = rec.refinement_delta > 0.01;
        res.records.push_back(rec);
        if (res.records.size() == 1) {
            lo = hi = rec.max_ratio;
        } else {
            lo = std::min(lo, rec.max_ratio);
            hi = std::max(hi, rec.max_ratio);
        }
    }
    res.spread = hi / lo;
    return res;
}

ExpSumResult exp_sum_check(const std::vector<double>& a,
                           const std::vector<Complex>& b) {
    if (a.empty() || a.size() != b.size())
        throw ConfigError("exp_sum_check: need equal-length nonempty lists");
    ExpSumResult res;
    // φ(d) = ∫₀¹ e^{i d t} dt
    auto phi = [](double d) -> Complex {
        if (d == 0.0) return {1.0, 0.0};
        return (std::polar(1.0, d) - Complex(1, 0)) / Complex(0, d);
    };
    Complex lhs(0, 0);
    for (size_t n = 0; n < a.size(); ++n)
        for (size_t m = 0; m < a.size(); ++m)
            lhs += b[n] * std::conj(b[m]) * phi(a[n] - a[m]);
    res.lhs = lhs.real(); // Hermitian double sum: imaginary part is roundoff

    std::map<long long, double> buckets; // j -> Σ|b_n| over |a_n − j| ≤ 1/2
    for (size_t n = 0; n < a.size(); ++n) {
        auto j = (long long)std::ceil(a[n] - 0.5); // half-integers go down
        buckets[j] += std::abs(b[n]);
    }
    for (const auto& [j, s] : buckets) res.rhs += s * s;
    res.ratio = res.lhs / res.rhs;
    return res;
}

VanishResult quadrilinear_vanish_check(const Field& u1, const Field& u2,
                                       const Field& u3, const Field& u4) {
    for (const Field* u : {&u2, &u3, &u4})
        if (!(u1.grid == u->grid))
            throw ConfigError("quadrilinear_vanish_check: fields must share a grid");

    struct Mode {
        int m1, m2;
        Complex c;
    };
    auto support = [](const Field& u) {
        std::vector<Mode> s;
        for (int k1 = 0; k1 < u.grid.M; ++k1)
            for (int k2 = 0; k2 < u.grid.M; ++k2)
                if (u.coeffs(k1, k2) != Complex(0, 0))
                    s.push_back({u.grid.mode_of(k1), u.grid.mode_of(k2),
                                 u.coeffs(k1, k2)});
        return s;
    };
    auto s1 = support(u1), s2 = support(u2), s3 = support(u3), s4 = support(u4);

    std::map<std::pair<int, int>, Complex> lookup4;
    for (const Mode& m : s4) lookup4[{m.m1, m.m2}] += m.c;

    Complex acc(0, 0);
    bool any_zero_sum = false;
    for (const Mode& x : s1)
        for (const Mode& y : s2)
            for (const Mode& z : s3) {
                auto it = lookup4.find({-(x.m1 + y.m1 + z.m1),
                                        -(x.m2 + y.m2 + z.m2)});
                if (it != lookup4.end()) {
                    any_zero_sum = true;
                    acc += x.c * y.c * z.c * it->second;
                }
            }

    VanishResult res;
    res.integral = two_pi * two_pi * acc;
    res.predicted_zero = !any_zero_sum;
    res.norm_product = l2_norm(u1) * l2_norm(u2) * l2_norm(u3) * l2_norm(u4);
    return res;
}

} // namespace toruslab::estimates
