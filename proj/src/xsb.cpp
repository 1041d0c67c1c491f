#include "toruslab/xsb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "toruslab/dft.hpp"
#include "toruslab/fit.hpp"
#include "toruslab/parallel.hpp"
#include "toruslab/rng.hpp"

namespace toruslab::xsb {

using estimates::RatioRecord;
using spectral::free_flow;
using spectral::l2_norm;
using spectral::synthesize;

void XsbParams::validate() const {
    if (!(0.25 < b_prime && b_prime < 0.5))
        throw ConfigError("XsbParams: need 1/4 < b_prime < 1/2");
    if (!(0.5 < b)) throw ConfigError("XsbParams: need b > 1/2");
    if (b + b_prime > 1.0 + 1e-12)
        throw ConfigError("XsbParams: need b + b_prime <= 1");
}

TimeGrid::TimeGrid(int n_t) : n_t_(n_t) {
    if (n_t < 1) throw ConfigError("TimeGrid: n_t must be positive");
}

double window(double t) {
    if (t <= -1.0 || t >= 2.0) return 0.0;
    if (t < 0.0) {
        double u = std::sin(0.25 * two_pi * (t + 1.0)); // sin(pi (t+1) / 2)
        return u * u;
    }
    if (t <= 1.0) return 1.0;
    double u = std::sin(0.25 * two_pi * (2.0 - t));
    return u * u;
}

namespace {

// column scaling turning a raw forward FFT of the samples into coefficients
// of the transform dt * sum_j V(t_j) e^{-i sigma_k t_j} with t_0 = -1
CVec forward_phases(const TimeGrid& time) {
    CVec p(time.n_tau());
    for (int k = 0; k < time.n_tau(); ++k)
        p[k] = time.dt() * std::polar(1.0, time.modulation(k));
    return p;
}

// V(m, t_j) for all modes: rows flattened spatial indices, columns samples
CMat demodulated_samples(const SpaceTimeField& U) {
    const int n_tau = U.time.n_tau();
    CMat V(U.coeffs.rows(), n_tau);
    CVec y(n_tau);
    double inv_dt = double(U.time.n_t());
    for (long r = 0; r < U.coeffs.rows(); ++r) {
        for (int k = 0; k < n_tau; ++k)
            y[k] = U.coeffs(r, k) * std::polar(1.0, -U.time.modulation(k));
        V.row(r) = (dft::inverse(y) * inv_dt).transpose();
    }
    return V;
}

double symbol_of_row(const FourierGrid& grid, long r) {
    int k1 = int(r / grid.M), k2 = int(r % grid.M);
    return grid.geometry.symbol(grid.mode_of(k1), grid.mode_of(k2));
}

} // namespace

SpaceTimeField lift(const std::vector<Field>& trajectory, PadPolicy pad) {
    if (trajectory.size() < 65)
        throw ConfigError("lift: need at least 65 samples (n_t >= 64) on [0,1]");
    const FourierGrid& grid = trajectory.front().grid;
    for (const Field& f : trajectory)
        if (!(f.grid == grid)) throw ConfigError("lift: mixed spatial grids");

    const int n_t = int(trajectory.size()) - 1;
    TimeGrid time(n_t);
    const int n_tau = time.n_tau();
    const long rows = long(grid.M) * grid.M;
    SpaceTimeField U(grid, time);

    // demodulated window-weighted samples V(m, t_j) = w e^{+i t Q} u_hat
    CMat V = CMat::Zero(rows, n_tau);
    for (long r = 0; r < rows; ++r) {
        double q = symbol_of_row(grid, r);
        int k1 = int(r / grid.M), k2 = int(r % grid.M);

        for (int j = n_t; j <= 2 * n_t; ++j) {
            double t = time.sample(j);
            V(r, j) = std::polar(1.0, t * q) * trajectory[size_t(j - n_t)].coeffs(k1, k2);
        }
        // taper regions: the free-flow continuation is constant after
        // demodulation; the hold continuation keeps the field itself constant
        for (int j = 0; j < n_t; ++j) {
            double t = time.sample(j);
            double w = window(t);
            V(r, j) = (pad == PadPolicy::free_flow)
                          ? w * V(r, n_t)
                          : w * std::polar(1.0, t * q) * trajectory[0].coeffs(k1, k2);
        }
        for (int j = 2 * n_t + 1; j < n_tau; ++j) {
            double t = time.sample(j);
            double w = window(t);
            if (w == 0.0) continue;
            V(r, j) = (pad == PadPolicy::free_flow)
                          ? w * V(r, 2 * n_t)
                          : w * std::polar(1.0, t * q) *
                                trajectory[size_t(n_t)].coeffs(k1, k2);
        }
    }

    CVec phases = forward_phases(time);
    CVec row(n_tau);
    for (long r = 0; r < rows; ++r) {
        row = V.row(r).transpose();
        U.coeffs.row(r) = (dft::forward(row).cwiseProduct(phases)).transpose();
    }
    return U;
}

CVec time_samples(const SpaceTimeField& U, int m1, int m2) {
    long r = long(U.grid.index_of(m1)) * U.grid.M + U.grid.index_of(m2);
    CVec y(U.time.n_tau());
    for (int k = 0; k < U.time.n_tau(); ++k)
        y[k] = U.coeffs(r, k) * std::polar(1.0, -U.time.modulation(k));
    return dft::inverse(y) * double(U.time.n_t());
}

Field at_time(const SpaceTimeField& U, int j) {
    if (j < U.time.n_t() || j > 2 * U.time.n_t())
        throw ConfigError("at_time: sample outside the flat window [0,1]");
    double t = U.time.sample(j);
    Field f(U.grid);
    CVec y(U.time.n_tau());
    for (long r = 0; r < U.coeffs.rows(); ++r) {
        for (int k = 0; k < U.time.n_tau(); ++k)
            y[k] = U.coeffs(r, k) * std::polar(1.0, -U.time.modulation(k));
        Complex v = Complex(0, 0);
        // inverse DFT evaluated at one sample
        for (int k = 0; k < U.time.n_tau(); ++k)
            v += y[k] * std::polar(1.0, two_pi * double(k) * j / U.time.n_tau());
        v /= double(U.time.n_tau());
        v *= double(U.time.n_t());
        double q = symbol_of_row(U.grid, r);
        f.coeffs(int(r / U.grid.M), int(r % U.grid.M)) = std::polar(1.0, -t * q) * v;
    }
    return f;
}

double xsb_norm(const SpaceTimeField& U, double s, double b) {
    const int n_tau = U.time.n_tau();
    RVec mod_weight(n_tau);
    for (int k = 0; k < n_tau; ++k)
        mod_weight[k] = std::pow(bracket(U.time.modulation(k)), 2.0 * b);
    double acc = 0;
    for (long r = 0; r < U.coeffs.rows(); ++r) {
        int m1 = U.grid.mode_of(int(r / U.grid.M));
        int m2 = U.grid.mode_of(int(r % U.grid.M));
        double sw = std::pow(bracket(double(std::abs(m1) + std::abs(m2))), 2.0 * s);
        double row_acc = 0;
        for (int k = 0; k < n_tau; ++k)
            row_acc += mod_weight[k] * std::norm(U.coeffs(r, k));
        acc += sw * row_acc;
    }
    return std::sqrt(two_pi * two_pi * two_pi * TimeGrid::dtau() * acc);
}

std::vector<DyadicPiece> dyadic_decompose(const SpaceTimeField& U) {
    const int n_tau = U.time.n_tau();
    std::vector<int> mod_shell(n_tau);
    for (int k = 0; k < n_tau; ++k)
        mod_shell[k] = int(std::floor(std::log2(bracket(U.time.modulation(k)))));

    std::map<std::pair<int, int>, SpaceTimeField> pieces;
    for (long r = 0; r < U.coeffs.rows(); ++r) {
        double mu = symbol_of_row(U.grid, r);
        int fs = int(std::floor(std::log2(std::sqrt(bracket(mu)))));
        for (int k = 0; k < n_tau; ++k) {
            if (U.coeffs(r, k) == Complex(0, 0)) continue;
            auto key = std::make_pair(fs, mod_shell[k]);
            auto it = pieces.find(key);
            if (it == pieces.end())
                it = pieces.emplace(key, SpaceTimeField(U.grid, U.time)).first;
            it->second.coeffs(r, k) = U.coeffs(r, k);
        }
    }
    std::vector<DyadicPiece> out;
    out.reserve(pieces.size());
    for (auto& [key, part] : pieces)
        out.push_back({key.first, key.second, std::move(part)});
    return out;
}

Complex quadrilinear_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, const SpaceTimeField& u4) {
    const SpaceTimeField* us[4] = {&u1, &u2, &u3, &u4};
    for (int i = 1; i < 4; ++i)
        if (!(us[i]->grid == us[0]->grid) || !(us[i]->time == us[0]->time))
            throw ConfigError("quadrilinear_form: fields must share space-time grids");

    const FourierGrid& grid = u1.grid;
    const TimeGrid& time = u1.time;
    const int n_t = time.n_t();
    CMat V[4];
    for (int i = 0; i < 4; ++i) V[i] = demodulated_samples(*us[i]);

    const int P = 4 * grid.M;
    const double cell = (two_pi / P) * (two_pi / P);
    Complex total(0, 0);
    Field f(grid);
    for (int j = n_t; j <= 2 * n_t; ++j) {
        double t = time.sample(j);
        CMat v[4];
        for (int i = 0; i < 4; ++i) {
            for (long r = 0; r < V[i].rows(); ++r)
                f.coeffs(int(r / grid.M), int(r % grid.M)) =
                    std::polar(1.0, -t * symbol_of_row(grid, r)) * V[i](r, j);
            v[i] = synthesize(f, 4);
        }
        Complex slice(0, 0);
        for (long idx = 0; idx < v[0].size(); ++idx)
            slice += v[0](idx) * v[1](idx) * std::conj(v[2](idx)) * std::conj(v[3](idx));
        double wt = (j == n_t || j == 2 * n_t) ? 0.5 : 1.0;
        total += wt * time.dt() * cell * slice;
    }
    return total;
}

double dressing_weight_factor(const CVec& dressing_samples, const TimeGrid& time,
                              double b) {
    const int n_tau = time.n_tau();
    if (dressing_samples.size() != n_tau)
        throw ConfigError("dressing_weight_factor: sample count mismatch");
    CVec wd(n_tau);
    for (int j = 0; j < n_tau; ++j)
        wd[j] = window(time.sample(j)) * dressing_samples[j];
    CVec hat = dft::forward(wd) * time.dt();
    double acc = 0;
    for (int k = 0; k < n_tau; ++k)
        acc += std::pow(bracket(time.modulation(k)), 2.0 * b) * std::norm(hat[k]);
    return TimeGrid::dtau() * acc;
}

void ProductCheckConfig::validate() const {
    if (ensemble_size < 1)
        throw ConfigError("ProductCheckConfig: ensemble_size must be >= 1");
    if (n_t < 16) throw ConfigError("ProductCheckConfig: n_t must be >= 16");
    if (dressing_count < 0 || dressing_count > 64)
        throw ConfigError("ProductCheckConfig: dressing_count out of range");
}

namespace {

struct ShellMode {
    int k1, k2;    // grid indices
    double q;      // symbol value
    int dict;      // dressing dictionary slot
};

// modes with sqrt(Q) in [N, 2N); N == 0 selects the zero mode alone
std::vector<ShellMode> shell_modes(const FourierGrid& grid, int N, int dict_size) {
    std::vector<ShellMode> out;
    for (int k1 = 0; k1 < grid.M; ++k1)
        for (int k2 = 0; k2 < grid.M; ++k2) {
            int m1 = grid.mode_of(k1), m2 = grid.mode_of(k2);
            double q = grid.geometry.symbol(m1, m2);
            bool in = (N == 0) ? (m1 == 0 && m2 == 0)
                               : (q >= double(N) * N && q < 4.0 * N * N);
            if (!in) continue;
            unsigned h = unsigned(m1 + (1 << 16)) * 73856093u ^
                         unsigned(m2 + (1 << 16)) * 19349663u;
            out.push_back({k1, k2, q, int(h % unsigned(dict_size))});
        }
    return out;
}

// period-4 trig polynomial 1 + sum_{1<=|h|<=3} (phase / (2 + 2|h|)) e^{i pi h t / 2};
// coefficients are drawn in a fixed order so dressings do not depend on n_t
struct Dressing {
    Complex g[7]; // harmonics -3..3 stored at g[h+3]
};

Dressing draw_dressing(Rng& rng) {
    Dressing d;
    d.g[3] = Complex(1, 0);
    for (int h : {-3, -2, -1, 1, 2, 3})
        d.g[h + 3] = rng.phase() / (2.0 + 2.0 * std::abs(h));
    return d;
}

CVec sample_dressing(const Dressing& d, const TimeGrid& time) {
    CVec s = CVec::Zero(time.n_tau());
    for (int j = 0; j < time.n_tau(); ++j) {
        double t = time.sample(j);
        Complex v(0, 0);
        for (int h = -3; h <= 3; ++h)
            v += d.g[h + 3] * std::polar(1.0, 0.25 * two_pi * h * t);
        s[j] = v;
    }
    return s;
}

struct MemberResult {
    double numerator = 0;
    double x1 = 0, x2 = 0;
    double ratio = 0;
};

MemberResult product_member(int N1, int N2, const XsbParams& params,
                            const ProductCheckConfig& cfg, int member, int n_t,
                            const TorusGeometry& geom) {
    FourierGrid grid = estimates::grid_for_ball(2 * N2, geom);
    TimeGrid time(n_t);
    std::uint64_t base = (std::uint64_t(N1) << 40) | (std::uint64_t(N2) << 20) |
                         std::uint64_t(member);
    Rng r1(cfg.seed, 4 * base);
    Rng r2(cfg.seed, 4 * base + 1);
    Rng rd(cfg.seed, 4 * base + 2);

    const int D = std::max(1, cfg.dressing_count);
    std::vector<Dressing> dict(static_cast<size_t>(D));
    if (cfg.dressing_count == 0) {
        for (auto& d : dict) {
            for (auto& g : d.g) g = Complex(0, 0);
            d.g[3] = Complex(1, 0); // pure free flow: dressing identically 1
        }
    } else {
        for (auto& d : dict) d = draw_dressing(rd);
    }
    std::vector<CVec> samples(static_cast<size_t>(D));
    std::vector<double> factor(static_cast<size_t>(D));
    for (int i = 0; i < D; ++i) {
        samples[size_t(i)] = sample_dressing(dict[size_t(i)], time);
        factor[size_t(i)] =
            dressing_weight_factor(samples[size_t(i)], time, params.b_prime);
    }

    std::vector<ShellMode> s1 = shell_modes(grid, N1, D);
    std::vector<ShellMode> s2 = shell_modes(grid, N2, D);
    if (s1.empty() || s2.empty())
        throw ConfigError("localized_product_check: empty frequency shell");
    std::vector<Complex> c1(s1.size()), c2(s2.size());
    for (auto& c : c1) c = r1.phase();
    for (auto& c : c2) c = r2.phase();

    MemberResult res;
    double x1sq = 0, x2sq = 0;
    for (size_t i = 0; i < s1.size(); ++i)
        x1sq += std::norm(c1[i]) * factor[size_t(s1[i].dict)];
    for (size_t i = 0; i < s2.size(); ++i)
        x2sq += std::norm(c2[i]) * factor[size_t(s2[i].dict)];
    const double tp3 = two_pi * two_pi * two_pi;
    res.x1 = std::sqrt(tp3 * x1sq);
    res.x2 = std::sqrt(tp3 * x2sq);

    Field f1(grid), f2(grid);
    const int P = 2 * grid.M;
    const double cell = (two_pi / P) * (two_pi / P);
    double acc = 0;
    for (int j = n_t; j <= 2 * n_t; ++j) {
        double t = time.sample(j);
        f1.coeffs.setZero();
        f2.coeffs.setZero();
        for (size_t i = 0; i < s1.size(); ++i)
            f1.coeffs(s1[i].k1, s1[i].k2) = c1[i] *
                                            samples[size_t(s1[i].dict)][j] *
                                            std::polar(1.0, -t * s1[i].q);
        for (size_t i = 0; i < s2.size(); ++i)
            f2.coeffs(s2[i].k1, s2[i].k2) = c2[i] *
                                            samples[size_t(s2[i].dict)][j] *
                                            std::polar(1.0, -t * s2[i].q);
        CMat v1 = synthesize(f1, 2), v2 = synthesize(f2, 2);
        double slice = 0;
        for (long idx = 0; idx < v1.size(); ++idx)
            slice += std::norm(v1(idx) * v2(idx));
        double wt = (j == n_t || j == 2 * n_t) ? 0.5 : 1.0;
        acc += wt * time.dt() * cell * slice;
    }
    res.numerator = std::sqrt(acc);
    res.ratio = res.numerator / (res.x1 * res.x2);
    return res;
}

} // namespace

RatioRecord localized_product_check(int N1, int N2, const XsbParams& params,
                                    const ProductCheckConfig& cfg,
                                    const TorusGeometry& geom) {
    params.validate();
    cfg.validate();
    if (N1 != 0 && !is_pow2(N1))
        throw ConfigError("localized_product_check: N1 must be 0 or dyadic");
    if (!is_pow2(N2)) throw ConfigError("localized_product_check: N2 must be dyadic");
    if (N1 > N2) throw ConfigError("localized_product_check: need N1 <= N2");

    std::vector<double> ratios(size_t(cfg.ensemble_size));
    parallel_for(cfg.ensemble_size, [&](long long k) {
        ratios[size_t(k)] =
            product_member(N1, N2, params, cfg, int(k), cfg.n_t, geom).ratio;
    });
    RatioRecord rec;
    rec.N1 = N1;
    rec.N2 = N2;
    for (int k = 0; k < cfg.ensemble_size; ++k)
        if (ratios[size_t(k)] > rec.max_ratio) {
            rec.max_ratio = ratios[size_t(k)];
            rec.argmax_seed = std::uint64_t(k);
        }
    double refined = product_member(N1, N2, params, cfg, int(rec.argmax_seed),
                                    2 * cfg.n_t, geom)
                         .ratio;
    rec.refinement_delta = std::abs(refined - rec.max_ratio) / rec.max_ratio;
    rec.flagged = rec.refinement_delta > 0.01;
    return rec;
}

ProductSweepResult localized_product_sweep(const XsbParams& params,
                                           const ProductCheckConfig& cfg,
                                           const std::vector<int>& N1_list,
                                           int n2_factor,
                                           const TorusGeometry& geom) {
    if (N1_list.size() < 2)
        throw ConfigError("localized_product_sweep: need at least 2 N1 values");
    if (n2_factor < 1) throw ConfigError("localized_product_sweep: bad N2 factor");
    ProductSweepResult res;
    std::vector<double> ns, maxima;
    for (int N1 : N1_list) {
        RatioRecord rec = localized_product_check(N1, n2_factor * N1, params, cfg, geom);
        res.diagonal.push_back(rec);
        ns.push_back(double(N1));
        maxima.push_back(rec.max_ratio);
    }
    LinearFit fit = fit_loglog(ns, maxima);
    res.n1_exponent = fit.slope;
    res.intercept = fit.intercept;

    int N1_fixed = N1_list.front();
    double lo = 0, hi = 0;
    for (int N1 : N1_list) {
        RatioRecord rec =
            localized_product_check(N1_fixed, n2_factor * N1, params, cfg, geom);
        res.n2_scan.push_back(rec);
        if (res.n2_scan.size() == 1)
            lo = hi = rec.max_ratio;
        else {
            lo = std::min(lo, rec.max_ratio);
            hi = std::max(hi, rec.max_ratio);
        }
    }
    res.n2_spread = hi / lo;
    return res;
}

} // namespace toruslab::xsb
