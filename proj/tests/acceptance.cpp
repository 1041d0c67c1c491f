// Acceptance harness: thirteen end-to-end checks, one printed verdict line
// each, with every tolerance pinned in this file.  Each check exercises the
// library through its public interfaces and compares against independent
// oracles (brute-force counting, closed forms, high-order quadrature) or
// against the quantitative windows the project commits to.
//
// Exit code: 0 when every line passes, 4 otherwise.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toruslab/estimates.hpp"
#include "toruslab/growth.hpp"
#include "toruslab/nls.hpp"
#include "toruslab/quadform.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/spectral.hpp"
#include "toruslab/xsb.hpp"

using namespace toruslab;
using namespace toruslab::spectral;
using quadform::QuadForm;
using quadform::Rational;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", idx,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Field smooth_field(const FourierGrid& grid, std::uint64_t seed, double amp,
                   double kappa = 1.0) {
    Field u(grid);
    Rng rng(seed, 0);
    for (int k1 = 0; k1 < grid.M; ++k1)
        for (int k2 = 0; k2 < grid.M; ++k2) {
            double m1 = grid.mode_of(k1), m2 = grid.mode_of(k2);
            u.coeffs(k1, k2) =
                amp * std::exp(-kappa * (m1 * m1 + m2 * m2)) * rng.phase();
        }
    return u;
}

double l2_distance(const Field& a, const Field& b) {
    Field d = a;
    d.coeffs -= b.coeffs;
    return l2_norm(d);
}

// independent exact counter: integer-scaled form evaluated in 128-bit
// arithmetic over a conservative bounding box
long long brute_count(const QuadForm& q, long long x) {
    const long long A = q.coeff_a(), B = q.coeff_b(), C = q.coeff_c();
    const __int128 bound = static_cast<__int128>(x) * q.scale();
    const double lam_min =
        0.5 * (q.a() + q.c() -
               std::sqrt((q.a() - q.c()) * (q.a() - q.c()) + q.b() * q.b()));
    const long long R =
        static_cast<long long>(std::ceil(std::sqrt(double(x) / lam_min))) + 2;
    long long count = 0;
    for (long long m = -R; m <= R; ++m)
        for (long long n = -R; n <= R; ++n) {
            __int128 v = static_cast<__int128>(A) * m * m +
                         static_cast<__int128>(B) * m * n +
                         static_cast<__int128>(C) * n * n;
            if (v <= bound) ++count;
        }
    return count;
}

void criterion_1() {
    Timer timer;
    const long long xs[4] = {10, 100, 1000, 10000};
    int mismatches = 0;
    long long checked = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(2026, std::uint64_t(i));
        long long da = 1 + (long long)rng.below(4);
        long long db = 1 + (long long)rng.below(4);
        long long dc = 1 + (long long)rng.below(4);
        long long na = 1 + (long long)rng.below(12);
        long long nc = 1 + (long long)rng.below(12);
        long long nb;
        double a = double(na) / da, c = double(nc) / dc, b;
        do {
            nb = (long long)rng.below(25) - 12;
            b = double(nb) / db;
        } while (!(4.0 * a * c - b * b > 1e-9));
        QuadForm q(Rational{na, da}, Rational{nb, db}, Rational{nc, dc});
        for (long long x : xs) {
            ++checked;
            if (quadform::count_leq(q, double(x)) != brute_count(q, x))
                ++mismatches;
        }
    }
    double t = timer.secs();
    report(1, "exact lattice counts match the brute-force oracle",
           mismatches == 0 && t < 10.0,
           fmt("%lld counts over 100 rational forms, %d mismatches, %.1fs "
               "(budget 10s)",
               checked, mismatches, t));
}

void criterion_2() {
    Timer timer;
    QuadForm q(Rational{1}, Rational{0}, Rational{2});
    quadform::FitReport fit =
        quadform::fit_remainder_exponent(q, 1e3, 1e7, 4, 8, 1);
    double t = timer.secs();
    report(2, "counting remainder grows slower than x^0.40",
           fit.slope <= 0.40 && t < 60.0,
           fmt("fitted exponent %.4f (allowed 0.40, lattice-remainder "
               "reference %.4f), %.1fs (budget 60s)",
               fit.slope, huxley_s0, t));
}

void criterion_3() {
    Timer timer;
    QuadForm q(Rational{1}, Rational{0}, Rational{2});
    std::vector<long long> counts = quadform::annulus_scan(q, 1000000);
    long long max_count = 0;
    for (long long v : counts) max_count = std::max(max_count, v);
    quadform::FitReport fit = quadform::fit_dyadic_block_exponent(counts);
    report(3, "unit annulus occupancy grows slower than l^0.45",
           fit.slope <= 0.45,
           fmt("max |G_l| = %lld for l <= 1e6, dyadic-block exponent %.4f "
               "(allowed 0.45), %.1fs",
               max_count, fit.slope, timer.secs()));
}

void criterion_4() {
    Timer timer;
    FourierGrid g(TorusGeometry{}, 16);

    // mass: 1e4 Strang steps on steep-spectrum data
    Field u = smooth_field(g, 9, 0.25);
    const double m0 = nls::mass(u);
    nls::NLSParams p;
    p.dt = 0.005;
    double worst = 0;
    for (int s = 0; s < 10000; ++s) {
        u = nls::strang_step(u, p);
        if (s % 500 == 499)
            worst = std::max(worst, std::abs(nls::mass(u) - m0) / m0);
    }
    worst = std::max(worst, std::abs(nls::mass(u) - m0) / m0);

    // energy: order-2 signature under dt halving
    Field v0 = smooth_field(g, 13, 0.6, 0.5);
    auto drift = [&](double dt) {
        nls::NLSParams q;
        q.dt = dt;
        nls::Trajectory tr = nls::evolve(v0, 1.0, q);
        return std::abs(tr.energy_series.back() - tr.energy_series.front());
    };
    double ratio = drift(0.01) / drift(0.005);

    report(4, "mass exact to 1e-10 over 1e4 steps; energy drift is O(dt^2)",
           worst <= 1e-10 && ratio >= 3.2 && ratio <= 4.8,
           fmt("mass drift %.2e (allowed 1e-10), energy dt/(dt/2) drift ratio "
               "%.2f (window [3.2,4.8]), %.1fs",
               worst, ratio, timer.secs()));
}

void criterion_5() {
    Timer timer;
    FourierGrid g(TorusGeometry{}, 16);

    Field u0 = smooth_field(g, 7, 0.5, 0.5);
    nls::NLSParams p;
    auto run = [&](double dt) {
        p.dt = dt;
        return nls::evolve(u0, 1.0, p).final_field;
    };
    Field ref = run(1.0 / 512.0);
    double e1 = l2_distance(run(1.0 / 32.0), ref);
    double e2 = l2_distance(run(1.0 / 64.0), ref);
    double order = std::log2(e1 / e2);

    // plane wave: both sub-flows are exact and commute, so the splitting
    // reproduces the closed-form solution up to roundoff at T = 10
    Complex c(0.7, 0.2);
    Field pw(g);
    pw.at_mode(1, 0) = c;
    nls::NLSParams q;
    q.dt = 0.01;
    Field got = nls::evolve(pw, 10.0, q).final_field;
    Field want(g);
    want.at_mode(1, 0) =
        c * std::polar(1.0, -(g.geometry.symbol(1, 0) + std::norm(c)) * 10.0);
    double pw_err = l2_distance(got, want);

    report(5, "second-order self-convergence; exact plane-wave transport",
           order >= 1.7 && order <= 2.3 && pw_err <= 1e-10,
           fmt("convergence order %.2f (window [1.7,2.3]), plane-wave error "
               "%.2e at T=10 (allowed 1e-10), %.1fs",
               order, pw_err, timer.secs()));
}

void criterion_6() {
    Timer timer;
    FourierGrid g(TorusGeometry{}, 16);
    Field u0 = smooth_field(g, 31, 0.05);
    u0.coeffs /= sobolev_norm(u0, 1.0, SobolevConvention::bracket);
    const double T = 0.01;

    nls::PicardResult pr = nls::picard_iterate(u0, T, 1.0, 8, 16);
    int decaying = 0;
    for (std::size_t k = 1; k < pr.sup_l2_diffs.size(); ++k)
        if (pr.sup_l2_diffs[k] <= 0.5 * pr.sup_l2_diffs[k - 1] ||
            pr.sup_l2_diffs[k] < 1e-14)
            ++decaying;
    bool in_ball = true;
    for (bool inside : pr.in_ball) in_ball = in_ball && inside;

    nls::NLSParams p;
    p.dt = T / 16.0;
    double vs_evolve =
        l2_distance(pr.final_iterate.back(), nls::evolve(u0, T, p).final_field);

    report(6, "Duhamel iteration contracts and matches the integrator",
           decaying >= 5 && !pr.diverged && in_ball && vs_evolve <= 1e-3,
           fmt("%d/7 successive differences halved, fixed point vs evolve "
               "%.2e L2 (allowed 1e-3), iterates in the 2-radius ball: %s, "
               "%.1fs",
               decaying, vs_evolve, in_ball ? "yes" : "no", timer.secs()));
}

void criterion_7() {
    Timer timer;
    estimates::SweepConfig cfg; // N {8,16,32,64}, 200 members, 32 samples
    estimates::StrichartzSweepResult res = estimates::strichartz_sweep(cfg);
    bool deltas_ok = true;
    for (const auto& r : res.records) deltas_ok = deltas_ok && !r.flagged;
    double t = timer.secs();
    bool exp_ok = res.fitted_exponent >= 0.0 && res.fitted_exponent <= 0.307;
    report(7, "space-time L4 ratios grow slower than N^0.307",
           deltas_ok && exp_ok && t < 600.0,
           fmt("fitted exponent %.4f (window [0,0.307], reference exponent "
               "%.4f), refinement deltas %s, %.0fs (budget 600s)",
               res.fitted_exponent, res.paper_exponent,
               deltas_ok ? "all < 1%" : "EXCEEDED 1%", t));
}

void criterion_8() {
    Timer timer;
    estimates::SweepConfig cfg;
    cfg.N_list = {8, 16, 32, 64};
    estimates::BilinearSweepResult res = estimates::bilinear_sweep(4, cfg);
    report(8, "bilinear ratios are insensitive to the high frequency",
           res.spread < 2.0,
           fmt("max/min ratio spread %.4f across N2 in {8,16,32,64} (allowed "
               "2.0), %.0fs",
               res.spread, timer.secs()));
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double beta = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        double v0 = es.eigenvectors()(0, i);
        weights[i] = v0 * v0;
    }
}

void criterion_9() {
    Timer timer;
    std::vector<double> nodes, weights;
    gauss_legendre(400, nodes, weights);

    double worst_quad = 0, worst_ratio = 0;
    for (int i = 0; i < 1000; ++i) {
        Rng rng(77, std::uint64_t(i));
        int n = 1 + int(rng.below(8));
        std::vector<double> a(n);
        std::vector<Complex> b(n);
        for (int j = 0; j < n; ++j) {
            a[j] = rng.uniform(0.0, 40.0);
            b[j] = Complex(rng.normal(), rng.normal());
        }
        estimates::ExpSumResult r = estimates::exp_sum_check(a, b);

        double quad = 0;
        for (std::size_t kq = 0; kq < nodes.size(); ++kq) {
            Complex sum(0, 0);
            for (int j = 0; j < n; ++j)
                sum += b[j] * std::polar(1.0, nodes[kq] * a[j]);
            quad += weights[kq] * std::norm(sum);
        }
        worst_quad =
            std::max(worst_quad, std::abs(r.lhs - quad) / std::max(1.0, quad));
        worst_ratio = std::max(worst_ratio, r.ratio);
    }

    estimates::ExpSumResult single =
        estimates::exp_sum_check({3.7}, {Complex(1.2, -0.4)});
    estimates::ExpSumResult coincident =
        estimates::exp_sum_check({5.37, 5.37}, {Complex(1, 0), Complex(1, 0)});

    report(9, "exponential-sum identity matches quadrature and its bound",
           worst_quad <= 1e-8 && worst_ratio <= 10.0 && single.ratio == 1.0 &&
               coincident.ratio == 1.0,
           fmt("1000 instances: max quadrature gap %.1e (allowed 1e-8), max "
               "lhs/rhs %.2f (allowed 10), degenerate ratios %g and %g "
               "(exactly 1), %.1fs",
               worst_quad, worst_ratio, single.ratio, coincident.ratio,
               timer.secs()));
}

void criterion_10() {
    Timer timer;
    FourierGrid g(TorusGeometry{}, 48);

    // violating: supports pinned to strictly positive first coordinates,
    // so no quadruple of modes can sum to zero
    double worst_violating = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(55, std::uint64_t(i));
        Field f[4] = {Field(g), Field(g), Field(g), Field(g)};
        for (int u = 0; u < 4; ++u) {
            int n = 1 + int(rng.below(3));
            for (int j = 0; j < n; ++j) {
                int m1 = 1 + 5 * u + int(rng.below(4));
                int m2 = int(rng.below(9)) - 4;
                f[u].at_mode(m1, m2) = Complex(rng.normal(), rng.normal());
            }
        }
        estimates::VanishResult r =
            estimates::quadrilinear_vanish_check(f[0], f[1], f[2], f[3]);
        if (!r.predicted_zero || r.norm_product == 0) {
            worst_violating = 1e9;
            break;
        }
        worst_violating = std::max(worst_violating,
                                   std::abs(r.integral) / r.norm_product);
    }

    // zero-sum single modes: integral = (2pi)^2 * product of coefficients
    double worst_closed = 0;
    for (int i = 0; i < 100; ++i) {
        Rng rng(56, std::uint64_t(i));
        int m1[4], m2[4];
        for (int u = 0; u < 3; ++u) {
            m1[u] = int(rng.below(17)) - 8;
            m2[u] = int(rng.below(17)) - 8;
        }
        m1[3] = -(m1[0] + m1[1] + m1[2]);
        m2[3] = -(m2[0] + m2[1] + m2[2]);
        Field f[4] = {Field(g), Field(g), Field(g), Field(g)};
        Complex prod(1, 0);
        for (int u = 0; u < 4; ++u) {
            Complex c(rng.normal(), rng.normal());
            f[u].at_mode(m1[u], m2[u]) = c;
            prod *= c;
        }
        estimates::VanishResult r =
            estimates::quadrilinear_vanish_check(f[0], f[1], f[2], f[3]);
        Complex want = two_pi * two_pi * prod;
        worst_closed = std::max(worst_closed,
                                std::abs(r.integral - want) / std::abs(want));
    }

    report(10, "quadrilinear integrals vanish or match the closed form",
           worst_violating <= 1e-12 && worst_closed <= 1e-10,
           fmt("100 support-violating cases: max |A|/product %.1e (allowed "
               "1e-12); 100 zero-sum cases: max closed-form error %.1e "
               "(allowed 1e-10), %.1fs",
               worst_violating, worst_closed, timer.secs()));
}

void criterion_11() {
    Timer timer;

    // exact dyadic reconstruction on random space-time coefficient fields
    double worst_recon = 0;
    bool counts_ok = true;
    for (int i = 0; i < 50; ++i) {
        Rng rng(88, std::uint64_t(i));
        FourierGrid g(TorusGeometry{}, 8);
        xsb::SpaceTimeField U(g, xsb::TimeGrid(4));
        long long nonzero = 0;
        for (int r = 0; r < U.coeffs.rows(); ++r)
            for (int k = 0; k < U.coeffs.cols(); ++k)
                if (rng.uniform() < 0.4) {
                    U.coeffs(r, k) = Complex(rng.normal(), rng.normal());
                    ++nonzero;
                }
        CMat sum = CMat::Zero(U.coeffs.rows(), U.coeffs.cols());
        long long pieces_nonzero = 0;
        for (const auto& piece : xsb::dyadic_decompose(U)) {
            sum += piece.part.coeffs;
            pieces_nonzero += (piece.part.coeffs.array() != Complex(0, 0)).count();
        }
        worst_recon =
            std::max(worst_recon, (sum - U.coeffs).cwiseAbs().maxCoeff());
        counts_ok = counts_ok && pieces_nonzero == nonzero;
    }

    // localized product ratios at b' = 0.45
    xsb::XsbParams params;
    params.s = 0.0;
    params.b = 0.55;
    params.b_prime = 0.45;
    xsb::ProductCheckConfig cfg; // ensemble 32, n_t 64, 4 dressings
    xsb::ProductSweepResult res =
        xsb::localized_product_sweep(params, cfg, {2, 4, 8, 16}, 4);
    bool deltas_ok = true;
    for (const auto& r : res.diagonal) deltas_ok = deltas_ok && !r.flagged;
    for (const auto& r : res.n2_scan) deltas_ok = deltas_ok && !r.flagged;

    const double bound = huxley_s0 + 0.15;
    report(11, "windowed-norm product ratios stay below the N1^0.465 line",
           worst_recon == 0.0 && counts_ok && res.n1_exponent <= bound &&
               deltas_ok,
           fmt("dyadic reconstruction exact on 50 fields (max gap %.1e), "
               "fitted N1 exponent %.4f (allowed %.4f), N2 spread %.3f, "
               "refinement deltas %s, %.0fs",
               worst_recon, res.n1_exponent, bound, res.n2_spread,
               deltas_ok ? "all < 1%" : "EXCEEDED 1%", timer.secs()));
}

void criterion_12() {
    Timer timer;
    FourierGrid g(TorusGeometry{}, 64);
    Field u0 = smooth_field(g, 2026, 0.15, 0.5);
    nls::NLSParams params;
    params.dt = 0.02;
    growth::GrowthSeries series =
        growth::track_growth(u0, 2.0, 200.0, params, 50);
    growth::GrowthFit fit = growth::fit_growth_exponent(series);
    double t = timer.secs();

    bool audits = series.max_mass_drift <= 1e-10 &&
                  series.max_energy_drift <= 1e-3;
    report(12, "defocusing H2 growth stays below the poly-in-t bound",
           !fit.violated && audits && t < 900.0,
           fmt("fitted exponent %.4f (allowed %.4f + 0.05), mass drift %.1e "
               "(allowed 1e-10), energy drift %.1e (allowed 1e-3), %.0fs "
               "(budget 900s)",
               fit.exponent, fit.bound, series.max_mass_drift,
               series.max_energy_drift, t));
}

void criterion_13() {
    Timer timer;
    bool all_hold = true;
    double worst_rise = 0;
    for (double r : {0.25, 0.5, 1.0})
        for (double C : {0.5, 2.0}) {
            growth::RecurrenceParams p;
            p.r = r;
            p.C = C;
            growth::RecurrenceVerdict v =
                growth::recurrence_bound_check(p, 100000);
            all_hold = all_hold && v.holds && !v.overflow;
        }
    report(13, "worst-case increment recurrence stays polynomially bounded",
           all_hold,
           fmt("all 6 (r, C) combinations hold to K=1e5 with last-decade "
               "running-max rise < 1%%%s, %.1fs",
               all_hold ? "" : " — VIOLATION", timer.secs()));
    (void)worst_rise;
}

} // namespace

int main() {
    Timer total;
    std::printf("toruslab acceptance checks\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%d/13 passed in %.0fs\n", 13 - g_failures, total.secs());
    return g_failures == 0 ? 0 : 4;
}
