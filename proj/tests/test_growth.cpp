#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "toruslab/growth.hpp"
#include "toruslab/rng.hpp"

using namespace toruslab;
using namespace toruslab::spectral;
using namespace toruslab::growth;

namespace {

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

// synthetic series hs(t) = (1+t)^p on a uniform time mesh
GrowthSeries power_series(double p, double s, std::size_t n = 100) {
    GrowthSeries g;
    g.s = s;
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0.5 * static_cast<double>(i);
        g.times.push_back(t);
        g.hs_values.push_back(std::pow(1.0 + t, p));
    }
    return g;
}

} // namespace

TEST_CASE("track_growth rejects the wrong regime") {
    FourierGrid g(TorusGeometry{}, 8);
    Field u = smooth_field(g, 1, 0.1);
    nls::NLSParams params;
    params.alpha = -1.0;
    CHECK_THROWS_AS(track_growth(u, 2.0, 0.1, params, 1), ConfigError);
    params.alpha = 1.0;
    CHECK_THROWS_AS(track_growth(u, 0.5, 0.1, params, 1), ConfigError);
    CHECK_THROWS_AS(track_growth(u, 2.0, 0.1, params, 0), ConfigError);
}

TEST_CASE("plane wave: flat norm series, zero exponent, tiny drifts") {
    FourierGrid g(TorusGeometry{}, 16);
    Field u(g);
    u.at_mode(3, -1) = Complex(0.4, 0.2);

    nls::NLSParams params;
    params.dt = 0.01;
    GrowthSeries series = track_growth(u, 2.0, 2.0, params, 10);

    REQUIRE(series.times.size() == series.hs_values.size());
    REQUIRE(series.times.size() == 21); // t=0 plus every 10th of 200 steps
    CHECK(series.times.front() == 0.0);
    CHECK(series.times.back() == doctest::Approx(2.0).epsilon(1e-12));

    double lo = series.hs_values[0], hi = series.hs_values[0];
    for (double h : series.hs_values) {
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    CHECK(hi - lo < 1e-12 * hi); // single mode: |coefficient| is conserved
    CHECK(series.max_mass_drift < 1e-12);
    CHECK(series.max_energy_drift < 1e-12);

    GrowthFit fit = fit_growth_exponent(series);
    CHECK(std::abs(fit.exponent) < 1e-3);
    CHECK_FALSE(fit.violated);
}

TEST_CASE("tracked series matches an independent norm recomputation") {
    FourierGrid g(TorusGeometry{}, 16);
    Field u = smooth_field(g, 7, 0.2);
    nls::NLSParams params;
    params.dt = 0.01;

    GrowthSeries series = track_growth(u, 1.5, 0.5, params, 5);
    CHECK(series.s == 1.5);
    CHECK(series.hs_values.front() ==
          doctest::Approx(sobolev_norm(u, 1.5, SobolevConvention::eigen))
              .epsilon(1e-13));

    // interior spacing is sample_every * dt
    for (std::size_t i = 1; i + 1 < series.times.size(); ++i)
        CHECK(series.times[i] - series.times[i - 1] ==
              doctest::Approx(0.05).epsilon(1e-12));

    nls::Trajectory direct = nls::evolve(u, 0.5, params);
    CHECK(series.hs_values.back() ==
          doctest::Approx(
              sobolev_norm(direct.final_field, 1.5, SobolevConvention::eigen))
              .epsilon(1e-12));
}

TEST_CASE("exponent fit: calibrated powers, bound bookkeeping, errors") {
    GrowthFit unit = fit_growth_exponent(power_series(1.0, 2.0));
    CHECK(unit.exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(unit.bound == doctest::Approx(416.0 / 285.0).epsilon(1e-15));
    CHECK_FALSE(unit.violated); // 1.0 < 416/285 + 0.05

    GrowthFit fast = fit_growth_exponent(power_series(2.0, 2.0));
    CHECK(fast.exponent == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fast.violated);

    // s = 3 doubles the allowance; the quadratic series is now admissible
    GrowthFit higher = fit_growth_exponent(power_series(2.0, 3.0));
    CHECK(higher.bound == doctest::Approx(2.0 * 416.0 / 285.0).epsilon(1e-12));
    CHECK_FALSE(higher.violated);

    GrowthSeries tiny = power_series(1.0, 2.0, 9);
    CHECK_THROWS_AS(fit_growth_exponent(tiny), ConfigError);

    GrowthSeries bad = power_series(1.0, 2.0);
    bad.hs_values[80] = 0.0;
    CHECK_THROWS_AS(fit_growth_exponent(bad), NumericError);

    GrowthSeries mismatched = power_series(1.0, 2.0);
    mismatched.hs_values.pop_back();
    CHECK_THROWS_AS(fit_growth_exponent(mismatched), ConfigError);

    // only the second half enters the fit: corrupting the first half is inert
    GrowthSeries front = power_series(1.0, 2.0);
    for (std::size_t i = 0; i < 40; ++i) front.hs_values[i] = -5.0;
    CHECK(fit_growth_exponent(front).exponent ==
          doctest::Approx(unit.exponent).epsilon(1e-12));
}

TEST_CASE("increment audit: constant and square-root calibrations") {
    GrowthSeries flat;
    flat.s = 2.0;
    for (int i = 0; i < 50; ++i) {
        flat.times.push_back(0.1 * i);
        flat.hs_values.push_back(3.0);
    }
    IncrementReport rep = increment_check(flat, 1, 0.5);
    CHECK(rep.c_min_squared == 0.0);
    CHECK(rep.c_min_unsquared == 0.0);

    // x_k = sqrt(k+1): squared increments are exactly 1, so the binding
    // window is the first one and C = 1 / x_0^{2-r} = 1
    GrowthSeries root;
    root.s = 2.0;
    for (int i = 0; i < 60; ++i) {
        root.times.push_back(static_cast<double>(i));
        root.hs_values.push_back(std::sqrt(static_cast<double>(i + 1)));
    }
    IncrementReport sq = increment_check(root, 1, 0.5);
    CHECK(sq.c_min_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sq.argmax_window == 0);
    CHECK(sq.c_min_unsquared ==
          doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(increment_check(root, 0, 0.5), ConfigError);
    CHECK_THROWS_AS(increment_check(root, 1, 0.0), ConfigError);
    CHECK_THROWS_AS(increment_check(root, 1, 1.0), ConfigError);
    GrowthSeries two;
    two.times = {0.0, 1.0};
    two.hs_values = {1.0, 2.0};
    CHECK_THROWS_AS(increment_check(two, 2, 0.5), ConfigError);

    // wider windows see the accumulated increment
    IncrementReport wide = increment_check(root, 4, 0.5);
    CHECK(wide.c_min_squared == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("recurrence parameters: domain checks") {
    RecurrenceParams p;
    CHECK_NOTHROW(p.validate());
    p.r = 1.0;
    CHECK_NOTHROW(p.validate()); // closed at the top end
    p.r = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.r = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RecurrenceParams{};
    p.C = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RecurrenceParams{};
    p.delta = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RecurrenceParams{};
    p.y0 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(recurrence_bound_check(RecurrenceParams{}, 9), ConfigError);
}

TEST_CASE("recurrence oracle: closed-form regimes stay bounded") {
    // C = 0 freezes the iterate: the ratio is maximal at k = 0
    RecurrenceParams frozen;
    frozen.C = 0.0;
    frozen.y0 = 4.0;
    RecurrenceVerdict v0 = recurrence_bound_check(frozen, 1000);
    CHECK(v0.c_prime == 2.0);
    CHECK(v0.max_ratio_index == 0);
    CHECK(v0.holds);
    CHECK_FALSE(v0.overflow);

    // r = 1, C = 2: x_{k+1} = sqrt(x^2 + 2x) < x + 1, so x_k < 1 + k and the
    // ratio x_k/(1+k) peaks at the k = 0 value of exactly 1
    RecurrenceParams linear;
    linear.r = 1.0;
    linear.C = 2.0;
    RecurrenceVerdict v1 = recurrence_bound_check(linear, 100000);
    CHECK(v1.c_prime == 1.0);
    CHECK(v1.max_ratio_index == 0);
    CHECK(v1.holds);

    // r = 1/2: y grows like (k/4)^4, matching (1+k)^{1/r} = (1+k)^2 for x
    RecurrenceParams quartic;
    quartic.r = 0.5;
    quartic.C = 1.0;
    RecurrenceVerdict v2 = recurrence_bound_check(quartic, 100000);
    CHECK(v2.holds);
    CHECK(v2.c_prime <= 1.0);
    CHECK(v2.c_prime > 0.2);

    // a small seed makes the binding ratio appear mid-trajectory
    RecurrenceParams late;
    late.r = 1.0;
    late.C = 2.0;
    late.y0 = 1e-4;
    RecurrenceVerdict v3 = recurrence_bound_check(late, 100000);
    CHECK(v3.holds);
    CHECK(v3.max_ratio_index > 10);
    CHECK(v3.c_prime < 1.0);
}

TEST_CASE("recurrence oracle: overflow is reported, not thrown") {
    RecurrenceParams steep;
    steep.r = 0.01; // near-linear step y + C y^{0.995} escapes double range
    steep.C = 10.0;
    RecurrenceVerdict v = recurrence_bound_check(steep, 100000);
    CHECK(v.overflow);
    CHECK(v.overflow_k > 0);
    CHECK(v.overflow_k < 100000);
    CHECK_FALSE(v.holds);
}

TEST_CASE("recurrence iterates: monotone in C, consistent with the verdict") {
    RecurrenceParams small;
    small.C = 0.5;
    RecurrenceParams big;
    big.C = 2.0;
    std::vector<double> ys = recurrence_iterates(small, 300);
    std::vector<double> yb = recurrence_iterates(big, 300);
    REQUIRE(ys.size() == 301);
    REQUIRE(yb.size() == 301);
    CHECK(ys[0] == 1.0);
    for (std::size_t k = 0; k <= 300; ++k) CHECK(yb[k] >= ys[k]);

    // first step agrees with the recurrence written out by hand
    CHECK(ys[1] == doctest::Approx(1.0 + 0.5).epsilon(1e-15));
    CHECK(yb[1] == doctest::Approx(3.0).epsilon(1e-15));

    CHECK_THROWS_AS(recurrence_iterates(small, -1), ConfigError);
}

TEST_CASE("defocusing mini-run: bounded exponent and finite increments") {
    FourierGrid g(TorusGeometry{}, 16);
    Field u = smooth_field(g, 11, 0.25);
    nls::NLSParams params;
    params.dt = 0.01;

    GrowthSeries series = track_growth(u, 2.0, 2.0, params, 5);
    REQUIRE(series.times.size() == 41);
    CHECK(series.max_mass_drift < 1e-12);
    // splitting conserves mass to roundoff but energy only to O(dt²)
    CHECK(series.max_energy_drift < 1e-5);

    GrowthFit fit = fit_growth_exponent(series);
    CHECK_FALSE(fit.violated);

    // r matching the fitted-bound exponent for s = 2
    IncrementReport rep = increment_check(series, 4, 285.0 / 416.0);
    CHECK(std::isfinite(rep.c_min_squared));
    CHECK(rep.c_min_squared >= 0.0);
    CHECK(std::isfinite(rep.c_min_unsquared));
}
