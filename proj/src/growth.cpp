#include "toruslab/growth.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "toruslab/common.hpp"
#include "toruslab/fit.hpp"

namespace toruslab::growth {

namespace {

// max relative excursion from the first sample (absolute when it vanishes)
double max_drift(const std::vector<double>& series) {
    if (series.empty()) return 0;
    const double base = series.front();
    const double scale = std::abs(base) > 0 ? std::abs(base) : 1.0;
    double worst = 0;
    for (double v : series) worst = std::max(worst, std::abs(v - base) / scale);
    return worst;
}

} // namespace

GrowthSeries track_growth(const Field& u0, double s, double T,
                          const nls::NLSParams& params, int sample_every) {
    params.validate();
    if (params.alpha != 1.0)
        throw ConfigError("track_growth: requires the defocusing sign (alpha = +1)");
    if (s < 1.0)
        throw ConfigError("track_growth: Sobolev index must satisfy s >= 1");
    if (sample_every < 1)
        throw ConfigError("track_growth: sample_every must be >= 1");

    nls::ObservableSpec spec;
    spec.sobolev_s = {s};
    spec.convention = spectral::SobolevConvention::eigen;
    spec.sample_every = sample_every;

    nls::Trajectory traj = nls::evolve(u0, T, params, spec);
    if (traj.halted)
        throw NumericError("track_growth: evolution halted: " + traj.halt_reason);

    GrowthSeries out;
    out.times = std::move(traj.times);
    out.hs_values = std::move(traj.hs_series.at(0));
    out.s = s;
    out.max_mass_drift = max_drift(traj.mass_series);
    out.max_energy_drift = max_drift(traj.energy_series);
    return out;
}

GrowthFit fit_growth_exponent(const GrowthSeries& series) {
    const std::size_t n = series.times.size();
    if (series.hs_values.size() != n)
        throw ConfigError("fit_growth_exponent: times/values length mismatch");
    if (n < 10)
        throw ConfigError("fit_growth_exponent: need at least 10 samples");

    // transients die out early; the fitted trend uses the second half only
    const std::size_t start = n / 2;
    const std::size_t m = n - start;
    RVec lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = series.hs_values[start + i];
        if (!(h > 0))
            throw NumericError("fit_growth_exponent: nonpositive norm sample");
        lx[static_cast<Eigen::Index>(i)] = std::log1p(series.times[start + i]);
        ly[static_cast<Eigen::Index>(i)] = std::log(h);
    }

    GrowthFit fit;
    fit.exponent = fit_linear(lx, ly).slope;
    fit.bound = (series.s - 1.0) / (1.0 - huxley_s0);
    fit.violated = fit.exponent > fit.bound + 0.05;
    return fit;
}

IncrementReport increment_check(const GrowthSeries& series, int window_steps,
                                double r) {
    if (window_steps < 1)
        throw ConfigError("increment_check: window_steps must be >= 1");
    if (!(r > 0.0) || !(r < 1.0))
        throw ConfigError("increment_check: r must lie in (0,1)");
    const std::size_t n = series.hs_values.size();
    const std::size_t w = static_cast<std::size_t>(window_steps);
    if (n <= w)
        throw ConfigError("increment_check: series shorter than one window");

    constexpr double inf = std::numeric_limits<double>::infinity();
    IncrementReport rep;
    for (std::size_t k = 0; k + w < n; ++k) {
        const double cur = series.hs_values[k];
        const double nxt = series.hs_values[k + w];

        const double inc_sq = nxt * nxt - cur * cur;
        const double c_sq =
            inc_sq <= 0 ? 0.0
                        : (cur > 0 ? inc_sq / std::pow(cur, 2.0 - r) : inf);
        if (c_sq > rep.c_min_squared) {
            rep.c_min_squared = c_sq;
            rep.argmax_window = k;
        }

        const double inc = nxt - cur;
        const double c_un =
            inc <= 0 ? 0.0 : (cur > 0 ? inc / std::pow(cur, 1.0 - r) : inf);
        rep.c_min_unsquared = std::max(rep.c_min_unsquared, c_un);
    }
    return rep;
}

void RecurrenceParams::validate() const {
    if (!(r > 0.0) || !(r <= 1.0))
        throw ConfigError("RecurrenceParams: r must lie in (0,1]");
    if (!(C >= 0.0))
        throw ConfigError("RecurrenceParams: C must be nonnegative");
    if (!(delta > 0.0))
        throw ConfigError("RecurrenceParams: delta must be positive");
    if (!(y0 > 0.0))
        throw ConfigError("RecurrenceParams: y0 must be positive");
}

RecurrenceVerdict recurrence_bound_check(const RecurrenceParams& p,
                                         long long K) {
    p.validate();
    if (K < 10)
        throw ConfigError("recurrence_bound_check: need K >= 10 iterations");

    const double inv_r = 1.0 / p.r;
    const double step_exp = (2.0 - p.r) / 2.0;
    const long long decade_start = K / 10;

    RecurrenceVerdict v;
    double y = p.y0;
    double running_max = 0;
    double running_max_at_decade = 0;
    for (long long k = 0; k <= K; ++k) {
        const double ratio =
            std::sqrt(y) / std::pow(1.0 + static_cast<double>(k) * p.delta, inv_r);
        if (ratio > v.c_prime) {
            v.c_prime = ratio;
            v.max_ratio_index = k;
        }
        running_max = std::max(running_max, ratio);
        if (k == decade_start) running_max_at_decade = running_max;

        if (k == K) break;
        const double next = y + p.C * std::pow(y, step_exp);
        if (!std::isfinite(next)) {
            v.overflow = true;
            v.overflow_k = k + 1;
            break;
        }
        y = next;
    }

    v.holds = !v.overflow &&
              running_max - running_max_at_decade < 0.01 * running_max_at_decade;
    return v;
}

std::vector<double> recurrence_iterates(const RecurrenceParams& p, long long K) {
    p.validate();
    if (K < 0 || K > 10'000'000)
        throw ConfigError("recurrence_iterates: K out of range [0, 1e7]");

    const double step_exp = (2.0 - p.r) / 2.0;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(K) + 1);
    double y = p.y0;
    out.push_back(y);
    for (long long k = 0; k < K; ++k) {
        const double next = y + p.C * std::pow(y, step_exp);
        if (!std::isfinite(next)) break; // clipped on overflow
        y = next;
        out.push_back(y);
    }
    return out;
}

} // namespace toruslab::growth
