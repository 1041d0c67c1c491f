#pragma once

// Long-horizon Sobolev tracking for the defocusing flow, windowed increment
// audits, and the discrete recurrence oracle that turns bounded increments
// into a polynomial-in-time bound.

#include <cstddef>
#include <vector>

#include "toruslab/nls.hpp"

namespace toruslab::growth {

using spectral::Field;

struct GrowthSeries {
    std::vector<double> times;
    std::vector<double> hs_values; // H^s at each sample, eigenvalue weights
    double s = 2.0;
    double max_mass_drift = 0;     // max relative drift from the t=0 value
    double max_energy_drift = 0;
};

// evolve u0 to time T (defocusing only, s >= 1), recording the H^s norm
// every sample_every steps; conservation drifts ride along as an audit
GrowthSeries track_growth(const Field& u0, double s, double T,
                          const nls::NLSParams& params, int sample_every);

struct GrowthFit {
    double exponent = 0; // slope of log hs against log(1+t), second half
    double bound = 0;    // (s - 1) / (1 - huxley_s0)
    bool violated = false; // exponent > bound + 0.05
};

GrowthFit fit_growth_exponent(const GrowthSeries& series);

struct IncrementReport {
    // minimal C with hs(t+delta)^2 <= hs(t)^2 + C hs(t)^{2-r} on every window
    double c_min_squared = 0;
    // minimal C for the unsquared variant hs(t+delta) <= hs(t) + C hs(t)^{1-r}
    double c_min_unsquared = 0;
    std::size_t argmax_window = 0; // start index of the binding window
};

// delta = window_steps sample intervals; r must lie in (0,1)
IncrementReport increment_check(const GrowthSeries& series, int window_steps,
                                double r);

struct RecurrenceParams {
    double r = 0.5;    // in (0, 1]
    double C = 1.0;    // nonnegative
    double delta = 1.0;
    double y0 = 1.0;   // initial squared norm

    void validate() const;
};

struct RecurrenceVerdict {
    double c_prime = 0; // max_k x_k / (1 + k delta)^{1/r}, x_k = sqrt(y_k)
    long long max_ratio_index = 0;
    bool holds = false; // running max rose < 1% over the last decade [K/10, K]
    bool overflow = false;
    long long overflow_k = 0; // iteration where the iterate left double range
};

// drives the equality recurrence y_{k+1} = y_k + C y_k^{(2-r)/2} (the worst
// case allowed by the increment hypothesis) and checks that x_k stays below
// a stable multiple of (1 + k delta)^{1/r}
RecurrenceVerdict recurrence_bound_check(const RecurrenceParams& p, long long K);

// iterates y_0 .. y_K of the same recurrence (clipped on overflow); exposed
// so monotonicity in C can be asserted pairwise
std::vector<double> recurrence_iterates(const RecurrenceParams& p, long long K);

} // namespace toruslab::growth
