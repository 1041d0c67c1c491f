#pragma once

// Empirical measurement of space-time estimates for the free flow:
// L⁴ Strichartz ratios over frequency balls, bilinear product ratios over
// pairs of balls, a closed-form exponential-sum identity, and the exact
// quadrilinear orthogonality integral.
//
// Time integrals over [0,1] use midpoint Riemann sampling with a mandatory
// doubling check: every reported maximum carries the relative change of the
// ratio under doubled n_time_samples, and is flagged when that exceeds 1%.
//
// Randomness: member k of the ensemble at frequency N draws from
// Rng(seed, stream) with stream = (N << 20) | k, so every trial is
// reproducible in isolation.

#include <cstdint>
#include <vector>

#include "toruslab/spectral.hpp"

namespace toruslab::estimates {

using spectral::Field;
using spectral::FourierGrid;
using spectral::TorusGeometry;

struct SweepConfig {
    std::vector<int> N_list{8, 16, 32, 64}; // strictly increasing, dyadic
    int ensemble_size = 200;
    std::uint64_t seed = 1;
    int n_time_samples = 32;

    void validate() const;
};

struct RatioRecord {
    int N1 = 0;
    int N2 = 0; // 0 when the sweep varies a single frequency
    double max_ratio = 0;
    std::uint64_t argmax_seed = 0;  // ensemble stream index attaining the max
    double refinement_delta = 0;    // |ratio(2n_t) − ratio(n_t)| / ratio(n_t)
    bool flagged = false;           // refinement delta above 1%
};

// grid just large enough to hold B(0, N) with 2x-oversampled exact quartics
FourierGrid grid_for_ball(int N, const TorusGeometry& geom);

// unimodular random phases on every mode of B(0, N)
Field random_ball_field(const FourierGrid& grid, int N, std::uint64_t seed,
                        std::uint64_t stream);

// ((1/n_t) Σ_j ‖e^{i t_j Δ}u₀‖⁴_{L⁴_x})^{1/4}, t_j midpoints of [0,1]
double lp_spacetime_norm(const Field& u0, int p, int n_time_samples);

// lp_spacetime_norm / ‖u₀‖_{L²}
double strichartz_ratio(const Field& u0, int n_time_samples);

struct StrichartzSweepResult {
    std::vector<RatioRecord> records;   // one per N
    std::vector<double> sobolev_ratios; // argmax member: L⁴ / H^{s₀/2} (bracket)
    double fitted_exponent = 0;         // slope of log max_ratio vs log N
    double intercept = 0;
    double paper_exponent = huxley_s0 / 2; // 131/832
};

StrichartzSweepResult strichartz_sweep(const SweepConfig& cfg,
                                       const TorusGeometry& geom = {});

// ‖(e^{itΔ}u₁)(e^{itΔ}u₂)‖_{L²_{t∈[0,1]}L²_x} / (‖u₁‖_{L²}‖u₂‖_{L²})
double bilinear_ratio(const Field& u1, const Field& u2, int n_time_samples);

struct BilinearSweepResult {
    std::vector<RatioRecord> records; // one per N2, N1 fixed
    double spread = 0;                // max over N2 of max_ratio / min of same
};

BilinearSweepResult bilinear_sweep(int N1, const SweepConfig& cfg,
                                   const TorusGeometry& geom = {});

struct ExpSumResult {
    double lhs = 0;   // ∫₀¹ |Σ b_n e^{i t a_n}|² dt, closed form
    double rhs = 0;   // Σ_j (Σ_{|a_n − j| ≤ 1/2} |b_n|)², ties to the lower j
    double ratio = 0; // lhs / rhs
};

ExpSumResult exp_sum_check(const std::vector<double>& a,
                           const std::vector<Complex>& b);

struct VanishResult {
    Complex integral{0, 0};      // ∫ u₁u₂u₃u₄ dx over [0,2π)², exact
    bool predicted_zero = false; // no supported quadruple sums to zero
    double norm_product = 0;     // Π ‖uᵢ‖_{L²}
};

// exact sparse convolution over the nonzero coefficients (no quadrature)
VanishResult quadrilinear_vanish_check(const Field& u1, const Field& u2,
                                       const Field& u3, const Field& u4);

} // namespace toruslab::estimates
