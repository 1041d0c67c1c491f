#pragma once

// Windowed space-time transforms and discrete X^{s,b} norms.
//
// A trajectory sampled on [0,1] is extended to the padded interval [-1,2],
// multiplied by a raised-cosine window (identically 1 on [0,1], sin^2 tapers
// on [-1,0] and [1,2]), and transformed per spatial mode over the length-4
// period [-1,3).  Coefficients are stored in the interaction picture: the
// per-mode time series is demodulated by e^{+i t Q(m)} before the DFT, so
// the stored bins live on the modulation variable sigma = tau + Q(m) and a
// free flow concentrates in the lowest-|sigma| bins for every mode.  This
// keeps large eigenvalues away from the modulation Nyquist limit.
//
// Norm convention: every direction (two space, one time) carries a factor
// 2*pi, so xsb_norm(U, 0, 0) = 2*pi * ||w u||_{L^2(dt dx)} and a free-flow
// lift of u0 has xsb_norm(0,0) = 2*pi * ||w||_{L^2} * ||u0||_{L^2}.
//
// The fixed-window lift is a surrogate upper bound for the restricted-norm
// infimum over extensions; no optimization over extensions is attempted.

#include <cstdint>
#include <vector>

#include "toruslab/estimates.hpp"
#include "toruslab/spectral.hpp"

namespace toruslab::xsb {

using spectral::Field;
using spectral::FourierGrid;
using spectral::TorusGeometry;

struct XsbParams {
    double s = 0.0;
    double b = 0.55;
    double b_prime = 0.45;

    // enforces 1/4 < b' < 1/2 < b and b + b' <= 1 (within roundoff); the
    // default pair (0.55, 0.45) sits exactly on the boundary sum
    void validate() const;
};

// Uniform sampling of the padded window period [-1, 3) at spacing 1/n_t;
// n_tau = 4*n_t modulation bins at spacing pi/2, FFT (wrap-around) order.
class TimeGrid {
  public:
    explicit TimeGrid(int n_t);

    int n_t() const { return n_t_; }
    int n_tau() const { return 4 * n_t_; }
    double dt() const { return 1.0 / n_t_; }
    static constexpr double dtau() { return two_pi / 4.0; }
    double sample(int j) const { return -1.0 + double(j) / n_t_; }
    int mode_of(int k) const { return k < 2 * n_t_ ? k : k - 4 * n_t_; }
    double modulation(int k) const { return dtau() * mode_of(k); }
    bool operator==(const TimeGrid& o) const { return n_t_ == o.n_t_; }

  private:
    int n_t_;
};

// raised-cosine taper: 1 on [0,1], sin^2 ramps on [-1,0] and [1,2], else 0
double window(double t);

// integral of window^2 over the period; the uniform-grid sum reproduces it
// exactly at every n_t (the taper pairs sum to a low-order trig polynomial)
inline constexpr double window_l2_sq = 1.75;

// Interaction-picture coefficients Vhat(m, sigma_k) of a windowed trajectory;
// rows are flattened spatial indices (k1 * M + k2), columns modulation bins.
struct SpaceTimeField {
    FourierGrid grid;
    TimeGrid time;
    CMat coeffs;

    SpaceTimeField(const FourierGrid& g, const TimeGrid& t)
        : grid(g), time(t), coeffs(CMat::Zero(long(g.M) * g.M, t.n_tau())) {}

    Complex& at(int k1, int k2, int k) { return coeffs(long(k1) * grid.M + k2, k); }
    const Complex& at(int k1, int k2, int k) const {
        return coeffs(long(k1) * grid.M + k2, k);
    }
};

// How the [0,1] trajectory is extended into the taper regions.
enum class PadPolicy {
    free_flow, // evolve the endpoint fields by the free propagator (exact
               // continuation for free flows; natural for perturbations)
    hold       // freeze the endpoint fields (exact for static data)
};

// trajectory must hold n_t + 1 fields sampled at t = j / n_t, n_t >= 64
SpaceTimeField lift(const std::vector<Field>& trajectory,
                    PadPolicy pad = PadPolicy::free_flow);

// demodulated windowed samples V(m, t_j), j = 0 .. n_tau - 1 (inverse DFT)
CVec time_samples(const SpaceTimeField& U, int m1, int m2);

// reconstructed trajectory field at sample index j; requires t_j in [0,1]
// (where the window is flat), i.e. n_t <= j <= 2 n_t
Field at_time(const SpaceTimeField& U, int j);

// ( (2pi)^3 dtau sum_{m,k} <|m1|+|m2|>^{2s} <sigma_k>^{2b} |Vhat|^2 )^{1/2}
double xsb_norm(const SpaceTimeField& U, double s, double b);

// One dyadic cell of the frequency x modulation decomposition: coefficients
// with <mu>^{1/2} in [2^j, 2^{j+1}) and <sigma> in [2^{j'}, 2^{j'+1}).
struct DyadicPiece {
    int freq_shell = 0; // j  : frequency label N = 2^j
    int mod_shell = 0;  // j' : modulation label L = 2^{j'}
    SpaceTimeField part;
};

// exact partition of the nonzero coefficients; summing the pieces restores
// U bit for bit, and supports are pairwise disjoint
std::vector<DyadicPiece> dyadic_decompose(const SpaceTimeField& U);

// integral over [0,1] x [0,2pi)^2 of u1 u2 conj(u3) conj(u4): collocation
// with 4x spatial oversampling (exact per time slice) and trapezoidal time
// quadrature on the stored samples (second order in 1/n_t)
Complex quadrilinear_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, const SpaceTimeField& u4);

// b-weighted modulation energy of a windowed scalar dressing: given samples
// d(t_j) over the period, returns dtau * sum_k <sigma_k>^{2b} |(w d)^(k)|^2
double dressing_weight_factor(const CVec& dressing_samples, const TimeGrid& time,
                              double b);

struct ProductCheckConfig {
    int ensemble_size = 32;
    std::uint64_t seed = 1;
    int n_t = 64;           // time samples per unit interval
    int dressing_count = 4; // per-member modulation dictionary; 0 = pure
                            // free flows (no dressing)

    void validate() const;
};

// Ensemble measurement of || u1 u2 ||_{L^2_t([0,1]) L^2_x} divided by
// ||u1||_{X^{0,b'}} ||u2||_{X^{0,b'}} for shell-localized data: u_i is a
// free flow of unimodular random phases on the dyadic shell sqrt(Q) in
// [N_i, 2 N_i) (N = 0 means the zero mode alone), each mode dressed by a
// low-harmonic period-4 trig polynomial drawn from the member's dictionary.
// Everything is streamed: the X norms come from the exact per-dressing
// modulation factors, never from materialized space-time arrays.
// Member k draws from Rng(seed, 4*stream + {0,1,2}) with
// stream = (N1 << 40) | (N2 << 20) | k.
estimates::RatioRecord localized_product_check(int N1, int N2,
                                               const XsbParams& params,
                                               const ProductCheckConfig& cfg,
                                               const TorusGeometry& geom = {});

struct ProductSweepResult {
    std::vector<estimates::RatioRecord> diagonal; // N2 = factor * N1
    double n1_exponent = 0; // slope of log max_ratio vs log N1 (diagonal)
    double intercept = 0;
    std::vector<estimates::RatioRecord> n2_scan; // N1 fixed at the smallest
    double n2_spread = 0;   // max / min of max_ratio over the scan
};

ProductSweepResult localized_product_sweep(const XsbParams& params,
                                           const ProductCheckConfig& cfg,
                                           const std::vector<int>& N1_list = {2, 4, 8, 16},
                                           int n2_factor = 4,
                                           const TorusGeometry& geom = {});

} // namespace toruslab::xsb
