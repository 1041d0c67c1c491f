#pragma once

// Fourier representation of complex fields on the rescaled torus [0,2π)²
// with the anisotropic Laplacian symbol Q(m) = (θ₁m₁)² + (θ₂m₂)².
//
// Normalization: u(x) = Σ_m û(m) e^{i m·x} with no prefactor, hence
// ‖u‖²_{L²} = (2π)² Σ_m |û(m)|².  Coefficients are stored in FFT order:
// index k on an M-axis represents mode m = k for k < M/2, else k − M.
//
// Fields are immutable values; every operation below returns a new Field.

#include <utility>
#include <vector>

#include "toruslab/common.hpp"
#include "toruslab/quadform.hpp"

namespace toruslab::spectral {

struct TorusGeometry {
    double theta1 = 1.0;
    double theta2 = 1.4142135623730951; // double-precision sqrt(2)

    TorusGeometry() = default;
    TorusGeometry(double t1, double t2) : theta1(t1), theta2(t2) {
        if (!(t1 > 0.0) || !(t2 > 0.0))
            throw ConfigError("TorusGeometry: scales must be positive");
    }

    // the symbol as a quadratic form: a = θ₁², b = 0, c = θ₂²
    quadform::QuadForm form() const {
        return {theta1 * theta1, 0.0, theta2 * theta2};
    }

    double symbol(long long m1, long long m2) const {
        return form().eval(m1, m2);
    }
};

struct FourierGrid {
    TorusGeometry geometry;
    int M = 0; // modes per axis, even; frequency set {−M/2, …, M/2−1}²

    FourierGrid() = default;
    FourierGrid(TorusGeometry g, int modes) : geometry(g), M(modes) {
        if (M <= 0 || M % 2 != 0) throw ConfigError("FourierGrid: M must be even and positive");
    }

    int mode_of(int k) const { return k < M / 2 ? k : k - M; }
    int index_of(int m) const {
        if (m < -M / 2 || m >= M / 2) throw ConfigError("FourierGrid: mode outside grid");
        return m >= 0 ? m : m + M;
    }
    bool holds_mode(int m) const { return m >= -M / 2 && m < M / 2; }

    bool operator==(const FourierGrid& o) const {
        return M == o.M && geometry.theta1 == o.geometry.theta1 &&
               geometry.theta2 == o.geometry.theta2;
    }
};

struct Field {
    FourierGrid grid;
    CMat coeffs; // (row k1, col k2) in FFT order

    Field() = default;
    explicit Field(const FourierGrid& g) : grid(g), coeffs(CMat::Zero(g.M, g.M)) {}

    Complex& at_mode(int m1, int m2) {
        return coeffs(grid.index_of(m1), grid.index_of(m2));
    }
    Complex at_mode(int m1, int m2) const {
        return coeffs(grid.index_of(m1), grid.index_of(m2));
    }
};

// ‖u‖_{L²} = 2π (Σ|û|²)^{1/2}
double l2_norm(const Field& u);

// û(m) ↦ e^{−i t Q(m)} û(m)
Field free_flow(const Field& u, double t);

// collocation values u(x_p), x_p = 2π p / P, P = oversample·M, row p1, col p2
CMat synthesize(const Field& u, int oversample = 1);

// recover coefficients on `grid` from collocation values; the value grid must
// be at least as large as the target mode grid or the content would alias
Field analyze(const CMat& values, const FourierGrid& grid);

enum class SobolevConvention { bracket, eigen };

// bracket: 2π (Σ ⟨|m₁|+|m₂|⟩^{2s} |û|²)^{1/2}
// eigen:   2π (Σ ⟨Q(m)⟩^{s}      |û|²)^{1/2}   (level-clustered weight)
double sobolev_norm(const Field& u, double s, SobolevConvention convention);

struct EigenLevel {
    double mu = 0;                              // cluster eigenvalue
    std::vector<std::pair<int, int>> members;   // frequencies with |Q−μ| ≤ tol
};

// Cluster all grid frequencies by symbol value with absolute tolerance tol.
// Generic scales give levels of size ≤ 4 (the (±m₁,±m₂) orbit); clusters
// beyond 4 members are genuine near-collisions of Q and are reported as-is.
std::vector<EigenLevel> eigen_levels(const FourierGrid& grid, double tol = 1e-6);

// zero every coefficient with |Q(m) − mu| > tol; idempotent
Field eigenspace_project(const Field& u, double mu, double tol);

enum class BandOperator { ball, shell };

// ball: keep |m| ≤ N (Euclidean); shell: keep √Q(m) ∈ [N, 2N) (half-open,
// so dyadic shells partition the frequencies with Q ≥ 1)
Field band_project(const Field& u, double N, BandOperator op);

} // namespace toruslab::spectral
