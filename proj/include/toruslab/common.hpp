#pragma once

// Shared aliases, error types and small numeric helpers.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace toruslab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Huxley's lattice-remainder exponent, the central constant of the lab.
inline constexpr double huxley_s0 = 131.0 / 416.0;

// Bad configuration / precondition violation.  CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numeric failure (overflow, non-finite data, degenerate input).  Exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral content would not fit the target band.
struct AliasingError : NumericError {
    using NumericError::NumericError;
};

// Japanese bracket <x> = (1 + x^2)^(1/2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

inline bool is_pow2(long long n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace toruslab
