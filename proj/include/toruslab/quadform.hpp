#pragma once

// Positive-definite binary quadratic forms Q(m,n) = a m^2 + b mn + c n^2 and
// exact lattice counting N(x) = #{(m,n) in Z^2 : Q(m,n) <= x}.
//
// Two modes.  Exact mode (rational coefficients): the form is scaled to
// integers A,B,C by the lcm of the denominators and every threshold
// comparison is decided in 128-bit integer arithmetic — per-row endpoints are
// floor/ceil of the quadratic-formula roots computed with an exact integer
// square root, so counts carry no floating-point boundary error.  Float mode
// (real coefficients): double endpoints with a 2^-40 relative guard band;
// a boundary value inside the band raises the precision warning flag in the
// result metadata instead of failing.
//
// The main term of the counting function is (2 pi / sqrt(D)) x with
// D = 4ac - b^2; the remainder R(x) = N(x) - main(x) is the object whose
// growth exponent the fitting helpers measure.

#include <cstdint>
#include <functional>
#include <vector>

#include "toruslab/common.hpp"

namespace toruslab::quadform {

using i128 = __int128;

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1);
    static Rational from_double(double x); // exact dyadic conversion
    double value() const { return double(num) / double(den); }
};

class QuadForm {
  public:
    // exact mode
    QuadForm(Rational a, Rational b, Rational c);
    // float mode
    QuadForm(double a, double b, double c);

    bool exact() const { return exact_; }
    bool integral() const { return exact_ && scale_ == 1; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double discriminant() const { return disc_; } // D = 4ac - b^2

    double eval(long long m, long long n) const;

    // exact mode: Q(m,n) = eval_num(m,n) / scale()
    i128 eval_num(long long m, long long n) const;
    long long scale() const { return scale_; }
    long long coeff_a() const { return A_; }
    long long coeff_b() const { return B_; }
    long long coeff_c() const { return C_; }

  private:
    void check_definite() const;

    bool exact_ = false;
    double a_ = 0, b_ = 0, c_ = 0;
    double disc_ = 0;
    long long A_ = 0, B_ = 0, C_ = 0; // scaled integer coefficients
    long long scale_ = 1;             // lcm of coefficient denominators
};

struct CountResult {
    double x = 0;
    long long count = 0;
    double main_term = 0;
    double remainder = 0;
    bool boundary_warning = false;
};

long long count_leq(const QuadForm& q, double x, bool* warning = nullptr);
long long count_less(const QuadForm& q, double x, bool* warning = nullptr);
double main_term(const QuadForm& q, double x);
CountResult count_report(const QuadForm& q, double x);

// #{a in Z^2 : |Q(a) - l| <= 1} with closed outer and closed inner edge,
// i.e. count_leq(l+1) - count_less(l-1).
long long annulus_count(const QuadForm& q, double l);

// |G_l| for every integer l in [0, l_max].  Integral forms use a single
// histogram sweep over all lattice points with Q <= l_max + 1; other forms
// fall back to per-l counting.
std::vector<long long> annulus_scan(const QuadForm& q, long long l_max);

struct FitPoint {
    double x = 0;
    double value = 0;
};
struct FitBlock {
    double x = 0; // abscissa at which the block maximum is attained
    double max_value = 0;
};
struct FitReport {
    double slope = 0;
    double intercept = 0;
    double residual = 0;
    std::vector<FitPoint> points;
    std::vector<FitBlock> blocks;
};

// Geometric blocks over [x_min, x_max]; samples_per_block log-uniform draws
// per block from stream (seed, block); least squares of log(block max |f|)
// against log(x at the block maximum), which recovers pure power laws
// exactly.  Fewer than 3 blocks is a config error.
FitReport fit_exponent_over_blocks(const std::function<double(double)>& f,
                                   double x_min, double x_max,
                                   int blocks_per_decade, int samples_per_block,
                                   std::uint64_t seed);

FitReport fit_remainder_exponent(const QuadForm& q, double x_min, double x_max,
                                 int blocks_per_decade, int samples_per_block,
                                 std::uint64_t seed);

// Dyadic blocks [2^k, 2^{k+1}) over an integer-indexed series (annulus scan
// output); fits log(block max) against log(geometric block center).
FitReport fit_dyadic_block_exponent(const std::vector<long long>& values,
                                    long long l_min = 1);

} // namespace toruslab::quadform
