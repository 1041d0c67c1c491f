#include "toruslab/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toruslab/fit.hpp"
#include "toruslab/rng.hpp"

namespace toruslab::quadform {

namespace {

constexpr i128 i128_max = (i128(0x7fffffffffffffffLL) << 64) | i128(0xffffffffffffffffULL);

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericError("quadform: 128-bit overflow");
    return r;
}

// floor(p / q) for q > 0
i128 floordiv(i128 p, i128 q) {
    i128 r = p / q;
    if (p % q != 0 && p < 0) --r;
    return r;
}

// floor(sqrt(v)) for v >= 0
i128 isqrt(i128 v) {
    if (v < 0) throw NumericError("quadform: isqrt of negative");
    if (v < 2) return v;
    i128 t = i128(std::sqrt((long double)v));
    while (t > 0 && t * t > v) --t;
    while ((t + 1) * (t + 1) <= v) ++t;
    return t;
}

// exact floor(x * scale) for a double threshold and positive integer scale
i128 floor_scaled(double x, long long scale) {
    if (x == 0.0) return 0;
    if (!std::isfinite(x)) throw NumericError("quadform: non-finite threshold");
    int e2 = 0;
    double f = std::frexp(x, &e2);
    auto mant = (long long)std::ldexp(f, 53); // exact: f has 53 significand bits
    int shift = e2 - 53;
    i128 num = checked_mul(i128(mant), i128(scale));
    if (shift >= 0) {
        for (int i = 0; i < shift; ++i) num = checked_mul(num, 2);
        return num;
    }
    if (-shift >= 127) return num < 0 ? -1 : 0;
    return num >> (-shift); // arithmetic shift == floor for negatives
}

i128 ceil_scaled(double x, long long scale) { return -floor_scaled(-x, scale); }

long long ll_gcd(long long a, long long b) { return std::gcd(a, b); }

} // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw ConfigError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = ll_gcd(std::abs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw ConfigError("Rational: non-finite value");
    if (x == 0.0) return {0, 1};
    int e2 = 0;
    double f = std::frexp(x, &e2);
    auto mant = (long long)std::ldexp(f, 53);
    int shift = e2 - 53;
    while (mant % 2 == 0 && shift < 0) {
        mant /= 2;
        ++shift;
    }
    if (shift > 0) {
        if (shift > 62 || std::abs(mant) > (0x7fffffffffffffffLL >> shift))
            throw ConfigError("Rational: value too large for exact conversion");
        return {mant << shift, 1};
    }
    if (-shift > 62) throw ConfigError("Rational: dyadic denominator exceeds 2^62");
    return {mant, 1LL << (-shift)};
}

QuadForm::QuadForm(Rational a, Rational b, Rational c) : exact_(true) {
    long long l = std::lcm(a.den, b.den);
    if (l > (1LL << 40) || std::lcm(l, c.den) > (1LL << 40))
        throw ConfigError("QuadForm: coefficient denominator lcm exceeds 2^40");
    scale_ = std::lcm(l, c.den);
    A_ = a.num * (scale_ / a.den);
    B_ = b.num * (scale_ / b.den);
    C_ = c.num * (scale_ / c.den);
    a_ = a.value();
    b_ = b.value();
    c_ = c.value();
    i128 d = checked_mul(i128(4) * A_, C_) - checked_mul(i128(B_), B_);
    disc_ = double((long double)d / ((long double)scale_ * (long double)scale_));
    if (A_ <= 0 || d <= 0) throw ConfigError("QuadForm: form must be positive definite");
}

QuadForm::QuadForm(double a, double b, double c)
    : exact_(false), a_(a), b_(b), c_(c), disc_(4.0 * a * c - b * b) {
    check_definite();
}

void QuadForm::check_definite() const {
    if (!(a_ > 0.0) || !(disc_ > 0.0))
        throw ConfigError("QuadForm: form must be positive definite");
}

double QuadForm::eval(long long m, long long n) const {
    if (exact_)
        return double((long double)eval_num(m, n) / (long double)scale_);
    return a_ * double(m) * double(m) + b_ * double(m) * double(n) +
           c_ * double(n) * double(n);
}

i128 QuadForm::eval_num(long long m, long long n) const {
    if (!exact_) throw ConfigError("QuadForm: eval_num requires exact mode");
    i128 mm = i128(m), nn = i128(n);
    return checked_mul(i128(A_), mm * mm) + checked_mul(i128(B_), mm * nn) +
           checked_mul(i128(C_), nn * nn);
}

namespace {

// exact row scan: #{(m,n) : A m^2 + B mn + C n^2 <= X}
long long count_scaled(const QuadForm& q, i128 X) {
    if (X < 0) return 0;
    i128 A = q.coeff_a(), B = q.coeff_b(), C = q.coeff_c();
    i128 D = 4 * A * C - B * B;
    i128 fourCX = checked_mul(4 * C, X);
    long long m_max = (long long)isqrt(floordiv(fourCX, D));
    long long total = 0;
    for (long long m = -m_max; m <= m_max; ++m) {
        i128 disc = fourCX - checked_mul(D, i128(m) * i128(m));
        if (disc < 0) continue;
        i128 t = isqrt(disc);
        i128 hi = floordiv(t - B * m, 2 * C);
        i128 lo = -floordiv(t + B * m, 2 * C);
        if (hi >= lo) total += (long long)(hi - lo + 1);
    }
    return total;
}

constexpr double guard_band = 0x1.0p-40;

// float row scan; `strict` selects Q < x over Q <= x
long long count_float(const QuadForm& q, double x, bool strict, bool* warning) {
    auto inside = [&](long long m, long long n) {
        double v = q.eval(m, n);
        return strict ? v < x : v <= x;
    };
    auto near_boundary = [&](long long m, long long n) {
        return std::abs(q.eval(m, n) - x) <= guard_band * std::max(1.0, std::abs(x));
    };
    double b = q.b(), c = q.c(), D = q.discriminant();
    if (x < 0) return 0;
    auto m_max = (long long)std::floor(std::sqrt(std::max(0.0, 4.0 * c * x / D))) + 1;
    long long total = 0;
    for (long long m = -m_max; m <= m_max; ++m) {
        double disc = 4.0 * c * x - D * double(m) * double(m);
        double s = disc > 0 ? std::sqrt(disc) : 0.0;
        auto lo = (long long)std::ceil((-b * double(m) - s) / (2.0 * c));
        auto hi = (long long)std::floor((-b * double(m) + s) / (2.0 * c));
        if (hi < lo) { // root formula may miss a grazing row
            long long v = llround(-b * double(m) / (2.0 * c));
            lo = v;
            hi = v - 1;
        }
        while (inside(m, lo - 1)) --lo;
        while (lo <= hi && !inside(m, lo)) ++lo;
        while (inside(m, hi + 1)) ++hi;
        while (hi >= lo && !inside(m, hi)) --hi;
        if (hi < lo) {
            long long v = llround(-b * double(m) / (2.0 * c));
            if (inside(m, v)) { // expand around the vertex
                lo = hi = v;
                while (inside(m, lo - 1)) --lo;
                while (inside(m, hi + 1)) ++hi;
            }
        }
        if (hi >= lo) {
            total += hi - lo + 1;
            if (warning && !*warning &&
                (near_boundary(m, lo) || near_boundary(m, hi) ||
                 near_boundary(m, lo - 1) || near_boundary(m, hi + 1)))
                *warning = true;
        }
    }
    return total;
}

} // namespace

long long count_leq(const QuadForm& q, double x, bool* warning) {
    if (warning) *warning = false;
    if (q.exact()) return count_scaled(q, floor_scaled(x, q.scale()));
    return count_float(q, x, false, warning);
}

long long count_less(const QuadForm& q, double x, bool* warning) {
    if (warning) *warning = false;
    if (q.exact()) return count_scaled(q, ceil_scaled(x, q.scale()) - 1);
    return count_float(q, x, true, warning);
}

double main_term(const QuadForm& q, double x) {
    if (x < 0) throw ConfigError("main_term: x must be nonnegative");
    return two_pi * x / std::sqrt(q.discriminant());
}

CountResult count_report(const QuadForm& q, double x) {
    CountResult r;
    r.x = x;
    r.count = count_leq(q, x, &r.boundary_warning);
    r.main_term = main_term(q, std::max(x, 0.0));
    r.remainder = double(r.count) - r.main_term;
    return r;
}

long long annulus_count(const QuadForm& q, double l) {
    return count_leq(q, l + 1.0) - count_less(q, l - 1.0);
}

std::vector<long long> annulus_scan(const QuadForm& q, long long l_max) {
    if (l_max < 0) throw ConfigError("annulus_scan: l_max must be nonnegative");
    if (!q.integral()) {
        std::vector<long long> g(size_t(l_max) + 1);
        for (long long l = 0; l <= l_max; ++l) g[size_t(l)] = annulus_count(q, double(l));
        return g;
    }
    // histogram of Q values over all points with Q <= l_max + 1
    i128 X = l_max + 1;
    i128 A = q.coeff_a(), B = q.coeff_b(), C = q.coeff_c();
    i128 D = 4 * A * C - B * B;
    i128 fourCX = checked_mul(4 * C, X);
    auto m_max = (long long)isqrt(floordiv(fourCX, D));
    std::vector<long long> h(size_t(l_max) + 2, 0);
    for (long long m = -m_max; m <= m_max; ++m) {
        i128 disc = fourCX - checked_mul(D, i128(m) * i128(m));
        if (disc < 0) continue;
        i128 t = isqrt(disc);
        auto hi = (long long)floordiv(t - B * m, 2 * C);
        auto lo = (long long)-floordiv(t + B * m, 2 * C);
        if (hi < lo) continue;
        i128 v = q.eval_num(m, lo);       // then v(n+1) = v(n) + B m + C (2n+1)
        i128 dv = B * m + C * (2 * lo + 1);
        for (long long n = lo; n <= hi; ++n) {
            ++h[size_t((long long)v)];
            v += dv;
            dv += 2 * C;
        }
    }
    std::vector<long long> g(size_t(l_max) + 1);
    for (long long l = 0; l <= l_max; ++l) {
        long long s = h[size_t(l)] + h[size_t(l) + 1];
        if (l >= 1) s += h[size_t(l) - 1];
        g[size_t(l)] = s;
    }
    return g;
}

FitReport fit_exponent_over_blocks(const std::function<double(double)>& f,
                                   double x_min, double x_max,
                                   int blocks_per_decade, int samples_per_block,
                                   std::uint64_t seed) {
    if (!(x_min > 0) || !(x_max > x_min))
        throw ConfigError("fit_exponent_over_blocks: need 0 < x_min < x_max");
    if (blocks_per_decade < 1 || samples_per_block < 1)
        throw ConfigError("fit_exponent_over_blocks: counts must be positive");
    int n_blocks = (int)std::ceil(std::log10(x_max / x_min) * blocks_per_decade - 1e-9);
    if (n_blocks < 3) throw ConfigError("fit_exponent_over_blocks: fewer than 3 blocks");
    double g = std::pow(x_max / x_min, 1.0 / n_blocks);

    FitReport rep;
    std::vector<double> abscissae, maxima;
    for (int bi = 0; bi < n_blocks; ++bi) {
        double lo = x_min * std::pow(g, bi), hi = lo * g;
        Rng rng(seed, std::uint64_t(bi));
        double block_max = 0, block_arg = lo;
        for (int si = 0; si < samples_per_block; ++si) {
            double x = lo * std::pow(hi / lo, rng.uniform());
            double v = std::abs(f(x));
            rep.points.push_back({x, v});
            if (v > block_max) {
                block_max = v;
                block_arg = x;
            }
        }
        if (!(block_max > 0))
            throw NumericError("fit_exponent_over_blocks: zero block maximum");
        abscissae.push_back(block_arg);
        maxima.push_back(block_max);
        rep.blocks.push_back({block_arg, block_max});
    }
    LinearFit fit = fit_loglog(abscissae, maxima);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.residual = fit.residual;
    return rep;
}

FitReport fit_remainder_exponent(const QuadForm& q, double x_min, double x_max,
                                 int blocks_per_decade, int samples_per_block,
                                 std::uint64_t seed) {
    return fit_exponent_over_blocks(
        [&](double x) { return count_report(q, x).remainder; }, x_min, x_max,
        blocks_per_decade, samples_per_block, seed);
}

FitReport fit_dyadic_block_exponent(const std::vector<long long>& values,
                                    long long l_min) {
    if (l_min < 0) throw ConfigError("fit_dyadic_block_exponent: l_min < 0");
    FitReport rep;
    std::vector<double> abscissae, maxima;
    for (i128 lo = std::max(l_min, 1LL); lo < i128(values.size()); lo *= 2) {
        i128 hi = std::min<i128>(2 * lo, i128(values.size())); // exclusive
        long long block_max = 0, block_arg = (long long)lo;
        for (i128 l = lo; l < hi; ++l)
            if (values[size_t((long long)l)] > block_max) {
                block_max = values[size_t((long long)l)];
                block_arg = (long long)l;
            }
        if (block_max <= 0) continue;
        abscissae.push_back(double(block_arg));
        maxima.push_back(double(block_max));
        rep.blocks.push_back({abscissae.back(), maxima.back()});
    }
    if (abscissae.size() < 3)
        throw ConfigError("fit_dyadic_block_exponent: fewer than 3 blocks");
    LinearFit fit = fit_loglog(abscissae, maxima);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.residual = fit.residual;
    return rep;
}

} // namespace toruslab::quadform
