#include "toruslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toruslab/dft.hpp"

namespace toruslab::spectral {

double l2_norm(const Field& u) { return two_pi * u.coeffs.norm(); }

Field free_flow(const Field& u, double t) {
    Field out = u;
    if (t == 0.0) return out;
    const auto& g = u.grid;
    quadform::QuadForm q = g.geometry.form();
    for (int k1 = 0; k1 < g.M; ++k1) {
        for (int k2 = 0; k2 < g.M; ++k2) {
            double phase = -t * q.eval(g.mode_of(k1), g.mode_of(k2));
            out.coeffs(k1, k2) *= Complex(std::cos(phase), std::sin(phase));
        }
    }
    return out;
}

CMat synthesize(const Field& u, int oversample) {
    if (oversample < 1) throw ConfigError("synthesize: oversample must be >= 1");
    const int M = u.grid.M;
    const int P = oversample * M;
    CMat padded = CMat::Zero(P, P);
    for (int k1 = 0; k1 < M; ++k1) {
        for (int k2 = 0; k2 < M; ++k2) {
            int m1 = u.grid.mode_of(k1), m2 = u.grid.mode_of(k2);
            padded(m1 >= 0 ? m1 : m1 + P, m2 >= 0 ? m2 : m2 + P) = u.coeffs(k1, k2);
        }
    }
    return double(P) * double(P) * dft::inverse2(padded);
}

Field analyze(const CMat& values, const FourierGrid& grid) {
    const int P = int(values.rows());
    if (values.cols() != P) throw ConfigError("analyze: values must be square");
    if (P < grid.M)
        throw AliasingError("analyze: value grid smaller than target mode grid");
    CMat hat = dft::forward2(values) / (double(P) * double(P));
    Field out(grid);
    for (int k1 = 0; k1 < grid.M; ++k1) {
        for (int k2 = 0; k2 < grid.M; ++k2) {
            int m1 = grid.mode_of(k1), m2 = grid.mode_of(k2);
            out.coeffs(k1, k2) = hat(m1 >= 0 ? m1 : m1 + P, m2 >= 0 ? m2 : m2 + P);
        }
    }
    return out;
}

double sobolev_norm(const Field& u, double s, SobolevConvention convention) {
    const auto& g = u.grid;
    quadform::QuadForm q = g.geometry.form();
    double acc = 0.0;
    for (int k1 = 0; k1 < g.M; ++k1) {
        for (int k2 = 0; k2 < g.M; ++k2) {
            int m1 = g.mode_of(k1), m2 = g.mode_of(k2);
            double w = convention == SobolevConvention::bracket
                           ? std::pow(bracket(std::abs(m1) + std::abs(m2)), 2.0 * s)
                           : std::pow(bracket(q.eval(m1, m2)), s);
            acc += w * std::norm(u.coeffs(k1, k2));
        }
    }
    return two_pi * std::sqrt(acc);
}

std::vector<EigenLevel> eigen_levels(const FourierGrid& grid, double tol) {
    if (tol < 0) throw ConfigError("eigen_levels: tol must be nonnegative");
    quadform::QuadForm q = grid.geometry.form();
    struct Entry {
        double mu;
        int m1, m2;
    };
    std::vector<Entry> entries;
    entries.reserve(size_t(grid.M) * size_t(grid.M));
    for (int k1 = 0; k1 < grid.M; ++k1)
        for (int k2 = 0; k2 < grid.M; ++k2) {
            int m1 = grid.mode_of(k1), m2 = grid.mode_of(k2);
            entries.push_back({q.eval(m1, m2), m1, m2});
        }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.mu != b.mu) return a.mu < b.mu;
        if (a.m1 != b.m1) return a.m1 < b.m1;
        return a.m2 < b.m2;
    });
    std::vector<EigenLevel> levels;
    for (const Entry& e : entries) {
        if (levels.empty() || e.mu - levels.back().mu > tol) {
            levels.push_back({e.mu, {}}); // anchor μ at the smallest member
        }
        levels.back().members.emplace_back(e.m1, e.m2);
    }
    return levels;
}

Field eigenspace_project(const Field& u, double mu, double tol) {
    if (tol < 0) throw ConfigError("eigenspace_project: tol must be nonnegative");
    Field out = u;
    const auto& g = u.grid;
    quadform::QuadForm q = g.geometry.form();
    for (int k1 = 0; k1 < g.M; ++k1)
        for (int k2 = 0; k2 < g.M; ++k2)
            if (std::abs(q.eval(g.mode_of(k1), g.mode_of(k2)) - mu) > tol)
                out.coeffs(k1, k2) = Complex(0, 0);
    return out;
}

Field band_project(const Field& u, double N, BandOperator op) {
    if (!(N >= 1)) throw ConfigError("band_project: N must be >= 1");
    Field out = u;
    const auto& g = u.grid;
    quadform::QuadForm q = g.geometry.form();
    for (int k1 = 0; k1 < g.M; ++k1)
        for (int k2 = 0; k2 < g.M; ++k2) {
            double m1 = g.mode_of(k1), m2 = g.mode_of(k2);
            bool keep;
            if (op == BandOperator::ball) {
                keep = m1 * m1 + m2 * m2 <= N * N;
            } else {
                double root = std::sqrt(q.eval(g.mode_of(k1), g.mode_of(k2)));
                keep = root >= N && root < 2.0 * N;
            }
            if (!keep) out.coeffs(k1, k2) = Complex(0, 0);
        }
    return out;
}

} // namespace toruslab::spectral
