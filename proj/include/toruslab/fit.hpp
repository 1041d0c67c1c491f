#pragma once

// Least-squares line fits used by all exponent measurements.

#include <vector>

#include <Eigen/Dense>

#include "toruslab/common.hpp"

namespace toruslab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms of fit residuals
};

inline LinearFit fit_linear(const RVec& x, const RVec& y) {
    if (x.size() != y.size()) throw ConfigError("fit_linear: size mismatch");
    if (x.size() < 2) throw ConfigError("fit_linear: need at least 2 points");
    Eigen::MatrixXd A(x.size(), 2);
    A.col(0) = x;
    A.col(1).setOnes();
    Eigen::Vector2d sol = A.colPivHouseholderQr().solve(y);
    LinearFit f;
    f.slope = sol[0];
    f.intercept = sol[1];
    f.residual = std::sqrt((A * sol - y).squaredNorm() / double(y.size()));
    return f;
}

// slope of log y against log x; x, y must be positive
inline LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("fit_loglog: size mismatch");
    RVec lx(x.size()), ly(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw NumericError("fit_loglog: nonpositive sample");
        lx[long(i)] = std::log(x[i]);
        ly[long(i)] = std::log(y[i]);
    }
    return fit_linear(lx, ly);
}

} // namespace toruslab
