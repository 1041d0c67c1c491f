#include "toruslab/dft.hpp"

#include <unsupported/Eigen/FFT>

namespace toruslab::dft {

CVec forward(const CVec& x) {
    Eigen::FFT<double> fft;
    CVec out(x.size());
    fft.fwd(out, x);
    return out;
}

CVec inverse(const CVec& x) {
    Eigen::FFT<double> fft;
    CVec out(x.size());
    fft.inv(out, x);
    return out;
}

namespace {

template <typename Op> CMat transform2(const CMat& x, Op op) {
    Eigen::FFT<double> fft;
    CMat tmp(x.rows(), x.cols());
    CVec in(x.rows()), out(x.rows());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        in = x.col(c);
        op(fft, in, out);
        tmp.col(c) = out;
    }
    CMat res(x.rows(), x.cols());
    CVec rin(x.cols()), rout(x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        rin = tmp.row(r).transpose();
        op(fft, rin, rout);
        res.row(r) = rout.transpose();
    }
    return res;
}

} // namespace

CMat forward2(const CMat& x) {
    return transform2(x, [](Eigen::FFT<double>& fft, const CVec& in, CVec& out) {
        fft.fwd(out, in);
    });
}

CMat inverse2(const CMat& x) {
    return transform2(x, [](Eigen::FFT<double>& fft, const CVec& in, CVec& out) {
        fft.inv(out, in);
    });
}

} // namespace toruslab::dft
