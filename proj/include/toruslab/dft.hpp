#pragma once

// Thin discrete-Fourier-transform layer.  Conventions match the classical
// unnormalized DFT: forward X[k] = Σ_j x[j] e^{−2πi jk/N}, inverse carries
// the 1/N factor, so inverse(forward(x)) == x.  The 2-D versions transform
// rows and columns separately (the kernels are separable).

#include "toruslab/common.hpp"

namespace toruslab::dft {

CVec forward(const CVec& x);
CVec inverse(const CVec& x);
CMat forward2(const CMat& x);
CMat inverse2(const CMat& x);

} // namespace toruslab::dft
