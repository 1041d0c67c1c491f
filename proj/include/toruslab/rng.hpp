#pragma once

// Deterministic counter-based randomness.  Every random quantity in the lab
// derives from a single user seed via (seed, stream) -> generator, so runs
// are reproducible across platforms and standard-library versions (std::
// distributions are implementation-defined, hence the explicit mappings).
//
// The generator is splitmix64: state walks a Weyl sequence, outputs are a
// finalizing hash of the state.  Stream k starts 2^32 Weyl steps apart.

#include <cstdint>

#include "toruslab/common.hpp"

namespace toruslab {

class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(seed + (stream + 1) * (weyl_ << 32)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += weyl_);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // unit-modulus complex with uniform phase
    Complex phase() {
        double t = two_pi * uniform();
        return {std::cos(t), std::sin(t)};
    }

    // standard normal via Box-Muller
    double normal() {
        double u = 0.0;
        while (u == 0.0) u = uniform();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
    }

  private:
    static constexpr std::uint64_t weyl_ = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

} // namespace toruslab
