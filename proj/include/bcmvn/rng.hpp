#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace bcmvn {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is pinned by the C++ standard, so equal seeds give byte-equal
// datasets on every conforming implementation. The real-valued mappings are
// written out explicitly (instead of <random> distributions) because the
// standard leaves distribution algorithms implementation-defined, which would
// break cross-toolchain reproducibility.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1): top 53 bits scaled by 2^-53.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; consumes two uniforms per call.
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]: keeps log finite
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
    }

    // Standard complex normal (independent N(0,1) real and imaginary parts).
    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

    // Uniform phase on the unit circle.
    std::complex<double> unit_complex() { return std::polar(1.0, uniform(0.0, two_pi())); }

    static constexpr double two_pi() { return 6.283185307179586476925286766559005768; }

  private:
    std::mt19937_64 engine_;
};

// Stable 64-bit sub-seed: first output of an mt19937_64 engine seeded with
// seed XOR (index+1)*golden-gamma. Used to give the two idempotent slots of a
// bicomplex generator (and per-trial experiment fan-out) independent,
// reproducible streams.
inline std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 mixer(seed ^ ((index + 1) * 0x9E3779B97F4A7C15ull));
    return mixer();
}

}  // namespace bcmvn
