#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "bcmvn/bicomplex.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/vectors.hpp"

namespace bcmvn {

inline constexpr double two_pi_const = 6.283185307179586476925286766559005768;

// Configuration of the k-sector activation: the plane is split into k equal
// angular sectors [2*pi*l/k, 2*pi*(l+1)/k), and epsilon = exp(2*pi*i/k).
struct SectorConfig {
    int k = 2;
    double boundary_tolerance = 0.0;  // |z| at or below this raises ZeroArgument

    explicit SectorConfig(int sectors = 2, double tol = 0.0)
        : k(sectors), boundary_tolerance(tol) {}

    std::complex<double> epsilon() const { return std::polar(1.0, two_pi_const / k); }
};

// k-th root of unity epsilon^l. Shares polar(1, 2*pi*l/k) with the boundary
// rays in sector_index, which is what makes re-bucketing P's outputs exact.
inline std::complex<double> unit_root(int l, int k) {
    return std::polar(1.0, two_pi_const * l / k);
}

// Principal argument remapped to [0, 2*pi).
inline double arg_two_pi(std::complex<double> z) {
    double a = std::arg(z);
    if (a < 0.0) a += two_pi_const;
    return a;
}

// Sector index l with 2*pi*l/k <= Arg(z) < 2*pi*(l+1)/k, lower boundary
// inclusive. The floor estimate can land one sector low when Arg(z) sits
// within an ulp of a boundary (e.g. for P's own outputs), so it is refined by
// exact cross-product comparisons against the representable boundary rays:
// a point bitwise on a ray has cross product exactly zero and is bucketed
// into that ray's sector.
inline int sector_index(std::complex<double> z, const SectorConfig& cfg) {
    if (std::abs(z) <= cfg.boundary_tolerance)
        throw ZeroArgument("sector_index: activation undefined at the origin (|z| = " +
                           std::to_string(std::abs(z)) + ")");
    const int k = cfg.k;
    double a = arg_two_pi(z);
    int l = static_cast<int>(std::floor(a * k / two_pi_const));
    if (l < 0) l = 0;
    if (l >= k) l = k - 1;
    auto at_or_after_ray = [&](int m) {
        std::complex<double> r = unit_root(m, k);
        double cross = r.real() * z.imag() - r.imag() * z.real();
        if (cross != 0.0) return cross > 0.0;
        return r.real() * z.real() + r.imag() * z.imag() > 0.0;
    };
    while (l + 1 < k && at_or_after_ray(l + 1)) ++l;
    while (l > 0 && !at_or_after_ray(l)) --l;
    return l;
}

// Complex activation P(z) = epsilon^sector_index(z): projects z onto the
// k-th root of unity of its sector.
inline std::complex<double> activation_P(std::complex<double> z, const SectorConfig& cfg) {
    return unit_root(sector_index(z, cfg), cfg.k);
}

// Bicomplex activation: P applied to each idempotent slot. Reports which
// slot was degenerate on failure.
inline Bicomplex activation_BC(const Bicomplex& z, const SectorConfig& cfg) {
    IdempotentParts p = idempotent_decompose(z);
    if (std::abs(p.l1) <= cfg.boundary_tolerance)
        throw ZeroArgument("activation_BC: idempotent slot 1 vanishes", 1);
    if (std::abs(p.l2) <= cfg.boundary_tolerance)
        throw ZeroArgument("activation_BC: idempotent slot 2 vanishes", 2);
    return idempotent_compose(activation_P(p.l1, cfg), activation_P(p.l2, cfg));
}

inline std::complex<double> threshold_eval_complex(std::complex<double> w0,
                                                   const ComplexVector& w,
                                                   const ComplexVector& x,
                                                   const SectorConfig& cfg) {
    return activation_P(weighted_sum_complex(w0, w, x), cfg);
}

inline Bicomplex threshold_eval_bc(const Bicomplex& w0, const BicomplexVector& w,
                                   const BicomplexVector& x, const SectorConfig& cfg) {
    return activation_BC(weighted_sum_bc(w0, w, x), cfg);
}

// Output of the weight-perturbation construction: replacing w0 by the
// mid-sector unit value w0' makes the classification of every sample in the
// given set invariant under any weights with all |w_l| < delta.
struct PerturbationBound {
    std::complex<double> w0_prime;
    double delta;
};

// Mid-sector construction: w0' = epsilon^(t + 1/2) where t = sector(w0), and
// delta = sin(pi/k) / (n*M) with M the largest entry modulus over the sample.
// An empty-signal sample (M = 0) cannot move the weighted sum at all, so
// delta is unbounded (+infinity).
inline PerturbationBound perturbation_bound_complex(std::complex<double> w0,
                                                    const std::vector<ComplexVector>& sample,
                                                    const SectorConfig& cfg) {
    int t = sector_index(w0, cfg);  // ZeroArgument for w0 = 0
    std::complex<double> w0_prime =
        std::polar(1.0, two_pi_const * (t + 0.5) / cfg.k);
    double m_max = 0.0;
    std::size_t n = 0;
    for (const auto& x : sample) {
        n = std::max(n, x.size());
        for (const auto& entry : x) m_max = std::max(m_max, std::abs(entry));
    }
    double delta;
    if (m_max == 0.0 || n == 0)
        delta = std::numeric_limits<double>::infinity();
    else
        delta = std::sin(two_pi_const / 2.0 / cfg.k) / (static_cast<double>(n) * m_max);
    return {w0_prime, delta};
}

struct PerturbationBoundBC {
    Bicomplex w0_prime;
    double delta;   // min(delta1, delta2)
    double delta1;
    double delta2;
};

// Slotwise application of the complex construction; the usable radius is the
// smaller of the two slot radii.
inline PerturbationBoundBC perturbation_bound_bc(const Bicomplex& w0,
                                                 const std::vector<BicomplexVector>& sample,
                                                 const SectorConfig& cfg) {
    IdempotentParts p = idempotent_decompose(w0);
    if (std::abs(p.l1) <= cfg.boundary_tolerance)
        throw ZeroArgument("perturbation_bound_bc: w0 slot 1 vanishes", 1);
    if (std::abs(p.l2) <= cfg.boundary_tolerance)
        throw ZeroArgument("perturbation_bound_bc: w0 slot 2 vanishes", 2);
    std::vector<ComplexVector> sample1, sample2;
    sample1.reserve(sample.size());
    sample2.reserve(sample.size());
    for (const auto& x : sample) {
        sample1.push_back(slot1(x));
        sample2.push_back(slot2(x));
    }
    PerturbationBound b1 = perturbation_bound_complex(p.l1, sample1, cfg);
    PerturbationBound b2 = perturbation_bound_complex(p.l2, sample2, cfg);
    return {idempotent_compose(b1.w0_prime, b2.w0_prime), std::min(b1.delta, b2.delta),
            b1.delta, b2.delta};
}

}  // namespace bcmvn
