#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bcmvn/bicomplex.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/hyperbolic.hpp"

namespace bcmvn {

using ComplexVector = std::vector<std::complex<double>>;
using BicomplexVector = std::vector<Bicomplex>;

inline void require_same_length(std::size_t a, std::size_t b, const char* where) {
    if (a != b)
        throw DimensionMismatch(std::string(where) + ": lengths " + std::to_string(a) +
                                " vs " + std::to_string(b));
}

// Idempotent slot views: X = slot1(X)*e1 + slot2(X)*e2 entrywise.
inline ComplexVector slot1(const BicomplexVector& x) {
    ComplexVector out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = idempotent_decompose(x[n]).l1;
    return out;
}

inline ComplexVector slot2(const BicomplexVector& x) {
    ComplexVector out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = idempotent_decompose(x[n]).l2;
    return out;
}

inline BicomplexVector compose_vector(const ComplexVector& x1, const ComplexVector& x2) {
    require_same_length(x1.size(), x2.size(), "compose_vector");
    BicomplexVector out(x1.size());
    for (std::size_t n = 0; n < x1.size(); ++n) out[n] = idempotent_compose(x1[n], x2[n]);
    return out;
}

// Hermitian inner product, conjugate-linear in the second argument.
inline std::complex<double> inner_product_complex(const ComplexVector& u,
                                                  const ComplexVector& v) {
    require_same_length(u.size(), v.size(), "inner_product_complex");
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < u.size(); ++n) acc += u[n] * std::conj(v[n]);
    return acc;
}

inline double vector_norm(const ComplexVector& v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return std::sqrt(acc);
}

inline double vector_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double c : v) acc += c * c;
    return std::sqrt(acc);
}

// D-valued inner product <X,Y> = <X1,Y1>e1 + <X2,Y2>e2. Reduces to the
// complex Hermitian product on vectors embedded with equal slots.
inline Bicomplex inner_product_D(const BicomplexVector& x, const BicomplexVector& y) {
    require_same_length(x.size(), y.size(), "inner_product_D");
    return idempotent_compose(inner_product_complex(slot1(x), slot1(y)),
                              inner_product_complex(slot2(x), slot2(y)));
}

// Plain bilinear weighted sum w0 + sum w_l * x_l (no conjugation) — the
// argument fed to the sector activation.
inline std::complex<double> weighted_sum_complex(std::complex<double> w0,
                                                 const ComplexVector& w,
                                                 const ComplexVector& x) {
    require_same_length(w.size(), x.size(), "weighted_sum_complex");
    std::complex<double> acc = w0;
    for (std::size_t n = 0; n < w.size(); ++n) acc += w[n] * x[n];
    return acc;
}

inline Bicomplex weighted_sum_bc(const Bicomplex& w0, const BicomplexVector& w,
                                 const BicomplexVector& x) {
    require_same_length(w.size(), x.size(), "weighted_sum_bc");
    IdempotentParts b = idempotent_decompose(w0);
    std::complex<double> acc1 = b.l1;
    std::complex<double> acc2 = b.l2;
    for (std::size_t n = 0; n < w.size(); ++n) {
        IdempotentParts pw = idempotent_decompose(w[n]);
        IdempotentParts px = idempotent_decompose(x[n]);
        acc1 += pw.l1 * px.l1;
        acc2 += pw.l2 * px.l2;
    }
    return idempotent_compose(acc1, acc2);
}

// Hyperbolic-valued vector modulus ||X|| = ||X1||e1 + ||X2||e2; lies in D+,
// zero iff X = 0.
inline Hyperbolic d_norm_vec(const BicomplexVector& x) {
    return Hyperbolic::from_st(vector_norm(slot1(x)), vector_norm(slot2(x)));
}

}  // namespace bcmvn
