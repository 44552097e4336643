#pragma once

#include <cmath>

namespace bcmvn {

// Hyperbolic (split-complex) number x + k*y with k*k = +1. The pair
// (s, t) = (x + y, x - y) gives the idempotent coordinates: x + k*y =
// s*e1 + t*e2 with e1 = (1+k)/2, e2 = (1-k)/2, and multiplication is
// componentwise in (s, t).
struct Hyperbolic {
    double x = 0.0;
    double y = 0.0;

    constexpr Hyperbolic() = default;
    constexpr Hyperbolic(double x_, double y_) : x(x_), y(y_) {}

    constexpr double s() const { return x + y; }
    constexpr double t() const { return x - y; }

    static constexpr Hyperbolic from_st(double s, double t) {
        return Hyperbolic{(s + t) / 2.0, (s - t) / 2.0};
    }

    friend constexpr bool operator==(const Hyperbolic& a, const Hyperbolic& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend constexpr bool operator!=(const Hyperbolic& a, const Hyperbolic& b) {
        return !(a == b);
    }
};

constexpr Hyperbolic hyp_add(const Hyperbolic& a, const Hyperbolic& b) {
    return {a.x + b.x, a.y + b.y};
}

constexpr Hyperbolic hyp_sub(const Hyperbolic& a, const Hyperbolic& b) {
    return {a.x - b.x, a.y - b.y};
}

// Product, routed through the idempotent coordinates where it is
// componentwise.
constexpr Hyperbolic hyp_mul(const Hyperbolic& a, const Hyperbolic& b) {
    return Hyperbolic::from_st(a.s() * b.s(), a.t() * b.t());
}

// Diamond conjugation: x + k*y -> x - k*y (swaps the idempotent slots).
constexpr Hyperbolic hyp_conj_diamond(const Hyperbolic& a) { return {a.x, -a.y}; }

// Squared hyperbolic modulus |z|^2_D = z * diamond(z) = x^2 - y^2 = s*t.
constexpr double hyp_modulus_sq(const Hyperbolic& a) { return a.x * a.x - a.y * a.y; }

// Membership in the non-negative cone D+ = { s >= 0 and t >= 0 }. Exact
// comparisons: the induced partial order must satisfy reflexivity and
// antisymmetry, which tolerance slack would destroy.
constexpr bool hyp_in_Dplus(const Hyperbolic& a) { return a.s() >= 0.0 && a.t() >= 0.0; }

// Partial order a <= b iff b - a lies in D+. (e1 and e2 are incomparable.)
constexpr bool hyp_leq(const Hyperbolic& a, const Hyperbolic& b) {
    return hyp_in_Dplus(hyp_sub(b, a));
}

inline const Hyperbolic hyp_e1 = Hyperbolic::from_st(1.0, 0.0);  // (1+k)/2
inline const Hyperbolic hyp_e2 = Hyperbolic::from_st(0.0, 1.0);  // (1-k)/2

}  // namespace bcmvn
