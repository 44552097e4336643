#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bcmvn/errors.hpp"
#include "bcmvn/hyperbolic.hpp"

namespace bcmvn {

// Bicomplex number Z = z1 + j*z2 with commuting imaginary units i, j and
// hyperbolic unit k = ij (k*k = +1). Cartesian coordinates are
// Z = x1 + x2*i + x3*j + x4*k, i.e. z1 = x1 + i*x2 and z2 = x3 + i*x4.
struct Bicomplex {
    std::complex<double> z1{0.0, 0.0};
    std::complex<double> z2{0.0, 0.0};

    Bicomplex() = default;
    Bicomplex(std::complex<double> a, std::complex<double> b) : z1(a), z2(b) {}

    static Bicomplex from_cartesian(double x1, double x2, double x3, double x4) {
        return {{x1, x2}, {x3, x4}};
    }
    static Bicomplex from_complex(std::complex<double> c) { return {c, {0.0, 0.0}}; }
    // Embeds x + k*y as x + ij*y.
    static Bicomplex from_hyperbolic(const Hyperbolic& h) {
        return {{h.x, 0.0}, {0.0, h.y}};
    }

    double x1() const { return z1.real(); }
    double x2() const { return z1.imag(); }
    double x3() const { return z2.real(); }
    double x4() const { return z2.imag(); }

    friend bool operator==(const Bicomplex& a, const Bicomplex& b) {
        return a.z1 == b.z1 && a.z2 == b.z2;
    }
    friend bool operator!=(const Bicomplex& a, const Bicomplex& b) { return !(a == b); }
};

// Idempotent components (lambda1, lambda2) in Z = lambda1*e1 + lambda2*e2,
// where e1 = (1+k)/2 and e2 = (1-k)/2 satisfy e1*e2 = 0 and e1+e2 = 1.
struct IdempotentParts {
    std::complex<double> l1;
    std::complex<double> l2;
};

inline IdempotentParts idempotent_decompose(const Bicomplex& z) {
    const std::complex<double> i{0.0, 1.0};
    return {z.z1 - i * z.z2, z.z1 + i * z.z2};
}

inline Bicomplex idempotent_compose(std::complex<double> l1, std::complex<double> l2) {
    const std::complex<double> i{0.0, 1.0};
    return {(l1 + l2) / 2.0, i * (l1 - l2) / 2.0};
}

inline Bicomplex bc_add(const Bicomplex& a, const Bicomplex& b) {
    return {a.z1 + b.z1, a.z2 + b.z2};
}

inline Bicomplex bc_sub(const Bicomplex& a, const Bicomplex& b) {
    return {a.z1 - b.z1, a.z2 - b.z2};
}

inline Bicomplex bc_scale(double c, const Bicomplex& a) { return {c * a.z1, c * a.z2}; }

// Product, routed through the idempotent representation where it is
// componentwise.
inline Bicomplex bc_mul(const Bicomplex& a, const Bicomplex& b) {
    IdempotentParts pa = idempotent_decompose(a);
    IdempotentParts pb = idempotent_decompose(b);
    return idempotent_compose(pa.l1 * pb.l1, pa.l2 * pb.l2);
}

// Euclidean norm sqrt(|z1|^2 + |z2|^2); also equals
// sqrt((|lambda1|^2 + |lambda2|^2) / 2).
inline double euclidean_norm(const Bicomplex& z) {
    return std::sqrt(std::norm(z.z1) + std::norm(z.z2));
}

// Zero divisors are exactly the elements with a vanishing idempotent
// component; "vanishing" is judged relative to the element's own scale.
inline bool is_zero_divisor(const Bicomplex& z) {
    IdempotentParts p = idempotent_decompose(z);
    double tol = 1e-14 * (1.0 + euclidean_norm(z));
    return std::abs(p.l1) <= tol || std::abs(p.l2) <= tol;
}

inline Bicomplex bc_inverse(const Bicomplex& z) {
    IdempotentParts p = idempotent_decompose(z);
    double tol = 1e-14 * (1.0 + euclidean_norm(z));
    if (std::abs(p.l1) <= tol || std::abs(p.l2) <= tol)
        throw ZeroDivisor("bc_inverse: idempotent component vanishes (zero divisor)");
    return idempotent_compose(1.0 / p.l1, 1.0 / p.l2);
}

// The three conjugations. In idempotent coordinates:
//   bar    swaps the slots and conjugates them,
//   dagger swaps the slots,
//   star   conjugates each slot in place (so it fixes e1, e2 and all of D).
inline Bicomplex conj_bar(const Bicomplex& z) { return {std::conj(z.z1), std::conj(z.z2)}; }

inline Bicomplex conj_dagger(const Bicomplex& z) { return {z.z1, -z.z2}; }

inline Bicomplex conj_star(const Bicomplex& z) { return {std::conj(z.z1), -std::conj(z.z2)}; }

// Hyperbolic-valued norm |lambda1|*e1 + |lambda2|*e2. Multiplicative and
// D+-valued, unlike the Euclidean norm (which is only sub-multiplicative up
// to sqrt(2)).
inline Hyperbolic hyperbolic_norm(const Bicomplex& z) {
    IdempotentParts p = idempotent_decompose(z);
    return Hyperbolic::from_st(std::abs(p.l1), std::abs(p.l2));
}

inline const Bicomplex bc_one = Bicomplex::from_cartesian(1, 0, 0, 0);
inline const Bicomplex bc_i = Bicomplex::from_cartesian(0, 1, 0, 0);
inline const Bicomplex bc_j = Bicomplex::from_cartesian(0, 0, 1, 0);
inline const Bicomplex bc_k = Bicomplex::from_cartesian(0, 0, 0, 1);
inline const Bicomplex bc_e1 = Bicomplex::from_cartesian(0.5, 0, 0, 0.5);
inline const Bicomplex bc_e2 = Bicomplex::from_cartesian(0.5, 0, 0, -0.5);

// Canonical text form "x1+x2i+x3j+x4k" with 17-significant-digit components.
inline std::string format_bicomplex(const Bicomplex& z) {
    char buf[32];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out = std::signbit(z.x1()) ? "-" + fmt(-z.x1()) : fmt(z.x1());
    const double parts[3] = {z.x2(), z.x3(), z.x4()};
    const char units[3] = {'i', 'j', 'k'};
    for (int n = 0; n < 3; ++n) {
        double v = parts[n];
        out += std::signbit(v) ? "-" + fmt(-v) : "+" + fmt(v);
        out += units[n];
    }
    return out;
}

// Parses the text form. Terms may appear in any order with implicit unit
// coefficients ("k", "-i+1", "5k+4j+3i+2"); repeated units accumulate.
inline Bicomplex parse_bicomplex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("parse_bicomplex: empty input");

    double comp[4] = {0, 0, 0, 0};
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = pos + 1;  // the term's leading +/- belongs to it
        while (end < s.size()) {
            char c = s[end];
            if ((c == '+' || c == '-') && s[end - 1] != 'e' && s[end - 1] != 'E') break;
            ++end;
        }
        std::string term = s.substr(pos, end - pos);
        pos = end;

        int unit = 0;  // 0 = real part, 1..3 = i, j, k
        char last = term.back();
        if (last == 'i') unit = 1;
        else if (last == 'j') unit = 2;
        else if (last == 'k') unit = 3;
        if (unit != 0) term.pop_back();

        double value;
        if (term.empty() || term == "+") value = 1.0;
        else if (term == "-") value = -1.0;
        else {
            char* parse_end = nullptr;
            value = std::strtod(term.c_str(), &parse_end);
            if (parse_end != term.c_str() + term.size())
                throw ParseError("parse_bicomplex: bad term '" + term + "' in '" + text + "'");
        }
        if (unit == 0 && (term.empty() || term == "+" || term == "-"))
            throw ParseError("parse_bicomplex: bare sign in '" + text + "'");
        comp[unit] += value;
    }
    return Bicomplex::from_cartesian(comp[0], comp[1], comp[2], comp[3]);
}

}  // namespace bcmvn
