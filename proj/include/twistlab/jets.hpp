// Truncated complex power series ("jets") around a fixed point.
//
// A Jet of order n stores coefficients c[0..n] of sum_k c[k] (z - z0)^k.
// Arithmetic keeps exact Taylor coefficients through order n, which gives
// closed-form derivatives of analytic expressions without finite differences:
// f^{(k)}(z0) = k! * c[k].
#pragma once

#include <complex>
#include <vector>

#include "errors.hpp"

namespace twistlab {

struct Jet {
    std::vector<std::complex<double>> c; // c[k] multiplies (z - z0)^k

    Jet() = default;
    explicit Jet(std::size_t order) : c(order + 1, std::complex<double>(0.0, 0.0)) {}

    static Jet constant(std::complex<double> v, std::size_t order) {
        Jet j(order);
        j.c[0] = v;
        return j;
    }

    // The identity z expanded at z0: z0 + (z - z0).
    static Jet variable(std::complex<double> z0, std::size_t order) {
        Jet j(order);
        j.c[0] = z0;
        if (order >= 1) j.c[1] = std::complex<double>(1.0, 0.0);
        return j;
    }

    std::size_t order() const { return c.size() - 1; }
};

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

inline Jet operator*(std::complex<double> s, const Jet& a) {
    Jet r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) r.c[k] = s * a.c[k];
    return r;
}

inline Jet operator+(const Jet& a, std::complex<double> s) {
    Jet r = a;
    r.c[0] += s;
    return r;
}

inline Jet operator-(const Jet& a, std::complex<double> s) {
    Jet r = a;
    r.c[0] -= s;
    return r;
}

// Cauchy product truncated at the common order.
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) {
        std::complex<double> s(0.0, 0.0);
        for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

// a / b, requires b.c[0] != 0.
inline Jet operator/(const Jet& a, const Jet& b) {
    if (std::abs(b.c[0]) < 1e-300) throw NumericalError("jet division by series with vanishing constant term");
    Jet r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) {
        std::complex<double> s = a.c[k];
        for (std::size_t j = 0; j < k; ++j) s -= r.c[j] * b.c[k - j];
        r.c[k] = s / b.c[0];
    }
    return r;
}

// exp(a): b0 = exp(a0), k b_k = sum_{j=1..k} j a_j b_{k-j}.
inline Jet jet_exp(const Jet& a) {
    Jet r(a.order());
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= a.order(); ++k) {
        std::complex<double> s(0.0, 0.0);
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
        r.c[k] = s / static_cast<double>(k);
    }
    return r;
}

// log(a), requires a.c[0] != 0 (principal branch at the constant term).
inline Jet jet_log(const Jet& a) {
    if (std::abs(a.c[0]) < 1e-300) throw NumericalError("jet log of series with vanishing constant term");
    Jet r(a.order());
    r.c[0] = std::log(a.c[0]);
    for (std::size_t k = 1; k <= a.order(); ++k) {
        std::complex<double> s = a.c[k];
        for (std::size_t j = 1; j < k; ++j)
            s -= (static_cast<double>(j) / static_cast<double>(k)) * r.c[j] * a.c[k - j];
        r.c[k] = s / a.c[0];
    }
    return r;
}

// a^w for complex exponent, via exp(w log a).
inline Jet jet_pow(const Jet& a, std::complex<double> w) {
    return jet_exp(w * jet_log(a));
}

// Integer power by repeated multiplication (valid for a.c[0] == 0 too).
inline Jet jet_ipow(const Jet& a, unsigned n) {
    Jet r = Jet::constant(std::complex<double>(1.0, 0.0), a.order());
    for (unsigned i = 0; i < n; ++i) r = r * a;
    return r;
}

// Evaluate a polynomial sum_k coeff[k] * t^k at a jet argument.
inline Jet jet_poly(const std::vector<std::complex<double>>& coeff, const Jet& t) {
    Jet r = Jet::constant(std::complex<double>(0.0, 0.0), t.order());
    for (std::size_t k = coeff.size(); k-- > 0;) {
        r = r * t;
        r.c[0] += coeff[k];
    }
    return r;
}

} // namespace twistlab
