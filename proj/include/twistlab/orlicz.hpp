// Orlicz gauges and the Luxemburg norm.
//
// A gauge is handed around as a pair of callables (phi, phi^{-1}) together
// with a doubling witness and an extension note.  Gauges whose defining
// formula is only trustworthy on part of the axis (twist0/twist1 near value 0,
// exp_alpha below argument 1) are continued by the affine tangent at the
// cutoff; the note records where the formula ends and the tangent begins.
#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "sparse_vector.hpp"

namespace twistlab {

struct OrliczFunction {
    std::string name;   // "power", "exp_alpha", "twist0", "twist1", or custom
    double param = 0.0; // p, alpha, or r depending on the family

    std::function<double(double)> phi;     // the gauge, increasing, phi(0) = 0
    std::function<double(double)> inverse; // right inverse of phi

    double delta2_constant = 0.0; // phi(2t) <= C phi(t) for t in [delta2_lo, delta2_hi]
    double delta2_lo = 0.0;
    double delta2_hi = 0.0;

    std::string extension_note; // empty when the formula holds on the whole axis

    bool operator==(const OrliczFunction& o) const {
        return name == o.name && param == o.param;
    }
};

namespace detail {

inline double measure_delta2(const std::function<double(double)>& phi, double lo, double hi) {
    double c = 1.0;
    for (int k = 0; k <= 64; ++k) {
        double t = lo * std::pow(hi / lo, k / 64.0);
        double denom = phi(t);
        if (denom > 0.0) c = std::max(c, phi(2.0 * t) / denom);
    }
    return c;
}

} // namespace detail

// phi(t) = t^p, p >= 1.  Luxemburg norm of the gauge equals the l_p norm.
inline OrliczFunction orlicz_power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("orlicz power exponent must satisfy p >= 1");
    OrliczFunction f;
    f.name = "power";
    f.param = p;
    f.phi = [p](double t) { return std::pow(t, p); };
    f.inverse = [p](double u) { return std::pow(u, 1.0 / p); };
    f.delta2_constant = std::pow(2.0, p);
    f.delta2_lo = 0.0;
    f.delta2_hi = 1.0;
    return f;
}

// phi(t) = exp(-t^{-alpha}) for t <= 1, affine tangent beyond.
// Without the tangent the gauge stays below 1 and single atoms would get
// norm zero; the tangent only matters for coordinates larger than the norm.
// phi is not convex, so the gauge is a quasi-norm (triangle constant stays
// below 2 empirically); lambda growth along flat vectors is still exact.
inline OrliczFunction orlicz_exp_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("exp_alpha index must be positive");
    OrliczFunction f;
    f.name = "exp_alpha";
    f.param = alpha;
    const double cap_value = std::exp(-1.0);          // phi(1)
    const double cap_slope = alpha * std::exp(-1.0);  // phi'(1)
    f.phi = [alpha, cap_value, cap_slope](double t) {
        if (t <= 0.0) return 0.0;
        if (t <= 1.0) return std::exp(-std::pow(t, -alpha));
        return cap_value + cap_slope * (t - 1.0);
    };
    f.inverse = [alpha, cap_value, cap_slope](double u) {
        if (u <= 0.0) return 0.0;
        if (u <= cap_value) return std::pow(-std::log(u), -1.0 / alpha);
        return 1.0 + (u - cap_value) / cap_slope;
    };
    f.delta2_lo = 0.5;
    f.delta2_hi = 1.0;
    f.delta2_constant = detail::measure_delta2(f.phi, f.delta2_lo, f.delta2_hi);
    f.extension_note = "formula exp(-t^-alpha) for t <= 1; affine tangent beyond";
    return f;
}

namespace detail {

// Shared machinery for the twist pair.  With v = -log(value),
//   phi0^{-1}(value) = exp(-(v/2 + v^r/4)),   phi1^{-1}(value) = exp(-(v/2 - v^r/4)).
// phi1^{-1} is increasing only while eta1'(v) = 1/2 - (r/4) v^{r-1} > 0, i.e.
// v >= (r/2)^{1/(1-r)}; the cutoff doubles that for slack.  Both inverses are
// continued by their affine tangent above the cutoff value.
struct TwistCore {
    double r;
    double sgn;  // +1 for twist0, -1 for twist1
    double v_cut, t_cut, s_cut, slope;

    TwistCore(double r_, double sgn_) : r(r_), sgn(sgn_) {
        v_cut = 2.0 * std::pow(r / 2.0, 1.0 / (1.0 - r));
        t_cut = std::exp(-v_cut);
        s_cut = inv_core(t_cut);
        // (phi^{-1})'(t) = phi^{-1}(t) * eta'(v) / t with v = -log t
        double etap = 0.5 + sgn * 0.25 * r * std::pow(v_cut, r - 1.0);
        slope = s_cut * etap / t_cut;
    }

    double eta(double v) const { return 0.5 * v + sgn * 0.25 * std::pow(v, r); }

    double inv_core(double t) const { return std::exp(-eta(-std::log(t))); }

    double inverse(double t) const {
        if (t <= 0.0) return 0.0;
        if (t <= t_cut) return inv_core(t);
        return s_cut + slope * (t - t_cut);
    }

    double gauge(double s) const {
        if (s <= 0.0) return 0.0;
        if (s > s_cut) return t_cut + (s - s_cut) / slope;
        // solve eta(v) = -log s for v >= v_cut by bisection
        double target = -std::log(s);
        double lo = v_cut, hi = std::max(2.0 * v_cut, 4.0 * target);
        int guard = 0;
        while (eta(hi) < target) {
            hi *= 2.0;
            if (++guard > 200) throw NumericalError("twist gauge bracket expansion failed");
        }
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (eta(mid) < target) lo = mid; else hi = mid;
            if (hi - lo <= 1e-15 * hi) break;
        }
        return std::exp(-0.5 * (lo + hi));
    }
};

} // namespace detail

inline OrliczFunction orlicz_twist(int which, double r) {
    if (!(r > 0.0) || !(r < 1.0)) throw ConfigError("twist index must satisfy 0 < r < 1");
    detail::TwistCore core(r, which == 0 ? +1.0 : -1.0);
    OrliczFunction f;
    f.name = which == 0 ? "twist0" : "twist1";
    f.param = r;
    f.phi = [core](double s) { return core.gauge(s); };
    f.inverse = [core](double t) { return core.inverse(t); };
    f.delta2_lo = core.s_cut * 1e-2;
    f.delta2_hi = core.s_cut * 0.5;
    f.delta2_constant = detail::measure_delta2(f.phi, f.delta2_lo, f.delta2_hi);
    f.extension_note = "inverse formula value^(1/2 " + std::string(which == 0 ? "+" : "-") +
                       " (-log value)^(r-1)/4) for value <= " + std::to_string(core.t_cut) +
                       "; affine tangent beyond";
    return f;
}

inline OrliczFunction orlicz_twist0(double r) { return orlicz_twist(0, r); }
inline OrliczFunction orlicz_twist1(double r) { return orlicz_twist(1, r); }

// Gauge defined by a strictly increasing inverse; phi recovered by bisection.
inline OrliczFunction orlicz_from_inverse(std::string name,
                                          std::function<double(double)> inverse,
                                          double probe_hi = 1.0) {
    OrliczFunction f;
    f.name = std::move(name);
    f.param = 0.0;
    f.inverse = inverse;
    f.phi = [inverse](double s) {
        if (s <= 0.0) return 0.0;
        double lo = 0.0, hi = 1.0;
        int guard = 0;
        while (inverse(hi) < s) {
            hi *= 2.0;
            if (++guard > 400) throw NumericalError("inverse-defined gauge bracket expansion failed");
        }
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (inverse(mid) < s) lo = mid; else hi = mid;
            if (hi - lo <= 1e-15 * (1.0 + hi)) break;
        }
        return 0.5 * (lo + hi);
    };
    f.delta2_lo = 1e-6 * probe_hi;
    f.delta2_hi = probe_hi;
    f.delta2_constant = detail::measure_delta2(f.phi, f.delta2_lo, f.delta2_hi);
    return f;
}

// Luxemburg norm: the r > 0 with sum_i phi(|x_i| / r) = 1.
// Bisection with bracket expansion; fails loudly if no bracket is found.
// Repeated moduli are collapsed to (value, count) pairs first, so vectors with
// few distinct magnitudes (indicator blocks, step profiles) cost O(#distinct)
// phi evaluations per bisection step regardless of support size.
inline double orlicz_gauge(const OrliczFunction& f, const SparseVector& x, double tol = 1e-10) {
    if (x.empty()) return 0.0;
    std::vector<double> mods;
    mods.reserve(x.size());
    for (const auto& e : x.entries()) mods.push_back(std::abs(e.second));
    std::sort(mods.begin(), mods.end());
    std::vector<std::pair<double, double>> groups; // (modulus, multiplicity)
    for (double v : mods) {
        if (!groups.empty() && groups.back().first == v)
            groups.back().second += 1.0;
        else
            groups.emplace_back(v, 1.0);
    }
    auto level = [&](double r) {
        double s = 0.0;
        for (const auto& g : groups) s += g.second * f.phi(g.first / r);
        return s;
    };
    double hi = x.max_abs();
    int guard = 0;
    while (level(hi) > 1.0) {
        hi *= 2.0;
        if (++guard > 200) throw NumericalError("orlicz gauge bracket expansion failed (upper)");
    }
    double lo = hi;
    guard = 0;
    while (level(lo) < 1.0) {
        lo *= 0.5;
        if (++guard > 2000) throw NumericalError("orlicz gauge bracket expansion failed (lower)");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 160; ++it) {
        mid = 0.5 * (lo + hi);
        double g = level(mid);
        if (std::abs(g - 1.0) <= tol) return mid;
        if (g > 1.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    return mid;
}

} // namespace twistlab
