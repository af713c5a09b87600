// Lattice factorization through a couple and the induced centralizer.
//
// For a couple (X0, X1) with parameter theta in (0,1), every x factors as
//   |x| = a0^{1-theta} . a1^theta,   a_j >= 0,
// and the interpolation norm satisfies
//   ||x||_theta = min ||a0||_{X0}^{1-theta} ||a1||_{X1}^theta.
// We parametrize a0 = |x| e^{theta s}, a1 = |x| e^{-(1-theta) s}; the product
// constraint then holds for every real s and the objective
//   h(s) = (1-theta) log||a0|| + theta log||a1||
// is convex (norms are log-convex along exponential paths), so a subgradient
// method with norming functionals converges to the optimum.
//
// Every result carries a duality certificate: for y0, y1 in the endpoint dual
// balls, sum |x_i| y0_i^{1-theta} y1_i^theta <= ||x||_theta, which brackets
// the objective from below.  optimality_ratio = upper / lower >= 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "orlicz.hpp"
#include "sparse_vector.hpp"
#include "spaces.hpp"

namespace twistlab {

struct Couple {
    SpaceSpec x0;
    SpaceSpec x1;
    double theta = 0.5;

    Couple() = default;
    Couple(SpaceSpec a, SpaceSpec b, double t) : x0(std::move(a)), x1(std::move(b)), theta(t) {
        if (!(theta > 0.0 && theta < 1.0))
            throw ConfigError("interpolation parameter must lie strictly inside (0, 1)");
    }
};

struct Factorization {
    SparseVector a0;
    SparseVector a1;
    double theta = 0.5;
    double n0 = 0.0;               // ||a0||_{X0}
    double n1 = 0.0;               // ||a1||_{X1}, equal to n0 up to the balancing tolerance
    double objective = 0.0;        // max(n0, n1), an upper bound for ||x||_theta
    double lower = 0.0;            // certified duality lower bound
    double optimality_ratio = 1.0; // objective / lower
    bool certified = false;
    int iterations = 0;
    std::string method;

    double geometric_mean() const { return std::pow(n0, 1.0 - theta) * std::pow(n1, theta); }
};

struct FactorizeOptions {
    double tol = 1e-6;          // certify when objective/lower <= 1 + tol
    int max_iter = 4000;
    int cert_interval = 20;     // duality certificate cadence in iterations
    bool use_closed_forms = true;
};

namespace detail {

inline bool sup_type(const SpaceSpec& s) {
    return (s.kind == SpaceKind::Lp || s.kind == SpaceKind::WeightedLp) && std::isinf(s.p);
}

inline bool plain_sup(const SpaceSpec& s) {
    return s.kind == SpaceKind::Lp && std::isinf(s.p);
}

inline bool lp_like(const SpaceSpec& s) {
    return s.kind == SpaceKind::Lp || s.kind == SpaceKind::WeightedLp;
}

inline bool same_weight_tables(const SpaceSpec& a, const SpaceSpec& b) {
    if (a.kind == SpaceKind::Lp && b.kind == SpaceKind::Lp) return true;
    if (a.kind == SpaceKind::WeightedLp && b.kind == SpaceKind::WeightedLp)
        return a.weights == b.weights;
    return false;
}

// Dual-ball functional for a sup-type endpoint: mass spread over the
// near-argmax band, weighted by `align` when provided.  Spreading keeps the
// dual norm at 1 while letting the certificate see the whole flat part.
inline SparseVector band_functional(const SpaceSpec& s, const SparseVector& a,
                                    const SparseVector& align, double band_width = 1e-9) {
    double m = 0.0;
    for (const auto& e : a.entries())
        m = std::max(m, weight_of(s, e.first) * std::abs(e.second));
    if (m == 0.0) return SparseVector();
    const double band = (1.0 - band_width) * m;
    std::vector<SparseVector::Entry> raw;
    double total = 0.0;
    for (const auto& e : a.entries()) {
        double w = weight_of(s, e.first);
        if (w * std::abs(e.second) < band) continue;
        double lam = align.empty() ? 1.0 : std::abs(align.at(e.first));
        if (lam <= 0.0) continue;
        raw.emplace_back(e.first, cplx(lam * w, 0.0));
        total += lam;
    }
    if (raw.empty() || total <= 0.0) {
        // degenerate alignment: fall back to the top atom
        for (const auto& e : a.entries())
            if (weight_of(s, e.first) * std::abs(e.second) >= band)
                return SparseVector::unit(e.first, cplx(weight_of(s, e.first), 0.0));
        return SparseVector();
    }
    for (auto& e : raw) e.second /= total;
    return SparseVector::from_entries(std::move(raw));
}

} // namespace detail

namespace detail {

inline double certificate_pairing(const Couple& c, const SparseVector& x,
                                  const SparseVector& a0, const SparseVector& a1,
                                  double band_width) {
    const double th = c.theta;
    SparseVector y0, y1;
    if (!sup_type(c.x1)) y1 = norming_functional(c.x1, a1);
    if (!sup_type(c.x0)) y0 = norming_functional(c.x0, a0);
    // Sup-type side: align the band mass with functional-times-factor of the
    // opposite side.  When <y1, a1> = ||a1|| exactly, y0_i = y1_i a1_i w_i /
    // <y1, a1> has dual norm 1 and makes the pairing collapse to ||a1||, so
    // the certificate is tight at the closed-form optimum (mirror case
    // symmetric, double-sup case seeded with flat band mass).
    if (sup_type(c.x1)) {
        SparseVector al = y0.empty() ? SparseVector() : hadamard(y0, a0.abs());
        y1 = band_functional(c.x1, a1, al, band_width);
    }
    if (sup_type(c.x0)) {
        SparseVector al = y1.empty() ? SparseVector() : hadamard(y1, a1.abs());
        y0 = band_functional(c.x0, a0, al, band_width);
    }
    if (y0.empty() || y1.empty()) return 0.0;
    double lower = 0.0;
    for (const auto& e : x.entries()) {
        double u = std::abs(y0.at(e.first));
        double v = std::abs(y1.at(e.first));
        if (u <= 0.0 || v <= 0.0) continue;
        lower += std::abs(e.second) * std::pow(u, 1.0 - th) * std::pow(v, th);
    }
    return lower;
}

} // namespace detail

// Lozanovskii duality certificate: a lower bound for ||x||_theta from endpoint
// dual-ball functionals taken at the current factorization candidate (a0, a1).
// Several argmax band widths are tried for sup-type endpoints; every width
// yields a valid dual functional, so the max is still a certified bound.
inline double factorization_certificate(const Couple& c, const SparseVector& x,
                                        const SparseVector& a0, const SparseVector& a1) {
    if (x.empty()) return 0.0;
    double best = detail::certificate_pairing(c, x, a0, a1, 1e-9);
    if (detail::sup_type(c.x0) || detail::sup_type(c.x1)) {
        for (double bw : {1e-4, 1e-2, 5e-2})
            best = std::max(best, detail::certificate_pairing(c, x, a0, a1, bw));
    }
    return best;
}

namespace detail {

inline SparseVector exp_scale(const SparseVector& absx, const std::vector<double>& s,
                              double factor) {
    std::vector<SparseVector::Entry> out;
    out.reserve(absx.size());
    std::size_t k = 0;
    for (const auto& e : absx.entries()) {
        double sv = std::clamp(s[k++], -80.0, 80.0);
        out.emplace_back(e.first, cplx(std::abs(e.second) * std::exp(factor * sv), 0.0));
    }
    return SparseVector::from_entries(std::move(out));
}

inline Factorization finish(const Couple& c, const SparseVector& x, SparseVector a0,
                            SparseVector a1, double lower, int iters, std::string method,
                            double tol) {
    Factorization f;
    f.a0 = std::move(a0);
    f.a1 = std::move(a1);
    f.theta = c.theta;
    f.n0 = norm(c.x0, f.a0);
    f.n1 = norm(c.x1, f.a1);
    f.objective = std::max(f.n0, f.n1);
    f.lower = std::max(lower, factorization_certificate(c, x, f.a0, f.a1));
    f.iterations = iters;
    f.method = std::move(method);
    f.optimality_ratio = (f.lower > 0.0) ? f.objective / f.lower
                                         : std::numeric_limits<double>::infinity();
    f.certified = f.lower > 0.0 && f.optimality_ratio <= 1.0 + tol;
    return f;
}

// Combined inverse gauge heuristic for Orlicz x Orlicz couples: a good
// starting shift comes from the formal interpolation gauge
// phi_c^{-1} = (phi0^{-1})^{1-theta} (phi1^{-1})^theta.
inline std::vector<double> orlicz_init_shift(const Couple& c, const SparseVector& absx) {
    const double th = c.theta;
    const OrliczFunction& f0 = c.x0.orlicz_fn;
    const OrliczFunction& f1 = c.x1.orlicz_fn;
    auto inv_c = [&, th](double u) {
        return std::pow(f0.inverse(u), 1.0 - th) * std::pow(f1.inverse(u), th);
    };
    double probe = 1.0;
    for (const auto& e : absx.entries())
        probe = std::max(probe, 2.0 * std::abs(e.second));
    OrliczFunction fc = orlicz_from_inverse("combined", inv_c, probe * 4.0 + 4.0);
    double r = orlicz_gauge(fc, absx, 1e-10);
    if (!(r > 0.0)) return std::vector<double>(absx.size(), 0.0);
    std::vector<double> s;
    s.reserve(absx.size());
    for (const auto& e : absx.entries()) {
        double u = fc.phi(std::abs(e.second) / r);
        double a0 = f0.inverse(u);
        double t = std::abs(e.second);
        if (a0 <= 0.0 || t <= 0.0) { s.push_back(0.0); continue; }
        s.push_back(std::clamp(std::log(r * a0 / t) / th, -80.0, 80.0));
    }
    return s;
}

} // namespace detail

namespace detail {

// Norming functional for gradient use.  Sup-type endpoints get a softmax
// surrogate (an eps-subgradient) so the search direction sees every
// near-maximal coordinate instead of a single argmax atom.
inline SparseVector gradient_functional(const SpaceSpec& s, const SparseVector& a,
                                        double beta) {
    if (!sup_type(s)) return norming_functional(s, a);
    double m = 0.0;
    for (const auto& e : a.entries())
        m = std::max(m, weight_of(s, e.first) * std::abs(e.second));
    if (m == 0.0) return SparseVector();
    std::vector<SparseVector::Entry> out;
    double pair = 0.0;
    for (const auto& e : a.entries()) {
        double w = weight_of(s, e.first);
        double z = std::pow(w * std::abs(e.second) / m, beta);
        if (z <= 0.0) continue;
        out.emplace_back(e.first, cplx(w * z, 0.0));
        pair += w * z * std::abs(e.second);
    }
    for (auto& e : out) e.second *= m / pair; // <y, |a|> = ||a||_sup
    return SparseVector::from_entries(std::move(out));
}

} // namespace detail

// Near-optimal factorization of |x| through the couple, with a duality
// certificate.  Closed forms cover equal endpoints, plain-sup endpoints, and
// Lp couples over a common weight table; everything else runs the subgradient
// engine.
inline Factorization factorize(const Couple& c, const SparseVector& x,
                               const FactorizeOptions& opt = {}) {
    const double th = c.theta;
    if (x.empty()) throw InputError("factorize requires a nonzero vector");
    SparseVector absx = x.abs();

    if (opt.use_closed_forms) {
        if (c.x0 == c.x1) {
            return detail::finish(c, x, absx, absx, 0.0, 0, "closed_form:equal_spaces",
                                  opt.tol);
        }
        // Sup-type endpoint: the optimal a on that side makes w.a flat, by the
        // raise-to-constant argument (valid against any lattice other endpoint).
        if (detail::sup_type(c.x0)) {
            std::vector<SparseVector::Entry> ve, a0e;
            for (const auto& e : absx.entries()) {
                double w = detail::weight_of(c.x0, e.first);
                ve.emplace_back(e.first,
                                cplx(std::pow(std::abs(e.second) * std::pow(w, 1.0 - th),
                                              1.0 / th),
                                     0.0));
            }
            SparseVector v = SparseVector::from_entries(std::move(ve));
            double cc = std::pow(norm(c.x1, v), th);
            std::vector<SparseVector::Entry> a1e;
            for (const auto& e : absx.entries()) {
                double w = detail::weight_of(c.x0, e.first);
                double a0i = cc / w;
                a0e.emplace_back(e.first, cplx(a0i, 0.0));
                a1e.emplace_back(e.first,
                                 cplx(std::pow(std::abs(e.second) / std::pow(a0i, 1.0 - th),
                                               1.0 / th),
                                      0.0));
            }
            return detail::finish(c, x, SparseVector::from_entries(std::move(a0e)),
                                  SparseVector::from_entries(std::move(a1e)), 0.0, 0,
                                  "closed_form:sup_left", opt.tol);
        }
        if (detail::sup_type(c.x1)) {
            std::vector<SparseVector::Entry> ve, a1e;
            for (const auto& e : absx.entries()) {
                double w = detail::weight_of(c.x1, e.first);
                ve.emplace_back(e.first,
                                cplx(std::pow(std::abs(e.second) * std::pow(w, th),
                                              1.0 / (1.0 - th)),
                                     0.0));
            }
            SparseVector v = SparseVector::from_entries(std::move(ve));
            double cc = std::pow(norm(c.x0, v), 1.0 - th);
            std::vector<SparseVector::Entry> a0e;
            for (const auto& e : absx.entries()) {
                double w = detail::weight_of(c.x1, e.first);
                double a1i = cc / w;
                a1e.emplace_back(e.first, cplx(a1i, 0.0));
                a0e.emplace_back(e.first,
                                 cplx(std::pow(std::abs(e.second) / std::pow(a1i, th),
                                               1.0 / (1.0 - th)),
                                      0.0));
            }
            return detail::finish(c, x, SparseVector::from_entries(std::move(a0e)),
                                  SparseVector::from_entries(std::move(a1e)), 0.0, 0,
                                  "closed_form:sup_right", opt.tol);
        }
        if (detail::lp_like(c.x0) && detail::lp_like(c.x1) &&
            detail::same_weight_tables(c.x0, c.x1)) {
            double i0 = std::isinf(c.x0.p) ? 0.0 : 1.0 / c.x0.p;
            double i1 = std::isinf(c.x1.p) ? 0.0 : 1.0 / c.x1.p;
            double ith = (1.0 - th) * i0 + th * i1;
            if (ith > 0.0) {
                double pth = 1.0 / ith;
                SpaceSpec mid = c.x0;
                mid.p = pth; // same kind and weights as the endpoints
                double n = norm(mid, absx);
                SparseVector xh = absx.scaled(1.0 / n);
                SparseVector a0 = xh.abs_pow(pth * i0).scaled(n);
                SparseVector a1 = xh.abs_pow(pth * i1).scaled(n);
                return detail::finish(c, x, std::move(a0), std::move(a1), 0.0, 0,
                                      "closed_form:lp_couple", opt.tol);
            }
        }
    }

    // subgradient engine on the shift parametrization
    const std::size_t m = absx.size();
    std::vector<double> s(m, 0.0);
    if (c.x0.kind == SpaceKind::Orlicz && c.x1.kind == SpaceKind::Orlicz)
        s = detail::orlicz_init_shift(c, absx);

    double best_u = std::numeric_limits<double>::infinity();
    std::vector<double> best_s = s;
    double lower_best = 0.0;
    // tail average of the iterates; on nonsmooth landscapes the average
    // settles long before the raw iterate stops bouncing
    std::vector<double> s_avg(m, 0.0);
    long avg_count = 0;
    auto consider = [&](const std::vector<double>& cand) {
        SparseVector b0 = detail::exp_scale(absx, cand, th);
        SparseVector b1 = detail::exp_scale(absx, cand, -(1.0 - th));
        double u = std::pow(norm(c.x0, b0), 1.0 - th) * std::pow(norm(c.x1, b1), th);
        if (u < best_u) {
            best_u = u;
            best_s = cand;
        }
        return u;
    };
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        SparseVector a0 = detail::exp_scale(absx, s, th);
        SparseVector a1 = detail::exp_scale(absx, s, -(1.0 - th));
        double n0 = norm(c.x0, a0);
        double n1 = norm(c.x1, a1);
        if (!(n0 > 0.0 && n1 > 0.0))
            throw NumericalError("endpoint norm vanished during factorization");
        // balance the two endpoint norms (objective is shift invariant)
        double shift = std::log(n1 / n0);
        if (std::abs(shift) > 1e-14) {
            for (auto& v : s) v += shift;
            a0 = detail::exp_scale(absx, s, th);
            a1 = detail::exp_scale(absx, s, -(1.0 - th));
            n0 = norm(c.x0, a0);
            n1 = norm(c.x1, a1);
        }
        double u = std::pow(n0, 1.0 - th) * std::pow(n1, th);
        if (u < best_u) {
            best_u = u;
            best_s = s;
        }
        if (it >= opt.max_iter / 4) {
            for (std::size_t j = 0; j < m; ++j) s_avg[j] += s[j];
            ++avg_count;
        }
        if (it % opt.cert_interval == 0) {
            if (avg_count > 0) {
                std::vector<double> sa(m);
                for (std::size_t j = 0; j < m; ++j) sa[j] = s_avg[j] / double(avg_count);
                consider(sa);
            }
            lower_best = std::max(lower_best, factorization_certificate(c, x, a0, a1));
            if (!(best_s == s)) {
                SparseVector c0 = detail::exp_scale(absx, best_s, th);
                SparseVector c1 = detail::exp_scale(absx, best_s, -(1.0 - th));
                lower_best = std::max(lower_best, factorization_certificate(c, x, c0, c1));
            }
            if (lower_best > 0.0 && best_u / lower_best <= 1.0 + opt.tol) {
                ++it;
                break;
            }
        }
        double beta = std::min(50.0 + 4.0 * it, 2000.0);
        SparseVector y0 = detail::gradient_functional(c.x0, a0, beta);
        SparseVector y1 = detail::gradient_functional(c.x1, a1, beta);
        std::vector<double> g(m, 0.0);
        double gnorm2 = 0.0, gmax = 0.0;
        std::size_t k = 0;
        for (const auto& e : absx.entries()) {
            double p0 = std::abs(y0.at(e.first)) * std::abs(a0.at(e.first)) / n0;
            double p1 = std::abs(y1.at(e.first)) * std::abs(a1.at(e.first)) / n1;
            g[k] = th * (1.0 - th) * (p0 - p1);
            gnorm2 += g[k] * g[k];
            gmax = std::max(gmax, std::abs(g[k]));
            ++k;
        }
        if (gnorm2 <= 1e-28) { ++it; break; }
        double h = std::log(u);
        // Polyak step toward the certificate, floored so a weak early
        // certificate cannot blow the step size up
        double target = std::max(lower_best > 0.0 ? std::log(lower_best)
                                                  : -std::numeric_limits<double>::infinity(),
                                 std::log(best_u) - 0.5);
        double gamma = (h > target) ? (h - target) / gnorm2
                                    : 1.0 / (std::sqrt(gnorm2) * std::sqrt(double(it + 1)));
        if (gmax > 0.0) gamma = std::min(gamma, 2.0 / gmax);
        for (std::size_t j = 0; j < m; ++j) s[j] -= gamma * g[j];
    }

    SparseVector a0 = detail::exp_scale(absx, best_s, th);
    SparseVector a1 = detail::exp_scale(absx, best_s, -(1.0 - th));
    return detail::finish(c, x, std::move(a0), std::move(a1), lower_best, it, "subgradient",
                          opt.tol);
}

// ||a0||^{1-theta} ||a1||^theta of the computed factorization: an upper bound
// of ||x||_theta with certified ratio.  The zero vector has norm zero.
inline double interpolation_norm(const Couple& c, const SparseVector& x,
                                 const FactorizeOptions& opt = {}) {
    if (x.empty()) return 0.0;
    return factorize(c, x, opt).geometric_mean();
}

// Centralizer induced by near-optimal factorizations:
//   Omega(x) = x . log(a1 / a0)   (zero where x vanishes),
// where a1 is the X1 factor.  For the couple (linf, l1) at theta = 1/2 this
// orientation gives Omega(x) = 2 x log(|x| / ||x||_2).
inline SparseVector induced_centralizer_from(const Factorization& f, const SparseVector& x) {
    std::vector<SparseVector::Entry> out;
    out.reserve(x.size());
    for (const auto& e : x.entries()) {
        double r0 = std::abs(f.a0.at(e.first));
        double r1 = std::abs(f.a1.at(e.first));
        if (r0 <= 0.0 || r1 <= 0.0) continue;
        double lg = std::log(r1 / r0);
        if (lg == 0.0) continue;
        out.emplace_back(e.first, e.second * lg);
    }
    return SparseVector::from_entries(std::move(out));
}

inline SparseVector induced_centralizer(const Couple& c, const SparseVector& x,
                                        const FactorizeOptions& opt = {}) {
    if (x.empty()) return SparseVector();
    return induced_centralizer_from(factorize(c, x, opt), x);
}

} // namespace twistlab
