#pragma once

// Twisted-sum quasi-norms, analytic witnesses on lp scales, Taylor tuples and
// the tower maps between them (projections and conformal-multiplier
// embeddings), and the kernel-derivative bound check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "centralizers.hpp"
#include "errors.hpp"
#include "factorization.hpp"
#include "jets.hpp"
#include "spaces.hpp"
#include "sparse_vector.hpp"

namespace twistlab {

// ---------------------------------------------------------------------------
// Twisted pairs

// Element of the twisted sum: w is the ambient coordinate, z the base one.
struct TwistedPair {
    SparseVector w;
    SparseVector z;
};

// ||(w, z)|| = ||w - Omega(z)|| + ||z||.  The pair (Omega(z), z) has norm
// ||z||, and (w, 0) has norm ||w||: embedding and fiber are both isometric.
inline double twisted_quasinorm(const CentralizerSpec& spec, const TwistedPair& p,
                                const SpaceSpec& space) {
    double nz = norm(space, p.z);
    double nw = norm(space, p.w - apply(spec, p.z));
    return nw + nz;
}

// ---------------------------------------------------------------------------
// Analytic witnesses

// g(z) = m(z) . sgn(base) . |base-hat|^{p_theta / p(z)} . N on the lp scale
// 1/p(z) = (1-z)/p0 + z/p1, where N = ||base|| at p_theta and base-hat is the
// normalized modulus.  The exponent is affine in z, so every derivative is a
// finite closed form in powers of log|base-hat|.
//
// Boundary norms collapse: ||g(j+it)||_{p_j} = |m(j+it)| . N exactly, because
// sum_i base-hat_i^{p_theta} = 1 makes the vector factor norm-one on both
// boundary lines.  Everything below leans on that identity.
struct AnalyticWitness {
    Couple scale;
    SparseVector base;
    std::vector<cplx> multiplier; // coefficients of m in powers of (z - scale.theta)

    double inv_p0 = 0.0, inv_p1 = 0.0, inv_pth = 0.0;
    double p_theta = 0.0;     // infinity encoded as p_theta = 0 with inv_pth = 0
    double exp_slope = 0.0;   // d/dz of p_theta / p(z)
    double base_norm = 0.0;   // N
    SparseVector base_hat;    // |base| / N

    AnalyticWitness(Couple s, SparseVector b, std::vector<cplx> m)
        : scale(std::move(s)), base(std::move(b)), multiplier(std::move(m)) {
        if (scale.x0.kind != SpaceKind::Lp || scale.x1.kind != SpaceKind::Lp)
            throw ConfigError("analytic witnesses need plain lp scale endpoints");
        if (base.empty()) throw InputError("analytic witness needs a nonzero base vector");
        inv_p0 = std::isinf(scale.x0.p) ? 0.0 : 1.0 / scale.x0.p;
        inv_p1 = std::isinf(scale.x1.p) ? 0.0 : 1.0 / scale.x1.p;
        inv_pth = (1.0 - scale.theta) * inv_p0 + scale.theta * inv_p1;
        if (inv_pth > 0.0) {
            p_theta = 1.0 / inv_pth;
            exp_slope = p_theta * (inv_p1 - inv_p0);
            base_norm = norm(SpaceSpec::lp(p_theta), base);
        } else {
            // both endpoints are sup norms; the scale is constant
            exp_slope = 0.0;
            base_norm = base.max_abs();
        }
        base_hat = base.abs().scaled(cplx(1.0 / base_norm, 0.0));
    }

    cplx multiplier_at(cplx z) const {
        cplx u = z - cplx(scale.theta, 0.0);
        cplx acc(0.0, 0.0);
        for (std::size_t k = multiplier.size(); k-- > 0;) acc = acc * u + multiplier[k];
        return acc;
    }

    // coordinatewise evaluation at a strip point
    SparseVector evaluate(cplx z) const {
        cplx m = multiplier_at(z);
        std::vector<SparseVector::Entry> out;
        out.reserve(base.size());
        for (const auto& e : base.entries()) {
            double xh = std::abs(base_hat.at(e.first));
            cplx sgn = e.second / std::abs(e.second);
            cplx expo = cplx(1.0, 0.0) + (z - cplx(scale.theta, 0.0)) * exp_slope;
            cplx val = m * sgn * std::exp(expo * std::log(xh)) * base_norm;
            out.emplace_back(e.first, val);
        }
        return SparseVector::from_entries(std::move(out));
    }
};

// ---------------------------------------------------------------------------
// Taylor tuples

// Tuple of Taylor coefficients of a witness: coeffs holds
// (g-hat[n], ..., g-hat[1]) in that order, g-hat[k] = g^{(k-1)}(theta)/(k-1)!.
struct RochbergTuple {
    double theta = 0.5;
    std::vector<SparseVector> coeffs;

    int order() const { return int(coeffs.size()); }

    // g-hat[k], 1 <= k <= order
    const SparseVector& g_hat(int k) const {
        if (k < 1 || k > order()) throw InputError("tuple coefficient index out of range");
        return coeffs[std::size_t(order() - k)];
    }
};

inline constexpr int kTaylorDepthCap = 6;

// Exact Taylor coefficients of the witness at theta through order n.
// The exponent of the base factor is affine in z, so each coordinate is
// m(z) . exp((z - theta0) . slope . log base-hat_i) up to constants and the
// jet arithmetic is exact.
inline RochbergTuple taylor_tuple(const AnalyticWitness& g, double theta, int n) {
    if (n < 1) throw InputError("taylor tuple needs order >= 1");
    if (n > kTaylorDepthCap) throw SizeError("taylor tuple depth capped at 6");
    std::size_t ord = std::size_t(n - 1);

    // m(z) around theta: the stored coefficients are centered at scale.theta
    Jet u = Jet::variable(cplx(theta - g.scale.theta, 0.0), ord);
    Jet mjet = jet_poly(g.multiplier, u);

    std::vector<std::vector<SparseVector::Entry>> levels{std::size_t(n)};
    for (const auto& e : g.base.entries()) {
        double xh = std::abs(g.base_hat.at(e.first));
        cplx sgn = e.second / std::abs(e.second);
        double lx = std::log(xh);
        // exp(E(z) log xh), E affine: value at theta times exp((z-theta) c lx)
        cplx at_theta =
            std::exp(cplx(1.0 + (theta - g.scale.theta) * g.exp_slope, 0.0) * lx);
        Jet arg(ord);
        if (ord >= 1) arg.c[1] = cplx(g.exp_slope * lx, 0.0);
        Jet coord = mjet * jet_exp(arg);
        cplx scale = sgn * at_theta * g.base_norm;
        for (std::size_t k = 0; k <= ord; ++k) {
            cplx v = coord.c[k] * scale;
            if (v != cplx(0.0, 0.0)) levels[k].emplace_back(e.first, v);
        }
    }

    RochbergTuple t;
    t.theta = theta;
    t.coeffs.resize(std::size_t(n));
    for (int k = 0; k < n; ++k)
        t.coeffs[std::size_t(n - 1 - k)] = SparseVector::from_entries(std::move(levels[std::size_t(k)]));
    return t;
}

// ---------------------------------------------------------------------------
// Boundary norms

inline constexpr double kBoundaryWindow = 8.0;

struct BoundaryReport {
    double value = 0.0;     // grid max plus Lipschitz slack: upper bound on the window sup
    double grid_max = 0.0;  // raw grid maximum
    double lip_slack = 0.0; // slope bound times half grid step
    double window = kBoundaryWindow;
    int t_grid = 0;
    // crude allowance for the strip-interior influence of |t| > window,
    // damped by the conformal kernel decay exp(-pi |t|); metadata only
    double tail_allowance = 0.0;
};

// sup over both boundary lines of ||g(j+it)||_{p_j} for t in [-T, T]:
// equals N . sup |m(j+it)|, so only the scalar polynomial is sampled.
inline BoundaryReport witness_boundary_report(const AnalyticWitness& g, int t_grid) {
    if (t_grid < 3) throw InputError("boundary norm needs at least 3 grid points");
    const double T = kBoundaryWindow;
    double seg = std::sqrt(std::max(g.scale.theta, 1.0 - g.scale.theta) *
                               std::max(g.scale.theta, 1.0 - g.scale.theta) +
                           T * T);
    double lip = 0.0, tail = 0.0;
    for (std::size_t k = 1; k < g.multiplier.size(); ++k)
        lip += double(k) * std::abs(g.multiplier[k]) * std::pow(seg, double(k - 1));
    for (std::size_t k = 0; k < g.multiplier.size(); ++k)
        tail += std::abs(g.multiplier[k]) * std::pow(T + 2.0, double(k));

    double mmax = 0.0;
    for (int j = 0; j <= 1; ++j) {
        for (int i = 0; i < t_grid; ++i) {
            double t = -T + 2.0 * T * double(i) / double(t_grid - 1);
            mmax = std::max(mmax, std::abs(g.multiplier_at(cplx(double(j), t))));
        }
    }
    double step = 2.0 * T / double(t_grid - 1);

    BoundaryReport rep;
    rep.t_grid = t_grid;
    rep.grid_max = g.base_norm * mmax;
    rep.lip_slack = g.base_norm * lip * 0.5 * step;
    rep.value = rep.grid_max + rep.lip_slack;
    rep.tail_allowance = g.base_norm * tail * std::exp(-3.14159265358979323846 * (T - 1.0));
    return rep;
}

inline double witness_boundary_norm(const AnalyticWitness& g, int t_grid) {
    return witness_boundary_report(g, t_grid).value;
}

// ---------------------------------------------------------------------------
// Kernel derivative bound

struct KernelReport {
    double lhs = 0.0;    // ||g'(theta)|| in the interpolation norm
    double bound = 0.0;  // boundary norm / dist(theta, strip boundary)
    double tol = 0.0;
    double margin = 0.0; // bound + tol - lhs
    bool pass = false;
};

// For witnesses vanishing at theta: checks
//   ||g'(theta)||_theta <= boundary norm / dist(theta, boundary) + tol.
inline KernelReport kernel_derivative_check(const AnalyticWitness& g, const Couple& c,
                                            int t_grid = 257, double tol = 1e-6) {
    RochbergTuple t = taylor_tuple(g, c.theta, 2);
    double scale = g.base_norm;
    for (const auto& a : g.multiplier) scale += std::abs(a) * g.base_norm;
    if (interpolation_norm(c, t.g_hat(1)) > 1e-9 * scale)
        throw InputError("kernel derivative check needs g(theta) = 0");

    double dist = std::min(c.theta, 1.0 - c.theta);
    KernelReport rep;
    rep.lhs = interpolation_norm(c, t.g_hat(2));
    rep.bound = witness_boundary_norm(g, t_grid) / dist;
    rep.tol = tol * (1.0 + rep.bound);
    rep.margin = rep.bound + rep.tol - rep.lhs;
    rep.pass = rep.margin >= 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Tower maps

// pi_{m,n}: keep the last n coefficients (g-hat[n], ..., g-hat[1]).
inline RochbergTuple rochberg_project(const RochbergTuple& t, int n) {
    if (n < 0 || n > t.order()) throw InputError("projection order exceeds tuple order");
    RochbergTuple r;
    r.theta = t.theta;
    r.coeffs.assign(t.coeffs.end() - n, t.coeffs.end());
    return r;
}

struct EmbedResult {
    RochbergTuple tuple;
    // certificate: the scalar multiplier psi = sum a_l w^l with the exact jet
    // delta_{k, m-n} at theta, where w is the strip-to-disc map
    std::vector<cplx> psi_coeffs;  // a_{m-n}, ..., a_m in powers of w
    std::vector<cplx> psi_taylor;  // achieved (z-theta)-jet of psi, length m+1
    double psi_sup = 0.0;          // sum |a_l| >= sup over the strip of |psi|
    int series_terms = 0;
    double remainder = 0.0;        // exact construction: zero
    bool certified = false;
};

// i_{n,m}: pad with m-n zero coefficients at the low end.  The data map is an
// exact zero pad; the certificate constructs the bounded scalar multiplier
// psi whose Taylor jet at theta is exactly (z-theta)^{m-n} through order m,
// as a polynomial in the conformal map w(z) = (e^{i pi z} - h0)/(e^{i pi z} -
// conj(h0)), h0 = e^{i pi theta}.  |w| <= 1 on the strip, so sum |a_l| bounds
// sup |psi| with zero truncation error.
inline EmbedResult rochberg_embed(const RochbergTuple& t, int m, const Couple& c) {
    if (m <= t.order()) throw InputError("embedding order must exceed tuple order");
    if (std::abs(t.theta - c.theta) > 1e-12)
        throw InputError("tuple and couple disagree at theta");

    EmbedResult res;
    res.tuple.theta = t.theta;
    res.tuple.coeffs = t.coeffs;
    res.tuple.coeffs.resize(std::size_t(m)); // value-initialized zero vectors at the low end

    const int q = m - t.order();
    const std::size_t ord = std::size_t(m);
    const double pi = 3.14159265358979323846;
    cplx h0 = std::polar(1.0, pi * t.theta);

    // jet of w at theta
    Jet z = Jet::variable(cplx(t.theta, 0.0), ord);
    Jet h = jet_exp(cplx(0.0, pi) * z);
    Jet w = (h - h0) / (h - std::conj(h0));

    // powers w^q .. w^m and the triangular solve for the prescribed jet
    std::vector<Jet> pw(std::size_t(m - q + 1), Jet(ord));
    Jet acc = jet_ipow(w, std::size_t(q));
    for (int l = q; l <= m; ++l) {
        pw[std::size_t(l - q)] = acc;
        if (l < m) acc = acc * w;
    }
    std::vector<cplx> a(std::size_t(m - q + 1), cplx(0.0, 0.0));
    bool ok = true;
    for (int k = q; k <= m; ++k) {
        cplx target = (k == q) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        for (int l = q; l < k; ++l) target -= a[std::size_t(l - q)] * pw[std::size_t(l - q)].c[std::size_t(k)];
        cplx diag = pw[std::size_t(k - q)].c[std::size_t(k)];
        if (std::abs(diag) < 1e-14) {
            ok = false;
            break;
        }
        a[std::size_t(k - q)] = target / diag;
    }

    res.psi_coeffs = a;
    res.series_terms = m - q + 1;
    if (ok) {
        Jet psi = Jet::constant(cplx(0.0, 0.0), ord);
        for (int l = q; l <= m; ++l) psi = psi + a[std::size_t(l - q)] * pw[std::size_t(l - q)];
        res.psi_taylor.assign(psi.c.begin(), psi.c.end());
        double s = 0.0;
        bool finite = true;
        for (const auto& v : a) {
            s += std::abs(v);
            if (!std::isfinite(std::abs(v))) finite = false;
        }
        res.psi_sup = s;
        res.remainder = 0.0;
        res.certified = finite;
    }
    return res;
}

} // namespace twistlab
