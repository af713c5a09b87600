#pragma once

// Closed-form centralizers and the measurement toolkit around them:
// quasi-linearity defects, rho lower bounds, exactness and equivalence
// probes, expansiveness thresholds, and boundedness gaps on disjoint
// block families.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "factorization.hpp"
#include "orlicz.hpp"
#include "rng.hpp"
#include "spaces.hpp"
#include "sparse_vector.hpp"

namespace twistlab {

// ---------------------------------------------------------------------------
// Phase functions

enum class PhiKind { Phi1, PhiR, ComplexPower };

// Scalar phase functions: phi1(t) = t, phi_r(t) = t on [0,1] and t^r beyond,
// complex_power(t) = t^{1+i alpha}.  All are extended oddly, phi(-t) = -phi(t),
// which fixes the convention for arguments past the normalization point.
struct PhiSpec {
    PhiKind kind = PhiKind::Phi1;
    double r = 1.0;
    double alpha = 0.0;
    // global slope bound: 1 for phi1 and phi_r (the outer branch only gets
    // flatter), sqrt(1 + alpha^2) for the complex power
    double lipschitz_constant = 1.0;

    static PhiSpec phi1() { return {}; }

    static PhiSpec phi_r(double r) {
        if (!(r > 0.0 && r <= 1.0))
            throw ConfigError("phi_r exponent must lie in (0, 1]");
        PhiSpec p;
        p.kind = PhiKind::PhiR;
        p.r = r;
        return p;
    }

    static PhiSpec complex_power(double alpha) {
        PhiSpec p;
        p.kind = PhiKind::ComplexPower;
        p.alpha = alpha;
        p.lipschitz_constant = std::sqrt(1.0 + alpha * alpha);
        return p;
    }

    cplx eval(double t) const {
        if (t < 0.0) return -eval(-t);
        switch (kind) {
            case PhiKind::Phi1:
                return {t, 0.0};
            case PhiKind::PhiR:
                return {t <= 1.0 ? t : std::pow(t, r), 0.0};
            case PhiKind::ComplexPower:
                if (t == 0.0) return {0.0, 0.0};
                return std::polar(t, alpha * std::log(t));
        }
        return {0.0, 0.0};
    }

    bool operator==(const PhiSpec& o) const {
        if (kind != o.kind) return false;
        if (kind == PhiKind::PhiR) return r == o.r;
        if (kind == PhiKind::ComplexPower) return alpha == o.alpha;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Centralizer specs

enum class CentralizerKind { KaltonPeck, PConvexForm, OrliczHilbert, Scaled, Interpolated };

struct CentralizerSpec {
    CentralizerKind kind = CentralizerKind::KaltonPeck;

    SpaceSpec space = SpaceSpec::lp(2.0); // KaltonPeck, PConvexForm
    PhiSpec phi;                          // KaltonPeck
    double factor = 1.0;                  // PConvexForm
    OrliczFunction phi1;                  // OrliczHilbert
    cplx mu = {1.0, 0.0};                 // Scaled
    std::shared_ptr<const CentralizerSpec> inner;  // Scaled
    std::shared_ptr<const Couple> couple;          // Interpolated
    FactorizeOptions fopt;                         // Interpolated

    static CentralizerSpec kalton_peck(SpaceSpec space, PhiSpec phi) {
        CentralizerSpec s;
        s.kind = CentralizerKind::KaltonPeck;
        s.space = std::move(space);
        s.phi = phi;
        return s;
    }

    // Omega(x) = factor . x . log(|x| / ||x||)
    static CentralizerSpec pconvex_form(SpaceSpec space, double factor) {
        CentralizerSpec s;
        s.kind = CentralizerKind::PConvexForm;
        s.space = std::move(space);
        s.factor = factor;
        return s;
    }

    // Omega(x) = 2 x . log(phi1^{-1}(f^2) / f), f = |x| / ||x||_2
    static CentralizerSpec orlicz_hilbert(OrliczFunction phi1) {
        CentralizerSpec s;
        s.kind = CentralizerKind::OrliczHilbert;
        s.phi1 = std::move(phi1);
        return s;
    }

    static CentralizerSpec scaled(cplx mu, CentralizerSpec inner) {
        CentralizerSpec s;
        s.kind = CentralizerKind::Scaled;
        s.mu = mu;
        s.inner = std::make_shared<const CentralizerSpec>(std::move(inner));
        return s;
    }

    static CentralizerSpec interpolated(Couple c, FactorizeOptions opt = {}) {
        CentralizerSpec s;
        s.kind = CentralizerKind::Interpolated;
        s.couple = std::make_shared<const Couple>(std::move(c));
        s.fopt = opt;
        return s;
    }
};

// Norm used to measure residuals of a given centralizer: the ambient space
// for the closed forms, l2 for the Orlicz-Hilbert form, the interpolation
// norm for induced centralizers.
inline double residual_norm(const CentralizerSpec& spec, const SparseVector& v) {
    switch (spec.kind) {
        case CentralizerKind::KaltonPeck:
        case CentralizerKind::PConvexForm:
            return norm(spec.space, v);
        case CentralizerKind::OrliczHilbert:
            return norm(SpaceSpec::lp(2.0), v);
        case CentralizerKind::Scaled:
            return residual_norm(*spec.inner, v);
        case CentralizerKind::Interpolated:
            return interpolation_norm(*spec.couple, v, spec.fopt);
    }
    return 0.0;
}

// Omega(x), coordinatewise on the support of x.  Omega(0) = 0 by convention.
inline SparseVector apply(const CentralizerSpec& spec, const SparseVector& x) {
    if (x.empty()) return {};
    switch (spec.kind) {
        case CentralizerKind::KaltonPeck: {
            double n = norm(spec.space, x);
            std::vector<SparseVector::Entry> out;
            out.reserve(x.size());
            for (const auto& e : x.entries()) {
                cplx w = spec.phi.eval(-std::log(std::abs(e.second) / n));
                out.emplace_back(e.first, e.second * w);
            }
            return SparseVector::from_entries(std::move(out));
        }
        case CentralizerKind::PConvexForm: {
            double n = norm(spec.space, x);
            std::vector<SparseVector::Entry> out;
            out.reserve(x.size());
            for (const auto& e : x.entries()) {
                double w = spec.factor * std::log(std::abs(e.second) / n);
                out.emplace_back(e.first, e.second * w);
            }
            return SparseVector::from_entries(std::move(out));
        }
        case CentralizerKind::OrliczHilbert: {
            double n2 = norm(SpaceSpec::lp(2.0), x);
            std::vector<SparseVector::Entry> out;
            out.reserve(x.size());
            for (const auto& e : x.entries()) {
                double f = std::abs(e.second) / n2;
                double w = 2.0 * std::log(spec.phi1.inverse(f * f) / f);
                out.emplace_back(e.first, e.second * w);
            }
            return SparseVector::from_entries(std::move(out));
        }
        case CentralizerKind::Scaled: {
            SparseVector v = apply(*spec.inner, x);
            return v.scaled(spec.mu);
        }
        case CentralizerKind::Interpolated:
            return induced_centralizer(*spec.couple, x, spec.fopt);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Quasi-linearity measurements

// ||Omega(x+y) - Omega(x) - Omega(y)|| / (||x|| + ||y||), measured in `space`.
inline double quasilinearity_defect(const CentralizerSpec& spec, const SparseVector& x,
                                    const SparseVector& y, const SpaceSpec& space) {
    SparseVector sum = x + y;
    if (x.empty() || y.empty() || sum.empty())
        throw InputError("quasilinearity defect needs x, y, x+y nonzero");
    SparseVector d = apply(spec, sum) - apply(spec, x) - apply(spec, y);
    return norm(space, d) / (norm(space, x) + norm(space, y));
}

using PairSampler = std::function<std::pair<SparseVector, SparseVector>(std::uint64_t)>;

// First two pairs are fixed probes that witness known defects; the rest are
// seeded random pairs.
inline PairSampler default_pair_sampler(std::uint64_t seed, VectorSamplerOptions opt = {}) {
    return [seed, opt](std::uint64_t k) -> std::pair<SparseVector, SparseVector> {
        if (k == 0) return {SparseVector::unit(1), SparseVector::unit(2)};
        if (k == 1)
            return {SparseVector::unit(1) + SparseVector::unit(2),
                    SparseVector::unit(3) + SparseVector::unit(4)};
        return {sample_vector(seed, 2 * k, opt), sample_vector(seed, 2 * k + 1, opt)};
    };
}

// Max sampled defect: a certified lower bound for the quasi-linearity
// constant rho(Omega).  Pairs violating the defect preconditions are skipped.
inline double rho_lower(const CentralizerSpec& spec, const SpaceSpec& space,
                        const PairSampler& sampler, int n_samples) {
    if (n_samples < 1) throw InputError("rho_lower needs n_samples >= 1");
    double best = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        auto [x, y] = sampler(std::uint64_t(k));
        if (x.empty() || y.empty() || (x + y).empty()) continue;
        best = std::max(best, quasilinearity_defect(spec, x, y, space));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Exactness

struct ExactnessReport {
    bool exact = false;
    double residual = 0.0;
};

// Checks Omega(u x) = u Omega(x) for a unimodular u; the residual is measured
// in the centralizer's own norm.
inline ExactnessReport exactness_check(const CentralizerSpec& spec, const SparseVector& x,
                                       const SparseVector& u) {
    for (const auto& e : x.entries()) {
        if (std::abs(std::abs(u.at(e.first)) - 1.0) > 1e-12)
            throw InputError("exactness check needs |u| = 1 on the support of x");
    }
    SparseVector ux = hadamard(u, x);
    SparseVector lhs = apply(spec, ux);
    SparseVector rhs = hadamard(u, apply(spec, x));
    ExactnessReport rep;
    rep.residual = residual_norm(spec, lhs - rhs);
    rep.exact = rep.residual <= 1e-9 * residual_norm(spec, x);
    return rep;
}

// ---------------------------------------------------------------------------
// Equivalence

// max over samples of ||Omega1(x) - Omega2(x)|| / ||x||: a lower bound for
// the bounded-equivalence constant of the two centralizers on `space`.
inline double equivalence_gap(const CentralizerSpec& s1, const CentralizerSpec& s2,
                              const SpaceSpec& space, const std::vector<SparseVector>& samples) {
    double best = 0.0;
    for (const auto& x : samples) {
        if (x.empty()) continue;
        SparseVector d = apply(s1, x) - apply(s2, x);
        best = std::max(best, norm(space, d) / norm(space, x));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Expansiveness

// Smallest N on a fixed grid such that every sampled pair s, t in
// [0, search_cap] with |s - t| >= N satisfies |phi(s) - phi(t)| >= M.
// Candidates run up to search_cap / 100 so that each one is exercised by
// pairs well inside the window; returns nothing when all candidates fail.
inline std::optional<double> expansiveness_threshold(const PhiSpec& phi, double M,
                                                     double search_cap) {
    if (!(M > 0.0)) throw InputError("expansiveness threshold needs M > 0");
    if (!(search_cap > 0.0)) throw InputError("expansiveness threshold needs a positive cap");

    std::vector<double> grid;
    for (int k = 1; k <= 64; ++k) grid.push_back(M * double(k) / 64.0);
    for (double g = M * 1.25; g <= search_cap / 100.0; g *= 1.25) grid.push_back(g);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const double slack = 1e-12 * (1.0 + M);
    for (double N : grid) {
        if (N > search_cap / 2.0) break;
        bool ok = true;
        for (double d : {1.0, 1.5, 3.0, 10.0}) {
            double delta = N * d;
            if (delta > search_cap) continue;
            std::vector<double> starts;
            for (int j = 0; j <= 32; ++j) starts.push_back(search_cap * double(j) / 32.0);
            for (double s = search_cap; s >= 1e-6; s *= 0.5) starts.push_back(s);
            starts.push_back(0.0);
            starts.push_back(1.0);
            starts.push_back(N);
            starts.push_back(search_cap - delta);
            for (double s : starts) {
                if (s < 0.0 || s + delta > search_cap) continue;
                if (std::abs(phi.eval(s + delta) - phi.eval(s)) < M - slack) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) return N;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Boundedness gap on a disjoint family

using CoeffSampler = std::function<std::vector<cplx>(std::uint64_t)>;

// lambda = 1 first (the closed-form audit point), then seeded random
// sign-and-scale coefficients.
inline CoeffSampler default_coeff_sampler(std::uint64_t seed, std::size_t m) {
    return [seed, m](std::uint64_t k) {
        std::vector<cplx> lam(m, cplx(1.0, 0.0));
        if (k == 0) return lam;
        Rng rng(seed * 0x9E3779B97F4A7C15ull + k);
        for (auto& v : lam) {
            double mag = std::exp(rng.uniform(-1.5, 1.5));
            double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            v = cplx(sign * mag, 0.0);
        }
        return lam;
    };
}

// Subtracts the diagonal-multiplier linear map that matches Omega on the
// family members (x = sum lambda_i y_i -> sum lambda_i Omega(y_i)) and
// returns the worst sampled ratio ||Omega(x) - sum lambda_i Omega(y_i)|| /
// ||x||: a lower bound on any triviality constant on the span.
inline double boundedness_gap(const CentralizerSpec& spec,
                              const std::vector<SparseVector>& family, const SpaceSpec& space,
                              const CoeffSampler& sampler, int n_lambda) {
    if (family.empty()) throw InputError("boundedness gap needs a nonempty family");
    if (n_lambda < 1) throw InputError("boundedness gap needs n_lambda >= 1");
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!disjoint(family[i], family[j]))
                throw InputError("boundedness gap family must be pairwise disjoint");

    std::vector<SparseVector> omega_members;
    omega_members.reserve(family.size());
    for (const auto& y : family) omega_members.push_back(apply(spec, y));

    double best = 0.0;
    for (int k = 0; k < n_lambda; ++k) {
        std::vector<cplx> lam = sampler(std::uint64_t(k));
        if (lam.size() != family.size())
            throw InputError("coefficient sampler returned wrong arity");
        SparseVector z, corr;
        for (std::size_t i = 0; i < family.size(); ++i) {
            z = z + family[i].scaled(lam[i]);
            corr = corr + omega_members[i].scaled(lam[i]);
        }
        if (z.empty()) continue;
        SparseVector d = apply(spec, z) - corr;
        best = std::max(best, norm(space, d) / norm(space, z));
    }
    return best;
}

} // namespace twistlab
