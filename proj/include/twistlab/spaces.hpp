// Sequence space descriptions and their norm engines.
//
// Every space here is a 1-unconditional lattice norm on finitely supported
// vectors: l_p (p = inf allowed), weighted l_p (the atomic model of L_p over a
// finite measure), Orlicz gauges with the Luxemburg norm, Tsirelson, and
// p-convexification / p-concavification of a base space.
//
// norming_functional(space, a) returns, for a > 0, a lattice functional
// y >= 0 with <y, a> = ||a|| and dual norm <= 1 (a subgradient of the norm).
// These drive the factorization optimizer and its duality certificates.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "orlicz.hpp"
#include "rng.hpp"
#include "sparse_vector.hpp"
#include "tsirelson.hpp"

namespace twistlab {

enum class SpaceKind { Lp, WeightedLp, Orlicz, Tsirelson, PConvex, PConcave };

struct SpaceSpec {
    SpaceKind kind = SpaceKind::Lp;
    double p = 2.0; // Lp / WeightedLp index (may be infinity); PConvex/PConcave power
    std::vector<std::pair<std::int64_t, double>> weights; // WeightedLp, sorted by index
    OrliczFunction orlicz_fn;
    std::shared_ptr<const SpaceSpec> base; // PConvex / PConcave

    double tol = 1e-10;     // engine tolerance (orlicz gauge bisection)
    int tsirelson_cap = 24; // hard support cap for the Tsirelson recursion

    static SpaceSpec lp(double p) {
        if (!(p >= 1.0)) throw ConfigError("lp index must satisfy p >= 1");
        SpaceSpec s;
        s.kind = SpaceKind::Lp;
        s.p = p;
        return s;
    }

    static SpaceSpec lp_inf() { return lp(std::numeric_limits<double>::infinity()); }

    static SpaceSpec weighted_lp(double p, std::vector<std::pair<std::int64_t, double>> w) {
        if (!(p >= 1.0)) throw ConfigError("weighted lp index must satisfy p >= 1");
        std::sort(w.begin(), w.end());
        for (const auto& e : w)
            if (!(e.second > 0.0)) throw ConfigError("weights must be strictly positive");
        SpaceSpec s;
        s.kind = SpaceKind::WeightedLp;
        s.p = p;
        s.weights = std::move(w);
        return s;
    }

    static SpaceSpec orlicz(OrliczFunction f) {
        SpaceSpec s;
        s.kind = SpaceKind::Orlicz;
        s.orlicz_fn = std::move(f);
        return s;
    }

    static SpaceSpec tsirelson(int cap = 24) {
        SpaceSpec s;
        s.kind = SpaceKind::Tsirelson;
        s.tsirelson_cap = cap;
        return s;
    }

    static SpaceSpec pconvex(SpaceSpec inner, double p) {
        if (!(p > 1.0) || std::isinf(p)) throw ConfigError("convexification power must satisfy 1 < p < inf");
        SpaceSpec s;
        s.kind = SpaceKind::PConvex;
        s.p = p;
        s.base = std::make_shared<const SpaceSpec>(std::move(inner));
        return s;
    }

    static SpaceSpec pconcave(SpaceSpec inner, double p) {
        if (!(p > 1.0) || std::isinf(p)) throw ConfigError("concavification power must satisfy 1 < p < inf");
        SpaceSpec s;
        s.kind = SpaceKind::PConcave;
        s.p = p;
        s.base = std::make_shared<const SpaceSpec>(std::move(inner));
        return s;
    }

    bool operator==(const SpaceSpec& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case SpaceKind::Lp: return p == o.p;
            case SpaceKind::WeightedLp: return p == o.p && weights == o.weights;
            case SpaceKind::Orlicz: return orlicz_fn == o.orlicz_fn;
            case SpaceKind::Tsirelson: return true;
            case SpaceKind::PConvex:
            case SpaceKind::PConcave: return p == o.p && *base == *o.base;
        }
        return false;
    }
};

namespace detail {

inline double weight_of(const SpaceSpec& s, std::int64_t i) {
    auto it = std::lower_bound(s.weights.begin(), s.weights.end(), i,
                               [](const std::pair<std::int64_t, double>& e, std::int64_t k) {
                                   return e.first < k;
                               });
    // indices outside the declared atom table carry unit mass
    return (it != s.weights.end() && it->first == i) ? it->second : 1.0;
}

// scaled sum: m * (sum (|x_i|/m)^p w_i)^{1/p}, stable for large p
inline double lp_sum(const SparseVector& x, double p, const SpaceSpec* wsrc) {
    double m = 0.0;
    for (const auto& e : x.entries()) m = std::max(m, std::abs(e.second));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& e : x.entries()) {
        double w = wsrc ? weight_of(*wsrc, e.first) : 1.0;
        s += w * std::pow(std::abs(e.second) / m, p);
    }
    return m * std::pow(s, 1.0 / p);
}

} // namespace detail

inline double norm(const SpaceSpec& s, const SparseVector& x) {
    if (x.empty()) return 0.0;
    switch (s.kind) {
        case SpaceKind::Lp:
            if (std::isinf(s.p)) return x.max_abs();
            return detail::lp_sum(x, s.p, nullptr);
        case SpaceKind::WeightedLp:
            if (std::isinf(s.p)) {
                double m = 0.0;
                for (const auto& e : x.entries())
                    m = std::max(m, detail::weight_of(s, e.first) * std::abs(e.second));
                return m;
            }
            return detail::lp_sum(x, s.p, &s);
        case SpaceKind::Orlicz:
            return orlicz_gauge(s.orlicz_fn, x, s.tol);
        case SpaceKind::Tsirelson:
            return tsirelson_norm(x, s.tol, s.tsirelson_cap);
        case SpaceKind::PConvex:
            return std::pow(norm(*s.base, x.abs_pow(s.p)), 1.0 / s.p);
        case SpaceKind::PConcave:
            return std::pow(norm(*s.base, x.abs_pow(1.0 / s.p)), s.p);
    }
    throw ConfigError("unknown space kind");
}

namespace detail {

inline double phi_prime(const OrliczFunction& f, double t) {
    double h = 1e-7 * (1.0 + t);
    double lo = std::max(t - h, 0.0);
    return (f.phi(t + h) - f.phi(lo)) / (t + h - lo);
}

} // namespace detail

// Subgradient of the norm at a vector with strictly positive support values.
// Moduli of a are used; the result is real and nonnegative.
inline SparseVector norming_functional(const SpaceSpec& s, const SparseVector& a) {
    if (a.empty()) return SparseVector();
    std::vector<SparseVector::Entry> out;
    switch (s.kind) {
        case SpaceKind::Lp: {
            if (std::isinf(s.p)) {
                double m = a.max_abs();
                for (const auto& e : a.entries())
                    if (std::abs(e.second) == m) return SparseVector::unit(e.first);
                return SparseVector();
            }
            double n = norm(s, a);
            for (const auto& e : a.entries())
                out.emplace_back(e.first, cplx(std::pow(std::abs(e.second) / n, s.p - 1.0), 0.0));
            return SparseVector::from_entries(std::move(out));
        }
        case SpaceKind::WeightedLp: {
            if (std::isinf(s.p)) {
                double m = 0.0;
                std::int64_t arg = 0;
                for (const auto& e : a.entries()) {
                    double v = detail::weight_of(s, e.first) * std::abs(e.second);
                    if (v > m) { m = v; arg = e.first; }
                }
                return SparseVector::unit(arg, cplx(detail::weight_of(s, arg), 0.0));
            }
            double n = norm(s, a);
            for (const auto& e : a.entries())
                out.emplace_back(e.first,
                                 cplx(detail::weight_of(s, e.first) *
                                          std::pow(std::abs(e.second) / n, s.p - 1.0),
                                      0.0));
            return SparseVector::from_entries(std::move(out));
        }
        case SpaceKind::Orlicz: {
            double r = norm(s, a);
            double d = 0.0;
            std::vector<double> der;
            der.reserve(a.size());
            for (const auto& e : a.entries()) {
                double t = std::abs(e.second) / r;
                double dp = detail::phi_prime(s.orlicz_fn, t);
                der.push_back(dp);
                d += dp * t;
            }
            std::size_t k = 0;
            for (const auto& e : a.entries())
                out.emplace_back(e.first, cplx(der[k++] / d, 0.0));
            return SparseVector::from_entries(std::move(out));
        }
        case SpaceKind::Tsirelson:
            return tsirelson_norming(a, s.tol, s.tsirelson_cap).functional;
        case SpaceKind::PConvex: {
            SparseVector ap = a.abs_pow(s.p);
            SparseVector yb = norming_functional(*s.base, ap);
            double nb = norm(s, a); // ||a|| = ||a^p||_base^{1/p}
            for (const auto& e : a.entries()) {
                double yi = std::abs(yb.at(e.first));
                if (yi == 0.0) continue;
                out.emplace_back(e.first,
                                 cplx(std::pow(nb, 1.0 - s.p) * yi *
                                          std::pow(std::abs(e.second), s.p - 1.0),
                                      0.0));
            }
            return SparseVector::from_entries(std::move(out));
        }
        case SpaceKind::PConcave: {
            double q = 1.0 / s.p;
            SparseVector aq = a.abs_pow(q);
            SparseVector yb = norming_functional(*s.base, aq);
            double nbase = norm(*s.base, aq); // ||a||_spec = nbase^p
            for (const auto& e : a.entries()) {
                double yi = std::abs(yb.at(e.first));
                if (yi == 0.0) continue;
                out.emplace_back(e.first,
                                 cplx(std::pow(nbase, s.p - 1.0) * yi *
                                          std::pow(std::abs(e.second), q - 1.0),
                                      0.0));
            }
            return SparseVector::from_entries(std::move(out));
        }
    }
    throw ConfigError("unknown space kind");
}

// Certified lower bound of sup { |<x, y>| : ||y||_s <= 1, supp y inside supp x },
// i.e. the norm of x acting on s.  The candidate at step t depends only on the
// first t-1 steps, so a larger budget replays the smaller one exactly and then
// appends: the result is monotone nondecreasing in budget.
inline double dual_norm_lower(const SpaceSpec& s, const SparseVector& x, int budget = 64) {
    if (x.empty()) return 0.0;
    double best = 0.0;
    SparseVector best_dir;
    auto evaluate = [&](const SparseVector& y) {
        if (y.empty()) return;
        double n = norm(s, y);
        if (n <= 0.0) return;
        double v = pairing_abs(x, y) / n;
        if (v > best) { best = v; best_dir = y; }
    };

    SparseVector ax = x.abs();
    std::vector<SparseVector> stream;
    stream.push_back(ax);              // the x-aligned direction
    stream.push_back(ax.abs_pow(0.0)); // flat on the support
    for (double q : {0.5, 2.0, 0.25, 4.0}) stream.push_back(ax.abs_pow(q));
    std::size_t singles = std::min<std::size_t>(x.size(), 16);
    for (std::size_t k = 0; k < singles; ++k)
        stream.push_back(SparseVector::unit(x.entries()[k].first));

    Rng rng(0x5eedull);
    const auto& ent = x.entries();
    std::size_t climb_pos = 0; // cycles through (entry, factor) probes
    for (int t = 0; t < budget; ++t) {
        if (std::size_t(t) < stream.size()) {
            evaluate(stream[t]);
            continue;
        }
        if (t % 4 == 3 && !best_dir.empty()) {
            // deterministic coordinate probe around the current best
            std::size_t i = climb_pos % ent.size();
            double f = (climb_pos / ent.size()) % 2 == 0 ? 1.25 : 0.8;
            ++climb_pos;
            SparseVector y = best_dir;
            cplx cur = y.at(ent[i].first);
            y.set(ent[i].first, cur == cplx(0.0, 0.0) ? cplx(0.1, 0.0) : cur * f);
            evaluate(y);
        } else {
            std::vector<SparseVector::Entry> rnd;
            rnd.reserve(ent.size());
            for (const auto& e : ent)
                rnd.emplace_back(e.first, cplx(rng.uniform(0.05, 1.0), 0.0));
            evaluate(SparseVector::from_entries(std::move(rnd)));
        }
    }
    return best;
}

} // namespace twistlab
