// Tsirelson norm on finitely supported vectors.
//
// ||x|| = max( ||x||_inf , (1/2) sup sum_k ||E_k x|| ) over admissible
// families k <= E_1 < ... < E_k of successive finite sets.  By
// 1-unconditionality and monotonicity it suffices to consider families whose
// members are intervals of support positions covering a tail [s..j] of the
// enclosing interval, with the block count bounded by the actual first index
// at position s.  The one self-referencing candidate (s = i, one block)
// carries a factor 1/2 and can never bind, so a sweep over intervals of
// increasing length computes the exact fixed point of the recursion.
//
// The argmax trace is an admissible tree attaining the value; folding it
// gives a functional y >= 0 with <y, |x|> = ||x|| and dual norm at most 1
// (leaves are coordinate functionals, each node halves the sum of its
// children, and admissibility makes that combination dominated by ||.||_T).
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "sparse_vector.hpp"

namespace twistlab {

namespace detail {

struct TsiTable {
    int n = 0;
    std::vector<std::int64_t> idx; // actual indices of the support, ascending
    std::vector<double> val;       // moduli

    // all tables are n*n, row = left position, column = right position
    std::vector<double> V;      // norm of the restriction to [i..j]
    std::vector<double> S;      // best strict split: max over 2 <= k <= kmax(i) blocks
    std::vector<int> kbest;     // block count attaining S (smallest)
    std::vector<double> M;      // max over s >= i of max(V[s][j], S[s][j])
    std::vector<int> msrc;      // 0: V[i][j], 1: S[i][j], 2: defer to M[i+1][j]
    std::vector<int> leaf;      // argmax modulus position in [i..j] (first on ties)
    std::vector<double> sup;    // max modulus on [i..j]
    std::vector<int> ch_s, ch_k; // chosen family (start, blocks); -1 = leaf

    std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }
};

// Best sum of exactly k consecutive blocks covering positions [s..e], from V.
// Fills W[k][e] for the fixed left end s; W indexed by (k, offset e - s).
inline void tsi_split_table(const TsiTable& t, int s, int j, int kmax,
                            std::vector<double>& W) {
    const int len = j - s + 1;
    W.assign(static_cast<std::size_t>(kmax + 1) * len, -1.0);
    for (int e = 0; e < len; ++e)
        W[static_cast<std::size_t>(1) * len + e] = t.V[t.at(s, s + e)];
    for (int k = 2; k <= kmax; ++k)
        for (int e = k - 1; e < len; ++e) {
            double best = -1.0;
            for (int m = k - 2; m < e; ++m) {
                double cand = W[static_cast<std::size_t>(k - 1) * len + m] + t.V[t.at(s + m + 1, s + e)];
                if (cand > best) best = cand;
            }
            W[static_cast<std::size_t>(k) * len + e] = best;
        }
}

inline int tsi_kmax(const TsiTable& t, int s, int len) {
    return static_cast<int>(std::min<std::int64_t>(t.idx[static_cast<std::size_t>(s)], len));
}

inline void tsi_fill(TsiTable& t) {
    const int n = t.n;
    std::vector<double> W;
    for (int len = 1; len <= n; ++len) {
        for (int i = 0; i + len - 1 < n; ++i) {
            const int j = i + len - 1;
            const std::size_t ij = t.at(i, j);

            if (len == 1) {
                t.sup[ij] = t.val[static_cast<std::size_t>(i)];
                t.leaf[ij] = i;
            } else {
                const std::size_t prev = t.at(i, j - 1);
                if (t.val[static_cast<std::size_t>(j)] > t.sup[prev]) {
                    t.sup[ij] = t.val[static_cast<std::size_t>(j)];
                    t.leaf[ij] = j;
                } else {
                    t.sup[ij] = t.sup[prev];
                    t.leaf[ij] = t.leaf[prev];
                }
            }

            // strict splits (k >= 2) of [i..j]; every block is a shorter interval
            double split = -1.0;
            int kpick = -1;
            const int kmax = tsi_kmax(t, i, len);
            if (kmax >= 2) {
                tsi_split_table(t, i, j, kmax, W);
                for (int k = 2; k <= kmax; ++k) {
                    double cand = W[static_cast<std::size_t>(k) * len + (len - 1)];
                    if (cand > split * (1.0 + 1e-15)) { split = cand; kpick = k; }
                }
            }
            t.S[ij] = split;
            t.kbest[ij] = kpick;

            const double tail = (i + 1 <= j) ? t.M[t.at(i + 1, j)] : -1.0;
            const double inner = std::max(split, tail);
            double v = t.sup[ij];
            int cs = -1, ck = -1;
            if (0.5 * inner > v * (1.0 + 1e-15)) {
                v = 0.5 * inner;
                if (split >= tail) { cs = i; ck = kpick; }
                else {
                    // walk the max chain to the responsible start position
                    int s = i + 1;
                    while (true) {
                        const std::size_t sj = t.at(s, j);
                        if (t.msrc[sj] == 0) { cs = s; ck = 1; break; }
                        if (t.msrc[sj] == 1) { cs = s; ck = t.kbest[sj]; break; }
                        ++s;
                    }
                }
            }
            t.V[ij] = v;
            t.ch_s[ij] = cs;
            t.ch_k[ij] = ck;

            // running maximum for use by longer intervals
            double m = v;
            int src = 0;
            if (split > m) { m = split; src = 1; }
            if (tail > m) { m = tail; src = 2; }
            t.M[ij] = m;
            t.msrc[ij] = src;
        }
    }
}

inline void tsi_collect(const TsiTable& t, int i, int j, double weight,
                        std::vector<double>& y) {
    const std::size_t ij = t.at(i, j);
    const int s = t.ch_s[ij];
    const int k = t.ch_k[ij];
    if (s < 0) {
        y[static_cast<std::size_t>(t.leaf[ij])] += weight;
        return;
    }
    std::vector<double> W;
    tsi_split_table(t, s, j, k, W);
    const int len = j - s + 1;
    std::vector<std::pair<int, int>> blocks;
    int e = len - 1, kk = k;
    while (kk > 1) {
        int pick = -1;
        for (int m = kk - 2; m < e; ++m) {
            double cand = W[static_cast<std::size_t>(kk - 1) * len + m] + t.V[t.at(s + m + 1, s + e)];
            if (std::abs(cand - W[static_cast<std::size_t>(kk) * len + e]) <= 1e-12 * (1.0 + cand)) {
                pick = m;
                break;
            }
        }
        if (pick < 0) throw NumericalError("tsirelson split backtrack failed");
        blocks.emplace_back(s + pick + 1, s + e);
        e = pick;
        --kk;
    }
    blocks.emplace_back(s, s + e);
    for (const auto& b : blocks) tsi_collect(t, b.first, b.second, 0.5 * weight, y);
}

inline TsiTable tsi_build(const SparseVector& x, int support_cap) {
    const auto& ent = x.entries();
    if (static_cast<int>(ent.size()) > support_cap)
        throw SizeError("tsirelson support size " + std::to_string(ent.size()) +
                        " exceeds cap " + std::to_string(support_cap));
    TsiTable t;
    t.n = static_cast<int>(ent.size());
    t.idx.reserve(ent.size());
    t.val.reserve(ent.size());
    for (const auto& e : ent) {
        t.idx.push_back(e.first);
        t.val.push_back(std::abs(e.second));
    }
    const std::size_t nn = static_cast<std::size_t>(t.n) * t.n;
    t.V.assign(nn, 0.0);
    t.S.assign(nn, -1.0);
    t.kbest.assign(nn, -1);
    t.M.assign(nn, -1.0);
    t.msrc.assign(nn, 0);
    t.leaf.assign(nn, 0);
    t.sup.assign(nn, 0.0);
    t.ch_s.assign(nn, -1);
    t.ch_k.assign(nn, -1);
    return t;
}

} // namespace detail

inline double tsirelson_norm(const SparseVector& x, double tol = 1e-12, int support_cap = 24) {
    (void)tol; // the sweep is exact on finite supports
    if (x.empty()) return 0.0;
    detail::TsiTable t = detail::tsi_build(x, support_cap);
    detail::tsi_fill(t);
    return t.V[t.at(0, t.n - 1)];
}

struct TsirelsonNorming {
    double value = 0.0;
    SparseVector functional; // y >= 0, <y,|x|> = value, dual norm <= 1
};

inline TsirelsonNorming tsirelson_norming(const SparseVector& x, double tol = 1e-12,
                                          int support_cap = 24) {
    (void)tol;
    TsirelsonNorming out;
    if (x.empty()) return out;
    detail::TsiTable t = detail::tsi_build(x, support_cap);
    detail::tsi_fill(t);
    out.value = t.V[t.at(0, t.n - 1)];
    std::vector<double> y(static_cast<std::size_t>(t.n), 0.0);
    detail::tsi_collect(t, 0, t.n - 1, 1.0, y);
    std::vector<SparseVector::Entry> entries;
    for (int l = 0; l < t.n; ++l)
        if (y[static_cast<std::size_t>(l)] > 0.0)
            entries.emplace_back(t.idx[static_cast<std::size_t>(l)],
                                 cplx(y[static_cast<std::size_t>(l)], 0.0));
    out.functional = SparseVector::from_entries(std::move(entries));
    return out;
}

} // namespace twistlab
