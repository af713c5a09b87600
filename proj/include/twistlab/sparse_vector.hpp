// Finitely supported complex vectors indexed by positive integers.
//
// Entries are kept sorted by index and exact zeros are never stored, so
// support() is always the honest support.  All lattice operations act on
// moduli; phases ride along through sign().
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace twistlab {

using cplx = std::complex<double>;

class SparseVector {
public:
    using Entry = std::pair<std::int64_t, cplx>;

    SparseVector() = default;

    // Entries need not be sorted; duplicate indices are summed.
    static SparseVector from_entries(std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.first < b.first; });
        SparseVector v;
        for (const Entry& e : entries) {
            if (e.first < 1) throw InputError("vector index must be a positive integer");
            if (!v.entries_.empty() && v.entries_.back().first == e.first)
                v.entries_.back().second += e.second;
            else
                v.entries_.push_back(e);
        }
        v.prune();
        return v;
    }

    // Dense array, position k (0-based) becomes index k+1.
    static SparseVector from_dense(const std::vector<cplx>& dense) {
        SparseVector v;
        for (std::size_t k = 0; k < dense.size(); ++k)
            if (dense[k] != cplx(0.0, 0.0))
                v.entries_.emplace_back(static_cast<std::int64_t>(k) + 1, dense[k]);
        return v;
    }

    static SparseVector unit(std::int64_t i, cplx value = cplx(1.0, 0.0)) {
        SparseVector v;
        if (i < 1) throw InputError("vector index must be a positive integer");
        if (value != cplx(0.0, 0.0)) v.entries_.emplace_back(i, value);
        return v;
    }

    // 1 on [lo, hi], inclusive.
    static SparseVector indicator(std::int64_t lo, std::int64_t hi) {
        if (lo < 1 || hi < lo) throw InputError("indicator range must satisfy 1 <= lo <= hi");
        SparseVector v;
        v.entries_.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t i = lo; i <= hi; ++i) v.entries_.emplace_back(i, cplx(1.0, 0.0));
        return v;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    cplx at(std::int64_t i) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                   [](const Entry& e, std::int64_t k) { return e.first < k; });
        return (it != entries_.end() && it->first == i) ? it->second : cplx(0.0, 0.0);
    }

    void set(std::int64_t i, cplx value) {
        if (i < 1) throw InputError("vector index must be a positive integer");
        auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                   [](const Entry& e, std::int64_t k) { return e.first < k; });
        if (it != entries_.end() && it->first == i) {
            if (value == cplx(0.0, 0.0)) entries_.erase(it);
            else it->second = value;
        } else if (value != cplx(0.0, 0.0)) {
            entries_.insert(it, Entry(i, value));
        }
    }

    std::vector<std::int64_t> support() const {
        std::vector<std::int64_t> s;
        s.reserve(entries_.size());
        for (const Entry& e : entries_) s.push_back(e.first);
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Entry& e : entries_) m = std::max(m, std::abs(e.second));
        return m;
    }

    // |x| as a real vector.
    SparseVector abs() const {
        SparseVector v;
        v.entries_.reserve(entries_.size());
        for (const Entry& e : entries_) v.entries_.emplace_back(e.first, cplx(std::abs(e.second), 0.0));
        return v;
    }

    // x_i / |x_i| on the support.
    SparseVector sign() const {
        SparseVector v;
        v.entries_.reserve(entries_.size());
        for (const Entry& e : entries_) v.entries_.emplace_back(e.first, e.second / std::abs(e.second));
        return v;
    }

    // |x_i|^e on the support (e may be negative; support is preserved).
    SparseVector abs_pow(double e) const {
        SparseVector v;
        v.entries_.reserve(entries_.size());
        for (const Entry& en : entries_)
            v.entries_.emplace_back(en.first, cplx(std::pow(std::abs(en.second), e), 0.0));
        return v;
    }

    SparseVector scaled(cplx a) const {
        if (a == cplx(0.0, 0.0)) return SparseVector();
        SparseVector v;
        v.entries_.reserve(entries_.size());
        for (const Entry& e : entries_) v.entries_.emplace_back(e.first, a * e.second);
        return v;
    }

    friend SparseVector operator+(const SparseVector& a, const SparseVector& b) {
        SparseVector v;
        v.entries_.reserve(a.entries_.size() + b.entries_.size());
        std::size_t i = 0, j = 0;
        while (i < a.entries_.size() || j < b.entries_.size()) {
            if (j == b.entries_.size() ||
                (i < a.entries_.size() && a.entries_[i].first < b.entries_[j].first)) {
                v.entries_.push_back(a.entries_[i++]);
            } else if (i == a.entries_.size() || b.entries_[j].first < a.entries_[i].first) {
                v.entries_.push_back(b.entries_[j++]);
            } else {
                cplx s = a.entries_[i].second + b.entries_[j].second;
                if (s != cplx(0.0, 0.0)) v.entries_.emplace_back(a.entries_[i].first, s);
                ++i; ++j;
            }
        }
        return v;
    }

    friend SparseVector operator-(const SparseVector& a, const SparseVector& b) {
        return a + b.scaled(cplx(-1.0, 0.0));
    }

    // Coordinatewise product a_i * b_i (intersection of supports).
    friend SparseVector hadamard(const SparseVector& a, const SparseVector& b) {
        SparseVector v;
        std::size_t i = 0, j = 0;
        while (i < a.entries_.size() && j < b.entries_.size()) {
            if (a.entries_[i].first < b.entries_[j].first) ++i;
            else if (b.entries_[j].first < a.entries_[i].first) ++j;
            else {
                cplx p = a.entries_[i].second * b.entries_[j].second;
                if (p != cplx(0.0, 0.0)) v.entries_.emplace_back(a.entries_[i].first, p);
                ++i; ++j;
            }
        }
        return v;
    }

    // sum_i |a_i| |b_i|
    friend double pairing_abs(const SparseVector& a, const SparseVector& b) {
        double s = 0.0;
        std::size_t i = 0, j = 0;
        while (i < a.entries_.size() && j < b.entries_.size()) {
            if (a.entries_[i].first < b.entries_[j].first) ++i;
            else if (b.entries_[j].first < a.entries_[i].first) ++j;
            else { s += std::abs(a.entries_[i].second) * std::abs(b.entries_[j].second); ++i; ++j; }
        }
        return s;
    }

    friend bool disjoint(const SparseVector& a, const SparseVector& b) {
        std::size_t i = 0, j = 0;
        while (i < a.entries_.size() && j < b.entries_.size()) {
            if (a.entries_[i].first < b.entries_[j].first) ++i;
            else if (b.entries_[j].first < a.entries_[i].first) ++j;
            else return false;
        }
        return true;
    }

    bool operator==(const SparseVector& o) const { return entries_ == o.entries_; }

private:
    void prune() {
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [](const Entry& e) { return e.second == cplx(0.0, 0.0); }),
                       entries_.end());
    }

    std::vector<Entry> entries_;
};

// max_i |a_i - b_i| over the union of supports.
inline double max_abs_diff(const SparseVector& a, const SparseVector& b) {
    return (a - b).max_abs();
}

} // namespace twistlab
