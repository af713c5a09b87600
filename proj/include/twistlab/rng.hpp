// Deterministic sampling utilities.
//
// Every sampler is a pure function of an explicit 64-bit seed; the k-th draw
// of a stream depends only on (seed, k).  std::uniform_* distributions are
// implementation-defined, so uniforms are built from raw engine output.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sparse_vector.hpp"

namespace twistlab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive integer range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Box-Muller; deterministic pairing of draws.
    double gaussian() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::mt19937_64 eng_;
};

struct VectorSamplerOptions {
    std::int64_t dim = 16;           // indices drawn from [1, dim]
    int min_support = 1;
    int max_support = 8;
    double log_scale = 2.0;          // |entry| = exp(log_scale * centered uniform)
    bool complex_phases = false;
};

// k-th vector of the stream identified by seed.
inline SparseVector sample_vector(std::uint64_t seed, std::uint64_t k,
                                  const VectorSamplerOptions& opt = {}) {
    Rng rng(seed * 0x9E3779B97F4A7C15ull + k + 1);
    int m = static_cast<int>(rng.uniform_int(opt.min_support,
                                             std::min<std::int64_t>(opt.max_support, opt.dim)));
    std::vector<std::int64_t> pool(static_cast<std::size_t>(opt.dim));
    for (std::int64_t i = 0; i < opt.dim; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    // partial Fisher-Yates for the first m slots
    std::vector<SparseVector::Entry> entries;
    for (int j = 0; j < m; ++j) {
        std::int64_t pick = rng.uniform_int(j, opt.dim - 1);
        std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
        double mag = std::exp(opt.log_scale * (rng.uniform() - 0.5) * 2.0);
        cplx val(mag, 0.0);
        if (opt.complex_phases) {
            double ph = rng.uniform(0.0, 6.283185307179586476925287);
            val = cplx(mag * std::cos(ph), mag * std::sin(ph));
        }
        entries.emplace_back(pool[static_cast<std::size_t>(j)], val);
    }
    return SparseVector::from_entries(std::move(entries));
}

} // namespace twistlab
