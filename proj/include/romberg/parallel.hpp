// Chunked, worker-count-invariant sample loops.
//
// A loop over N samples is cut into fixed chunks of kChunkSize. Chunk c
// draws from stream key derive_key(term_key, c) and sample j of the chunk
// from derive_key(chunk_key, j). Each chunk accumulates its statistics in
// sample order, and chunk results are combined by a pairwise tree whose
// shape depends only on the chunk count. OpenMP only decides which thread
// runs which chunk, so results are bit-identical for any worker count.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "romberg/random.hpp"

namespace romberg {

inline constexpr std::size_t kChunkSize = std::size_t{1} << 12;

/// Degree of parallelism. workers <= 0 uses the OpenMP default.
struct Exec {
    int workers = 0;

    int resolved() const noexcept { return workers > 0 ? workers : omp_get_max_threads(); }
};

/// Running count / mean / centred second moment.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    /// Unbiased sample variance (0 for fewer than two samples).
    double variance() const noexcept {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }
    double std_err() const noexcept {
        return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }

    static Moments merge(const Moments& a, const Moments& b) noexcept {
        if (a.count == 0) return b;
        if (b.count == 0) return a;
        Moments out;
        out.count = a.count + b.count;
        const double na = static_cast<double>(a.count);
        const double nb = static_cast<double>(b.count);
        const double d = b.mean - a.mean;
        out.mean = a.mean + d * (nb / static_cast<double>(out.count));
        out.m2 = a.m2 + b.m2 + d * d * (na * nb / static_cast<double>(out.count));
        return out;
    }
};

/// Running first and second co-moments of a pair (x, y).
struct CoMoments {
    std::uint64_t count = 0;
    double mean_x = 0.0, mean_y = 0.0;
    double m2_x = 0.0, m2_y = 0.0, c_xy = 0.0;

    void add(double x, double y) noexcept {
        ++count;
        const double n = static_cast<double>(count);
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        mean_x += dx / n;
        mean_y += dy / n;
        m2_x += dx * (x - mean_x);
        m2_y += dy * (y - mean_y);
        c_xy += dx * (y - mean_y);
    }

    double variance_x() const noexcept { return count > 1 ? m2_x / static_cast<double>(count - 1) : 0.0; }
    double variance_y() const noexcept { return count > 1 ? m2_y / static_cast<double>(count - 1) : 0.0; }
    double correlation() const noexcept {
        const double d = std::sqrt(m2_x * m2_y);
        return d > 0.0 ? c_xy / d : 0.0;
    }

    static CoMoments merge(const CoMoments& a, const CoMoments& b) noexcept {
        if (a.count == 0) return b;
        if (b.count == 0) return a;
        CoMoments out;
        out.count = a.count + b.count;
        const double n = static_cast<double>(out.count);
        const double na = static_cast<double>(a.count);
        const double nb = static_cast<double>(b.count);
        const double dx = b.mean_x - a.mean_x;
        const double dy = b.mean_y - a.mean_y;
        out.mean_x = a.mean_x + dx * (nb / n);
        out.mean_y = a.mean_y + dy * (nb / n);
        out.m2_x = a.m2_x + b.m2_x + dx * dx * (na * nb / n);
        out.m2_y = a.m2_y + b.m2_y + dy * dy * (na * nb / n);
        out.c_xy = a.c_xy + b.c_xy + dx * dy * (na * nb / n);
        return out;
    }
};

/// Pairwise tree reduction over [0, parts.size()).
template <class T, class Merge>
T tree_reduce(const std::vector<T>& parts, Merge merge) {
    if (parts.empty()) return T{};
    struct Rec {
        const std::vector<T>& p;
        Merge& m;
        T operator()(std::size_t lo, std::size_t hi) const {
            if (hi - lo == 1) return p[lo];
            const std::size_t mid = lo + (hi - lo) / 2;
            return m((*this)(lo, mid), (*this)(mid, hi));
        }
    };
    return Rec{parts, merge}(0, parts.size());
}

inline std::size_t chunk_count(std::size_t samples) noexcept {
    return (samples + kChunkSize - 1) / kChunkSize;
}

/// Runs `body(sample_key, acc)` for every sample, where acc is the per-chunk
/// accumulator of type Acc (default-constructed), then tree-merges the chunk
/// accumulators with Acc::merge.
template <class Acc, class Body>
Acc chunked_samples(std::uint64_t term_key, std::size_t samples, const Exec& exec, Body body) {
    const std::size_t chunks = chunk_count(samples);
    std::vector<Acc> parts(chunks);
    const long long nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.resolved())
    for (long long c = 0; c < nchunks; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkSize;
        const std::size_t end = std::min(samples, begin + kChunkSize);
        const std::uint64_t chunk_key = derive_key(term_key, static_cast<std::uint32_t>(c));
        Acc acc{};
        for (std::size_t i = begin; i < end; ++i)
            body(derive_key(chunk_key, static_cast<std::uint32_t>(i - begin)), acc);
        parts[static_cast<std::size_t>(c)] = acc;
    }
    return tree_reduce(parts, [](const Acc& a, const Acc& b) { return Acc::merge(a, b); });
}

/// Stream of sample i under the chunk layout above, for serial reference code.
inline RngStream sample_stream(const RngStream& term, std::size_t i) {
    return term.split(static_cast<std::uint32_t>(i / kChunkSize))
        .split(static_cast<std::uint32_t>(i % kChunkSize));
}

/// Stream indices of the estimator terms.
enum Term : std::uint32_t {
    kCoarseTerm = 0,   // independent coarse samples
    kCoupledTerm = 1,  // fine/coarse pairs sharing one path
    kCrudeTerm = 2,    // single-level Monte Carlo
};

}  // namespace romberg
