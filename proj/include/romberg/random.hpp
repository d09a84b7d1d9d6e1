// Counter-based random streams, time grids and Brownian increments.
//
// Every stream is a pure function of (master seed, derivation path). A
// stream is turned into draws by a Philox4x32-10 block generator keyed
// with the stream key; the counter starts at zero for each stream, so
// draws never depend on scheduling or on how many workers are used.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace romberg {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key of the child stream `index` of a stream with key `parent`.
/// Not symmetric: derive(derive(k, a), b) != derive(derive(k, b), a).
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint32_t index) noexcept {
    return mix64(parent ^ mix64(0xA0761D6478BD642FULL + static_cast<std::uint64_t>(index)));
}

constexpr std::uint64_t root_key(std::uint64_t master_seed) noexcept {
    return mix64(master_seed ^ 0xE7037ED1A0B428DBULL);
}

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed = 0);

    RngStream split(std::uint32_t index) const;

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::span<const std::uint32_t> path() const noexcept { return path_; }
    std::uint64_t key() const noexcept { return key_; }

    friend bool operator==(const RngStream& a, const RngStream& b) noexcept {
        return a.master_seed_ == b.master_seed_ && a.path_ == b.path_;
    }

private:
    std::uint64_t master_seed_;
    std::vector<std::uint32_t> path_;
    std::uint64_t key_;
};

inline RngStream split_stream(const RngStream& parent, std::uint32_t index) {
    return parent.split(index);
}

/// Sequential draws from one stream key. Cheap to construct; kernels make
/// one per sample.
class Generator {
public:
    explicit Generator(std::uint64_t key) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}
    explicit Generator(const RngStream& s) noexcept : Generator(s.key()) {}

    std::uint64_t next_u64() noexcept {
        if (pos_ == 4) refill();
        const std::uint64_t hi = block_[pos_];
        const std::uint64_t lo = block_[pos_ + 1];
        pos_ += 2;
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal, Marsaglia polar method.
    double normal() noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Partition 0 = t_0 < t_1 < ... < t_n = T. Uniform grids remember their
/// step count so that nested unions can be formed exactly.
class TimeGrid {
public:
    static TimeGrid uniform(double horizon, std::size_t steps);

    /// Union of the uniform partitions with `fine` and `coarse` steps.
    static TimeGrid union_of(double horizon, std::size_t fine, std::size_t coarse);

    double horizon() const noexcept { return nodes_.back(); }
    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t k) const noexcept { return nodes_[k]; }
    double step(std::size_t k) const noexcept { return steps_[k]; }
    double sqrt_step(std::size_t k) const noexcept { return sqrt_steps_[k]; }
    bool is_uniform() const noexcept { return uniform_steps_ != 0; }

    bool contains_nodes_of(const TimeGrid& other) const noexcept;

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
        return a.nodes_ == b.nodes_;
    }

private:
    explicit TimeGrid(std::vector<double> nodes, std::size_t uniform_steps);

    std::vector<double> nodes_;
    std::vector<double> steps_;
    std::vector<double> sqrt_steps_;
    std::size_t uniform_steps_;
};

/// Brownian increments on a grid, q components per interval, stored
/// interval-major.
struct PathIncrements {
    TimeGrid grid;
    std::size_t q;
    std::vector<double> increments;

    std::span<const double> at(std::size_t k) const noexcept {
        return std::span<const double>(increments).subspan(k * q, q);
    }
    std::vector<double> terminal() const;
};

PathIncrements brownian_increments(const RngStream& stream, const TimeGrid& grid, std::size_t q);

/// Draws increments for `grid` from an existing generator, interval by
/// interval, component by component.
PathIncrements brownian_increments(Generator& gen, const TimeGrid& grid, std::size_t q);

class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sums fine increments over each interval of `coarse_grid`, left to right.
/// Throws GridMismatch when a coarse node is not a fine node.
PathIncrements coarsen_increments(const PathIncrements& fine, const TimeGrid& coarse_grid);

}  // namespace romberg
