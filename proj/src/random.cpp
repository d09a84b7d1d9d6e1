#include "romberg/random.hpp"

#include <cmath>
#include <numeric>

namespace romberg {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Node k of a uniform n-step partition, computed from the reduced fraction
// k/n so that coinciding nodes of different partitions are bit-identical.
double fraction_node(double horizon, std::size_t k, std::size_t n) {
    if (k == 0) return 0.0;
    if (k == n) return horizon;
    const std::size_t g = std::gcd(k, n);
    return horizon * static_cast<double>(k / g) / static_cast<double>(n / g);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

RngStream::RngStream(std::uint64_t master_seed)
    : master_seed_(master_seed), key_(root_key(master_seed)) {}

RngStream RngStream::split(std::uint32_t index) const {
    RngStream child = *this;
    child.path_.push_back(index);
    child.key_ = derive_key(key_, index);
    return child;
}

void Generator::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                           static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u};
    block_ = philox4x32_10(ctr, key_);
    ++counter_;
    pos_ = 0;
}

double Generator::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

TimeGrid::TimeGrid(std::vector<double> nodes, std::size_t uniform_steps)
    : nodes_(std::move(nodes)), uniform_steps_(uniform_steps) {
    steps_.resize(nodes_.size() - 1);
    sqrt_steps_.resize(nodes_.size() - 1);
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
        steps_[k] = nodes_[k + 1] - nodes_[k];
        sqrt_steps_[k] = std::sqrt(steps_[k]);
    }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps == 0) throw std::invalid_argument("TimeGrid: step count must be positive");
    std::vector<double> nodes(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) nodes[k] = fraction_node(horizon, k, steps);
    return TimeGrid(std::move(nodes), steps);
}

TimeGrid TimeGrid::union_of(double horizon, std::size_t fine, std::size_t coarse) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (fine == 0 || coarse == 0)
        throw std::invalid_argument("TimeGrid: step count must be positive");
    if (fine == coarse) return uniform(horizon, fine);

    std::vector<double> nodes;
    nodes.reserve(fine + coarse + 1);
    std::size_t i = 0, j = 0;
    // Compare i/fine against j/coarse exactly.
    while (i <= fine || j <= coarse) {
        const std::uint64_t a = static_cast<std::uint64_t>(i) * coarse;
        const std::uint64_t b = static_cast<std::uint64_t>(j) * fine;
        if (j > coarse || (i <= fine && a < b)) {
            nodes.push_back(fraction_node(horizon, i, fine));
            ++i;
        } else if (i > fine || b < a) {
            nodes.push_back(fraction_node(horizon, j, coarse));
            ++j;
        } else {
            nodes.push_back(fraction_node(horizon, i, fine));
            ++i;
            ++j;
        }
    }
    return TimeGrid(std::move(nodes), 0);
}

bool TimeGrid::contains_nodes_of(const TimeGrid& other) const noexcept {
    std::size_t k = 0;
    for (double t : other.nodes_) {
        while (k < nodes_.size() && nodes_[k] < t) ++k;
        if (k == nodes_.size() || nodes_[k] != t) return false;
    }
    return true;
}

std::vector<double> PathIncrements::terminal() const {
    std::vector<double> w(q, 0.0);
    for (std::size_t k = 0; k < grid.intervals(); ++k)
        for (std::size_t c = 0; c < q; ++c) w[c] += increments[k * q + c];
    return w;
}

PathIncrements brownian_increments(Generator& gen, const TimeGrid& grid, std::size_t q) {
    if (q == 0) throw std::invalid_argument("brownian_increments: q must be positive");
    PathIncrements out{grid, q, std::vector<double>(grid.intervals() * q)};
    for (std::size_t k = 0; k < grid.intervals(); ++k) {
        const double h = grid.sqrt_step(k);
        for (std::size_t c = 0; c < q; ++c) out.increments[k * q + c] = h * gen.normal();
    }
    return out;
}

PathIncrements brownian_increments(const RngStream& stream, const TimeGrid& grid, std::size_t q) {
    Generator gen(stream);
    return brownian_increments(gen, grid, q);
}

PathIncrements coarsen_increments(const PathIncrements& fine, const TimeGrid& coarse_grid) {
    if (!fine.grid.contains_nodes_of(coarse_grid))
        throw GridMismatch("coarsen_increments: coarse grid is not embedded in the fine grid");
    const std::size_t q = fine.q;
    PathIncrements out{coarse_grid, q, std::vector<double>(coarse_grid.intervals() * q, 0.0)};
    const auto fine_nodes = fine.grid.nodes();
    std::size_t k = 0;
    for (std::size_t j = 0; j < coarse_grid.intervals(); ++j) {
        const double end = coarse_grid.node(j + 1);
        while (k < fine.grid.intervals() && fine_nodes[k + 1] <= end) {
            for (std::size_t c = 0; c < q; ++c) out.increments[j * q + c] += fine.increments[k * q + c];
            ++k;
        }
    }
    return out;
}

}  // namespace romberg
