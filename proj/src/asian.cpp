#include "romberg/asian.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace romberg {

namespace {

// Streaming trapezoid on one uniform grid. Increments are pushed in path
// order; close() ends the current interval.
class TrapezoidLevel {
public:
    TrapezoidLevel(const GbmParams& p, const TimeGrid& grid)
        : p_(p), grid_(grid), mu_(p.r - 0.5 * p.sigma * p.sigma), s_prev_(p.s0) {}

    void push(double inc) noexcept { dw_ += inc; }

    void close() noexcept {
        const double dt = grid_.step(k_);
        sum_ += dt * s_prev_ * (1.0 + 0.5 * p_.r * dt + 0.5 * p_.sigma * dw_);
        w_ += dw_;
        dw_ = 0.0;
        ++k_;
        s_prev_ = p_.s0 * std::exp(mu_ * grid_.node(k_) + p_.sigma * w_);
    }

    /// S at the last closed node.
    double spot() const noexcept { return s_prev_; }
    double w() const noexcept { return w_; }
    double average() const noexcept { return sum_ / p_.T; }

private:
    const GbmParams& p_;
    const TimeGrid& grid_;
    double mu_;
    double s_prev_;
    double sum_ = 0.0;
    double w_ = 0.0;
    double dw_ = 0.0;
    std::size_t k_ = 0;
};

// Trapezoid on `grid` whose every interval is `stride` consecutive
// increments of `fine`.
std::pair<double, double> level_from_fine(const GbmParams& p, const TimeGrid& grid,
                                          std::span<const double> fine, std::size_t stride) {
    TrapezoidLevel level(p, grid);
    for (std::size_t k = 0, j = 0; k < grid.intervals(); ++k) {
        for (std::size_t s = 0; s < stride; ++s) level.push(fine[j++]);
        level.close();
    }
    return {level.spot(), level.average()};
}

struct ChiPath {
    double chi_T, w_T, s_T, average;
};

ChiPath chi_path(const GbmParams& p, const TimeGrid& grid, Generator& gw, Generator& gb) {
    TrapezoidLevel level(p, grid);
    double chi = 0.0;
    for (std::size_t k = 0; k < grid.intervals(); ++k) {
        const double h = grid.sqrt_step(k);
        chi += level.spot() * h * gb.normal();
        level.push(h * gw.normal());
        level.close();
    }
    const double scale = p.sigma / (2.0 * std::sqrt(3.0));
    return {scale * chi, level.w(), level.spot(), level.average()};
}

// Accumulates one Moments per slot.
struct SlotMoments {
    std::vector<Moments> slots;

    void add(std::size_t i, double x, std::size_t size) {
        if (slots.size() < size) slots.resize(size);
        slots[i].add(x);
    }

    static SlotMoments merge(const SlotMoments& a, const SlotMoments& b) {
        if (a.slots.empty()) return b;
        if (b.slots.empty()) return a;
        SlotMoments out;
        out.slots.resize(a.slots.size());
        for (std::size_t i = 0; i < a.slots.size(); ++i)
            out.slots[i] = Moments::merge(a.slots[i], b.slots[i]);
        return out;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_divides(std::span<const std::size_t> n_list, std::size_t refine, const char* who) {
    if (n_list.empty()) throw std::invalid_argument(std::string(who) + ": empty n_list");
    if (refine < 1) throw std::invalid_argument(std::string(who) + ": refine must be >= 1");
    std::size_t n_max = 0;
    for (auto n : n_list) n_max = std::max(n_max, n);
    for (auto n : n_list)
        if (n == 0 || n_max % n != 0)
            throw std::invalid_argument(std::string(who) + ": every n must divide max(n_list)");
}

}  // namespace

namespace detail {

std::pair<double, double> trapezoid_sample(const GbmParams& p, const TimeGrid& grid, Generator& gen) {
    TrapezoidLevel level(p, grid);
    for (std::size_t k = 0; k < grid.intervals(); ++k) {
        level.push(grid.sqrt_step(k) * gen.normal());
        level.close();
    }
    return {level.spot(), level.average()};
}

TrapezoidPair coupled_trapezoid_sample(const GbmParams& p, const CoupledGrids& g, Generator& gen) {
    TrapezoidLevel fine(p, g.fine);
    TrapezoidLevel coarse(p, g.coarse);
    for (std::size_t k = 0; k < g.merged.intervals(); ++k) {
        const double inc = g.merged.sqrt_step(k) * gen.normal();
        fine.push(inc);
        coarse.push(inc);
        if (g.closes_fine[k]) fine.close();
        if (g.closes_coarse[k]) coarse.close();
    }
    return {fine.spot(), fine.average(), coarse.average()};
}

}  // namespace detail

double trapezoidal_integral(const GbmParams& p, const PathIncrements& w) {
    if (w.q != 1) throw std::invalid_argument("trapezoidal_integral: expected scalar Brownian motion");
    TrapezoidLevel level(p, w.grid);
    for (std::size_t k = 0; k < w.grid.intervals(); ++k) {
        level.push(w.increments[k]);
        level.close();
    }
    return level.average();
}

double average_mean(const GbmParams& p) {
    if (p.r == 0.0) return p.s0;
    return p.s0 * std::expm1(p.r * p.T) / (p.r * p.T);
}

EstimateResult mc_asian_estimate(const GbmParams& p, const AsianPayoff& payoff, std::size_t n,
                                 std::size_t N, const RngStream& stream, const Exec& exec) {
    p.validate();
    if (N < 2) throw std::invalid_argument("mc_asian_estimate: need at least two samples");
    const auto t0 = std::chrono::steady_clock::now();
    const TimeGrid grid = TimeGrid::uniform(p.T, n);
    const Moments mom = chunked_samples<Moments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto [s_T, avg] = detail::trapezoid_sample(p, grid, gen);
            acc.add(payoff(s_T, avg));
        });
    const double disc = std::exp(-p.r * p.T);
    return {disc * mom.mean, disc * mom.std_err(), N, 0, seconds_since(t0), stream.master_seed()};
}

EstimateResult sr_asian_estimate(const GbmParams& p, const AsianPayoff& payoff,
                                 const SrParams& params, const RngStream& stream, const Exec& exec) {
    p.validate();
    params.validate();
    if (params.scheme != Scheme::trapezoidal)
        throw std::invalid_argument("sr_asian_estimate: parameters must use the trapezoidal scheme");
    const auto t0 = std::chrono::steady_clock::now();
    const TimeGrid coarse = TimeGrid::uniform(p.T, params.m);
    const detail::CoupledGrids pair(p.T, params.n, params.m);

    const Moments first = chunked_samples<Moments>(
        stream.split(kCoarseTerm).key(), params.coarse_samples, exec,
        [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto [s_T, avg] = detail::trapezoid_sample(p, coarse, gen);
            acc.add(payoff(s_T, avg));
        });
    const Moments second = chunked_samples<Moments>(
        stream.split(kCoupledTerm).key(), params.correction_samples, exec,
        [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto s = detail::coupled_trapezoid_sample(p, pair, gen);
            acc.add(payoff(s.s_T, s.fine) - payoff(s.s_T, s.coarse));
        });
    const double disc = std::exp(-p.r * p.T);
    const double var = first.variance() / static_cast<double>(params.coarse_samples) +
                       second.variance() / static_cast<double>(params.correction_samples);
    return {disc * (first.mean + second.mean), disc * std::sqrt(var), params.coarse_samples,
            params.correction_samples, seconds_since(t0), stream.master_seed()};
}

ChiSample simulate_chi(const GbmParams& p, const TimeGrid& fine_grid, const RngStream& stream) {
    p.validate();
    if (fine_grid.intervals() < 64) throw std::invalid_argument("simulate_chi: need at least 64 steps");
    Generator gw(stream.split(0));
    Generator gb(stream.split(1));
    const ChiPath c = chi_path(p, fine_grid, gw, gb);
    return {c.chi_T, c.w_T, c.s_T, c.average};
}

double chi_variance_limit(const GbmParams& p) {
    const double a = 2.0 * p.r + p.sigma * p.sigma;
    const double growth = a == 0.0 ? p.T : std::expm1(a * p.T) / a;
    return p.sigma * p.sigma / 12.0 * p.s0 * p.s0 * growth;
}

ChiStatistics chi_statistics(const GbmParams& p, std::size_t n, std::size_t N,
                             const RngStream& stream, const Exec& exec) {
    p.validate();
    if (n < 64) throw std::invalid_argument("chi_statistics: need at least 64 steps");
    if (N < 2) throw std::invalid_argument("chi_statistics: need at least two samples");
    const TimeGrid grid = TimeGrid::uniform(p.T, n);
    const CoMoments mom = chunked_samples<CoMoments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, CoMoments& acc) {
            Generator gw(derive_key(key, 0));
            Generator gb(derive_key(key, 1));
            const ChiPath c = chi_path(p, grid, gw, gb);
            acc.add(c.chi_T, c.w_T);
        });
    ChiStatistics out;
    out.samples = N;
    out.mean = mom.mean_x;
    out.variance = mom.variance_x();
    out.mean_std_err = std::sqrt(out.variance / static_cast<double>(N));
    out.corr_with_w = mom.correlation();
    return out;
}

MeanEstimate weak_error_limit(const GbmParams& p, const AsianPayoff& payoff, std::size_t n_ref,
                              std::size_t N, const RngStream& stream, const Exec& exec) {
    p.validate();
    if (n_ref < 64) throw std::invalid_argument("weak_error_limit: need at least 64 steps");
    if (N < 2) throw std::invalid_argument("weak_error_limit: need at least two samples");
    const TimeGrid grid = TimeGrid::uniform(p.T, n_ref);
    const Moments mom = chunked_samples<Moments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, Moments& acc) {
            Generator gw(derive_key(key, 0));
            Generator gb(derive_key(key, 1));
            const ChiPath c = chi_path(p, grid, gw, gb);
            acc.add(payoff.d_avg(c.s_T, c.average) * c.chi_T);
        });
    return {mom.mean, mom.std_err()};
}

ScaledBias trapezoid_scaled_bias(const GbmParams& p, const AsianPayoff& payoff,
                                 std::span<const std::size_t> n_list, std::size_t refine,
                                 std::size_t N, const RngStream& stream, const Exec& exec) {
    p.validate();
    check_divides(n_list, refine, "trapezoid_scaled_bias");
    if (N < 2) throw std::invalid_argument("trapezoid_scaled_bias: need at least two samples");
    std::size_t n_max = 0;
    for (auto n : n_list) n_max = std::max(n_max, n);
    const std::size_t n_fine = refine * n_max;
    const TimeGrid fine = TimeGrid::uniform(p.T, n_fine);
    const std::size_t levels = n_list.size();
    std::vector<TimeGrid> coarse_grids, ref_grids;
    for (auto n : n_list) {
        coarse_grids.push_back(TimeGrid::uniform(p.T, n));
        ref_grids.push_back(TimeGrid::uniform(p.T, refine * n));
    }

    // Intercept weights of the least-squares fit y = a + b x with x = 1/n.
    std::vector<double> w(levels, 1.0 / static_cast<double>(levels));
    if (levels > 1) {
        double sx = 0.0, sxx = 0.0;
        for (auto n : n_list) {
            const double x = 1.0 / static_cast<double>(n);
            sx += x;
            sxx += x * x;
        }
        const double det = static_cast<double>(levels) * sxx - sx * sx;
        for (std::size_t j = 0; j < levels; ++j) {
            const double x = 1.0 / static_cast<double>(n_list[j]);
            w[j] = (sxx - x * sx) / det;
        }
    }

    const SlotMoments mom = chunked_samples<SlotMoments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, SlotMoments& acc) {
            thread_local std::vector<double> incs;
            incs.resize(n_fine);
            Generator gen(key);
            for (std::size_t k = 0; k < n_fine; ++k) incs[k] = fine.sqrt_step(k) * gen.normal();
            double combined = 0.0;
            for (std::size_t j = 0; j < levels; ++j) {
                const std::size_t n = n_list[j];
                const auto [s_T, avg_n] = level_from_fine(p, coarse_grids[j], incs, n_fine / n);
                const auto [s_ref, avg_ref] =
                    level_from_fine(p, ref_grids[j], incs, n_fine / (refine * n));
                const double y =
                    static_cast<double>(n) * (payoff(s_T, avg_n) - payoff(s_ref, avg_ref));
                acc.add(j, y, levels + 1);
                combined += w[j] * y;
            }
            acc.add(levels, combined, levels + 1);
        });

    ScaledBias out;
    out.n.assign(n_list.begin(), n_list.end());
    for (std::size_t j = 0; j < levels; ++j)
        out.scaled.push_back({mom.slots[j].mean, mom.slots[j].std_err()});
    out.intercept = {mom.slots[levels].mean, mom.slots[levels].std_err()};
    return out;
}

std::vector<double> trapezoid_strong_error(const GbmParams& p, std::span<const std::size_t> n_list,
                                           std::size_t refine, std::size_t N,
                                           const RngStream& stream, const Exec& exec) {
    p.validate();
    check_divides(n_list, refine, "trapezoid_strong_error");
    if (N < 2) throw std::invalid_argument("trapezoid_strong_error: need at least two samples");
    std::size_t n_max = 0;
    for (auto n : n_list) n_max = std::max(n_max, n);
    const std::size_t n_fine = refine * n_max;
    const TimeGrid fine = TimeGrid::uniform(p.T, n_fine);
    const std::size_t levels = n_list.size();
    std::vector<TimeGrid> coarse_grids, ref_grids;
    for (auto n : n_list) {
        coarse_grids.push_back(TimeGrid::uniform(p.T, n));
        ref_grids.push_back(TimeGrid::uniform(p.T, refine * n));
    }
    const SlotMoments mom = chunked_samples<SlotMoments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, SlotMoments& acc) {
            thread_local std::vector<double> incs;
            incs.resize(n_fine);
            Generator gen(key);
            for (std::size_t k = 0; k < n_fine; ++k) incs[k] = fine.sqrt_step(k) * gen.normal();
            for (std::size_t j = 0; j < levels; ++j) {
                const std::size_t n = n_list[j];
                const double a = level_from_fine(p, coarse_grids[j], incs, n_fine / n).second;
                const double b = level_from_fine(p, ref_grids[j], incs, n_fine / (refine * n)).second;
                acc.add(j, (a - b) * (a - b), levels);
            }
        });
    std::vector<double> rms(levels);
    for (std::size_t j = 0; j < levels; ++j) rms[j] = std::sqrt(mom.slots[j].mean);
    return rms;
}

double trapezoid_coupled_variance(const GbmParams& p, std::size_t n, std::size_t m, std::size_t N,
                                  const RngStream& stream, const Exec& exec) {
    p.validate();
    if (m == 0 || m > n) throw std::invalid_argument("trapezoid_coupled_variance: need 0 < m <= n");
    if (N < 2) throw std::invalid_argument("trapezoid_coupled_variance: need at least two samples");
    const detail::CoupledGrids pair(p.T, n, m);
    const Moments mom = chunked_samples<Moments>(
        stream.split(kCoupledTerm).key(), N, exec, [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto s = detail::coupled_trapezoid_sample(p, pair, gen);
            acc.add(s.fine - s.coarse);
        });
    return mom.variance();
}

}  // namespace romberg
