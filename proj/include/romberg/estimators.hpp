// Crude Monte Carlo and the two-level statistical Romberg estimator
//
//   V_n = (1/N_m) sum f(Xhat^m_T) + (1/N_n) sum [f(X^n_T) - f(X^m_T)],
//
// where the correction pairs (X^n, X^m) share one Brownian path built on
// the union of the two grids and the Xhat^m are driven by an independent
// stream.
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "romberg/models.hpp"
#include "romberg/parallel.hpp"
#include "romberg/random.hpp"

namespace romberg {

enum class Scheme { euler, trapezoidal };

struct SrParams {
    double alpha = 1.0;
    double beta = 0.5;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t coarse_samples = 1;      // N_m
    std::size_t correction_samples = 1;  // N_n
    Scheme scheme = Scheme::euler;

    /// Throws std::invalid_argument unless 2 <= m < n and both counts >= 1.
    void validate() const;
};

/// For crude Monte Carlo `coarse_samples` holds N and `correction_samples`
/// is zero.
struct EstimateResult {
    double value = 0.0;
    double std_err = 0.0;
    std::size_t coarse_samples = 0;
    std::size_t correction_samples = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Round half up, then clamp from below.
std::size_t round_count(double x, std::size_t floor_at);

/// Parameters for an arbitrary beta: m = n^beta and the sample-count
/// exponents that balance statistical and discretization error, i.e.
/// (2 alpha, 2 alpha - beta) for Euler and (2, 2 - 2 beta) for the
/// trapezoidal scheme.
SrParams romberg_params(double alpha, double beta, std::size_t n, Scheme scheme);

/// beta = 1/2 for Euler, beta = 1/3 for the trapezoidal scheme. n >= 4.
SrParams optimal_params(double alpha, std::size_t n, Scheme scheme);

/// Cost m N_m + (n + m) N_n with the rounded counts of `p`.
double complexity(const SrParams& p);

/// Crude Monte Carlo cost n N with N = n^{2 alpha}.
double complexity_mc(double alpha, double n);

/// Cost with exact (unrounded) powers:
/// n^{beta + g1} + (n + n^beta) n^{g2} with (g1, g2) as in romberg_params.
double complexity_exact(double alpha, double beta, double n, Scheme scheme);

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Both grids of a coupled pair plus, for each interval of their union,
/// whether it closes a fine and/or a coarse interval.
struct CoupledGrids {
    TimeGrid fine;
    TimeGrid coarse;
    TimeGrid merged;
    std::vector<unsigned char> closes_fine;
    std::vector<unsigned char> closes_coarse;

    CoupledGrids(double horizon, std::size_t n, std::size_t m);
};

template <Diffusion M>
typename M::State euler_sample(const M& model, const TimeGrid& grid, Generator& gen) {
    auto x = model.initial();
    typename M::Noise dw;
    for (std::size_t k = 0; k < grid.intervals(); ++k) {
        const double h = grid.sqrt_step(k);
        for (auto& v : dw) v = h * gen.normal();
        euler_step(model, x, grid.step(k), dw.data());
    }
    return x;
}

/// Fine and coarse Euler terminals on one path. The increments are drawn on
/// the union grid in the same order as brownian_increments, and summed left
/// to right as coarsen_increments does.
template <Diffusion M>
std::pair<typename M::State, typename M::State> coupled_euler_sample(const M& model,
                                                                     const CoupledGrids& g,
                                                                     Generator& gen) {
    auto xf = model.initial();
    auto xc = xf;
    typename M::Noise dwf{}, dwc{};
    std::size_t kf = 0, kc = 0;
    for (std::size_t k = 0; k < g.merged.intervals(); ++k) {
        const double h = g.merged.sqrt_step(k);
        for (std::size_t c = 0; c < M::noise_dim; ++c) {
            const double dw = h * gen.normal();
            dwf[c] += dw;
            dwc[c] += dw;
        }
        if (g.closes_fine[k]) {
            euler_step(model, xf, g.fine.step(kf++), dwf.data());
            dwf.fill(0.0);
        }
        if (g.closes_coarse[k]) {
            euler_step(model, xc, g.coarse.step(kc++), dwc.data());
            dwc.fill(0.0);
        }
    }
    return {xf, xc};
}

}  // namespace detail

/// (1/N) sum f(X^n_{T,i}) over N independent Euler paths.
template <Diffusion M>
EstimateResult mc_estimate(const M& model, const TestFunction& f, std::size_t n, std::size_t N,
                           const RngStream& stream, const Exec& exec = {}) {
    if (N < 2) throw std::invalid_argument("mc_estimate: need at least two samples");
    if (f.dimension() != M::dim) throw std::invalid_argument("mc_estimate: dimension mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const TimeGrid grid = TimeGrid::uniform(model.horizon(), n);
    const Moments mom = chunked_samples<Moments>(
        stream.split(kCrudeTerm).key(), N, exec, [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            acc.add(f(detail::euler_sample(model, grid, gen)));
        });
    return {mom.mean, mom.std_err(), N, 0, detail::seconds_since(t0), stream.master_seed()};
}

/// Statistical Romberg estimate with Euler schemes at n and m steps.
template <Diffusion M>
EstimateResult sr_estimate(const M& model, const TestFunction& f, const SrParams& p,
                           const RngStream& stream, const Exec& exec = {}) {
    p.validate();
    if (p.scheme != Scheme::euler)
        throw std::invalid_argument("sr_estimate: diffusion models use the Euler scheme");
    if (f.dimension() != M::dim) throw std::invalid_argument("sr_estimate: dimension mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const double T = model.horizon();
    const TimeGrid coarse = TimeGrid::uniform(T, p.m);
    const detail::CoupledGrids pair(T, p.n, p.m);

    const Moments first = chunked_samples<Moments>(
        stream.split(kCoarseTerm).key(), p.coarse_samples, exec,
        [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            acc.add(f(detail::euler_sample(model, coarse, gen)));
        });
    const Moments second = chunked_samples<Moments>(
        stream.split(kCoupledTerm).key(), p.correction_samples, exec,
        [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto [xf, xc] = detail::coupled_euler_sample(model, pair, gen);
            acc.add(f(xf) - f(xc));
        });
    const double var = first.variance() / static_cast<double>(p.coarse_samples) +
                       second.variance() / static_cast<double>(p.correction_samples);
    return {first.mean + second.mean, std::sqrt(var), p.coarse_samples, p.correction_samples,
            detail::seconds_since(t0), stream.master_seed()};
}

/// Sample variance of Q = f(X^n_T) - f(X^m_T) over N coupled pairs.
template <Diffusion M>
double control_variate_variance(const M& model, const TestFunction& f, std::size_t n,
                                std::size_t m, std::size_t N, const RngStream& stream,
                                const Exec& exec = {}) {
    if (m == 0 || m > n) throw std::invalid_argument("control_variate_variance: need 0 < m <= n");
    if (N < 100) throw std::invalid_argument("control_variate_variance: need at least 100 pairs");
    const detail::CoupledGrids pair(model.horizon(), n, m);
    const Moments mom = chunked_samples<Moments>(
        stream.split(kCoupledTerm).key(), N, exec, [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto [xf, xc] = detail::coupled_euler_sample(model, pair, gen);
            acc.add(f(xf) - f(xc));
        });
    return mom.variance();
}

}  // namespace romberg
