// Serial reference versions of the estimators. Each sample materializes
// its Brownian increments with brownian_increments on the stream the
// parallel kernels would use for it, and coupled pairs are built with
// coarsen_increments on the union grid. Used by tests and kernel_bench.
#pragma once

#include <cmath>
#include <cstddef>

#include "romberg/asian.hpp"
#include "romberg/estimators.hpp"
#include "romberg/models.hpp"
#include "romberg/parallel.hpp"
#include "romberg/random.hpp"

namespace romberg::reference {

struct Result {
    double value = 0.0;
    double std_err = 0.0;
};

template <Diffusion M>
Moments mc_moments(const M& model, const TestFunction& f, std::size_t n, std::size_t N,
                   const RngStream& stream) {
    const TimeGrid grid = TimeGrid::uniform(model.horizon(), n);
    const RngStream term = stream.split(kCrudeTerm);
    Moments mom;
    for (std::size_t i = 0; i < N; ++i) {
        const PathIncrements w = brownian_increments(sample_stream(term, i), grid, M::noise_dim);
        mom.add(f(euler_terminal(model, grid, w)));
    }
    return mom;
}

template <Diffusion M>
Result mc(const M& model, const TestFunction& f, std::size_t n, std::size_t N,
          const RngStream& stream) {
    const Moments mom = mc_moments(model, f, n, N, stream);
    return {mom.mean, mom.std_err()};
}

template <Diffusion M>
Result sr(const M& model, const TestFunction& f, const SrParams& p, const RngStream& stream) {
    p.validate();
    const double T = model.horizon();
    const TimeGrid fine = TimeGrid::uniform(T, p.n);
    const TimeGrid coarse = TimeGrid::uniform(T, p.m);
    const TimeGrid merged = TimeGrid::union_of(T, p.n, p.m);

    Moments first;
    const RngStream t1 = stream.split(kCoarseTerm);
    for (std::size_t i = 0; i < p.coarse_samples; ++i) {
        const PathIncrements w = brownian_increments(sample_stream(t1, i), coarse, M::noise_dim);
        first.add(f(euler_terminal(model, coarse, w)));
    }
    Moments second;
    const RngStream t2 = stream.split(kCoupledTerm);
    for (std::size_t i = 0; i < p.correction_samples; ++i) {
        const PathIncrements w = brownian_increments(sample_stream(t2, i), merged, M::noise_dim);
        const auto xf = euler_terminal(model, fine, coarsen_increments(w, fine));
        const auto xc = euler_terminal(model, coarse, coarsen_increments(w, coarse));
        second.add(f(xf) - f(xc));
    }
    const double var = first.variance() / static_cast<double>(p.coarse_samples) +
                       second.variance() / static_cast<double>(p.correction_samples);
    return {first.mean + second.mean, std::sqrt(var)};
}

inline Result sr_asian(const GbmParams& gp, const AsianPayoff& payoff, const SrParams& p,
                       const RngStream& stream) {
    p.validate();
    const double T = gp.T;
    const TimeGrid fine = TimeGrid::uniform(T, p.n);
    const TimeGrid coarse = TimeGrid::uniform(T, p.m);
    const TimeGrid merged = TimeGrid::union_of(T, p.n, p.m);

    Moments first;
    const RngStream t1 = stream.split(kCoarseTerm);
    for (std::size_t i = 0; i < p.coarse_samples; ++i) {
        const PathIncrements w = brownian_increments(sample_stream(t1, i), coarse, 1);
        const double s_T = gbm_exact_terminal(gp, w.terminal()[0]);
        first.add(payoff(s_T, trapezoidal_integral(gp, w)));
    }
    Moments second;
    const RngStream t2 = stream.split(kCoupledTerm);
    for (std::size_t i = 0; i < p.correction_samples; ++i) {
        const PathIncrements w = brownian_increments(sample_stream(t2, i), merged, 1);
        const PathIncrements wf = coarsen_increments(w, fine);
        const PathIncrements wc = coarsen_increments(w, coarse);
        const double s_T = gbm_exact_terminal(gp, wf.terminal()[0]);
        second.add(payoff(s_T, trapezoidal_integral(gp, wf)) -
                   payoff(s_T, trapezoidal_integral(gp, wc)));
    }
    const double disc = std::exp(-gp.r * T);
    const double var = first.variance() / static_cast<double>(p.coarse_samples) +
                       second.variance() / static_cast<double>(p.correction_samples);
    return {disc * (first.mean + second.mean), disc * std::sqrt(var)};
}

}  // namespace romberg::reference
