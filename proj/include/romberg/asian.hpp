// Asian options under GBM: the trapezoidal average
//
//   I^n_T = (1/T) sum_k dt S_{t_{k-1}} (1 + r dt / 2 + sigma (W_{t_k} - W_{t_{k-1}}) / 2),
//
// with S evaluated exactly at the nodes, the two-level estimator built on
// it, and the limit process chi_t = sigma / (2 sqrt 3) int_0^t S dB' of the
// normalized error n (I - I^n), B' independent of W.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "romberg/estimators.hpp"
#include "romberg/models.hpp"
#include "romberg/parallel.hpp"
#include "romberg/random.hpp"

namespace romberg {

enum class AsianKind { fixed_call, fixed_put, floating_call };

/// f(x, y) with x = S_T and y = the average; prices are e^{-rT} E f.
struct AsianPayoff {
    AsianKind kind = AsianKind::fixed_call;
    double strike = 100.0;

    double operator()(double s_T, double avg) const noexcept {
        switch (kind) {
            case AsianKind::fixed_call: return avg > strike ? avg - strike : 0.0;
            case AsianKind::fixed_put: return strike > avg ? strike - avg : 0.0;
            case AsianKind::floating_call: return avg > s_T ? avg - s_T : 0.0;
        }
        return 0.0;
    }

    /// Almost-everywhere derivative in the average argument.
    double d_avg(double s_T, double avg) const noexcept {
        switch (kind) {
            case AsianKind::fixed_call: return avg > strike ? 1.0 : 0.0;
            case AsianKind::fixed_put: return strike > avg ? -1.0 : 0.0;
            case AsianKind::floating_call: return avg > s_T ? 1.0 : 0.0;
        }
        return 0.0;
    }
};

/// I^n_T on w.grid. S at the nodes comes from the exact solution.
double trapezoidal_integral(const GbmParams& p, const PathIncrements& w);

/// E[I_T] = s0 (e^{rT} - 1) / (rT), or s0 when r = 0.
double average_mean(const GbmParams& p);

/// Discounted crude Monte Carlo on the n-step trapezoid.
EstimateResult mc_asian_estimate(const GbmParams& p, const AsianPayoff& payoff, std::size_t n,
                                 std::size_t N, const RngStream& stream, const Exec& exec = {});

/// Discounted two-level estimate E^1_n + E^2_n. params.scheme must be
/// trapezoidal.
EstimateResult sr_asian_estimate(const GbmParams& p, const AsianPayoff& payoff,
                                 const SrParams& params, const RngStream& stream,
                                 const Exec& exec = {});

struct ChiSample {
    double chi_T = 0.0;
    double w_T = 0.0;
    double s_T = 0.0;
    double average = 0.0;  // trapezoid on the same grid
};

/// One path of S on `fine_grid` (n >= 64) with chi co-simulated by
/// left-point sums against an independent B'. W is drawn from
/// stream.split(0) and B' from stream.split(1).
ChiSample simulate_chi(const GbmParams& p, const TimeGrid& fine_grid, const RngStream& stream);

/// (sigma^2 / 12) s0^2 (e^{(2r + sigma^2) T} - 1) / (2r + sigma^2).
double chi_variance_limit(const GbmParams& p);

struct ChiStatistics {
    std::size_t samples = 0;
    double mean = 0.0;
    double mean_std_err = 0.0;
    double variance = 0.0;
    double corr_with_w = 0.0;
};

ChiStatistics chi_statistics(const GbmParams& p, std::size_t n, std::size_t N,
                             const RngStream& stream, const Exec& exec = {});

struct MeanEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

/// Monte Carlo estimate of E[d_avg f(S_T, I_T) chi_T], the limit of
/// n E[f(S_T, I^n_T) - f(S_T, I_T)]. Undiscounted. I_T and chi are both
/// taken on the n_ref-step grid.
MeanEstimate weak_error_limit(const GbmParams& p, const AsianPayoff& payoff, std::size_t n_ref,
                              std::size_t N, const RngStream& stream, const Exec& exec = {});

struct ScaledBias {
    std::vector<std::size_t> n;
    std::vector<MeanEstimate> scaled;  // n E[f(S_T, I^n) - f(S_T, I^{refine n})]
    MeanEstimate intercept;            // least-squares a in scaled = a + b / n
};

/// Directly measured n * bias of the trapezoid, with every level and its
/// refine-times-finer reference computed from one path per sample.
/// Every n must divide max(n_list). Undiscounted.
ScaledBias trapezoid_scaled_bias(const GbmParams& p, const AsianPayoff& payoff,
                                 std::span<const std::size_t> n_list, std::size_t refine,
                                 std::size_t N, const RngStream& stream, const Exec& exec = {});

/// RMS of I^n_T - I^{refine n}_T for each n, one shared path per sample.
std::vector<double> trapezoid_strong_error(const GbmParams& p, std::span<const std::size_t> n_list,
                                           std::size_t refine, std::size_t N,
                                           const RngStream& stream, const Exec& exec = {});

/// Sample variance of I^n_T - I^m_T for coupled trapezoids on the union grid.
double trapezoid_coupled_variance(const GbmParams& p, std::size_t n, std::size_t m, std::size_t N,
                                  const RngStream& stream, const Exec& exec = {});

namespace detail {

struct TrapezoidPair {
    double s_T;
    double fine;
    double coarse;
};

/// I^n and I^m from one path on the union grid.
TrapezoidPair coupled_trapezoid_sample(const GbmParams& p, const CoupledGrids& g, Generator& gen);

/// I^n on a uniform grid, drawing increments from gen. Returns (S_T, I^n).
std::pair<double, double> trapezoid_sample(const GbmParams& p, const TimeGrid& grid, Generator& gen);

}  // namespace detail

}  // namespace romberg
