// Empirical checks of rate and limit claims: log-log fits, coupled bias
// estimates, strong errors and a moment-based normality check.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "romberg/models.hpp"
#include "romberg/parallel.hpp"
#include "romberg/random.hpp"

namespace romberg {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (log x, log y)
};

/// Least squares of log y on log x. Needs at least three points with
/// x, y > 0; throws std::invalid_argument otherwise.
FitResult rate_fit(std::span<const std::pair<double, double>> xy);

struct RatePoint {
    std::size_t n = 0;
    double value = 0.0;
    double std_err = 0.0;
};

/// (2t)^alpha E|G|^{2 alpha}.
double circle_bias_limit(double alpha, double t);

/// n^alpha E[f_alpha(Z^n_t) - f_alpha(Z_t)] on the circle model, with the
/// exact Z_t driven by the same path. t = 0 gives zeros.
std::vector<RatePoint> bias_rate_limit(double alpha, double t, std::span<const std::size_t> n_list,
                                       std::size_t N, const RngStream& stream,
                                       const Exec& exec = {});

namespace detail {

/// Euler terminal and exact terminal on one path.
template <ExactDiffusion M>
std::pair<typename M::State, typename M::State> euler_and_exact_sample(const M& model,
                                                                       const TimeGrid& grid,
                                                                       Generator& gen) {
    auto x = model.initial();
    typename M::Noise dw, w{};
    for (std::size_t k = 0; k < grid.intervals(); ++k) {
        const double h = grid.sqrt_step(k);
        for (std::size_t c = 0; c < M::noise_dim; ++c) {
            dw[c] = h * gen.normal();
            w[c] += dw[c];
        }
        euler_step(model, x, grid.step(k), dw.data());
    }
    return {x, model.exact(grid.horizon(), w)};
}

}  // namespace detail

/// Mean of f(X^n_T) - f(X_T) over N coupled samples, with its standard error.
template <ExactDiffusion M>
RatePoint coupled_bias(const M& model, const TestFunction& f, std::size_t n, std::size_t N,
                       const RngStream& stream, const Exec& exec = {}) {
    const TimeGrid grid = TimeGrid::uniform(model.horizon(), n);
    const Moments mom = chunked_samples<Moments>(
        stream.split(static_cast<std::uint32_t>(n)).key(), N, exec,
        [&](std::uint64_t key, Moments& acc) {
            Generator gen(key);
            const auto [xn, x] = detail::euler_and_exact_sample(model, grid, gen);
            acc.add(f(xn) - f(x));
        });
    return {n, mom.mean, mom.std_err()};
}

/// sqrt(n) times the coupled bias, for each n.
template <ExactDiffusion M>
std::vector<RatePoint> sqrt_n_bias_check(const M& model, const TestFunction& f,
                                         std::span<const std::size_t> n_list, std::size_t N,
                                         const RngStream& stream, const Exec& exec = {}) {
    std::vector<RatePoint> out;
    for (auto n : n_list) {
        auto b = coupled_bias(model, f, n, N, stream, exec);
        const double s = std::sqrt(static_cast<double>(n));
        out.push_back({n, s * b.value, s * b.std_err});
    }
    return out;
}

/// RMS of |X^n_T - X_T| for each n.
template <ExactDiffusion M>
std::vector<double> strong_error(const M& model, std::span<const std::size_t> n_list,
                                 std::size_t N, const RngStream& stream, const Exec& exec = {}) {
    std::vector<double> out;
    for (auto n : n_list) {
        const TimeGrid grid = TimeGrid::uniform(model.horizon(), n);
        const Moments mom = chunked_samples<Moments>(
            stream.split(static_cast<std::uint32_t>(n)).key(), N, exec,
            [&](std::uint64_t key, Moments& acc) {
                Generator gen(key);
                const auto [xn, x] = detail::euler_and_exact_sample(model, grid, gen);
                double d2 = 0.0;
                for (std::size_t i = 0; i < M::dim; ++i) d2 += (xn[i] - x[i]) * (xn[i] - x[i]);
                acc.add(d2);
            });
        out.push_back(std::sqrt(mom.mean));
    }
    return out;
}

/// Componentwise mean and variance of sqrt(n) (Z^n_T - Z_T) on the circle.
struct CircleErrorMoments {
    std::array<double, 2> mean{};
    std::array<double, 2> mean_std_err{};
    std::array<double, 2> variance{};
};

CircleErrorMoments circle_normalized_error(const CircleParams& p, std::size_t n, std::size_t N,
                                           const RngStream& stream, const Exec& exec = {});

struct NormalityThresholds {
    double max_abs_skewness = 0.25;
    double max_abs_excess_kurtosis = 0.5;
};

struct NormalityReport {
    std::size_t replications = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool degenerate = false;  // zero spread; the check abstains
    bool passed = false;
};

/// Moment summary of `values`.
NormalityReport normality_report(std::span<const double> values,
                                 const NormalityThresholds& thresholds = {});

/// Runs `estimator(stream.split(i))` for i < R (R >= 200) and checks the
/// skewness and excess kurtosis of the standardized replications.
NormalityReport clt_normality_check(const std::function<double(const RngStream&)>& estimator,
                                    std::size_t replications, const RngStream& stream,
                                    const NormalityThresholds& thresholds = {});

}  // namespace romberg
