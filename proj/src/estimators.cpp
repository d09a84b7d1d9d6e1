#include "romberg/estimators.hpp"

#include <cmath>

namespace romberg {

void SrParams::validate() const {
    if (m < 2 || m >= n) throw std::invalid_argument("SrParams: need 2 <= m < n");
    if (coarse_samples < 1 || correction_samples < 1)
        throw std::invalid_argument("SrParams: sample counts must be positive");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("SrParams: beta must lie in (0, 1)");
}

std::size_t round_count(double x, std::size_t floor_at) {
    const double r = std::floor(x + 0.5);
    if (!(r >= static_cast<double>(floor_at))) return floor_at;
    return static_cast<std::size_t>(r);
}

namespace {

std::pair<double, double> sample_exponents(double alpha, double beta, Scheme scheme) {
    if (scheme == Scheme::euler) return {2.0 * alpha, 2.0 * alpha - beta};
    return {2.0, 2.0 - 2.0 * beta};
}

}  // namespace

SrParams romberg_params(double alpha, double beta, std::size_t n, Scheme scheme) {
    if (n < 4) throw std::invalid_argument("romberg_params: n must be at least 4");
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("romberg_params: alpha must lie in [1/2, 1]");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("romberg_params: beta must lie in (0, 1)");
    const double nd = static_cast<double>(n);
    const auto [g1, g2] = sample_exponents(alpha, beta, scheme);
    SrParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.n = n;
    p.m = std::min(round_count(std::pow(nd, beta), 2), n - 1);
    p.coarse_samples = round_count(std::pow(nd, g1), 1);
    p.correction_samples = round_count(std::pow(nd, g2), 1);
    p.scheme = scheme;
    return p;
}

SrParams optimal_params(double alpha, std::size_t n, Scheme scheme) {
    return romberg_params(alpha, scheme == Scheme::euler ? 0.5 : 1.0 / 3.0, n, scheme);
}

double complexity(const SrParams& p) {
    const double n = static_cast<double>(p.n);
    const double m = static_cast<double>(p.m);
    return m * static_cast<double>(p.coarse_samples) +
           (n + m) * static_cast<double>(p.correction_samples);
}

double complexity_mc(double alpha, double n) { return n * std::pow(n, 2.0 * alpha); }

double complexity_exact(double alpha, double beta, double n, Scheme scheme) {
    const auto [g1, g2] = sample_exponents(alpha, beta, scheme);
    const double m = std::pow(n, beta);
    return m * std::pow(n, g1) + (n + m) * std::pow(n, g2);
}

namespace detail {

CoupledGrids::CoupledGrids(double horizon, std::size_t n, std::size_t m)
    : fine(TimeGrid::uniform(horizon, n)),
      coarse(TimeGrid::uniform(horizon, m)),
      merged(TimeGrid::union_of(horizon, n, m)) {
    const std::size_t k_max = merged.intervals();
    closes_fine.assign(k_max, 0);
    closes_coarse.assign(k_max, 0);
    std::size_t i = 1, j = 1;
    for (std::size_t k = 0; k < k_max; ++k) {
        const double t = merged.node(k + 1);
        if (i <= n && fine.node(i) == t) {
            closes_fine[k] = 1;
            ++i;
        }
        if (j <= m && coarse.node(j) == t) {
            closes_coarse[k] = 1;
            ++j;
        }
    }
    if (i != n + 1 || j != m + 1) throw GridMismatch("CoupledGrids: union grid misses a node");
}

}  // namespace detail

}  // namespace romberg
