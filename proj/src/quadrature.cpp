#include "romberg/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace romberg {

double gaussian_expectation(const std::function<double(double)>& g) {
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    auto integrand = [&](double x) { return g(x) * inv_sqrt_2pi * std::exp(-0.5 * x * x); };
    const double inf = std::numeric_limits<double>::infinity();
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -inf, inf, 15,
                                                                         1e-13);
}

double lognormal_expectation(const GbmParams& p, const std::function<double(double)>& g) {
    const double drift = (p.r - 0.5 * p.sigma * p.sigma) * p.T;
    const double vol = p.sigma * std::sqrt(p.T);
    return gaussian_expectation([&](double x) { return g(p.s0 * std::exp(drift + vol * x)); });
}

double circle_g_oracle(const CircleParams& p) {
    const double sd = std::sqrt(p.T);
    return gaussian_expectation([&](double x) { return std::cos(p.theta0 + sd * x); });
}

double circle_cos2_oracle(const CircleParams& p) {
    const double sd = std::sqrt(p.T);
    return gaussian_expectation([&](double x) {
        const double c = std::cos(p.theta0 + sd * x);
        return c * c;
    });
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double black_scholes_call(double s0, double strike, double r, double sigma, double T) {
    const double disc = std::exp(-r * T);
    if (sigma <= 0.0 || strike <= 0.0) return std::max(s0 - disc * strike, 0.0);
    const double vol = sigma * std::sqrt(T);
    const double d1 = (std::log(s0 / strike) + (r + 0.5 * sigma * sigma) * T) / vol;
    const double d2 = d1 - vol;
    return s0 * normal_cdf(d1) - strike * disc * normal_cdf(d2);
}

}  // namespace romberg
