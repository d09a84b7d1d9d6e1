// Deterministic reference values: Gaussian quadrature and closed forms.
#pragma once

#include <functional>

#include "romberg/models.hpp"

namespace romberg {

/// E g(G) for G standard normal, adaptive Gauss-Kronrod on the real line.
double gaussian_expectation(const std::function<double(double)>& g);

/// E g(S_T) under the lognormal law of GBM.
double lognormal_expectation(const GbmParams& p, const std::function<double(double)>& g);

/// E g_alpha(Z_T) = E cos(theta + sqrt(T) G); the f_alpha part vanishes on
/// the circle.
double circle_g_oracle(const CircleParams& p);

/// E cos^2(theta + W_T).
double circle_cos2_oracle(const CircleParams& p);

/// Discounted European call, Black-Scholes formula.
double black_scholes_call(double s0, double strike, double r, double sigma, double T);

double normal_cdf(double x);

}  // namespace romberg
