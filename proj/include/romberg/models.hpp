// SDE models dX = b(X) dt + sigma(X) dW, the explicit Euler scheme, the two
// closed-form test models and the scalar test functions / payoffs.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>

#include "romberg/random.hpp"

namespace romberg {

struct GbmParams {
    double s0 = 100.0;
    double r = 0.05;
    double sigma = 0.2;
    double T = 1.0;

    void validate() const;
};

struct CircleParams {
    double theta0 = 0.0;
    double T = 1.0;

    void validate() const;
};

template <std::size_t D, std::size_t Q>
struct StateSpace {
    static constexpr std::size_t dim = D;
    static constexpr std::size_t noise_dim = Q;
    using State = std::array<double, D>;
    using Noise = std::array<double, Q>;
    using Matrix = std::array<std::array<double, Q>, D>;
};

template <class M>
concept Diffusion = requires(const M& m, const typename M::State& x) {
    typename M::State;
    typename M::Noise;
    typename M::Matrix;
    { M::dim } -> std::convertible_to<std::size_t>;
    { M::noise_dim } -> std::convertible_to<std::size_t>;
    { m.initial() } -> std::convertible_to<typename M::State>;
    { m.drift(x) } -> std::convertible_to<typename M::State>;
    { m.diffusion(x) } -> std::convertible_to<typename M::Matrix>;
    { m.horizon() } -> std::convertible_to<double>;
};

/// A diffusion whose solution at time t is a known function of W_t.
template <class M>
concept ExactDiffusion = Diffusion<M> && requires(const M& m, double t, const typename M::Noise& w) {
    { m.exact(t, w) } -> std::convertible_to<typename M::State>;
};

/// Generic model with type-erased coefficients. Slower than the concrete
/// models below; intended for ad-hoc SDEs and tests.
template <std::size_t D, std::size_t Q>
struct DiffusionModel : StateSpace<D, Q> {
    using typename StateSpace<D, Q>::State;
    using typename StateSpace<D, Q>::Matrix;

    std::function<State(const State&)> b;
    std::function<Matrix(const State&)> sigma;
    State x0{};
    double T = 1.0;

    State initial() const { return x0; }
    State drift(const State& x) const { return b(x); }
    Matrix diffusion(const State& x) const { return sigma(x); }
    double horizon() const { return T; }
};

/// dS = r S dt + sigma S dW.
class GbmModel : public StateSpace<1, 1> {
public:
    explicit GbmModel(GbmParams p) : p_(p) { p_.validate(); }

    const GbmParams& params() const noexcept { return p_; }
    State initial() const noexcept { return {p_.s0}; }
    State drift(const State& x) const noexcept { return {p_.r * x[0]}; }
    Matrix diffusion(const State& x) const noexcept { return {{{p_.sigma * x[0]}}}; }
    double horizon() const noexcept { return p_.T; }
    State exact(double t, const Noise& w) const noexcept {
        return {p_.s0 * std::exp((p_.r - 0.5 * p_.sigma * p_.sigma) * t + p_.sigma * w[0])};
    }

private:
    GbmParams p_;
};

/// dX = -X/2 dt - Y dW, dY = -Y/2 dt + X dW, started on the unit circle.
class CircleModel : public StateSpace<2, 1> {
public:
    explicit CircleModel(CircleParams p) : p_(p) { p_.validate(); }

    const CircleParams& params() const noexcept { return p_; }
    State initial() const noexcept { return {std::cos(p_.theta0), std::sin(p_.theta0)}; }
    State drift(const State& z) const noexcept { return {-0.5 * z[0], -0.5 * z[1]}; }
    Matrix diffusion(const State& z) const noexcept { return {{{-z[1]}, {z[0]}}}; }
    double horizon() const noexcept { return p_.T; }
    State exact(double, const Noise& w) const noexcept {
        return {std::cos(p_.theta0 + w[0]), std::sin(p_.theta0 + w[0])};
    }

private:
    CircleParams p_;
};

template <Diffusion M>
inline void euler_step(const M& model, typename M::State& x, double dt, const double* dw) {
    const auto b = model.drift(x);
    const auto s = model.diffusion(x);
    for (std::size_t i = 0; i < M::dim; ++i) {
        double v = x[i] + b[i] * dt;
        for (std::size_t j = 0; j < M::noise_dim; ++j) v += s[i][j] * dw[j];
        x[i] = v;
    }
}

/// X^n_T by x_{k+1} = x_k + b(x_k) dt_k + sigma(x_k) dW_k over grid.
template <Diffusion M>
typename M::State euler_terminal(const M& model, const TimeGrid& grid, const PathIncrements& w) {
    if (w.q != M::noise_dim) throw std::invalid_argument("euler_terminal: noise dimension mismatch");
    if (!(w.grid == grid)) throw std::invalid_argument("euler_terminal: increments are not on this grid");
    auto x = model.initial();
    for (std::size_t k = 0; k < grid.intervals(); ++k)
        euler_step(model, x, grid.step(k), w.increments.data() + k * M::noise_dim);
    return x;
}

double gbm_exact_terminal(const GbmParams& p, double w_T);

std::array<double, 2> circle_exact(const CircleParams& p, double w_t);

enum class FunctionKind { f_alpha, g_alpha, euro_call, euro_put, identity, sigmoid };

/// Scalar functional of the terminal state. `discount` multiplies every
/// value (e^{-rT} for prices, 1 otherwise).
struct TestFunction {
    FunctionKind kind = FunctionKind::identity;
    double alpha = 1.0;
    double strike = 0.0;
    double width = 1.0;
    double discount = 1.0;

    static TestFunction f_alpha(double alpha);
    static TestFunction g_alpha(double alpha);
    static TestFunction euro_call(double strike, double discount = 1.0);
    static TestFunction euro_put(double strike, double discount = 1.0);
    static TestFunction identity();
    /// 1 / (1 + exp(-(s - center) / width)).
    static TestFunction sigmoid(double center, double width);

    std::size_t dimension() const noexcept;

    double operator()(const double* x) const noexcept {
        switch (kind) {
            case FunctionKind::f_alpha:
                return discount * radial(x);
            case FunctionKind::g_alpha:
                return discount * (radial(x) + x[0]);
            case FunctionKind::euro_call:
                return discount * std::max(x[0] - strike, 0.0);
            case FunctionKind::euro_put:
                return discount * std::max(strike - x[0], 0.0);
            case FunctionKind::identity:
                return discount * x[0];
            case FunctionKind::sigmoid:
                return discount / (1.0 + std::exp(-(x[0] - strike) / width));
        }
        return 0.0;
    }

    template <std::size_t D>
    double operator()(const std::array<double, D>& x) const noexcept {
        if constexpr (D < 2) {
            if (kind == FunctionKind::f_alpha || kind == FunctionKind::g_alpha) return std::nan("");
        }
        return (*this)(x.data());
    }

private:
    // ||z|^2 - 1|^{2 alpha}
    double radial(const double* z) const noexcept {
        const double e = std::fabs(z[0] * z[0] + z[1] * z[1] - 1.0);
        if (alpha == 1.0) return e * e;
        if (alpha == 0.5) return e;
        return std::pow(e, 2.0 * alpha);
    }
};

/// Checked evaluation; throws std::invalid_argument on dimension mismatch.
double eval_test_function(const TestFunction& f, std::span<const double> state);

}  // namespace romberg
