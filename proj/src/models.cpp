#include "romberg/models.hpp"

#include <string>

namespace romberg {

void GbmParams::validate() const {
    if (!(s0 > 0.0)) throw std::invalid_argument("GbmParams: s0 must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("GbmParams: T must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("GbmParams: sigma must be non-negative");
}

void CircleParams::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("CircleParams: T must be positive");
}

double gbm_exact_terminal(const GbmParams& p, double w_T) {
    return p.s0 * std::exp((p.r - 0.5 * p.sigma * p.sigma) * p.T + p.sigma * w_T);
}

std::array<double, 2> circle_exact(const CircleParams& p, double w_t) {
    return {std::cos(p.theta0 + w_t), std::sin(p.theta0 + w_t)};
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0))
        throw std::invalid_argument("test function: alpha must lie in [1/2, 1]");
}

}  // namespace

TestFunction TestFunction::f_alpha(double alpha) {
    check_alpha(alpha);
    return {FunctionKind::f_alpha, alpha};
}

TestFunction TestFunction::g_alpha(double alpha) {
    check_alpha(alpha);
    return {FunctionKind::g_alpha, alpha};
}

TestFunction TestFunction::euro_call(double strike, double discount) {
    if (!(strike >= 0.0)) throw std::invalid_argument("euro_call: strike must be non-negative");
    return {FunctionKind::euro_call, 1.0, strike, 1.0, discount};
}

TestFunction TestFunction::euro_put(double strike, double discount) {
    if (!(strike >= 0.0)) throw std::invalid_argument("euro_put: strike must be non-negative");
    return {FunctionKind::euro_put, 1.0, strike, 1.0, discount};
}

TestFunction TestFunction::identity() { return {FunctionKind::identity}; }

TestFunction TestFunction::sigmoid(double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("sigmoid: width must be positive");
    return {FunctionKind::sigmoid, 1.0, center, width};
}

std::size_t TestFunction::dimension() const noexcept {
    switch (kind) {
        case FunctionKind::f_alpha:
        case FunctionKind::g_alpha:
            return 2;
        default:
            return 1;
    }
}

double eval_test_function(const TestFunction& f, std::span<const double> state) {
    if (state.size() != f.dimension())
        throw std::invalid_argument("eval_test_function: expected state of dimension " +
                                    std::to_string(f.dimension()) + ", got " +
                                    std::to_string(state.size()));
    return f(state.data());
}

}  // namespace romberg
