#include <cmath>
#include <numbers>

#include "doctest.h"
#include "romberg/diagnostics.hpp"
#include "romberg/estimators.hpp"
#include "romberg/quadrature.hpp"

using namespace romberg;

TEST_CASE("rate fit") {
    const std::vector<std::pair<double, double>> inv{{2, 0.5}, {4, 0.25}, {8, 0.125}};
    const FitResult f = rate_fit(inv);
    CHECK(f.slope == doctest::Approx(-1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.points.size() == 3);
    CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-12));

    const std::vector<std::pair<double, double>> flat{{1, 3}, {2, 3}, {5, 3}};
    CHECK(rate_fit(flat).slope == doctest::Approx(0.0));

    // residuals are orthogonal to the regressor
    const std::vector<std::pair<double, double>> noisy{{1, 1.0}, {2, 0.6}, {4, 0.2}, {8, 0.13}};
    const FitResult g = rate_fit(noisy);
    double dot = 0, sum = 0;
    for (const auto& [lx, ly] : g.points) {
        const double e = ly - (g.intercept + g.slope * lx);
        dot += e * lx;
        sum += e;
    }
    CHECK(std::fabs(dot) < 1e-12);
    CHECK(std::fabs(sum) < 1e-12);
    CHECK(g.r_squared > 0.0);
    CHECK(g.r_squared <= 1.0);

    const std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
    const std::vector<std::pair<double, double>> neg{{1, 1}, {2, -2}, {3, 1}};
    CHECK_THROWS_AS(rate_fit(two), std::invalid_argument);
    CHECK_THROWS_AS(rate_fit(neg), std::invalid_argument);
}

TEST_CASE("circle bias limit constants") {
    CHECK(circle_bias_limit(1.0, 1.0) == doctest::Approx(2.0));
    CHECK(circle_bias_limit(0.5, 1.0) == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0 / std::numbers::pi)));
    CHECK(circle_bias_limit(1.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("circle bias against the exact alpha = 1 formula") {
    // E|Z^n|^2 = (1 + d^2/4)^n, E|Z^n|^4 = (1 + 5d^2/2 + d^4/16)^n, f_1 vanishes on Z.
    const std::size_t n = 64;
    const double d = 1.0 / n;
    const double exact = n * (std::pow(1 + 2.5 * d * d + std::pow(d, 4) / 16, double(n)) -
                              2 * std::pow(1 + d * d / 4, double(n)) + 1);
    const std::vector<std::size_t> ns{n};
    const auto pts = bias_rate_limit(1.0, 1.0, ns, 200000, RngStream(1));
    CHECK(std::fabs(pts[0].value - exact) < 4 * pts[0].std_err);
    CHECK(pts[0].std_err < 0.01);

    const auto zero = bias_rate_limit(0.5, 0.0, ns, 10, RngStream(1));
    CHECK(zero[0].value == 0.0);
}

TEST_CASE("coupling reduces the variance of the bias estimate") {
    const CircleModel m(CircleParams{0.2, 1.0});
    const TestFunction f = TestFunction::g_alpha(1.0);
    const RatePoint c = coupled_bias(m, f, 32, 20000, RngStream(2));
    const auto a = mc_estimate(m, f, 32, 20000, RngStream(3));
    // E f(Z) from independent exact samples
    Moments ex;
    Generator g(RngStream(4));
    for (int i = 0; i < 20000; ++i) ex.add(f(m.exact(1.0, {g.normal()})));
    CHECK(c.std_err < 0.5 * std::hypot(a.std_err, ex.std_err()));
}

TEST_CASE("sqrt(n) bias vanishes for smooth payoffs") {
    const GbmModel m(GbmParams{});
    const TestFunction sig = TestFunction::sigmoid(105, 5);
    const std::vector<std::size_t> ns{64, 1024};
    const auto b = sqrt_n_bias_check(m, sig, ns, 40000, RngStream(5));
    CHECK(std::fabs(b[1].value) < std::fabs(b[0].value) + 3 * b[0].std_err);

    // quadrature oracle for E f(S_T) agrees with the coupled exact leg
    const double q = lognormal_expectation(GbmParams{}, [](double s) { return 1 / (1 + std::exp(-(s - 105) / 5)); });
    const auto mc = mc_estimate(m, sig, 1024, 40000, RngStream(6));
    CHECK(std::fabs(mc.value - q) < 3 * mc.std_err + 2 * std::fabs(b[1].value) / 32);

    // identity payoff: E S^n_T - s0 e^{rT} = s0((1 + rT/n)^n - e^{rT})
    const std::vector<std::size_t> ns2{16, 64, 256};
    const auto lin = sqrt_n_bias_check(m, TestFunction::identity(), ns2, 100000, RngStream(7));
    for (const auto& p : lin) {
        const double exact = std::sqrt(double(p.n)) * 100 * (std::pow(1 + 0.05 / p.n, double(p.n)) - std::exp(0.05));
        CHECK(std::fabs(p.value - exact) < 4 * p.std_err + 1e-12);
    }

    const GbmModel flat(GbmParams{100, 0.05, 0.0, 1.0});
    const auto det = sqrt_n_bias_check(flat, TestFunction::identity(), ns2, 10, RngStream(8));
    for (const auto& p : det) {
        const double exact = std::sqrt(double(p.n)) * 100 * (std::pow(1 + 0.05 / p.n, double(p.n)) - std::exp(0.05));
        CHECK(p.value == doctest::Approx(exact).epsilon(1e-9));
        CHECK(p.std_err == doctest::Approx(0.0));
    }
    CHECK(std::fabs(det[2].value) < std::fabs(det[0].value));
}

TEST_CASE("circle normalized error") {
    const CircleParams p{0.6, 1.0};
    const CircleErrorMoments e = circle_normalized_error(p, 512, 40000, RngStream(9));
    CHECK(std::fabs(e.mean[0]) < 3 * e.mean_std_err[0]);
    CHECK(std::fabs(e.mean[1]) < 3 * e.mean_std_err[1]);
    const double c2 = circle_cos2_oracle(p);
    CHECK(c2 == doctest::Approx(0.5 * (1 + std::exp(-2.0) * std::cos(1.2))).epsilon(1e-10));
    CHECK(e.variance[0] == doctest::Approx(0.5 * c2).epsilon(0.10));
    CHECK(e.variance[1] == doctest::Approx(0.5 * (1 - c2)).epsilon(0.10));
}

TEST_CASE("normality checker") {
    const auto normal = [](const RngStream& s) {
        Generator g(s);
        return g.normal();
    };
    const NormalityReport ok = clt_normality_check(normal, 500, RngStream(10));
    CHECK(ok.passed);
    CHECK_FALSE(ok.degenerate);
    CHECK(ok.replications == 500);

    const NormalityReport flat = clt_normality_check([](const RngStream&) { return 4.2; }, 300, RngStream(1));
    CHECK(flat.degenerate);
    CHECK_FALSE(flat.passed);
    CHECK(flat.std_dev == 0.0);

    const auto expo = [](const RngStream& s) {
        Generator g(s);
        return -std::log(g.uniform());
    };
    CHECK_FALSE(clt_normality_check(expo, 500, RngStream(11)).passed);
    CHECK_THROWS_AS(clt_normality_check(normal, 100, RngStream(1)), std::invalid_argument);

    const std::vector<double> sym{-1, 1, -1, 1};
    const NormalityReport r = normality_report(sym);
    CHECK(r.skewness == doctest::Approx(0.0));
    CHECK(r.excess_kurtosis == doctest::Approx(-2.0));
}
