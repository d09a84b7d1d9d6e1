#include "romberg/diagnostics.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace romberg {

FitResult rate_fit(std::span<const std::pair<double, double>> xy) {
    if (xy.size() < 3) throw std::invalid_argument("rate_fit: need at least three points");
    FitResult fit;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("rate_fit: inputs must be positive");
        fit.points.emplace_back(std::log(x), std::log(y));
    }
    const double k = static_cast<double>(fit.points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [lx, ly] : fit.points) {
        mx += lx;
        my += ly;
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [lx, ly] : fit.points) {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
        syy += (ly - my) * (ly - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("rate_fit: x values must not all coincide");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

double circle_bias_limit(double alpha, double t) {
    // E|G|^p = 2^{p/2} Gamma((p + 1) / 2) / sqrt(pi)
    const double p = 2.0 * alpha;
    const double abs_moment =
        std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    return std::pow(2.0 * t, alpha) * abs_moment;
}

std::vector<RatePoint> bias_rate_limit(double alpha, double t, std::span<const std::size_t> n_list,
                                       std::size_t N, const RngStream& stream, const Exec& exec) {
    const TestFunction f = TestFunction::f_alpha(alpha);
    std::vector<RatePoint> out;
    if (t == 0.0) {
        for (auto n : n_list) out.push_back({n, 0.0, 0.0});
        return out;
    }
    if (!(t > 0.0)) throw std::invalid_argument("bias_rate_limit: t must be non-negative");
    const CircleModel model(CircleParams{0.0, t});
    for (auto n : n_list) {
        const RatePoint b = coupled_bias(model, f, n, N, stream, exec);
        const double s = std::pow(static_cast<double>(n), alpha);
        out.push_back({n, s * b.value, s * b.std_err});
    }
    return out;
}

CircleErrorMoments circle_normalized_error(const CircleParams& p, std::size_t n, std::size_t N,
                                           const RngStream& stream, const Exec& exec) {
    const CircleModel model(p);
    const TimeGrid grid = TimeGrid::uniform(p.T, n);
    const double scale = std::sqrt(static_cast<double>(n));
    const CoMoments mom = chunked_samples<CoMoments>(
        stream.split(static_cast<std::uint32_t>(n)).key(), N, exec,
        [&](std::uint64_t key, CoMoments& acc) {
            Generator gen(key);
            const auto [zn, z] = detail::euler_and_exact_sample(model, grid, gen);
            acc.add(scale * (zn[0] - z[0]), scale * (zn[1] - z[1]));
        });
    CircleErrorMoments out;
    out.mean = {mom.mean_x, mom.mean_y};
    out.variance = {mom.variance_x(), mom.variance_y()};
    const double nd = static_cast<double>(N);
    out.mean_std_err = {std::sqrt(out.variance[0] / nd), std::sqrt(out.variance[1] / nd)};
    return out;
}

NormalityReport normality_report(std::span<const double> values,
                                 const NormalityThresholds& thresholds) {
    NormalityReport rep;
    rep.replications = values.size();
    if (values.empty()) {
        rep.degenerate = true;
        return rep;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        rep.mean = *lo;
        rep.degenerate = true;
        return rep;
    }
    const double k = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= k;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= k;
    m3 /= k;
    m4 /= k;
    rep.mean = mean;
    rep.std_dev = std::sqrt(m2);
    if (!(rep.std_dev > 1e-14 * std::max(1.0, std::fabs(mean)))) {
        rep.degenerate = true;
        return rep;
    }
    rep.skewness = m3 / (m2 * rep.std_dev);
    rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    rep.passed = std::fabs(rep.skewness) < thresholds.max_abs_skewness &&
                 std::fabs(rep.excess_kurtosis) < thresholds.max_abs_excess_kurtosis;
    return rep;
}

NormalityReport clt_normality_check(const std::function<double(const RngStream&)>& estimator,
                                    std::size_t replications, const RngStream& stream,
                                    const NormalityThresholds& thresholds) {
    if (replications < 200) throw std::invalid_argument("clt_normality_check: need at least 200 replications");
    std::vector<double> values(replications);
    for (std::size_t i = 0; i < replications; ++i)
        values[i] = estimator(stream.split(static_cast<std::uint32_t>(i)));
    return normality_report(values, thresholds);
}

}  // namespace romberg
