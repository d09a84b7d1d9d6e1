// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all ten
//   acceptance 3 7        run a subset
//
// Exit status is the number of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "romberg/asian.hpp"
#include "romberg/bench.hpp"
#include "romberg/diagnostics.hpp"
#include "romberg/estimators.hpp"
#include "romberg/quadrature.hpp"

using namespace romberg;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

RngStream stream_for(int criterion) { return RngStream(kSeed).split(static_cast<std::uint32_t>(criterion)); }

// 1. n E[f_alpha(Z^n) - f_alpha(Z)] near (2t)^alpha E|G|^{2 alpha}.
Outcome circle_bias() {
    const std::vector<std::size_t> ns{64, 128, 256};
    bool ok = true;
    std::ostringstream d;
    for (double alpha : {1.0, 0.5}) {
        const double lim = circle_bias_limit(alpha, 1.0);
        const auto pts = bias_rate_limit(alpha, 1.0, ns, 1000000,
                                         stream_for(1).split(alpha == 1.0 ? 0 : 1));
        d << "alpha=" << alpha << " limit " << fmt("%.4f", lim) << ":";
        for (const auto& p : pts) {
            ok = ok && std::fabs(p.value - lim) <= 0.10 * lim;
            d << " " << fmt("%.4f", p.value);
        }
        d << "; ";
    }
    return {ok, d.str()};
}

// 2. Var(f(X^n) - f(X^m)) ~ m^{-1}.
Outcome cv_variance() {
    const GbmModel model(GbmParams{});
    const TestFunction f = TestFunction::euro_call(100.0);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t m : {4, 8, 16, 32, 64})
        xy.emplace_back(double(m), control_variate_variance(model, f, 256, m, 100000,
                                                            stream_for(2).split(std::uint32_t(m))));
    const FitResult fit = rate_fit(xy);
    return {fit.slope >= -1.25 && fit.slope <= -0.75,
            "slope " + fmt("%.4f", fit.slope) + " in [-1.25, -0.75]"};
}

// 3. SR and crude MC on the same fine grid estimate the same mean.
Outcome sr_unbiased() {
    const GbmParams gp{};
    const GbmModel model(gp);
    const TestFunction f = TestFunction::euro_call(100.0, std::exp(-gp.r * gp.T));
    const SrParams p = optimal_params(1.0, 256, Scheme::euler);
    const EstimateResult sr = sr_estimate(model, f, p, stream_for(3).split(0));
    const EstimateResult mc = mc_estimate(model, f, 256, 1000000, stream_for(3).split(1));
    const double se = std::hypot(sr.std_err, mc.std_err);
    const double z = (sr.value - mc.value) / se;
    return {std::fabs(z) <= 3.0, "sr " + fmt("%.5f", sr.value) + " mc " + fmt("%.5f", mc.value) +
                                     " z " + fmt("%.3f", z)};
}

// 4. L2 error of the trapezoidal average ~ n^{-1}.
Outcome trapezoid_strong() {
    const std::vector<std::size_t> ns{8, 16, 32, 64, 128, 256};
    const auto err = trapezoid_strong_error(GbmParams{}, ns, 64, 4000, stream_for(4));
    std::vector<std::pair<double, double>> xy;
    for (std::size_t i = 0; i < ns.size(); ++i) xy.emplace_back(double(ns[i]), err[i]);
    const FitResult fit = rate_fit(xy);
    return {fit.slope >= -1.15 && fit.slope <= -0.85,
            "slope " + fmt("%.4f", fit.slope) + " in [-1.15, -0.85]"};
}

// 5. Var chi_T and independence from W_T.
Outcome chi_process() {
    const GbmParams gp{};
    const ChiStatistics s = chi_statistics(gp, 64, 1000000, stream_for(5));
    const double lim = chi_variance_limit(gp);
    const double rel = s.variance / lim - 1.0;
    return {std::fabs(rel) <= 0.02 && std::fabs(s.corr_with_w) < 0.005,
            "var " + fmt("%.5f", s.variance) + " limit " + fmt("%.5f", lim) + " rel " +
                fmt("%+.4f", rel) + ", corr " + fmt("%+.5f", s.corr_with_w)};
}

// 6. Measured n * bias of the Asian call trapezoid against E[d2 f chi_T].
Outcome weak_error() {
    const GbmParams gp{};
    const AsianPayoff f{AsianKind::fixed_call, 100.0};
    const std::vector<std::size_t> ns{64, 128, 256};
    const ScaledBias sb = trapezoid_scaled_bias(gp, f, ns, 64, 40000, stream_for(6).split(0));
    const MeanEstimate lim = weak_error_limit(gp, f, 256, 400000, stream_for(6).split(1));
    const double se = std::hypot(sb.intercept.std_err, lim.std_err);
    const double z = (sb.intercept.value - lim.value) / se;
    std::ostringstream d;
    d << "n bias";
    for (const auto& s : sb.scaled) d << " " << fmt("%+.4f", s.value);
    d << ", extrapolated " << fmt("%+.4f", sb.intercept.value) << " +- " << fmt("%.4f", sb.intercept.std_err)
      << ", limit " << fmt("%+.4f", lim.value) << " +- " << fmt("%.4f", lim.std_err) << ", z "
      << fmt("%.3f", z);
    return {std::fabs(z) <= 3.0, d.str()};
}

// 7. Circle benchmark, alpha = 1/2: speed ratio at RMS 1e-2.
Outcome speedup() {
    BenchConfig base;
    base.model = BenchModel::circle;
    base.alpha = 0.5;
    base.M = 10;
    base.master_seed = kSeed + 7;
    BenchConfig mc = base, sr = base;
    mc.methods = {Method::mc};
    mc.n_list = {4096, 8192, 16384};
    sr.methods = {Method::sr};
    sr.n_list = {8192, 16384, 32768};
    auto records = run_benchmark(mc);
    const auto sr_rec = run_benchmark(sr);
    records.insert(records.end(), sr_rec.begin(), sr_rec.end());
    const auto smc = speed_at_rms(records, Method::mc, 1e-2);
    const auto ssr = speed_at_rms(records, Method::sr, 1e-2);
    if (!smc || !ssr) return {false, "speed curve too short"};
    const double ratio = ssr->values_per_second / smc->values_per_second;
    std::ostringstream d;
    for (const auto& r : records)
        d << to_string(r.method) << "(" << r.n << ") rms " << fmt("%.4f", r.rms) << " @ "
          << fmt("%.3g", r.values_per_second) << "/s; ";
    d << "ratio " << fmt("%.2f", ratio) << (smc->extrapolated || ssr->extrapolated ? " (extrapolated)" : "");
    return {ratio > 1.5, d.str()};
}

// 8. Cost function argmin over beta in {0.05, ..., 0.95} at n = 1e4.
Outcome complexity_argmin() {
    const double n = 1e4;
    auto argmin = [&](const std::function<double(double)>& cost) {
        int best = 1;
        for (int i = 1; i <= 19; ++i)
            if (cost(0.05 * i) < cost(0.05 * best)) best = i;
        return best;
    };
    const int e_exact = argmin([&](double b) { return complexity_exact(1.0, b, n, Scheme::euler); });
    const int t_exact = argmin([&](double b) { return complexity_exact(1.0, b, n, Scheme::trapezoidal); });
    const int e_round = argmin([&](double b) {
        return complexity(romberg_params(1.0, b, std::size_t(n), Scheme::euler));
    });
    const int t_round = argmin([&](double b) {
        return complexity(romberg_params(1.0, b, std::size_t(n), Scheme::trapezoidal));
    });
    // nearest grid point to 1/3
    int third = 1;
    for (int i = 1; i <= 19; ++i)
        if (std::fabs(0.05 * i - 1.0 / 3.0) < std::fabs(0.05 * third - 1.0 / 3.0)) third = i;
    const bool ok = e_exact == 10 && e_round == 10 && t_exact == third && t_round == third;
    return {ok, "euler beta " + fmt("%.2f", 0.05 * e_exact) + "/" + fmt("%.2f", 0.05 * e_round) +
                    ", trapezoidal beta " + fmt("%.2f", 0.05 * t_exact) + "/" +
                    fmt("%.2f", 0.05 * t_round) + " (exact/rounded)"};
}

// 9. Shape of 500 SR replications.
Outcome clt_shape() {
    const GbmParams gp{};
    const GbmModel model(gp);
    const TestFunction f = TestFunction::euro_call(100.0, std::exp(-gp.r * gp.T));
    const SrParams p = optimal_params(1.0, 64, Scheme::euler);
    const NormalityReport rep = clt_normality_check(
        [&](const RngStream& s) { return sr_estimate(model, f, p, s).value; }, 500, stream_for(9));
    return {rep.passed && !rep.degenerate,
            "skewness " + fmt("%+.4f", rep.skewness) + ", excess kurtosis " +
                fmt("%+.4f", rep.excess_kurtosis)};
}

// 10. Worker-count invariance and CSV reproducibility.
Outcome determinism() {
    const GbmParams gp{};
    const GbmModel gbm(gp);
    const TestFunction call = TestFunction::euro_call(100.0, std::exp(-gp.r * gp.T));
    const CircleModel circle(CircleParams{0.7, 1.0});
    const TestFunction g = TestFunction::g_alpha(0.5);
    const SrParams pe = optimal_params(1.0, 64, Scheme::euler);
    const SrParams pc = optimal_params(0.5, 256, Scheme::euler);
    const SrParams pt = optimal_params(1.0, 64, Scheme::trapezoidal);
    const AsianPayoff asian{AsianKind::fixed_call, 100.0};
    const RngStream s = stream_for(10);

    auto run_all = [&](int workers) {
        const Exec ex{workers};
        return std::vector<double>{
            sr_estimate(gbm, call, pe, s, ex).value,
            sr_estimate(gbm, call, pe, s, ex).std_err,
            mc_estimate(gbm, call, 64, 50000, s, ex).value,
            sr_estimate(circle, g, pc, s, ex).value,
            sr_asian_estimate(gp, asian, pt, s, ex).value,
            chi_statistics(gp, 64, 20000, s, ex).variance,
        };
    };
    const auto r1 = run_all(1), r4 = run_all(4), r16 = run_all(16);
    bool bits = r1 == r4 && r1 == r16;

    BenchConfig cfg;
    cfg.model = BenchModel::gbm;
    cfg.alpha = 1.0;
    cfg.n_list = {8, 16};
    cfg.M = 20;
    cfg.master_seed = kSeed + 10;
    auto strip = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string out, line;
        while (std::getline(in, line)) {
            std::size_t cut = line.size();
            for (int k = 0; k < 2; ++k) cut = line.rfind(',', cut - 1);
            out += line.substr(0, cut) + "\n";
        }
        return out;
    };
    cfg.workers = 1;
    const std::string a = strip(to_csv(run_benchmark(cfg)));
    cfg.workers = 4;
    const std::string b = strip(to_csv(run_benchmark(cfg)));
    const bool csv_same = a == b;
    return {bits && csv_same, std::string("estimates ") + (bits ? "bit-identical" : "DIFFER") +
                                  " across 1/4/16 workers, csv " + (csv_same ? "identical" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const std::vector<Criterion> all{
        {1, "circle bias limit", circle_bias},
        {2, "control-variate variance rate", cv_variance},
        {3, "SR unbiased against fine-grid MC", sr_unbiased},
        {4, "trapezoid strong error rate", trapezoid_strong},
        {5, "chi process variance and independence", chi_process},
        {6, "weak-error expansion of the Asian trapezoid", weak_error},
        {7, "speedup at matched RMS", speedup},
        {8, "complexity argmin", complexity_argmin},
        {9, "CLT shape", clt_shape},
        {10, "determinism", determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
