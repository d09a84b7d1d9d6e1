// romberg: price / bench / diag front end.
//
// Exit codes: 0 success, 1 argument error, 2 oracle or I/O failure.
// ROMBERG_SEED overrides the default master seed.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "romberg/asian.hpp"
#include "romberg/bench.hpp"
#include "romberg/diagnostics.hpp"
#include "romberg/estimators.hpp"
#include "romberg/quadrature.hpp"

using namespace romberg;

namespace {

constexpr int kArgError = 1;
constexpr int kIoError = 2;

std::uint64_t default_seed() {
    if (const char* s = std::getenv("ROMBERG_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("ROMBERG_SEED is not an integer: ") + s);
        }
    }
    return 20240601;
}

struct PriceOptions {
    std::string model = "gbm";
    std::string payoff = "call";
    std::string method = "sr";
    std::size_t n = 64;
    std::size_t N = 0;
    double alpha = 1.0;
    double s0 = 100, r = 0.05, sigma = 0.2, T = 1.0, strike = 100, theta = 0.0;
};

TestFunction gbm_payoff(const PriceOptions& o) {
    const double disc = std::exp(-o.r * o.T);
    if (o.payoff == "call") return TestFunction::euro_call(o.strike, disc);
    if (o.payoff == "put") return TestFunction::euro_put(o.strike, disc);
    if (o.payoff == "identity") return TestFunction::identity();
    throw std::invalid_argument("gbm payoff must be call, put or identity");
}

AsianPayoff asian_payoff(const PriceOptions& o) {
    if (o.payoff == "call" || o.payoff == "fixed_call") return {AsianKind::fixed_call, o.strike};
    if (o.payoff == "put" || o.payoff == "fixed_put") return {AsianKind::fixed_put, o.strike};
    if (o.payoff == "floating_call") return {AsianKind::floating_call, o.strike};
    throw std::invalid_argument("asian payoff must be fixed_call, fixed_put or floating_call");
}

int run_price(const PriceOptions& o, std::uint64_t seed, const Exec& exec) {
    const RngStream stream(seed);
    const bool sr = parse_method(o.method) == Method::sr;
    const BenchModel model = parse_model(o.model);
    EstimateResult res;
    double reference = std::nan("");
    std::string detail;

    if (model == BenchModel::asian) {
        const GbmParams p{o.s0, o.r, o.sigma, o.T};
        const AsianPayoff f = asian_payoff(o);
        if (sr) {
            const SrParams sp = optimal_params(1.0, o.n, Scheme::trapezoidal);
            res = sr_asian_estimate(p, f, sp, stream, exec);
            detail = "m=" + std::to_string(sp.m);
        } else {
            res = mc_asian_estimate(p, f, o.n, o.N ? o.N : o.n * o.n, stream, exec);
        }
    } else {
        auto run = [&](const auto& m, const TestFunction& f) {
            if (sr) {
                const SrParams sp = optimal_params(o.alpha, o.n, Scheme::euler);
                detail = "m=" + std::to_string(sp.m);
                return sr_estimate(m, f, sp, stream, exec);
            }
            const std::size_t N =
                o.N ? o.N : round_count(std::pow(double(o.n), 2.0 * o.alpha), 2);
            return mc_estimate(m, f, o.n, N, stream, exec);
        };
        if (model == BenchModel::gbm) {
            const GbmParams p{o.s0, o.r, o.sigma, o.T};
            const TestFunction f = gbm_payoff(o);
            res = run(GbmModel(p), f);
            if (o.payoff == "call") reference = black_scholes_call(o.s0, o.strike, o.r, o.sigma, o.T);
        } else {
            const CircleParams p{o.theta, o.T};
            TestFunction f;
            if (o.payoff == "f") f = TestFunction::f_alpha(o.alpha);
            else if (o.payoff == "g" || o.payoff == "call") f = TestFunction::g_alpha(o.alpha);
            else throw std::invalid_argument("circle payoff must be f or g");
            res = run(CircleModel(p), f);
            reference = f.kind == FunctionKind::g_alpha ? circle_g_oracle(p) : std::nan("");
        }
    }

    std::printf("%.10g +- %.3g\n", res.value, res.std_err);
    std::printf("method=%s n=%zu %sN_m=%zu N_n=%zu seconds=%.3f seed=%llu\n", o.method.c_str(), o.n,
                detail.empty() ? "" : (detail + " ").c_str(), res.coarse_samples,
                res.correction_samples, res.wall_seconds,
                static_cast<unsigned long long>(res.seed));
    if (!std::isnan(reference)) std::printf("reference=%.10g\n", reference);
    return 0;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

struct DiagOptions {
    std::string check = "circle-bias";
    std::string csv;
    std::size_t N = 100000;
    double alpha = 1.0;
    std::vector<std::size_t> n_list;
    std::size_t refine = 64;
    std::size_t replications = 500;
};

int run_diag(const DiagOptions& o, std::uint64_t seed, const Exec& exec) {
    const RngStream stream(seed);
    const GbmParams gbm{};
    std::ostringstream csv;
    std::ostringstream report;
    std::vector<std::pair<double, double>> xy;

    if (o.check == "circle-bias") {
        const std::vector<std::size_t> ns = o.n_list.empty() ? std::vector<std::size_t>{64, 128, 256} : o.n_list;
        const auto pts = bias_rate_limit(o.alpha, 1.0, ns, o.N, stream, exec);
        csv << "n,scaled_bias,std_err\n";
        for (const auto& p : pts) csv << p.n << ',' << fmt(p.value) << ',' << fmt(p.std_err) << '\n';
        report << "n^alpha bias on the circle, limit " << fmt(circle_bias_limit(o.alpha, 1.0)) << '\n';
        for (const auto& p : pts) report << "  n=" << p.n << "  " << fmt(p.value) << " +- " << fmt(p.std_err) << '\n';
    } else if (o.check == "cv-variance") {
        const std::vector<std::size_t> ms = o.n_list.empty() ? std::vector<std::size_t>{4, 8, 16, 32, 64} : o.n_list;
        const GbmModel model(gbm);
        const TestFunction f = TestFunction::euro_call(100.0);
        csv << "m,variance\n";
        for (auto m : ms) {
            const double v = control_variate_variance(model, f, 256, m, o.N, stream.split(static_cast<std::uint32_t>(m)), exec);
            xy.emplace_back(double(m), v);
            csv << m << ',' << fmt(v) << '\n';
        }
        report << "Var(f(X^256) - f(X^m)) on the GBM call\n";
    } else if (o.check == "trapezoid-strong") {
        const std::vector<std::size_t> ns = o.n_list.empty() ? std::vector<std::size_t>{8, 16, 32, 64, 128, 256} : o.n_list;
        const auto err = trapezoid_strong_error(gbm, ns, o.refine, o.N, stream, exec);
        csv << "n,l2_error\n";
        for (std::size_t i = 0; i < ns.size(); ++i) {
            xy.emplace_back(double(ns[i]), err[i]);
            csv << ns[i] << ',' << fmt(err[i]) << '\n';
        }
        report << "L2 error of the trapezoidal average, reference " << o.refine << "x finer\n";
    } else if (o.check == "chi") {
        const std::size_t n = o.n_list.empty() ? 64 : o.n_list.front();
        const ChiStatistics s = chi_statistics(gbm, n, o.N, stream, exec);
        const double lim = chi_variance_limit(gbm);
        csv << "samples,mean,variance,variance_limit,corr_with_w\n"
            << s.samples << ',' << fmt(s.mean) << ',' << fmt(s.variance) << ',' << fmt(lim) << ','
            << fmt(s.corr_with_w) << '\n';
        report << "chi_T: var " << fmt(s.variance) << " (limit " << fmt(lim) << ", rel "
               << fmt(s.variance / lim - 1.0) << "), corr with W_T " << fmt(s.corr_with_w) << '\n';
    } else if (o.check == "weak-error") {
        const std::vector<std::size_t> ns = o.n_list.empty() ? std::vector<std::size_t>{64, 128, 256} : o.n_list;
        const AsianPayoff f{AsianKind::fixed_call, 100.0};
        const ScaledBias sb = trapezoid_scaled_bias(gbm, f, ns, o.refine, o.N, stream.split(0), exec);
        const MeanEstimate lim = weak_error_limit(gbm, f, ns.back(), o.N, stream.split(1), exec);
        csv << "n,scaled_bias,std_err\n";
        for (std::size_t i = 0; i < sb.n.size(); ++i)
            csv << sb.n[i] << ',' << fmt(sb.scaled[i].value) << ',' << fmt(sb.scaled[i].std_err) << '\n';
        report << "n bias of the Asian call trapezoid: intercept " << fmt(sb.intercept.value) << " +- "
               << fmt(sb.intercept.std_err) << ", E[d2 f chi_T] = " << fmt(lim.value) << " +- "
               << fmt(lim.std_err) << '\n';
    } else if (o.check == "clt") {
        const std::size_t n = o.n_list.empty() ? 64 : o.n_list.front();
        const GbmModel model(gbm);
        const TestFunction f = TestFunction::euro_call(100.0, std::exp(-gbm.r * gbm.T));
        const SrParams sp = optimal_params(1.0, n, Scheme::euler);
        const NormalityReport rep = clt_normality_check(
            [&](const RngStream& s) { return sr_estimate(model, f, sp, s, exec).value; },
            o.replications, stream);
        csv << "replications,mean,std_dev,skewness,excess_kurtosis,passed\n"
            << rep.replications << ',' << fmt(rep.mean) << ',' << fmt(rep.std_dev) << ','
            << fmt(rep.skewness) << ',' << fmt(rep.excess_kurtosis) << ',' << rep.passed << '\n';
        report << "SR replications: skewness " << fmt(rep.skewness) << ", excess kurtosis "
               << fmt(rep.excess_kurtosis) << (rep.passed ? " (normal shape)\n" : " (not normal)\n");
    } else {
        throw std::invalid_argument("unknown check '" + o.check + "'");
    }
    if (xy.size() >= 3) {
        const FitResult fit = rate_fit(xy);
        report << "log-log slope " << fmt(fit.slope) << " (r^2 " << fmt(fit.r_squared) << ")\n";
    }
    std::cout << report.str();
    if (!o.csv.empty()) write_text(o.csv, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level statistical Romberg Monte Carlo"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    bool seed_set = false;

    PriceOptions po;
    auto* price = app.add_subcommand("price", "Estimate one expectation");
    price->add_option("--model", po.model, "circle, gbm or asian")->capture_default_str();
    price->add_option("--payoff", po.payoff, "gbm: call|put|identity; circle: f|g; asian: fixed_call|fixed_put|floating_call")->capture_default_str();
    price->add_option("--method", po.method, "mc or sr")->capture_default_str();
    price->add_option("-n,--steps", po.n, "Fine step count")->capture_default_str();
    price->add_option("-N,--samples", po.N, "MC sample count (default n^(2 alpha))");
    price->add_option("--alpha", po.alpha, "Weak rate exponent in [1/2, 1]")->capture_default_str();
    price->add_option("--s0", po.s0)->capture_default_str();
    price->add_option("--r", po.r)->capture_default_str();
    price->add_option("--sigma", po.sigma)->capture_default_str();
    price->add_option("--T", po.T)->capture_default_str();
    price->add_option("--strike", po.strike)->capture_default_str();
    price->add_option("--theta", po.theta, "Circle start angle")->capture_default_str();

    BenchConfig bc;
    std::string config_path, methods, n_list;
    double target_rms = 0.0;
    std::optional<double> bench_sigma;
    auto* bench = app.add_subcommand("bench", "Speed versus RMS over random parameter sets");
    bench->add_option("--config", config_path, "key = value configuration file");
    bench->add_option("--method", methods, "mc, sr or mc,sr");
    bench->add_option("--model", "circle, gbm or asian")->each([&](const std::string& s) { bc.model = parse_model(s); });
    bench->add_option("--alpha", "Weak rate exponent")->each([&](const std::string& s) { bc.alpha = std::stod(s); });
    bench->add_option("--n-list", n_list, "Comma separated step counts");
    bench->add_option("-M,--sets", "Number of parameter sets")->each([&](const std::string& s) { bc.M = std::stoull(s); });
    bench->add_option("-o,--output", "CSV path (default standard output)")->each([&](const std::string& s) { bc.output = s; });
    bench->add_option("--T", "Circle horizon")->each([&](const std::string& s) { bc.horizon = std::stod(s); });
    bench->add_option("--oracle-steps", "Asian oracle grid")->each([&](const std::string& s) { bc.oracle_steps = std::stoull(s); });
    bench->add_option("--oracle-samples", "Asian oracle sample count")->each([&](const std::string& s) { bc.oracle_samples = std::stoull(s); });
    bench->add_option("--sigma", bench_sigma, "Fix sigma for gbm/asian");
    bench->add_option("--target-rms", target_rms, "Also report speeds at this RMS");

    DiagOptions dopt;
    std::string diag_list;
    auto* diag = app.add_subcommand("diag", "Rate fits and CLT checks");
    diag->add_option("--check", dopt.check, "circle-bias, cv-variance, trapezoid-strong, chi, weak-error or clt")->capture_default_str();
    diag->add_option("-N,--samples", dopt.N)->capture_default_str();
    diag->add_option("--alpha", dopt.alpha)->capture_default_str();
    diag->add_option("--n-list", diag_list, "Comma separated n (or m for cv-variance)");
    diag->add_option("--refine", dopt.refine)->capture_default_str();
    diag->add_option("--replications", dopt.replications)->capture_default_str();
    diag->add_option("--csv", dopt.csv, "Also write the data as CSV");

    for (auto* sub : {price, bench, diag}) {
        sub->add_option("--seed", seed, "Master seed (default $ROMBERG_SEED or 20240601)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "Worker count (0 = OpenMP default)");
    }

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? 0 : kArgError;
        }
        if (!seed_set) seed = default_seed();
        const Exec exec{threads};
        if (*price) return run_price(po, seed, exec);
        if (*diag) {
            if (!diag_list.empty()) dopt.n_list = parse_size_list(diag_list);
            return run_diag(dopt, seed, exec);
        }
        // bench: config file first, then explicit flags on top
        BenchConfig cfg;
        cfg.master_seed = seed;
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        if (seed_set) cfg.master_seed = seed;
        if (bench->count("--model")) cfg.model = bc.model;
        if (bench->count("--alpha")) cfg.alpha = bc.alpha;
        if (bench->count("--sets")) cfg.M = bc.M;
        if (bench->count("--output")) cfg.output = bc.output;
        if (bench->count("--T")) cfg.horizon = bc.horizon;
        if (bench->count("--oracle-steps")) cfg.oracle_steps = bc.oracle_steps;
        if (bench->count("--oracle-samples")) cfg.oracle_samples = bc.oracle_samples;
        if (bench_sigma) cfg.sigma = bench_sigma;
        if (!methods.empty()) {
            cfg.methods.clear();
            std::stringstream ss(methods);
            for (std::string m; std::getline(ss, m, ',');) cfg.methods.push_back(parse_method(m));
        }
        if (!n_list.empty()) cfg.n_list = parse_size_list(n_list);
        if (threads) cfg.workers = threads;

        const auto records = run_benchmark(cfg);
        if (cfg.output.empty()) std::cout << to_csv(records);
        else emit_csv(records, cfg.output);
        if (target_rms > 0.0) {
            for (Method m : cfg.methods) {
                const auto s = speed_at_rms(records, m, target_rms);
                if (s)
                    std::cerr << to_string(m) << " speed at rms " << target_rms << ": "
                              << s->values_per_second << (s->extrapolated ? " (extrapolated)" : "") << '\n';
            }
        }
        return 0;
    } catch (const OracleError& e) {
        std::cerr << "oracle error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    }
}
