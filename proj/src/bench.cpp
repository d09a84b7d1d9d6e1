#include "romberg/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "romberg/asian.hpp"
#include "romberg/estimators.hpp"
#include "romberg/quadrature.hpp"

namespace romberg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    const std::string t = trim(s);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

constexpr std::uint32_t kParamStream = 0;
constexpr std::uint32_t kEstimateStream = 1;
constexpr std::uint32_t kOracleStream = 2;

}  // namespace

std::string to_string(Method m) { return m == Method::mc ? "mc" : "sr"; }

std::string to_string(BenchModel m) {
    switch (m) {
        case BenchModel::circle: return "circle";
        case BenchModel::gbm: return "gbm";
        case BenchModel::asian: return "asian";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "mc") return Method::mc;
    if (s == "sr") return Method::sr;
    throw std::invalid_argument("unknown method '" + s + "' (expected mc or sr)");
}

BenchModel parse_model(const std::string& s) {
    if (s == "circle") return BenchModel::circle;
    if (s == "gbm") return BenchModel::gbm;
    if (s == "asian") return BenchModel::asian;
    throw std::invalid_argument("unknown model '" + s + "' (expected circle, gbm or asian)");
}

void BenchConfig::validate() const {
    if (M < 1) throw std::invalid_argument("bench: M must be at least 1");
    if (methods.empty()) throw std::invalid_argument("bench: no method selected");
    if (n_list.empty()) throw std::invalid_argument("bench: n_list is empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 4) throw std::invalid_argument("bench: every n must be at least 4");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("bench: n_list must be strictly ascending");
    }
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("bench: alpha must lie in [1/2, 1]");
    if (!(horizon > 0.0)) throw std::invalid_argument("bench: T must be positive");
}

double rms_error(std::span<const double> truth, std::span<const double> estimates) {
    if (truth.size() != estimates.size())
        throw std::invalid_argument("rms_error: length mismatch");
    if (truth.empty()) throw std::invalid_argument("rms_error: no values");
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - estimates[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(truth.size()));
}

std::vector<ParameterSet> draw_parameter_sets(const BenchConfig& cfg) {
    const RngStream root = RngStream(cfg.master_seed).split(kParamStream);
    std::vector<ParameterSet> sets(cfg.M);
    for (std::size_t i = 0; i < cfg.M; ++i) {
        Generator gen(root.split(static_cast<std::uint32_t>(i)));
        ParameterSet& s = sets[i];
        if (cfg.model == BenchModel::circle) {
            s.theta = gen.uniform(0.0, 2.0 * std::numbers::pi);
        } else {
            s.gbm.s0 = gen.uniform(80.0, 120.0);
            const double sigma = gen.uniform(0.1, 0.4);
            s.gbm.sigma = cfg.sigma ? *cfg.sigma : sigma;
            s.gbm.r = gen.uniform(0.0, 0.1);
            s.gbm.T = gen.uniform(0.5, 2.0);
            s.strike = 100.0;
        }
    }
    return sets;
}

std::vector<double> oracle_values(const BenchConfig& cfg, std::span<const ParameterSet> sets) {
    std::vector<double> out(sets.size());
    switch (cfg.model) {
        case BenchModel::circle:
            for (std::size_t i = 0; i < sets.size(); ++i)
                out[i] = circle_g_oracle(CircleParams{sets[i].theta, cfg.horizon});
            break;
        case BenchModel::gbm:
            for (std::size_t i = 0; i < sets.size(); ++i) {
                const GbmParams& g = sets[i].gbm;
                out[i] = black_scholes_call(g.s0, sets[i].strike, g.r, g.sigma, g.T);
            }
            break;
        case BenchModel::asian: {
            if (cfg.oracle_samples < 2)
                throw OracleError("asian oracle needs oracle_samples >= 2 (no closed form exists)");
            const std::size_t steps =
                cfg.oracle_steps > 0 ? cfg.oracle_steps : 4 * cfg.n_list.back();
            const RngStream root = RngStream(cfg.master_seed).split(kOracleStream);
            for (std::size_t i = 0; i < sets.size(); ++i) {
                const AsianPayoff payoff{AsianKind::fixed_call, sets[i].strike};
                out[i] = mc_asian_estimate(sets[i].gbm, payoff, steps, cfg.oracle_samples,
                                           root.split(static_cast<std::uint32_t>(i)),
                                           Exec{cfg.workers})
                             .value;
            }
            break;
        }
    }
    return out;
}

namespace {

double estimate_one(const BenchConfig& cfg, Method method, std::size_t n, const ParameterSet& s,
                    const RngStream& stream) {
    const Exec exec{cfg.workers};
    switch (cfg.model) {
        case BenchModel::circle: {
            const CircleModel model(CircleParams{s.theta, cfg.horizon});
            const TestFunction f = TestFunction::g_alpha(cfg.alpha);
            if (method == Method::mc)
                return mc_estimate(model, f, n, round_count(std::pow(double(n), 2.0 * cfg.alpha), 2),
                                   stream, exec)
                    .value;
            return sr_estimate(model, f, optimal_params(cfg.alpha, n, Scheme::euler), stream, exec)
                .value;
        }
        case BenchModel::gbm: {
            const GbmModel model(s.gbm);
            const TestFunction f = TestFunction::euro_call(s.strike, std::exp(-s.gbm.r * s.gbm.T));
            if (method == Method::mc)
                return mc_estimate(model, f, n, round_count(std::pow(double(n), 2.0 * cfg.alpha), 2),
                                   stream, exec)
                    .value;
            return sr_estimate(model, f, optimal_params(cfg.alpha, n, Scheme::euler), stream, exec)
                .value;
        }
        case BenchModel::asian: {
            const AsianPayoff payoff{AsianKind::fixed_call, s.strike};
            if (method == Method::mc)
                return mc_asian_estimate(s.gbm, payoff, n, n * n, stream, exec).value;
            return sr_asian_estimate(s.gbm, payoff, optimal_params(1.0, n, Scheme::trapezoidal),
                                     stream, exec)
                .value;
        }
    }
    return 0.0;
}

BenchRecord describe(const BenchConfig& cfg, Method method, std::size_t n) {
    BenchRecord r;
    r.method = method;
    r.n = n;
    if (method == Method::mc) {
        r.N_n = cfg.model == BenchModel::asian ? n * n
                                               : round_count(std::pow(double(n), 2.0 * cfg.alpha), 2);
    } else {
        const SrParams p = cfg.model == BenchModel::asian
                               ? optimal_params(1.0, n, Scheme::trapezoidal)
                               : optimal_params(cfg.alpha, n, Scheme::euler);
        r.m = p.m;
        r.N_m = p.coarse_samples;
        r.N_n = p.correction_samples;
    }
    return r;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
    cfg.validate();
    const auto sets = draw_parameter_sets(cfg);
    const auto truth = oracle_values(cfg, sets);
    const RngStream est_root = RngStream(cfg.master_seed).split(kEstimateStream);

    std::vector<BenchRecord> records;
    for (Method method : cfg.methods) {
        for (std::size_t n : cfg.n_list) {
            BenchRecord rec = describe(cfg, method, n);
            const RngStream cell = est_root.split(static_cast<std::uint32_t>(n));
            std::vector<double> estimates(sets.size());
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t i = 0; i < sets.size(); ++i)
                estimates[i] =
                    estimate_one(cfg, method, n, sets[i], cell.split(static_cast<std::uint32_t>(i)));
            rec.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rec.rms = rms_error(truth, estimates);
            rec.values_per_second = rec.wall_seconds > 0.0
                                        ? static_cast<double>(sets.size()) / rec.wall_seconds
                                        : 0.0;
            records.push_back(rec);
        }
    }
    return records;
}

std::string to_csv(std::span<const BenchRecord> records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += to_string(r.method);
        for (std::size_t v : {r.n, r.m, r.N_m, r.N_n}) {
            out += ',';
            out += std::to_string(v);
        }
        for (double v : {r.rms, r.wall_seconds, r.values_per_second}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void emit_csv(std::span<const BenchRecord> records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_csv(records);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<BenchRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader)
        throw std::invalid_argument("parse_csv: missing or unexpected header");
    std::vector<BenchRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 8) throw std::invalid_argument("parse_csv: expected 8 fields: " + line);
        BenchRecord r;
        r.method = parse_method(f[0]);
        r.n = parse_number<std::size_t>(f[1], "n");
        r.m = parse_number<std::size_t>(f[2], "m");
        r.N_m = parse_number<std::size_t>(f[3], "N_m");
        r.N_n = parse_number<std::size_t>(f[4], "N_n");
        r.rms = parse_number<double>(f[5], "rms");
        r.wall_seconds = parse_number<double>(f[6], "wall_seconds");
        r.values_per_second = parse_number<double>(f[7], "values_per_second");
        out.push_back(r);
    }
    return out;
}

std::vector<BenchRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_csv(in);
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& item : split(s, ','))
        if (!item.empty()) out.push_back(parse_number<std::size_t>(item, "integer list"));
    return out;
}

BenchConfig parse_config(std::istream& in, BenchConfig cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "method") {
            cfg.methods.clear();
            for (const auto& m : split(value, ',')) cfg.methods.push_back(parse_method(m));
        } else if (key == "model") {
            cfg.model = parse_model(value);
        } else if (key == "alpha") {
            cfg.alpha = parse_number<double>(value, "alpha");
        } else if (key == "n_list") {
            cfg.n_list = parse_size_list(value);
        } else if (key == "M") {
            cfg.M = parse_number<std::size_t>(value, "M");
        } else if (key == "seed") {
            cfg.master_seed = parse_number<std::uint64_t>(value, "seed");
        } else if (key == "output") {
            cfg.output = value;
        } else if (key == "T") {
            cfg.horizon = parse_number<double>(value, "T");
        } else if (key == "oracle_steps") {
            cfg.oracle_steps = parse_number<std::size_t>(value, "oracle_steps");
        } else if (key == "oracle_samples") {
            cfg.oracle_samples = parse_number<std::size_t>(value, "oracle_samples");
        } else if (key == "sigma") {
            cfg.sigma = parse_number<double>(value, "sigma");
        } else if (key == "workers") {
            cfg.workers = parse_number<int>(value, "workers");
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

BenchConfig load_config(const std::string& path, BenchConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(in, std::move(base));
}

std::optional<SpeedAtRms> speed_at_rms(std::span<const BenchRecord> curve, Method method,
                                       double target) {
    std::vector<BenchRecord> pts;
    for (const auto& r : curve)
        if (r.method == method && r.rms > 0.0 && r.values_per_second > 0.0) pts.push_back(r);
    if (pts.size() < 2 || !(target > 0.0)) return std::nullopt;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.rms < b.rms; });

    auto interp = [&](const BenchRecord& a, const BenchRecord& b) {
        const double x0 = std::log(a.rms), x1 = std::log(b.rms);
        const double y0 = std::log(a.values_per_second), y1 = std::log(b.values_per_second);
        const double x = std::log(target);
        if (x1 == x0) return std::exp(0.5 * (y0 + y1));
        return std::exp(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i].rms <= target && target <= pts[i + 1].rms)
            return SpeedAtRms{interp(pts[i], pts[i + 1]), false};
    if (target < pts.front().rms) return SpeedAtRms{interp(pts[0], pts[1]), true};
    return SpeedAtRms{interp(pts[pts.size() - 2], pts.back()), true};
}

}  // namespace romberg
