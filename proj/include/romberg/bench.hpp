// Speed-versus-RMS benchmark over randomized parameter sets.
//
// For each n, M parameter sets are drawn from one stream (shared by all
// methods, so comparisons are paired), each method produces one estimate
// per set, and the cell reports the RMS error against the oracle together
// with the number of estimates produced per second.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "romberg/models.hpp"
#include "romberg/parallel.hpp"

namespace romberg {

enum class Method { mc, sr };
enum class BenchModel { circle, gbm, asian };

std::string to_string(Method m);
std::string to_string(BenchModel m);
Method parse_method(const std::string& s);
BenchModel parse_model(const std::string& s);

/// Raised when no reference value can be produced for a model.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BenchConfig {
    std::vector<Method> methods{Method::mc, Method::sr};
    BenchModel model = BenchModel::circle;
    double alpha = 0.5;
    std::vector<std::size_t> n_list{80};
    std::size_t M = 200;
    std::uint64_t master_seed = 1;
    std::string output;
    double horizon = 1.0;              // circle model only
    std::size_t oracle_steps = 0;      // asian: 0 means 4 * max(n_list)
    std::size_t oracle_samples = 100000;  // asian crude-MC oracle
    std::optional<double> sigma;       // gbm/asian: fixes sigma instead of drawing it
    int workers = 0;

    /// Throws std::invalid_argument unless M >= 1 and n_list is non-empty,
    /// strictly ascending and >= 4.
    void validate() const;
};

struct BenchRecord {
    Method method = Method::mc;
    std::size_t n = 0;
    std::size_t m = 0;    // 0 for mc
    std::size_t N_m = 0;  // 0 for mc
    std::size_t N_n = 0;  // sample count N for mc
    double rms = 0.0;
    double wall_seconds = 0.0;
    double values_per_second = 0.0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

/// sqrt((1/M) sum (truth_i - estimate_i)^2). Throws std::invalid_argument
/// on empty or unequal inputs.
double rms_error(std::span<const double> truth, std::span<const double> estimates);

/// One parameter set; fields not used by the model are left at defaults.
struct ParameterSet {
    double theta = 0.0;
    GbmParams gbm{};
    double strike = 100.0;
};

/// The M parameter sets of a configuration. theta ~ U[0, 2 pi] for the
/// circle; s0 ~ U[80, 120], sigma ~ U[0.1, 0.4], r ~ U[0, 0.1],
/// T ~ U[0.5, 2] and K = 100 for gbm and asian.
std::vector<ParameterSet> draw_parameter_sets(const BenchConfig& cfg);

/// Oracle values for each parameter set (quadrature for circle,
/// Black-Scholes for gbm, fine-grid crude Monte Carlo for asian).
std::vector<double> oracle_values(const BenchConfig& cfg, std::span<const ParameterSet> sets);

/// One record per (method, n), methods in cfg order, n ascending.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

inline constexpr const char* kCsvHeader =
    "method,n,m,N_m,N_n,rms,wall_seconds,values_per_second";

std::string to_csv(std::span<const BenchRecord> records);
/// Throws std::runtime_error on I/O failure.
void emit_csv(std::span<const BenchRecord> records, const std::string& path);
std::vector<BenchRecord> parse_csv(std::istream& in);
std::vector<BenchRecord> read_csv(const std::string& path);

/// Plain-text configuration: one `key = value` per line, `#` comments.
/// Keys: method, model, alpha, n_list, M, seed, output, T, oracle_steps,
/// oracle_samples, sigma, workers. Lists are comma separated.
BenchConfig parse_config(std::istream& in, BenchConfig base = {});
BenchConfig load_config(const std::string& path, BenchConfig base = {});

std::vector<std::size_t> parse_size_list(const std::string& s);

struct SpeedAtRms {
    double values_per_second = 0.0;
    bool extrapolated = false;
};

/// Speed of one method's curve at an RMS target, by linear interpolation
/// of log speed against log rms between the two records that bracket the
/// target (or the two nearest records when none do). Needs two records.
std::optional<SpeedAtRms> speed_at_rms(std::span<const BenchRecord> curve, Method method,
                                       double target);

}  // namespace romberg
