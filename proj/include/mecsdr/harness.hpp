// Randomized benchmark: sample scenarios in a data-rate regime, run the
// compression-aware scheme, the same pipeline with gamma pinned to 0, and the
// exact oracle when it is small enough, and tabulate the results.

#ifndef MECSDR_HARNESS_HPP
#define MECSDR_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mecsdr/model.hpp"
#include "mecsdr/rounding.hpp"

namespace mecsdr {

enum class RateRange { kLow, kMid, kHigh };

std::string to_string(RateRange range);
/// Accepts "low", "mid", "high". Throws std::invalid_argument otherwise.
RateRange parse_rate_range(const std::string& name);
/// Uplink/downlink rate bounds in bits/s.
std::pair<double, double> rate_bounds(RateRange range);

/// Fixed device/CAP/task parameters plus the ranges the random parameters are drawn from.
struct InstanceTemplate {
  double r0 = 400e6;
  double p_comp = 0.8;
  double p_tx = 1.258;
  double p_rx = 1.181;
  std::vector<double> cap_rates{2e9, 2.2e9};
  double alpha = 4e6;      ///< bits per task
  double kappa = 330.0;    ///< cycles per input bit
  double beta_ratio = 0.2; ///< output size as a fraction of input
  std::pair<double, double> jc_range{200.0, 500.0};
  std::pair<double, double> ec_range{10e-11, 20e-11};
  double lambda_t = 0.5;
  double lambda_e = 0.5;
};

InstanceTemplate default_instance_template();

enum class OracleMode { kAuto, kOn, kOff };

struct ExperimentConfig {
  RateRange rate_range = RateRange::kLow;
  std::vector<std::size_t> n_tasks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t realizations = 50;
  std::uint64_t seed = 1;
  InstanceTemplate instance = default_instance_template();
  RoundingOptions rounding;
  OracleMode oracle = OracleMode::kAuto;
  std::uint64_t oracle_limit = 100000;  ///< auto mode runs the oracle when (M+1)^N <= this
  bool record_wall_time = false;        ///< wall_ms is 0 unless set, keeping output byte-stable
  std::size_t threads = 0;              ///< 0 = hardware concurrency

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Draws per-CAP uplink/downlink rates from the configured range and the
/// device compression constants from their ranges; the rest is the template.
Instance sample_realization(const ExperimentConfig& config, std::size_t n_tasks, std::mt19937_64& rng);

/// Stream seed for one (range, n, realization) job.
std::uint64_t job_seed(const ExperimentConfig& config, std::size_t n_tasks, std::size_t realization,
                       std::uint64_t stream);

enum class Scheme { kSdrCompress, kSdrNoCompress, kOracle };

std::string to_string(Scheme scheme);

struct ResultRow {
  RateRange rate_range = RateRange::kLow;
  std::size_t n_tasks = 0;
  std::size_t realization = 0;
  Scheme scheme = Scheme::kSdrCompress;
  double psi = 0.0;
  double latency = 0.0;
  double energy = 0.0;
  double gamma = 0.0;
  double sdr_lower_bound = 0.0;  ///< NaN for oracle rows
  int iterations = 0;
  double wall_ms = 0.0;
  std::string status;
  Decision decision;             ///< not serialized
  Instance instance;             ///< not serialized
};

/// Rows sorted by (n_tasks, realization, scheme); independent of thread count.
std::vector<ResultRow> run_benchmark(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "rate_range,n_tasks,realization,scheme,psi,latency_s,energy_j,gamma,sdr_lower_bound,iterations,wall_ms,status";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct AggregateRow {
  RateRange rate_range = RateRange::kLow;
  std::size_t n_tasks = 0;
  Scheme scheme = Scheme::kSdrCompress;
  std::size_t count = 0;
  double mean_psi = 0.0;
  double std_psi = 0.0;
  double mean_latency = 0.0;
  double mean_energy = 0.0;
  double mean_gamma = 0.0;
  double std_gamma = 0.0;
  /// Mean of psi / psi_oracle over realizations that have an oracle row; NaN otherwise.
  double mean_oracle_ratio = 0.0;
};

/// Means and sample standard deviations per (rate_range, n_tasks, scheme).
/// Throws std::invalid_argument for an empty input.
std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Small matplotlib script that plots mean psi per scheme from a bench CSV.
std::string plot_script(const std::string& csv_path);

}  // namespace mecsdr

#endif  // MECSDR_HARNESS_HPP
