#include "mecsdr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "mecsdr/numfmt.hpp"
#include "mecsdr/oracle.hpp"
#include "mecsdr/seeding.hpp"

namespace mecsdr {

std::string to_string(RateRange range) {
  switch (range) {
    case RateRange::kLow: return "low";
    case RateRange::kMid: return "mid";
    case RateRange::kHigh: return "high";
  }
  return "unknown";
}

RateRange parse_rate_range(const std::string& name) {
  if (name == "low") return RateRange::kLow;
  if (name == "mid") return RateRange::kMid;
  if (name == "high") return RateRange::kHigh;
  throw std::invalid_argument("rate_range must be one of low, mid, high (got '" + name + "')");
}

std::pair<double, double> rate_bounds(RateRange range) {
  switch (range) {
    case RateRange::kLow: return {0.5e6, 1e6};
    case RateRange::kMid: return {1e6, 2e6};
    case RateRange::kHigh: return {2e6, 10e6};
  }
  throw std::invalid_argument("unknown rate range");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kSdrCompress: return "sdr_compress";
    case Scheme::kSdrNoCompress: return "sdr_nocompress";
    case Scheme::kOracle: return "oracle";
  }
  return "unknown";
}

InstanceTemplate default_instance_template() { return InstanceTemplate{}; }

void ExperimentConfig::validate() const {
  if (realizations < 1) throw std::invalid_argument("realizations must be at least 1");
  if (n_tasks.empty()) throw std::invalid_argument("n_tasks must not be empty");
  for (std::size_t n : n_tasks) {
    if (n < 1) throw std::invalid_argument("n_tasks entries must be at least 1");
  }
  if (instance.cap_rates.empty()) throw std::invalid_argument("instance.cap_rates must not be empty");
  auto check_range = [](const std::pair<double, double>& r, const std::string& name) {
    if (!(r.first > 0.0 && r.first <= r.second)) {
      throw std::invalid_argument(name + " must satisfy 0 < low <= high");
    }
  };
  check_range(instance.jc_range, "instance.jc_range");
  check_range(instance.ec_range, "instance.ec_range");
  if (rounding.samples < 1) throw std::invalid_argument("rounding.samples must be at least 1");
}

Instance sample_realization(const ExperimentConfig& config, std::size_t n_tasks, std::mt19937_64& rng) {
  const InstanceTemplate& tpl = config.instance;
  const auto [lo, hi] = rate_bounds(config.rate_range);
  std::uniform_real_distribution<double> rate(lo, hi);
  std::uniform_real_distribution<double> jc(tpl.jc_range.first, tpl.jc_range.second);
  std::uniform_real_distribution<double> ec(tpl.ec_range.first, tpl.ec_range.second);

  Instance inst;
  inst.device.r0 = tpl.r0;
  inst.device.p_comp = tpl.p_comp;
  inst.device.p_tx = tpl.p_tx;
  inst.device.p_rx = tpl.p_rx;
  inst.device.jc = jc(rng);
  inst.device.ec = ec(rng);
  for (double r : tpl.cap_rates) {
    Cap cap;
    cap.r = r;
    cap.c_ul = rate(rng);
    cap.c_dl = rate(rng);
    inst.caps.push_back(cap);
  }
  for (std::size_t i = 0; i < n_tasks; ++i) {
    inst.tasks.push_back({tpl.alpha, tpl.beta_ratio * tpl.alpha, tpl.kappa * tpl.alpha});
  }
  inst.lambda_t = tpl.lambda_t;
  inst.lambda_e = tpl.lambda_e;
  return inst;
}

std::uint64_t job_seed(const ExperimentConfig& config, std::size_t n_tasks, std::size_t realization,
                       std::uint64_t stream) {
  return derive_seed(config.seed, {static_cast<std::uint64_t>(config.rate_range), n_tasks, realization, stream});
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ResultRow base_row(const ExperimentConfig& config, const Instance& inst, std::size_t n, std::size_t r, Scheme s) {
  ResultRow row;
  row.rate_range = config.rate_range;
  row.n_tasks = n;
  row.realization = r;
  row.scheme = s;
  row.instance = inst;
  return row;
}

void fill_cost(ResultRow& row, const Decision& decision, const CostBreakdown& cost) {
  row.decision = decision;
  row.psi = cost.psi;
  row.latency = cost.latency;
  row.energy = cost.energy;
  row.gamma = decision.gamma;
}

void mark_failed(ResultRow& row, const std::string& what) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.psi = row.latency = row.energy = row.gamma = row.sdr_lower_bound = nan;
  row.status = what;
}

ResultRow run_sdr(const ExperimentConfig& config, const Instance& inst, std::size_t n, std::size_t r,
                  bool compress) {
  ResultRow row = base_row(config, inst, n, r, compress ? Scheme::kSdrCompress : Scheme::kSdrNoCompress);
  RoundingOptions opts = config.rounding;
  opts.allow_compression = compress;
  opts.seed = job_seed(config, n, r, 1);
  const auto start = Clock::now();
  try {
    const RoundingReport rep = run_algorithm1(inst, opts);
    fill_cost(row, rep.best, rep.cost);
    row.sdr_lower_bound = rep.sdr_lower_bound;
    row.iterations = rep.solver_iterations;
    row.status = to_string(rep.solver_status);
  } catch (const std::exception&) {
    mark_failed(row, "error");
  }
  if (config.record_wall_time) row.wall_ms = elapsed_ms(start);
  return row;
}

ResultRow run_oracle(const ExperimentConfig& config, const Instance& inst, std::size_t n, std::size_t r) {
  ResultRow row = base_row(config, inst, n, r, Scheme::kOracle);
  const auto start = Clock::now();
  try {
    const OracleResult res = solve_exact(inst);
    fill_cost(row, res.best, res.cost);
    row.sdr_lower_bound = std::numeric_limits<double>::quiet_NaN();
    row.status = "exact";
  } catch (const OracleSizeError&) {
    mark_failed(row, "oracle_too_large");
  }
  if (config.record_wall_time) row.wall_ms = elapsed_ms(start);
  return row;
}

std::vector<ResultRow> run_job(const ExperimentConfig& config, std::size_t n, std::size_t r) {
  std::mt19937_64 rng(job_seed(config, n, r, 0));
  const Instance inst = sample_realization(config, n, rng);
  std::vector<ResultRow> rows;
  rows.push_back(run_sdr(config, inst, n, r, true));
  rows.push_back(run_sdr(config, inst, n, r, false));
  const bool oracle = config.oracle == OracleMode::kOn ||
                      (config.oracle == OracleMode::kAuto && assignment_count(inst) <= config.oracle_limit);
  if (oracle) rows.push_back(run_oracle(config, inst, n, r));
  return rows;
}

}  // namespace

std::vector<ResultRow> run_benchmark(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t n : config.n_tasks) {
    for (std::size_t r = 0; r < config.realizations; ++r) jobs.emplace_back(n, r);
  }
  std::vector<std::vector<ResultRow>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      results[j] = run_job(config, jobs[j].first, jobs[j].second);
    }
  };
  std::size_t threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  for (auto& job_rows : results) {
    for (auto& row : job_rows) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.n_tasks, a.realization, a.scheme) < std::tie(b.n_tasks, b.realization, b.scheme);
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << to_string(r.rate_range) << ',' << r.n_tasks << ',' << r.realization << ',' << to_string(r.scheme) << ','
        << format_double(r.psi) << ',' << format_double(r.latency) << ',' << format_double(r.energy) << ','
        << format_double(r.gamma) << ',' << format_double(r.sdr_lower_bound) << ',' << r.iterations << ','
        << format_double(r.wall_ms) << ',' << r.status << '\n';
  }
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
  using Key = std::tuple<RateRange, std::size_t, Scheme>;
  using Realization = std::tuple<RateRange, std::size_t, std::size_t>;

  std::map<Realization, double> oracle_psi;
  for (const ResultRow& r : rows) {
    if (r.scheme == Scheme::kOracle && std::isfinite(r.psi)) oracle_psi[{r.rate_range, r.n_tasks, r.realization}] = r.psi;
  }

  struct Acc {
    std::vector<double> psi, latency, energy, gamma, ratio;
  };
  std::map<Key, Acc> groups;
  for (const ResultRow& r : rows) {
    Acc& a = groups[{r.rate_range, r.n_tasks, r.scheme}];
    a.psi.push_back(r.psi);
    a.latency.push_back(r.latency);
    a.energy.push_back(r.energy);
    a.gamma.push_back(r.gamma);
    const auto it = oracle_psi.find({r.rate_range, r.n_tasks, r.realization});
    if (it != oracle_psi.end()) a.ratio.push_back(r.psi / it->second);
  }

  auto mean = [](const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto stddev = [&mean](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
  };

  std::vector<AggregateRow> out;
  for (const auto& [key, acc] : groups) {
    AggregateRow a;
    std::tie(a.rate_range, a.n_tasks, a.scheme) = key;
    a.count = acc.psi.size();
    a.mean_psi = mean(acc.psi);
    a.std_psi = stddev(acc.psi);
    a.mean_latency = mean(acc.latency);
    a.mean_energy = mean(acc.energy);
    a.mean_gamma = mean(acc.gamma);
    a.std_gamma = stddev(acc.gamma);
    a.mean_oracle_ratio = mean(acc.ratio);
    out.push_back(a);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "rate_range,n_tasks,scheme,count,mean_psi,std_psi,mean_latency_s,mean_energy_j,mean_gamma,std_gamma,"
         "mean_oracle_ratio\n";
  for (const AggregateRow& a : rows) {
    out << to_string(a.rate_range) << ',' << a.n_tasks << ',' << to_string(a.scheme) << ',' << a.count << ','
        << format_double(a.mean_psi) << ',' << format_double(a.std_psi) << ',' << format_double(a.mean_latency)
        << ',' << format_double(a.mean_energy) << ',' << format_double(a.mean_gamma) << ','
        << format_double(a.std_gamma) << ',' << format_double(a.mean_oracle_ratio) << '\n';
  }
}

std::string plot_script(const std::string& csv_path) {
  return "# Plots mean cost per scheme against the number of tasks.\n"
         "import sys\n"
         "import pandas as pd\n"
         "import matplotlib.pyplot as plt\n\n"
         "path = sys.argv[1] if len(sys.argv) > 1 else \"" + csv_path + "\"\n"
         "df = pd.read_csv(path)\n"
         "means = df.groupby([\"n_tasks\", \"scheme\"])[\"psi\"].mean().unstack()\n"
         "ax = means.plot(marker=\"o\")\n"
         "ax.set_xlabel(\"number of tasks\")\n"
         "ax.set_ylabel(\"mean weighted cost\")\n"
         "ax.set_title(\"rate range: \" + \",\".join(df[\"rate_range\"].unique()))\n"
         "plt.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
}

}  // namespace mecsdr
