#include "mecsdr/cli.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mecsdr/harness.hpp"
#include "mecsdr/io.hpp"
#include "mecsdr/numfmt.hpp"
#include "mecsdr/oracle.hpp"
#include "mecsdr/rounding.hpp"

namespace mecsdr {
namespace {

struct SolveArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t samples = 100;
  bool refine_gamma = false;
  bool no_column = false;
  bool no_compression = false;
};

struct OracleArgs {
  std::string config;
  std::uint64_t limit = OracleLimits{}.max_assignments;
  std::string out;
};

struct BenchArgs {
  std::string config;
  std::string rates;
  std::optional<std::size_t> n_min, n_max, realizations, threads;
  std::optional<std::uint64_t> seed;
  std::string out, summary, plot;
  bool timing = false;
  bool no_oracle = false;
};

struct CompareArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t samples = 100;
};

std::string cpu_list(const Assignment& a) {
  std::string s;
  for (std::size_t i = 0; i < a.num_tasks(); ++i) s += (i ? " " : "") + std::to_string(a.cpu_of(i));
  return s;
}

void print_cost(std::ostream& out, const Decision& d, const CostBreakdown& c) {
  out << "cpu_of   " << cpu_list(d.assignment) << '\n'
      << "gamma    " << format_double(d.gamma) << '\n'
      << "latency  " << format_double(c.latency) << " s\n"
      << "energy   " << format_double(c.energy) << " J\n"
      << "psi      " << format_double(c.psi) << '\n';
}

Instance load_instance(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_instance(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

bool solver_failed(SdpStatus s) { return s == SdpStatus::kInfeasible || s == SdpStatus::kNumericalFailure; }

int do_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.config);
  RoundingOptions opts;
  opts.seed = a.seed;
  opts.samples = a.samples;
  opts.refine_gamma = a.refine_gamma;
  opts.include_column_candidate = !a.no_column;
  opts.allow_compression = !a.no_compression;
  const RoundingReport rep = run_algorithm1(inst, opts);
  if (solver_failed(rep.solver_status)) {
    err << "error: " << a.config << ": SDP solver reported " << to_string(rep.solver_status) << '\n';
    return kExitSolver;
  }
  if (rep.solver_status == SdpStatus::kMaxIter) {
    err << "warning: SDP solver stopped at the iteration limit; result is from the best iterate\n";
  }
  print_cost(out, rep.best, rep.cost);
  out << "sdr_lower_bound " << format_double(rep.sdr_lower_bound) << '\n'
      << "solver   " << to_string(rep.solver_status) << " in " << rep.solver_iterations << " iterations\n"
      << "rank1    " << (rep.rank1 ? "yes" : "no") << " (ratio " << format_double(rep.rank_ratio) << ")\n"
      << "candidates " << rep.candidates_evaluated << '\n';
  if (!a.out.empty()) write_file(a.out, dump_decision(rep.best, rep.cost));
  return kExitOk;
}

int do_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.config);
  OracleLimits limits;
  limits.max_assignments = a.limit;
  OracleResult res;
  try {
    res = solve_exact(inst, limits);
  } catch (const OracleSizeError& e) {
    err << "error: " << a.config << ": " << e.what() << " (raise --limit)\n";
    return kExitOracle;
  }
  print_cost(out, res.best, res.cost);
  out << "psi_p3   " << format_double(res.psi_p3) << '\n' << "enumerated " << res.enumerated << '\n';
  if (!a.out.empty()) write_file(a.out, dump_decision(res.best, res.cost));
  return kExitOk;
}

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    const std::string text = read_file(a.config);
    try {
      cfg = parse_experiment_config(text);
    } catch (const ConfigError& e) {
      throw ConfigError(a.config + ": " + e.what());
    }
  }
  if (!a.rates.empty()) cfg.rate_range = parse_rate_range(a.rates);
  if (a.n_min || a.n_max) {
    const std::size_t lo = a.n_min.value_or(cfg.n_tasks.front());
    const std::size_t hi = a.n_max.value_or(cfg.n_tasks.back());
    if (lo < 1 || lo > hi) {
      err << "error: --n-min/--n-max: need 1 <= n-min <= n-max\n";
      return kExitUsage;
    }
    cfg.n_tasks.clear();
    for (std::size_t n = lo; n <= hi; ++n) cfg.n_tasks.push_back(n);
  }
  if (a.realizations) cfg.realizations = *a.realizations;
  if (a.threads) cfg.threads = *a.threads;
  cfg.seed = *a.seed;
  cfg.record_wall_time = a.timing;
  if (a.no_oracle) cfg.oracle = OracleMode::kOff;
  cfg.validate();

  const std::vector<ResultRow> rows = run_benchmark(cfg);
  std::ostringstream csv;
  write_csv(csv, rows);
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_file(a.out, csv.str());
  }

  std::size_t failed = 0;
  for (const ResultRow& r : rows) failed += (r.status == "error" || r.status == "numerical_failure");
  const std::vector<AggregateRow> agg = aggregate(rows);
  std::ostringstream summary;
  write_summary_csv(summary, agg);
  if (!a.summary.empty()) write_file(a.summary, summary.str());
  if (!a.plot.empty()) write_file(a.plot, plot_script(a.out.empty() ? "bench.csv" : a.out));
  if (!a.out.empty()) {
    out << "rows " << rows.size() << " (" << failed << " failed) written to " << a.out << '\n';
    out << "n_tasks scheme mean_psi\n";
    for (const AggregateRow& g : agg) {
      out << g.n_tasks << ' ' << to_string(g.scheme) << ' ' << format_double(g.mean_psi) << '\n';
    }
  }
  if (failed > 0) err << "warning: " << failed << " rows recorded a solver failure\n";
  return kExitOk;
}

int do_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.config);
  RoundingOptions opts;
  opts.seed = a.seed;
  opts.samples = a.samples;
  const RoundingReport rep = run_algorithm1(inst, opts);
  if (solver_failed(rep.solver_status)) {
    err << "error: " << a.config << ": SDP solver reported " << to_string(rep.solver_status) << '\n';
    return kExitSolver;
  }
  OracleResult res;
  try {
    res = solve_exact(inst);
  } catch (const OracleSizeError& e) {
    err << "error: " << a.config << ": " << e.what() << '\n';
    return kExitOracle;
  }
  out << "psi_sdr    " << format_double(rep.cost.psi) << '\n'
      << "psi_oracle " << format_double(res.cost.psi) << '\n'
      << "ratio      " << format_double(rep.cost.psi / res.cost.psi) << '\n'
      << "sdr_lower_bound " << format_double(rep.sdr_lower_bound) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint task offloading and compression-ratio optimization for mobile edge computing"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Relax, solve and round one instance");
  solve->add_option("--config", solve_args.config, "Instance JSON file")->required();
  solve->add_option("--seed", solve_args.seed, "Rounding seed");
  solve->add_option("--out", solve_args.out, "Write the decision JSON here");
  solve->add_option("--samples", solve_args.samples, "Number of Gaussian samples")->check(CLI::PositiveNumber);
  solve->add_flag("--refine-gamma", solve_args.refine_gamma, "Re-optimize gamma for every candidate");
  solve->add_flag("--no-column-candidate", solve_args.no_column, "Round only the Gaussian samples");
  solve->add_flag("--no-compression", solve_args.no_compression, "Pin gamma to 0");

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact solve by enumeration");
  oracle->add_option("--config", oracle_args.config, "Instance JSON file")->required();
  oracle->add_option("--limit", oracle_args.limit, "Maximum number of assignments to enumerate");
  oracle->add_option("--out", oracle_args.out, "Write the decision JSON here");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Randomized benchmark, CSV output");
  bench->add_option("--config", bench_args.config, "Experiment config JSON file");
  bench->add_option("--rates", bench_args.rates, "Rate range")->check(CLI::IsMember({"low", "mid", "high"}));
  bench->add_option("--n-min", bench_args.n_min, "Smallest number of tasks");
  bench->add_option("--n-max", bench_args.n_max, "Largest number of tasks");
  bench->add_option("--realizations", bench_args.realizations, "Realizations per task count")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_args.seed, "Experiment seed")->required();
  bench->add_option("--out", bench_args.out, "CSV output path (default: stdout)");
  bench->add_option("--threads", bench_args.threads, "Worker threads (0 = all cores)");
  bench->add_flag("--timing", bench_args.timing, "Record wall time per row");
  bench->add_flag("--no-oracle", bench_args.no_oracle, "Skip the exact oracle");
  bench->add_option("--summary", bench_args.summary, "Write per-(n, scheme) means here");
  bench->add_option("--plot-script", bench_args.plot, "Write a matplotlib script here");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "Relaxation and rounding against the exact oracle");
  compare->add_option("--config", compare_args.config, "Instance JSON file")->required();
  compare->add_option("--seed", compare_args.seed, "Rounding seed");
  compare->add_option("--samples", compare_args.samples, "Number of Gaussian samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return do_solve(solve_args, out, err);
    if (oracle->parsed()) return do_oracle(oracle_args, out, err);
    if (bench->parsed()) return do_bench(bench_args, out, err);
    if (compare->parsed()) return do_compare(compare_args, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mecsdr
