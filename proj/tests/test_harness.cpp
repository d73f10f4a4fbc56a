#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mecsdr/harness.hpp"

namespace mecsdr {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_tasks = {1, 2, 3};
  c.realizations = 3;
  c.rounding.samples = 20;
  c.threads = 1;
  return c;
}

ResultRow row(Scheme s, std::size_t realization, double psi) {
  ResultRow r;
  r.scheme = s;
  r.n_tasks = 2;
  r.realization = realization;
  r.psi = psi;
  return r;
}

TEST(Template, ExperimentalParameters) {
  const InstanceTemplate t = default_instance_template();
  EXPECT_EQ(t.r0, 4e8);
  EXPECT_EQ(t.p_comp, 0.8);
  EXPECT_EQ(t.p_tx, 1.258);
  EXPECT_EQ(t.p_rx, 1.181);
  EXPECT_EQ(t.cap_rates, (std::vector<double>{2e9, 2.2e9}));
  EXPECT_EQ(t.alpha, 4e6);
  EXPECT_DOUBLE_EQ(t.kappa * t.alpha, 1.32e9);
  EXPECT_DOUBLE_EQ(t.beta_ratio * t.alpha, 0.8e6);
  EXPECT_EQ(t.lambda_t, 0.5);
  EXPECT_EQ(t.lambda_e, 0.5);
  EXPECT_EQ(t.jc_range, (std::pair<double, double>{200, 500}));
}

TEST(RateRange, BoundsAndNames) {
  EXPECT_EQ(rate_bounds(RateRange::kLow), (std::pair<double, double>{5e5, 1e6}));
  EXPECT_EQ(rate_bounds(RateRange::kMid), (std::pair<double, double>{1e6, 2e6}));
  EXPECT_EQ(rate_bounds(RateRange::kHigh), (std::pair<double, double>{2e6, 1e7}));
  for (RateRange r : {RateRange::kLow, RateRange::kMid, RateRange::kHigh}) EXPECT_EQ(parse_rate_range(to_string(r)), r);
  EXPECT_THROW(parse_rate_range("medium"), std::invalid_argument);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.realizations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ExperimentConfig{};
  c.n_tasks.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(SampleRealization, DrawsWithinRanges) {
  for (RateRange range : {RateRange::kLow, RateRange::kMid, RateRange::kHigh}) {
    ExperimentConfig c;
    c.rate_range = range;
    const auto [lo, hi] = rate_bounds(range);
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
      const Instance inst = sample_realization(c, 3, rng);
      ASSERT_EQ(inst.num_caps(), 2u);
      ASSERT_EQ(inst.num_tasks(), 3u);
      for (const Cap& cap : inst.caps) {
        EXPECT_GE(cap.c_ul, lo);
        EXPECT_LE(cap.c_ul, hi);
        EXPECT_GE(cap.c_dl, lo);
        EXPECT_LE(cap.c_dl, hi);
      }
      EXPECT_GE(inst.device.jc, 200.0);
      EXPECT_LE(inst.device.jc, 500.0);
      EXPECT_GE(inst.device.ec, 10e-11);
      EXPECT_LE(inst.device.ec, 20e-11);
      EXPECT_EQ(inst.tasks[0].omega, 1.32e9);
      EXPECT_NO_THROW(inst.validate());
    }
  }
}

TEST(SampleRealization, SameSeedSameInstance) {
  ExperimentConfig c;
  std::mt19937_64 a(3), b(3);
  const Instance x = sample_realization(c, 4, a), y = sample_realization(c, 4, b);
  EXPECT_EQ(x.device.jc, y.device.jc);
  EXPECT_EQ(x.caps[1].c_dl, y.caps[1].c_dl);
}

TEST(JobSeed, DistinctPerJobAndStream) {
  ExperimentConfig c;
  EXPECT_NE(job_seed(c, 1, 0, 0), job_seed(c, 1, 1, 0));
  EXPECT_NE(job_seed(c, 1, 0, 0), job_seed(c, 2, 0, 0));
  EXPECT_NE(job_seed(c, 1, 0, 0), job_seed(c, 1, 0, 1));
  ExperimentConfig mid = c;
  mid.rate_range = RateRange::kMid;
  EXPECT_NE(job_seed(c, 1, 0, 0), job_seed(mid, 1, 0, 0));
}

TEST(RunBenchmark, RowsCompleteSortedAndConsistent) {
  const ExperimentConfig c = small_config();
  const auto rows = run_benchmark(c);
  ASSERT_EQ(rows.size(), 3u * 3u * 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& r = rows[i];
    EXPECT_EQ(r.n_tasks, c.n_tasks[i / 9]);
    EXPECT_EQ(r.realization, (i / 3) % 3);
    EXPECT_EQ(r.scheme, static_cast<Scheme>(i % 3));
    EXPECT_NEAR(r.psi, r.instance.lambda_t * r.latency + r.instance.lambda_e * r.energy, 1e-9 * r.psi);
    EXPECT_NEAR(objective(r.instance, r.decision).psi, r.psi, 1e-9 * r.psi);
    if (r.scheme == Scheme::kSdrNoCompress) EXPECT_EQ(r.gamma, 0.0);
    if (r.scheme == Scheme::kOracle) EXPECT_TRUE(std::isnan(r.sdr_lower_bound));
    if (r.scheme != Scheme::kOracle) EXPECT_EQ(r.status, "optimal");
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(RunBenchmark, OracleModes) {
  ExperimentConfig c = small_config();
  c.oracle = OracleMode::kOff;
  EXPECT_EQ(run_benchmark(c).size(), 18u);
  c.oracle = OracleMode::kAuto;
  c.oracle_limit = 9;  // (M+1)^N = 3, 9, 27
  EXPECT_EQ(run_benchmark(c).size(), 18u + 6u);
}

TEST(RunBenchmark, ThreadCountDoesNotChangeOutput) {
  ExperimentConfig c = small_config();
  std::ostringstream one, four;
  write_csv(one, run_benchmark(c));
  c.threads = 4;
  write_csv(four, run_benchmark(c));
  EXPECT_EQ(one.str(), four.str());
}

TEST(WriteCsv, HeaderAndRoundTripNumbers) {
  ResultRow r = row(Scheme::kOracle, 0, 0.1);
  r.sdr_lower_bound = std::numeric_limits<double>::quiet_NaN();
  r.status = "exact";
  std::ostringstream out;
  write_csv(out, {r});
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\nlow,2,0,oracle,0.1,0,0,0,nan,0,0,exact\n");
}

TEST(Aggregate, SingleRow) {
  const auto agg = aggregate({row(Scheme::kSdrCompress, 0, 2.5)});
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].mean_psi, 2.5);
  EXPECT_EQ(agg[0].std_psi, 0.0);
  EXPECT_TRUE(std::isnan(agg[0].mean_oracle_ratio));
}

TEST(Aggregate, MeanAndSampleStd) {
  const auto agg = aggregate({row(Scheme::kSdrCompress, 0, 2.0), row(Scheme::kSdrCompress, 1, 4.0)});
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].count, 2u);
  EXPECT_EQ(agg[0].mean_psi, 3.0);
  EXPECT_NEAR(agg[0].std_psi, std::sqrt(2.0), 1e-15);
}

TEST(Aggregate, OracleRatioPairsByRealization) {
  const auto agg = aggregate({row(Scheme::kSdrCompress, 0, 2.0), row(Scheme::kSdrCompress, 1, 6.0),
                              row(Scheme::kOracle, 0, 1.0), row(Scheme::kOracle, 1, 3.0)});
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].scheme, Scheme::kSdrCompress);
  EXPECT_EQ(agg[0].mean_oracle_ratio, 2.0);
  EXPECT_EQ(agg[1].mean_oracle_ratio, 1.0);
}

TEST(Aggregate, EmptyThrows) { EXPECT_THROW(aggregate({}), std::invalid_argument); }

TEST(PlotScript, MentionsCsv) { EXPECT_NE(plot_script("fig.csv").find("fig.csv"), std::string::npos); }

}  // namespace
}  // namespace mecsdr
