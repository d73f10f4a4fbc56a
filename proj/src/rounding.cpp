#include "mecsdr/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "mecsdr/oracle.hpp"
#include "mecsdr/seeding.hpp"

namespace mecsdr {

double extract_gamma(const SymMatrix& z, const YLayout& layout) {
  if (z.order() != layout.lifted_order()) throw std::invalid_argument("extract_gamma: order mismatch");
  return std::clamp(z(layout.gamma_index(), layout.homogeneous_index()), 0.0, 1.0);
}

std::vector<Eigen::VectorXd> sample_candidates(const SymMatrix& z, const YLayout& layout,
                                               const RoundingOptions& options) {
  if (z.order() != layout.lifted_order()) throw std::invalid_argument("sample_candidates: order mismatch");
  const Eigen::MatrixXd factor = factor_sqrt(psd_project(z.principal_block(0, layout.q())));
  const auto q = static_cast<Eigen::Index>(layout.q());

  std::vector<Eigen::VectorXd> out;
  out.reserve(options.samples);
  Eigen::VectorXd w(q);
  for (std::size_t l = 0; l < options.samples; ++l) {
    std::mt19937_64 rng(derive_seed(options.seed, {l}));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = 0; r < q; ++r) w(r) = normal(rng);
    out.push_back(factor * w);
  }
  return out;
}

Assignment round_candidate(const Eigen::VectorXd& xhat, const YLayout& layout) {
  if (static_cast<std::size_t>(xhat.size()) < layout.q()) {
    throw DimensionError("round_candidate: vector shorter than the allocation block");
  }
  std::vector<std::size_t> cpu_of(layout.num_tasks(), 0);
  for (std::size_t i = 0; i < layout.num_tasks(); ++i) {
    double best = xhat(static_cast<Eigen::Index>(layout.index(i, 0)));
    for (std::size_t k = 1; k < layout.num_cpus(); ++k) {
      const double v = xhat(static_cast<Eigen::Index>(layout.index(i, k)));
      if (v > best) {
        best = v;
        cpu_of[i] = k;
      }
    }
  }
  return Assignment(std::move(cpu_of));
}

RoundingReport select_best(const Instance& instance, const std::vector<Assignment>& candidates, double gamma,
                           const RoundingOptions& options) {
  if (candidates.empty()) throw std::invalid_argument("select_best: no candidates");
  RoundingReport report;
  report.gamma = gamma;
  report.best_psi = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  report.psi_summary.min = std::numeric_limits<double>::infinity();
  report.psi_summary.max = -std::numeric_limits<double>::infinity();

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Assignment& cand = candidates[c];
    Decision d{cand, gamma};
    double psi = objective(instance, d).psi;
    if (options.refine_gamma) {
      const GammaOptimum g = optimal_gamma_for(instance, cand);
      if (g.psi < psi) {
        psi = g.psi;
        d.gamma = g.gamma;
      }
    }
    sum += psi;
    report.psi_summary.min = std::min(report.psi_summary.min, psi);
    report.psi_summary.max = std::max(report.psi_summary.max, psi);
    if (psi < report.best_psi) {
      report.best_psi = psi;
      report.best = d;
      report.best_index = c;
    }
  }
  report.candidates_evaluated = candidates.size();
  report.psi_summary.mean = sum / static_cast<double>(candidates.size());
  report.cost = objective(instance, report.best);
  report.best_psi = report.cost.psi;
  return report;
}

RankOneDecode decode_rank_one(const SymMatrix& z, const YLayout& layout, double ratio_tol) {
  if (z.order() != layout.lifted_order()) throw DimensionError("decode_rank_one: order mismatch");
  const auto q = static_cast<Eigen::Index>(layout.q());
  // The latency slot is measured in seconds and can dwarf the O(1) entries, so
  // the test looks at (x, gamma, 1) only. t is never decoded.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i <= q; ++i) keep.push_back(i);
  keep.push_back(static_cast<Eigen::Index>(layout.homogeneous_index()));
  const RankOneCheck rank = rank_one_check(SymMatrix(Eigen::MatrixXd(z.dense()(keep, keep))), ratio_tol);
  RankOneDecode out;
  out.ratio = rank.ratio;
  if (rank.rank_one && std::abs(rank.v1(q + 1)) > 1e-12) {
    const Eigen::VectorXd y = rank.v1 / rank.v1(q + 1);
    out.decision = Decision{round_candidate(y.head(q), layout), std::clamp(y(q), 0.0, 1.0)};
  }
  return out;
}

RoundingReport run_algorithm1(const Instance& instance, const RoundingOptions& options) {
  if (options.samples == 0) throw std::invalid_argument("rounding: samples must be at least 1");
  const QcqpForm form = build_qcqp(instance);
  const YLayout& layout = form.layout;
  HomogenizedProblem relaxed = homogenize(form);
  if (!options.allow_compression) pin_gamma_zero(relaxed);
  const SdpSolution sol = solve(to_standard_form(relaxed, options.standard_form), options.solver);
  if (!sol.z.dense().allFinite()) {
    throw SolverFailure("SDP solver returned a non-finite iterate (status " + to_string(sol.status) + ")");
  }

  const SymMatrix& z = sol.z;
  const auto hom = static_cast<Eigen::Index>(layout.homogeneous_index());
  const RankOneDecode decoded = decode_rank_one(z, layout, options.rank_ratio_tol);

  RoundingReport report;
  if (decoded.decision) {
    Decision d = *decoded.decision;
    if (!options.allow_compression) d.gamma = 0.0;
    RoundingOptions single = options;
    single.refine_gamma = false;
    report = select_best(instance, {d.assignment}, d.gamma, single);
  } else {
    const double gamma = options.allow_compression ? extract_gamma(z, layout) : 0.0;
    std::vector<Assignment> candidates;
    for (const Eigen::VectorXd& xhat : sample_candidates(z, layout, options)) {
      candidates.push_back(round_candidate(xhat, layout));
    }
    if (options.include_column_candidate) {
      candidates.push_back(round_candidate(z.dense().col(hom).head(static_cast<Eigen::Index>(layout.q())), layout));
    }
    report = select_best(instance, candidates, gamma, options);
    report.column_candidate_used = options.include_column_candidate;
    // Samples come first, so on a tie a Gaussian sample keeps the win.
    report.column_candidate_won = options.include_column_candidate && report.best_index + 1 == candidates.size();
  }
  report.rank1 = decoded.decision.has_value();
  report.rank_ratio = decoded.ratio;
  report.sdr_lower_bound = sol.objective;
  report.solver_status = sol.status;
  report.solver_iterations = sol.iterations;
  return report;
}

}  // namespace mecsdr
