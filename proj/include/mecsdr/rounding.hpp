// Recovers a feasible allocation from the relaxed SDP solution: Gaussian
// randomization over the allocation block of Z*, per-row argmax, and
// best-of-L selection under the true latency/energy cost.

#ifndef MECSDR_ROUNDING_HPP
#define MECSDR_ROUNDING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mecsdr/linalg.hpp"
#include "mecsdr/model.hpp"
#include "mecsdr/qcqp.hpp"
#include "mecsdr/sdp.hpp"

namespace mecsdr {

struct RoundingOptions {
  std::size_t samples = 100;  ///< L
  std::uint64_t seed = 0;
  /// Re-optimizes gamma exactly for every candidate instead of sharing z*_{gamma,hom}.
  bool refine_gamma = false;
  /// Also rounds the homogeneous column of Z* (its first-moment estimate of x).
  /// Not part of plain Gaussian randomization; disable for a strict replica.
  bool include_column_candidate = true;
  /// false pins gamma = 0 inside the relaxation (the no-compression scheme).
  bool allow_compression = true;
  double rank_ratio_tol = 1e-6;
  SolverOptions solver;
  StandardFormOptions standard_form;
};

struct PsiSummary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct RoundingReport {
  Decision best;
  CostBreakdown cost;  ///< true cost of `best`
  double best_psi = 0.0;
  double gamma = 0.0;  ///< shared gamma read from Z*
  double sdr_lower_bound = 0.0;
  bool rank1 = false;
  double rank_ratio = 0.0;
  std::size_t candidates_evaluated = 0;
  std::size_t best_index = 0;  ///< position of `best` in the candidate list
  PsiSummary psi_summary;
  bool column_candidate_used = false;
  bool column_candidate_won = false;
  SdpStatus solver_status = SdpStatus::kNumericalFailure;
  int solver_iterations = 0;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// z*_{gamma,hom} clamped into [0, 1].
double extract_gamma(const SymMatrix& z, const YLayout& layout);

/// L draws from N(0, Z') where Z' is the Q x Q allocation block of Z*,
/// projected onto the PSD cone. Draw l uses its own stream derived from
/// (seed, l), so a larger L extends the same sequence.
std::vector<Eigen::VectorXd> sample_candidates(const SymMatrix& z, const YLayout& layout,
                                               const RoundingOptions& options);

/// Reshapes a length-Q vector to N x (M+1) and keeps the per-row argmax
/// (ties go to the lowest CPU index).
Assignment round_candidate(const Eigen::VectorXd& xhat, const YLayout& layout);

/// Evaluates every candidate with the true cost at the shared gamma (or its
/// own optimal gamma when refine_gamma) and returns the cheapest. The first
/// minimizer wins ties. Throws std::invalid_argument for an empty list.
RoundingReport select_best(const Instance& instance, const std::vector<Assignment>& candidates, double gamma,
                           const RoundingOptions& options);

struct RankOneDecode {
  std::optional<Decision> decision;  ///< set iff the (x, gamma, 1) block is rank one
  double ratio = 0.0;                ///< lambda_2 / lambda_1 of that block
};

/// Rank test on Z* with the latency slot dropped. When it passes, y is read
/// from the leading eigenvector scaled so the homogeneous entry is 1; x is
/// rounded per row and gamma clamped into [0, 1].
RankOneDecode decode_rank_one(const SymMatrix& z, const YLayout& layout, double ratio_tol = 1e-6);

/// Full pipeline: build, homogenize, solve, rank check, then either decode the
/// rank-one solution directly or randomize and select. Throws SolverFailure
/// only when the solver leaves no finite iterate to round.
RoundingReport run_algorithm1(const Instance& instance, const RoundingOptions& options = {});

}  // namespace mecsdr

#endif  // MECSDR_ROUNDING_HPP
