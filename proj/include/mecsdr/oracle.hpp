// Exhaustive solver for small instances, used to verify the relaxation.
//
// For a fixed assignment every T_k and the energy are affine in gamma, so the
// cost is convex piecewise linear in gamma and its minimum sits at 0, 1, or a
// crossing of two latency lines. Enumerating all (M+1)^N assignments with that
// exact 1-D search gives the global optimum.

#ifndef MECSDR_ORACLE_HPP
#define MECSDR_ORACLE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mecsdr/model.hpp"

namespace mecsdr {

struct GammaOptimum {
  double gamma = 0.0;
  double psi = 0.0;
};

/// Global minimizer of psi over gamma in [0, 1] for a fixed assignment. When
/// psi does not depend on gamma (all tasks local) gamma = 0 is returned; ties
/// prefer 0, then 1, then crossings in increasing CPU-pair order.
GammaOptimum optimal_gamma_for(const Instance& instance, const Assignment& assignment);

struct OracleLimits {
  std::uint64_t max_assignments = 2'000'000;
  bool keep_trace = false;
};

struct OracleTraceEntry {
  Assignment assignment;
  double gamma = 0.0;
  double psi_p1 = 0.0;
  double psi_p3 = 0.0;
};

struct OracleResult {
  Decision best;           ///< exact minimizer of the true cost
  CostBreakdown cost;      ///< breakdown of `best`
  double psi_p1 = 0.0;     ///< exact optimum of the true cost
  double psi_p3 = 0.0;     ///< binary optimum with t = max endpoint latency
  Decision best_p3;
  std::uint64_t enumerated = 0;
  std::vector<OracleTraceEntry> trace;
};

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Number of assignments (M+1)^N, saturating at UINT64_MAX.
std::uint64_t assignment_count(const Instance& instance);

/// Enumerates assignments lexicographically in cpu_of; the first minimizer
/// wins ties. Throws OracleSizeError when (M+1)^N exceeds the limit.
OracleResult solve_exact(const Instance& instance, const OracleLimits& limits = {});

}  // namespace mecsdr

#endif  // MECSDR_ORACLE_HPP
