// Homogenized semidefinite relaxation of the offloading QCQP and a small
// primal-dual interior-point solver for block-diagonal SDPs.
//
// Lifting Z = [y; 1][y' 1] turns every quadratic form in y into a trace
// against a constant symmetric matrix of order Q+3. Dropping rank(Z) = 1
// leaves a convex SDP whose optimum is a lower bound for the binary problem.

#ifndef MECSDR_SDP_HPP
#define MECSDR_SDP_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mecsdr/linalg.hpp"
#include "mecsdr/qcqp.hpp"

namespace mecsdr {

enum class Sense { kEqual, kLessEqual };

/// Tr(matrix * Z) (= or <=) rhs.
struct TraceConstraint {
  SymMatrix matrix;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
  std::string label;
};

struct HomogenizedProblem {
  YLayout layout;
  SymMatrix b0;                ///< objective: Tr(B0 Z) = y'A6 y + b0'y
  std::vector<SymMatrix> h;    ///< Tr(H_h Z) <= 0, rows of A3
  std::vector<SymMatrix> j;    ///< Tr(J_j Z) <= 0, rows of A4
  std::vector<SymMatrix> g;    ///< Tr(G_p Z) = 1, rows of A5
  std::vector<SymMatrix> k_eq; ///< Tr(K_q Z) = 0, q < Q
  SymMatrix k_ineq;            ///< Tr(K Z) <= 0 for the gamma slot
  SymMatrix corner;            ///< Tr(corner Z) = z_hom,hom = 1
  /// Upper bound on the optimal latency variable: sum_i max_k max(G_ik(0), G_ik(1)).
  double latency_bound = 0.0;
  /// Constraints beyond the relaxation proper (bounded latency when
  /// lambda_t = 0, pinned gamma for the no-compression scheme).
  std::vector<TraceConstraint> extra;
};

HomogenizedProblem homogenize(const QcqpForm& form);

/// Z_y = [y; 1][y' 1].
SymMatrix lift(const Eigen::VectorXd& y);

/// Adds Tr(E Z) = 0 with E selecting the (gamma, homogeneous) entry, i.e. gamma = 0.
void pin_gamma_zero(HomogenizedProblem& problem);

/// One nonzero of a symmetric block-diagonal matrix: entry (row, col) and its
/// mirror (col, row) of block `block` both equal `value`. Stored with row >= col.
struct SparseEntry {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

using SparseBlockMatrix = std::vector<SparseEntry>;

/// min <C, X> s.t. <A_i, X> = b_i, X = diag(X_0, X_1, ...) PSD.
struct SdpProblem {
  std::vector<std::size_t> block_sizes;
  SparseBlockMatrix cost;
  std::vector<SparseBlockMatrix> constraints;
  std::vector<double> rhs;
  std::vector<std::string> labels;
  /// Block 0 is stored as Xhat = D^-1 Z D^-1 with D = diag(dense_scaling);
  /// empty means D = I.
  std::vector<double> dense_scaling;

  std::size_t num_constraints() const { return constraints.size(); }
  std::size_t num_slacks() const { return block_sizes.empty() ? 0 : block_sizes.size() - 1; }
};

struct StandardFormOptions {
  /// Adds the valid bound z_tt <= latency_bound^2 with its own slack. Without
  /// it no dual slack can be strictly positive in the t diagonal entry.
  bool bound_latency_slot = true;
  /// Stores t / latency_bound instead of t inside the solver.
  bool scale_latency_slot = true;
};

/// Inequalities receive one nonnegative scalar slack block each; equalities
/// pass through. Constraint order: H, J, G, K_eq, K_ineq, corner, extra, bound.
SdpProblem to_standard_form(const HomogenizedProblem& problem, const StandardFormOptions& options = {});

/// Plain-text dump, one record per line, 0-based indices:
///   mecsdr-sdp 1
///   blocks <count> <size_0> <size_1> ...
///   scaling <count> <d_0> ... (count 0 when unscaled)
///   constraints <m>
///   cost <nnz> {<block> <row> <col> <value>}*
///   con <rhs> <label> <nnz> {<block> <row> <col> <value>}*      (m lines)
/// Values use shortest round-trip decimal form.
void write_standard_form(std::ostream& out, const SdpProblem& problem);
SdpProblem read_standard_form(std::istream& in);

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 100;
  double step_fraction = 0.98;
  int stall_iterations = 20;
};

enum class SdpStatus { kOptimal, kMaxIter, kInfeasible, kNumericalFailure };

std::string to_string(SdpStatus status);

struct SdpSolution {
  SymMatrix z;                          ///< block 0, unscaled
  std::vector<double> slacks;           ///< 1x1 blocks after block 0
  std::vector<Eigen::MatrixXd> blocks;  ///< raw solver blocks (block 0 scaled)
  Eigen::VectorXd dual;                 ///< multipliers y of the equality form
  std::vector<Eigen::MatrixXd> dual_slack;
  double objective = 0.0;
  double dual_objective = 0.0;
  SdpStatus status = SdpStatus::kNumericalFailure;
  int iterations = 0;
  double primal_residual = 0.0;  ///< ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;    ///< ||C - A'(y) - S||_F / (1 + ||C||_F)
  double gap = 0.0;              ///< |pobj - dobj| / (1 + |pobj|)
};

/// Infeasible-start primal-dual path following with the HKM direction and
/// Mehrotra predictor-corrector. Never throws for numerical trouble; the
/// status reports it and the best iterate seen is returned.
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// <A, X> for a sparse block matrix against dense blocks.
double apply(const SparseBlockMatrix& a, const std::vector<Eigen::MatrixXd>& x);

struct RankOneCheck {
  bool rank_one = false;
  double ratio = 0.0;  ///< lambda_2 / lambda_1
  double lambda1 = 0.0;
  Eigen::VectorXd v1;  ///< unit leading eigenvector
};

/// rank_one iff lambda_2 / lambda_1 <= ratio_tol (lambda_1 the largest).
RankOneCheck rank_one_check(const SymMatrix& z, double ratio_tol = 1e-6);

}  // namespace mecsdr

#endif  // MECSDR_SDP_HPP
