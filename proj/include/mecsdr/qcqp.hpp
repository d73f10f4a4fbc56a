// Vectorized quadratic form of the offloading problem.
//
// The decision vector is y = [x_0; x_1; ...; x_M; gamma; t] where x_k is the
// k-th column of the N x (M+1) allocation matrix, so x_ik sits at k*N + i.
// The quadratic objective is y'A6 y + b0'y with
// A6 = lambda_e * P^Compr * A1 - lambda_e * P^Tx * A2, subject to
//   A3 y <= 0      (latency at gamma = 0, plus the local CPU)
//   A4 y <= 0      (latency at gamma = 1)
//   A5 y  = 1      (each task placed once)
//   y_p (y_p - 1) = 0 for every x slot, gamma (gamma - 1) <= 0.

#ifndef MECSDR_QCQP_HPP
#define MECSDR_QCQP_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mecsdr/model.hpp"

namespace mecsdr {

/// Index map of y shared by every module that touches the lifted variable.
class YLayout {
 public:
  YLayout() = default;
  YLayout(std::size_t num_tasks, std::size_t num_caps) : n_(num_tasks), m_(num_caps) {}

  std::size_t num_tasks() const { return n_; }
  std::size_t num_caps() const { return m_; }
  std::size_t num_cpus() const { return m_ + 1; }

  /// Q = N*M + N, the number of allocation slots.
  std::size_t q() const { return n_ * m_ + n_; }
  std::size_t index(std::size_t task, std::size_t cpu) const {
    if (task >= n_ || cpu > m_) throw std::out_of_range("YLayout::index out of range");
    return cpu * n_ + task;
  }
  std::size_t gamma_index() const { return q(); }
  std::size_t t_index() const { return q() + 1; }
  /// Length of y.
  std::size_t size() const { return q() + 2; }
  /// Order of the homogenized matrix [y; 1][y' 1].
  std::size_t lifted_order() const { return q() + 3; }
  std::size_t homogeneous_index() const { return q() + 2; }

  bool operator==(const YLayout&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
};

struct QcqpForm {
  YLayout layout;
  Eigen::MatrixXd a1;  ///< (offloaded x, gamma) couplings alpha_i / 2
  Eigen::MatrixXd a2;  ///< (offloaded x, gamma) couplings g_ik^UL / 2
  Eigen::MatrixXd a6;  ///< lambda_e * P^Compr * a1 - lambda_e * P^Tx * a2
  Eigen::VectorXd b0;
  Eigen::MatrixXd a3;  ///< (M+1) x (Q+2)
  Eigen::MatrixXd a4;  ///< M x (Q+2)
  Eigen::MatrixXd a5;  ///< N x (Q+2)
  Eigen::MatrixXd d;   ///< N x M endpoint latencies at gamma = 0
  Eigen::MatrixXd e;   ///< N x M endpoint latencies at gamma = 1
  Eigen::VectorXd g0;  ///< local latencies omega_i / r0
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

QcqpForm build_qcqp(const Instance& instance);

/// y'A6 y + b0'y. Throws DimensionError when y has the wrong length.
double eval_objective(const QcqpForm& form, const Eigen::VectorXd& y);

struct ConstraintViolation {
  enum class Kind { kLatencyNoCompression, kLatencyFullCompression, kRowSum, kBinary, kGammaRange };
  Kind kind;
  std::size_t index;  ///< row of A3/A4/A5 or slot of y
  double value;       ///< constraint function value (residual for equalities)
};

std::string to_string(ConstraintViolation::Kind kind);

/// Lists every constraint of the QCQP violated by more than tol. Empty iff feasible.
std::vector<ConstraintViolation> check_feasible(const QcqpForm& form, const Eigen::VectorXd& y,
                                                double tol = 1e-7);

/// Packs a decision into y. When t is not given it is set to the smallest
/// value meeting the endpoint constraints.
Eigen::VectorXd encode(const QcqpForm& form, const Decision& decision);
Eigen::VectorXd encode(const YLayout& layout, const Decision& decision, double t);

/// Smallest t allowed by A3 y <= 0 and A4 y <= 0 for the x part of y.
double endpoint_latency(const QcqpForm& form, const Eigen::VectorXd& y);

}  // namespace mecsdr

#endif  // MECSDR_QCQP_HPP
