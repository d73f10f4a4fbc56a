#include "mecsdr/linalg.hpp"

#include <cmath>
#include <string>

namespace mecsdr {

SymMatrix::SymMatrix(std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  a_ = Eigen::MatrixXd::Zero(n, n);
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix requires a square matrix");
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::outer(const Eigen::VectorXd& v) {
  return SymMatrix(Eigen::MatrixXd(v * v.transpose()));
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  const auto r = static_cast<Eigen::Index>(i);
  const auto c = static_cast<Eigen::Index>(j);
  a_(r, c) = value;
  a_(c, r) = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  const auto r = static_cast<Eigen::Index>(i);
  const auto c = static_cast<Eigen::Index>(j);
  a_(r, c) += value;
  if (r != c) a_(c, r) += value;
}

double SymMatrix::inner(const SymMatrix& other) const {
  if (other.order() != order()) throw std::invalid_argument("SymMatrix::inner order mismatch");
  return a_.cwiseProduct(other.a_).sum();
}

SymMatrix SymMatrix::principal_block(std::size_t first, std::size_t count) const {
  const auto f = static_cast<Eigen::Index>(first);
  const auto c = static_cast<Eigen::Index>(count);
  return SymMatrix(Eigen::MatrixXd(a_.block(f, f, c, c)));
}

EigenDecomposition eigh(const SymMatrix& a) {
  if (!a.dense().allFinite()) throw NumericalError("eigh: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigenvalue iteration did not converge (order " +
                         std::to_string(a.order()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SymMatrix psd_project(const SymMatrix& a) {
  const EigenDecomposition ed = eigh(a);
  const Eigen::VectorXd clipped = ed.values.cwiseMax(0.0);
  return SymMatrix(Eigen::MatrixXd(ed.vectors * clipped.asDiagonal() * ed.vectors.transpose()));
}

Eigen::MatrixXd factor_sqrt(const SymMatrix& a) {
  const EigenDecomposition ed = eigh(a);
  const double floor = -1e-10 * (1.0 + a.frobenius_norm());
  if (ed.values.size() > 0 && ed.values.minCoeff() < floor) {
    throw NumericalError("factor_sqrt: matrix is indefinite (min eigenvalue " +
                         std::to_string(ed.values.minCoeff()) + "); apply psd_project first");
  }
  return ed.vectors * ed.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(b);
    if (x.allFinite()) return x;
  }
  throw NumericalError("solve_spd: factorization broke down");
}

}  // namespace mecsdr
