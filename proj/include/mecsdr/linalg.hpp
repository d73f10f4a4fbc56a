// Dense symmetric linear algebra used by the SDP solver and the sampler.

#ifndef MECSDR_LINALG_HPP
#define MECSDR_LINALG_HPP

#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace mecsdr {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real symmetric matrix. Symmetry holds by construction: the input is
/// symmetrized on entry and set() writes both triangles.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t order);
  /// Takes (a + a') / 2. Throws std::invalid_argument for non-square input.
  explicit SymMatrix(const Eigen::MatrixXd& a);

  static SymMatrix identity(std::size_t order);
  static SymMatrix outer(const Eigen::VectorXd& v);

  std::size_t order() const { return static_cast<std::size_t>(a_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  const Eigen::MatrixXd& dense() const { return a_; }
  double frobenius_norm() const { return a_.norm(); }
  /// Tr(A B) = <A, B>.
  double inner(const SymMatrix& other) const;

  SymMatrix principal_block(std::size_t first, std::size_t count) const;

 private:
  Eigen::MatrixXd a_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthonormal, column j pairs with values(j)
};

/// Throws NumericalError when the iteration does not converge or entries are not finite.
EigenDecomposition eigh(const SymMatrix& a);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to 0).
SymMatrix psd_project(const SymMatrix& a);

/// F with F F' = A for PSD A. Throws NumericalError when A has an eigenvalue
/// below -1e-10 * (1 + ||A||_F); run psd_project first in that case.
Eigen::MatrixXd factor_sqrt(const SymMatrix& a);

/// Solves A x = b for symmetric positive (semi)definite A using Cholesky,
/// falling back to LDL'. Throws NumericalError when both fail.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace mecsdr

#endif  // MECSDR_LINALG_HPP
