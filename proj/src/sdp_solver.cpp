#include <algorithm>
#include <cmath>
#include <limits>

#include "mecsdr/sdp.hpp"

namespace mecsdr {

namespace {

using Blocks = std::vector<Eigen::MatrixXd>;

constexpr double kInf = std::numeric_limits<double>::infinity();

Blocks scaled_identity(const std::vector<std::size_t>& sizes, double value) {
  Blocks out;
  for (std::size_t s : sizes) {
    const auto n = static_cast<Eigen::Index>(s);
    out.push_back(value * Eigen::MatrixXd::Identity(n, n));
  }
  return out;
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(inner(a, a)); }

void symmetrize(Blocks& a) {
  for (auto& b : a) b = 0.5 * (b + b.transpose()).eval();
}

void add_sparse(Blocks& out, const SparseBlockMatrix& a, double scale) {
  for (const SparseEntry& e : a) {
    const auto r = static_cast<Eigen::Index>(e.row);
    const auto c = static_cast<Eigen::Index>(e.col);
    out[e.block](r, c) += scale * e.value;
    if (r != c) out[e.block](c, r) += scale * e.value;
  }
}

Blocks adjoint(const SdpProblem& p, const Eigen::VectorXd& y, const std::vector<std::size_t>& sizes) {
  Blocks out = scaled_identity(sizes, 0.0);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    add_sparse(out, p.constraints[i], y(static_cast<Eigen::Index>(i)));
  }
  return out;
}

Eigen::VectorXd apply_all(const SdpProblem& p, const Blocks& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) out(static_cast<Eigen::Index>(i)) = apply(p.constraints[i], x);
  return out;
}

Blocks multiply(const Blocks& a, const Blocks& b) {
  Blocks out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] * b[k]);
  return out;
}

bool invert_spd(const Blocks& a, Blocks& inv) {
  inv.clear();
  for (const auto& b : a) {
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) return false;
    inv.push_back(llt.solve(Eigen::MatrixXd::Identity(b.rows(), b.cols())));
    if (!inv.back().allFinite()) return false;
  }
  return true;
}

// Largest alpha keeping x + alpha * dx positive semidefinite, blockwise.
double max_step(const Blocks& x, const Blocks& dx) {
  double alpha = kInf;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].rows() == 1) {
      if (dx[k](0, 0) < 0.0) alpha = std::min(alpha, -x[k](0, 0) / dx[k](0, 0));
      continue;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    const Eigen::MatrixXd l_inv = llt.matrixL().solve(Eigen::MatrixXd::Identity(x[k].rows(), x[k].cols()));
    Eigen::MatrixXd w = l_inv * dx[k] * l_inv.transpose();
    w = 0.5 * (w + w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return 0.0;
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

// Per-constraint entries grouped by block, for the Schur complement.
struct GroupedEntries {
  std::vector<std::vector<std::vector<SparseEntry>>> by_constraint;  // [i][block] -> entries
};

GroupedEntries group(const SdpProblem& p) {
  GroupedEntries g;
  g.by_constraint.resize(p.constraints.size());
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    g.by_constraint[i].resize(p.block_sizes.size());
    for (const SparseEntry& e : p.constraints[i]) g.by_constraint[i][e.block].push_back(e);
  }
  return g;
}

// M_ij = Tr(A_i X A_j S^-1) summed over blocks.
Eigen::MatrixXd schur_complement(const GroupedEntries& g, const Blocks& x, const Blocks& s_inv) {
  const auto m = static_cast<Eigen::Index>(g.by_constraint.size());
  Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      double sum = 0.0;
      const auto& gi = g.by_constraint[static_cast<std::size_t>(i)];
      const auto& gj = g.by_constraint[static_cast<std::size_t>(j)];
      for (std::size_t b = 0; b < gi.size(); ++b) {
        if (gi[b].empty() || gj[b].empty()) continue;
        const Eigen::MatrixXd& xb = x[b];
        const Eigen::MatrixXd& sb = s_inv[b];
        for (const SparseEntry& e : gi[b]) {
          const auto er = static_cast<Eigen::Index>(e.row);
          const auto ec = static_cast<Eigen::Index>(e.col);
          for (const SparseEntry& f : gj[b]) {
            const auto fr = static_cast<Eigen::Index>(f.row);
            const auto fc = static_cast<Eigen::Index>(f.col);
            // sum over (a, b') in sym(e), (p, q) in sym(f) of X[b', p] * Sinv[q, a]
            double t = xb(ec, fr) * sb(fc, er);
            if (fr != fc) t += xb(ec, fc) * sb(fr, er);
            if (er != ec) {
              t += xb(er, fr) * sb(fc, ec);
              if (fr != fc) t += xb(er, fc) * sb(fr, ec);
            }
            sum += e.value * f.value * t;
          }
        }
      }
      schur(i, j) = sum;
      schur(j, i) = sum;
    }
  }
  return schur;
}

struct Direction {
  Blocks dx;
  Blocks ds;
  Eigen::VectorXd dy;
};

class SchurSolver {
 public:
  bool factor(const Eigen::MatrixXd& m) {
    llt_.compute(m);
    use_llt_ = llt_.info() == Eigen::Success;
    if (use_llt_) return true;
    ldlt_.compute(m);
    return ldlt_.info() == Eigen::Success;
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return use_llt_ ? Eigen::VectorXd(llt_.solve(rhs)) : Eigen::VectorXd(ldlt_.solve(rhs));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_llt_ = true;
};

// HKM direction for the target X S = sigma*mu*I with an optional second-order
// correction: dX = R - sym(X dS S^-1), R = sigma*mu*S^-1 - X - corr.
bool hkm_direction(const SdpProblem& p, const SchurSolver& schur, const Blocks& x, const Blocks& s_inv,
                   const Eigen::VectorXd& rp, const Blocks& rd, const Blocks& r,
                   const std::vector<std::size_t>& sizes, Direction& dir) {
  Blocks x_rd_sinv = multiply(multiply(x, rd), s_inv);
  symmetrize(x_rd_sinv);
  Blocks r_sym = r;
  symmetrize(r_sym);
  const Eigen::VectorXd rhs = rp - apply_all(p, r_sym) + apply_all(p, x_rd_sinv);
  dir.dy = schur.solve(rhs);
  if (!dir.dy.allFinite()) return false;
  dir.ds = rd;
  const Blocks aty = adjoint(p, dir.dy, sizes);
  for (std::size_t k = 0; k < dir.ds.size(); ++k) dir.ds[k] -= aty[k];
  const Blocks x_ds_sinv = multiply(multiply(x, dir.ds), s_inv);
  dir.dx = r;
  for (std::size_t k = 0; k < dir.dx.size(); ++k) dir.dx[k] -= x_ds_sinv[k];
  symmetrize(dir.dx);
  for (const auto& b : dir.dx) {
    if (!b.allFinite()) return false;
  }
  return true;
}

}  // namespace

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kMaxIter: return "max_iter";
    case SdpStatus::kInfeasible: return "infeasible";
    case SdpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

double apply(const SparseBlockMatrix& a, const std::vector<Eigen::MatrixXd>& x) {
  double s = 0.0;
  for (const SparseEntry& e : a) {
    const auto r = static_cast<Eigen::Index>(e.row);
    const auto c = static_cast<Eigen::Index>(e.col);
    s += r == c ? e.value * x[e.block](r, r) : e.value * (x[e.block](r, c) + x[e.block](c, r));
  }
  return s;
}

SdpSolution solve(const SdpProblem& p, const SolverOptions& options) {
  const std::vector<std::size_t>& sizes = p.block_sizes;
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(p.rhs.data(), m);
  Blocks c = scaled_identity(sizes, 0.0);
  add_sparse(c, p.cost, 1.0);
  const GroupedEntries grouped = group(p);

  double total_order = 0.0;
  for (std::size_t s : sizes) total_order += static_cast<double>(s);

  double a_norm_max = 0.0;
  for (const auto& a : p.constraints) {
    Blocks dense = scaled_identity(sizes, 0.0);
    add_sparse(dense, a, 1.0);
    a_norm_max = std::max(a_norm_max, norm(dense));
  }
  const double b_norm = b.norm();
  const double c_norm = norm(c);
  const double tau = 1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  const double eta = 1.0 + std::max(c_norm, a_norm_max);

  Blocks x = scaled_identity(sizes, tau);
  Blocks s = scaled_identity(sizes, eta);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  SdpSolution best;
  double best_merit = kInf;
  int best_iter = 0;
  SdpStatus status = SdpStatus::kMaxIter;
  int iter = 0;

  auto record = [&](double pinf, double dinf, double gap, double pobj, double dobj, double merit) {
    best_merit = merit;
    best_iter = iter;
    best.blocks = x;
    best.dual_slack = s;
    best.dual = y;
    best.objective = pobj;
    best.dual_objective = dobj;
    best.primal_residual = pinf;
    best.dual_residual = dinf;
    best.gap = gap;
  };

  for (;; ++iter) {
    const Eigen::VectorXd rp = b - apply_all(p, x);
    Blocks rd = c;
    const Blocks aty = adjoint(p, y, sizes);
    for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= aty[k] + s[k];
    const double pobj = inner(c, x);
    const double dobj = b.dot(y);
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = norm(rd) / (1.0 + c_norm);
    const double xs = inner(x, s);
    const double gap = std::max(std::abs(pobj - dobj), std::max(xs, 0.0)) / (1.0 + std::abs(pobj));
    const double merit = std::max({pinf, dinf, gap});
    if (!std::isfinite(merit)) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    if (merit < best_merit) record(pinf, dinf, gap, pobj, dobj, merit);
    if (merit <= options.tol) {
      status = SdpStatus::kOptimal;
      break;
    }
    if (iter >= options.max_iter) {
      status = SdpStatus::kMaxIter;
      break;
    }
    if (iter - best_iter >= options.stall_iterations) {
      status = y.lpNorm<Eigen::Infinity>() > 1e10 ? SdpStatus::kInfeasible : SdpStatus::kMaxIter;
      break;
    }

    Blocks s_inv;
    if (!invert_spd(s, s_inv)) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    SchurSolver schur;
    if (!schur.factor(schur_complement(grouped, x, s_inv))) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    const double mu = xs / total_order;

    // Predictor (affine scaling).
    Blocks r = x;
    for (auto& blk : r) blk = -blk;
    Direction pred;
    if (!hkm_direction(p, schur, x, s_inv, rp, rd, r, sizes, pred)) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    const double ap_aff = std::min(1.0, max_step(x, pred.dx));
    const double ad_aff = std::min(1.0, max_step(s, pred.ds));
    Blocks x_aff = x;
    Blocks s_aff = s;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x_aff[k] += ap_aff * pred.dx[k];
      s_aff[k] += ad_aff * pred.ds[k];
    }
    const double mu_aff = inner(x_aff, s_aff) / total_order;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const Blocks corr = multiply(multiply(pred.dx, pred.ds), s_inv);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += sigma * mu * s_inv[k] - corr[k];
    Direction dir;
    if (!hkm_direction(p, schur, x, s_inv, rp, rd, r, sizes, dir)) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    const double ap = std::min(1.0, options.step_fraction * max_step(x, dir.dx));
    const double ad = std::min(1.0, options.step_fraction * max_step(s, dir.ds));
    if (!(ap > 0.0) && !(ad > 0.0)) {
      status = SdpStatus::kNumericalFailure;
      break;
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += ap * dir.dx[k];
      s[k] += ad * dir.ds[k];
    }
    y += ad * dir.dy;
    symmetrize(x);
    symmetrize(s);
  }

  best.status = (status != SdpStatus::kOptimal && best_merit <= options.tol) ? SdpStatus::kOptimal : status;
  best.iterations = iter;
  if (best.blocks.empty()) {
    best.blocks = x;
    best.dual_slack = s;
    best.dual = y;
  }
  Eigen::MatrixXd z = best.blocks.front();
  if (!p.dense_scaling.empty()) {
    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(p.dense_scaling.data(),
                                                                static_cast<Eigen::Index>(p.dense_scaling.size()));
    z = d.asDiagonal() * z * d.asDiagonal();
  }
  best.z = SymMatrix(z);
  best.slacks.clear();
  for (std::size_t k = 1; k < best.blocks.size(); ++k) {
    if (best.blocks[k].rows() == 1) best.slacks.push_back(best.blocks[k](0, 0));
  }
  return best;
}

}  // namespace mecsdr
