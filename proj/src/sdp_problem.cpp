#include "mecsdr/sdp.hpp"

#include "mecsdr/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mecsdr {

namespace {

// Embeds a row vector a of length Q+2 as [0, a'/2; a/2, 0].
SymMatrix embed_linear(const Eigen::RowVectorXd& a, std::size_t order) {
  SymMatrix m(order);
  const std::size_t hom = order - 1;
  for (Eigen::Index c = 0; c < a.size(); ++c) {
    if (a(c) != 0.0) m.set(static_cast<std::size_t>(c), hom, a(c) / 2.0);
  }
  return m;
}

// diag(u_q) with -u_q/2 in the homogeneous row: Tr(K Z_y) = y_q^2 - y_q.
SymMatrix embed_binary(std::size_t slot, std::size_t order) {
  SymMatrix m(order);
  m.set(slot, slot, 1.0);
  m.set(slot, order - 1, -0.5);
  return m;
}

SparseBlockMatrix to_sparse(const SymMatrix& m, const std::vector<double>& scale, std::size_t block) {
  SparseBlockMatrix out;
  for (std::size_t c = 0; c < m.order(); ++c) {
    for (std::size_t r = c; r < m.order(); ++r) {
      const double v = m(r, c);
      if (v != 0.0) out.push_back({block, r, c, v * scale[r] * scale[c]});
    }
  }
  return out;
}

}  // namespace

SymMatrix lift(const Eigen::VectorXd& y) {
  Eigen::VectorXd v(y.size() + 1);
  v << y, 1.0;
  return SymMatrix::outer(v);
}

HomogenizedProblem homogenize(const QcqpForm& form) {
  const YLayout& lay = form.layout;
  const std::size_t order = lay.lifted_order();
  const std::size_t hom = lay.homogeneous_index();

  HomogenizedProblem p;
  p.layout = lay;

  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(order));
  const auto q2 = static_cast<Eigen::Index>(lay.size());
  b0.topLeftCorner(q2, q2) = form.a6;
  b0.block(0, q2, q2, 1) = form.b0 / 2.0;
  b0.block(q2, 0, 1, q2) = form.b0.transpose() / 2.0;
  p.b0 = SymMatrix(b0);

  for (Eigen::Index h = 0; h < form.a3.rows(); ++h) p.h.push_back(embed_linear(form.a3.row(h), order));
  for (Eigen::Index j = 0; j < form.a4.rows(); ++j) p.j.push_back(embed_linear(form.a4.row(j), order));
  for (Eigen::Index r = 0; r < form.a5.rows(); ++r) p.g.push_back(embed_linear(form.a5.row(r), order));
  for (std::size_t q = 0; q < lay.q(); ++q) p.k_eq.push_back(embed_binary(q, order));
  p.k_ineq = embed_binary(lay.gamma_index(), order);
  p.corner = SymMatrix(order);
  p.corner.set(hom, hom, 1.0);

  double bound = 0.0;
  for (Eigen::Index i = 0; i < form.g0.size(); ++i) {
    double worst = form.g0(i);
    if (form.d.cols() > 0) worst = std::max({worst, form.d.row(i).maxCoeff(), form.e.row(i).maxCoeff()});
    bound += worst;
  }
  p.latency_bound = bound;

  // With lambda_t = 0 nothing in the objective pushes t down.
  if (form.b0(static_cast<Eigen::Index>(lay.t_index())) == 0.0) {
    SymMatrix m(order);
    m.set(lay.t_index(), hom, 0.5);
    p.extra.push_back({m, Sense::kLessEqual, bound, "latency_upper"});
  }
  return p;
}

void pin_gamma_zero(HomogenizedProblem& problem) {
  SymMatrix m(problem.layout.lifted_order());
  m.set(problem.layout.gamma_index(), problem.layout.homogeneous_index(), 0.5);
  problem.extra.push_back({m, Sense::kEqual, 0.0, "gamma_zero"});
}

SdpProblem to_standard_form(const HomogenizedProblem& problem, const StandardFormOptions& options) {
  const YLayout& lay = problem.layout;
  const std::size_t order = lay.lifted_order();

  std::vector<TraceConstraint> rows;
  for (std::size_t h = 0; h < problem.h.size(); ++h) {
    rows.push_back({problem.h[h], Sense::kLessEqual, 0.0, "latency_gamma0_" + std::to_string(h)});
  }
  for (std::size_t j = 0; j < problem.j.size(); ++j) {
    rows.push_back({problem.j[j], Sense::kLessEqual, 0.0, "latency_gamma1_" + std::to_string(j + 1)});
  }
  for (std::size_t p = 0; p < problem.g.size(); ++p) {
    rows.push_back({problem.g[p], Sense::kEqual, 1.0, "row_sum_" + std::to_string(p)});
  }
  for (std::size_t q = 0; q < problem.k_eq.size(); ++q) {
    rows.push_back({problem.k_eq[q], Sense::kEqual, 0.0, "binary_" + std::to_string(q)});
  }
  rows.push_back({problem.k_ineq, Sense::kLessEqual, 0.0, "gamma_range"});
  rows.push_back({problem.corner, Sense::kEqual, 1.0, "homogeneous"});
  for (const TraceConstraint& c : problem.extra) rows.push_back(c);

  const bool have_bound = problem.latency_bound > 0.0 && std::isfinite(problem.latency_bound);
  if (options.bound_latency_slot && have_bound) {
    SymMatrix m(order);
    m.set(lay.t_index(), lay.t_index(), 1.0);
    rows.push_back({m, Sense::kLessEqual, problem.latency_bound * problem.latency_bound, "latency_square_bound"});
  }

  std::vector<double> scale(order, 1.0);
  SdpProblem out;
  if (options.scale_latency_slot && have_bound) {
    scale[lay.t_index()] = problem.latency_bound;
    out.dense_scaling = scale;
  }

  out.block_sizes.push_back(order);
  out.cost = to_sparse(problem.b0, scale, 0);
  for (const TraceConstraint& c : rows) {
    SparseBlockMatrix a = to_sparse(c.matrix, scale, 0);
    if (c.sense == Sense::kLessEqual) {
      a.push_back({out.block_sizes.size(), 0, 0, 1.0});
      out.block_sizes.push_back(1);
    }
    out.constraints.push_back(std::move(a));
    out.rhs.push_back(c.rhs);
    out.labels.push_back(c.label);
  }
  return out;
}

void write_standard_form(std::ostream& out, const SdpProblem& problem) {
  auto write_entries = [&out](const SparseBlockMatrix& a) {
    out << a.size();
    for (const SparseEntry& e : a) {
      out << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << format_double(e.value);
    }
  };
  out << "mecsdr-sdp 1\n";
  out << "blocks " << problem.block_sizes.size();
  for (std::size_t s : problem.block_sizes) out << ' ' << s;
  out << "\nscaling " << problem.dense_scaling.size();
  for (double d : problem.dense_scaling) out << ' ' << format_double(d);
  out << "\nconstraints " << problem.constraints.size() << "\ncost ";
  write_entries(problem.cost);
  out << '\n';
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const std::string label = i < problem.labels.size() && !problem.labels[i].empty() ? problem.labels[i] : "c" + std::to_string(i);
    out << "con " << format_double(problem.rhs[i]) << ' ' << label << ' ';
    write_entries(problem.constraints[i]);
    out << '\n';
  }
}

SdpProblem read_standard_form(std::istream& in) {
  auto fail = [](const std::string& what) { throw std::runtime_error("standard form: " + what); };
  auto expect = [&](std::istream& s, const std::string& keyword) {
    std::string tok;
    if (!(s >> tok) || tok != keyword) fail("expected '" + keyword + "'");
  };
  auto read_size = [&](std::istream& s) {
    long long v = -1;
    if (!(s >> v) || v < 0) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
  };
  auto read_real = [&](std::istream& s) {
    std::string tok;
    if (!(s >> tok)) fail("unexpected end of input");
    try {
      return parse_double(tok);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    return 0.0;
  };

  SdpProblem p;
  expect(in, "mecsdr-sdp");
  if (read_size(in) != 1) fail("unsupported version");
  expect(in, "blocks");
  p.block_sizes.resize(read_size(in));
  for (auto& s : p.block_sizes) s = read_size(in);
  expect(in, "scaling");
  p.dense_scaling.resize(read_size(in));
  for (auto& d : p.dense_scaling) d = read_real(in);
  expect(in, "constraints");
  const std::size_t m = read_size(in);

  auto read_entries = [&](SparseBlockMatrix& a) {
    a.resize(read_size(in));
    for (SparseEntry& e : a) {
      e.block = read_size(in);
      e.row = read_size(in);
      e.col = read_size(in);
      e.value = read_real(in);
      if (e.block >= p.block_sizes.size() || e.row >= p.block_sizes[e.block] || e.col > e.row) {
        fail("entry outside its block or above the diagonal");
      }
    }
  };
  expect(in, "cost");
  read_entries(p.cost);
  for (std::size_t i = 0; i < m; ++i) {
    expect(in, "con");
    p.rhs.push_back(read_real(in));
    std::string label;
    if (!(in >> label)) fail("missing constraint label");
    p.labels.push_back(label);
    p.constraints.emplace_back();
    read_entries(p.constraints.back());
  }
  return p;
}

RankOneCheck rank_one_check(const SymMatrix& z, double ratio_tol) {
  RankOneCheck out;
  if (z.order() == 0) return out;
  const EigenDecomposition ed = eigh(z);
  const Eigen::Index n = ed.values.size();
  out.lambda1 = ed.values(n - 1);
  out.v1 = ed.vectors.col(n - 1);
  if (!(out.lambda1 > 0.0)) {
    out.ratio = 1.0;
    return out;
  }
  const double lambda2 = n > 1 ? std::max(ed.values(n - 2), 0.0) : 0.0;
  out.ratio = lambda2 / out.lambda1;
  out.rank_one = out.ratio <= ratio_tol;
  return out;
}

}  // namespace mecsdr
