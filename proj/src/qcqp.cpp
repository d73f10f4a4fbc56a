#include "mecsdr/qcqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mecsdr {

QcqpForm build_qcqp(const Instance& instance) {
  instance.validate();
  const std::size_t n = instance.num_tasks();
  const std::size_t m = instance.num_caps();
  const Device& dev = instance.device;

  QcqpForm f;
  f.layout = YLayout(n, m);
  const YLayout& lay = f.layout;
  const auto len = static_cast<Eigen::Index>(lay.size());
  const auto g = static_cast<Eigen::Index>(lay.gamma_index());
  const auto t = static_cast<Eigen::Index>(lay.t_index());

  f.a1 = Eigen::MatrixXd::Zero(len, len);
  f.a2 = Eigen::MatrixXd::Zero(len, len);
  f.b0 = Eigen::VectorXd::Zero(len);
  f.a3 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + 1), len);
  f.a4 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), len);
  f.a5 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), len);
  f.d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  f.e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  f.g0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  for (std::size_t i = 0; i < n; ++i) {
    const Task& task = instance.tasks[i];
    const auto ii = static_cast<Eigen::Index>(i);
    const auto local = static_cast<Eigen::Index>(lay.index(i, 0));

    f.g0(ii) = task.omega / dev.r0;
    f.b0(local) = instance.lambda_e * dev.p_comp * f.g0(ii);
    f.a3(0, local) = f.g0(ii);
    f.a5(ii, local) = 1.0;

    for (std::size_t k = 1; k <= m; ++k) {
      const Cap& cap = instance.caps[k - 1];
      const auto slot = static_cast<Eigen::Index>(lay.index(i, k));
      const auto kk = static_cast<Eigen::Index>(k - 1);
      const double g_ul = task.alpha / cap.c_ul;
      const double g_dl = task.beta / cap.c_dl;

      f.a1(slot, g) = f.a1(g, slot) = task.alpha / 2.0;
      f.a2(slot, g) = f.a2(g, slot) = g_ul / 2.0;
      f.b0(slot) = instance.lambda_e * (dev.p_tx * g_ul + dev.p_rx * g_dl);

      f.d(ii, kk) = g_ul + task.omega / cap.r + g_dl;
      f.e(ii, kk) = task.alpha * dev.jc * (1.0 / dev.r0 + 1.0 / cap.r) + task.omega / cap.r + g_dl;
      f.a3(static_cast<Eigen::Index>(k), slot) = f.d(ii, kk);
      f.a4(kk, slot) = f.e(ii, kk);
      f.a5(ii, slot) = 1.0;
    }
  }
  f.b0(g) = 0.0;
  f.b0(t) = instance.lambda_t;
  f.a3.col(t).setConstant(-1.0);
  f.a4.col(t).setConstant(-1.0);

  f.a6 = instance.lambda_e * dev.p_compr() * f.a1 - instance.lambda_e * dev.p_tx * f.a2;
  return f;
}

namespace {

void check_length(const QcqpForm& form, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != form.layout.size()) {
    throw DimensionError("y has length " + std::to_string(y.size()) + ", expected " +
                         std::to_string(form.layout.size()));
  }
}

}  // namespace

double eval_objective(const QcqpForm& form, const Eigen::VectorXd& y) {
  check_length(form, y);
  return y.dot(form.a6 * y) + form.b0.dot(y);
}

std::string to_string(ConstraintViolation::Kind kind) {
  switch (kind) {
    case ConstraintViolation::Kind::kLatencyNoCompression: return "latency_gamma0";
    case ConstraintViolation::Kind::kLatencyFullCompression: return "latency_gamma1";
    case ConstraintViolation::Kind::kRowSum: return "row_sum";
    case ConstraintViolation::Kind::kBinary: return "binary";
    case ConstraintViolation::Kind::kGammaRange: return "gamma_range";
  }
  return "unknown";
}

std::vector<ConstraintViolation> check_feasible(const QcqpForm& form, const Eigen::VectorXd& y,
                                                double tol) {
  check_length(form, y);
  using Kind = ConstraintViolation::Kind;
  std::vector<ConstraintViolation> out;

  const Eigen::VectorXd r3 = form.a3 * y;
  for (Eigen::Index h = 0; h < r3.size(); ++h) {
    if (r3(h) > tol) out.push_back({Kind::kLatencyNoCompression, static_cast<std::size_t>(h), r3(h)});
  }
  const Eigen::VectorXd r4 = form.a4 * y;
  for (Eigen::Index j = 0; j < r4.size(); ++j) {
    if (r4(j) > tol) out.push_back({Kind::kLatencyFullCompression, static_cast<std::size_t>(j), r4(j)});
  }
  const Eigen::VectorXd r5 = form.a5 * y - Eigen::VectorXd::Ones(form.a5.rows());
  for (Eigen::Index p = 0; p < r5.size(); ++p) {
    if (std::abs(r5(p)) > tol) out.push_back({Kind::kRowSum, static_cast<std::size_t>(p), r5(p)});
  }
  for (std::size_t p = 0; p < form.layout.q(); ++p) {
    const double v = y(static_cast<Eigen::Index>(p));
    const double r = v * (v - 1.0);
    if (std::abs(r) > tol) out.push_back({Kind::kBinary, p, r});
  }
  const double gam = y(static_cast<Eigen::Index>(form.layout.gamma_index()));
  const double gr = gam * (gam - 1.0);
  if (gr > tol) out.push_back({Kind::kGammaRange, form.layout.gamma_index(), gr});
  return out;
}

double endpoint_latency(const QcqpForm& form, const Eigen::VectorXd& y) {
  check_length(form, y);
  Eigen::VectorXd y0 = y;
  y0(static_cast<Eigen::Index>(form.layout.t_index())) = 0.0;
  double t = -std::numeric_limits<double>::infinity();
  if (form.a3.rows() > 0) t = std::max(t, (form.a3 * y0).maxCoeff());
  if (form.a4.rows() > 0) t = std::max(t, (form.a4 * y0).maxCoeff());
  return t;
}

Eigen::VectorXd encode(const YLayout& layout, const Decision& decision, double t) {
  if (decision.assignment.num_tasks() != layout.num_tasks()) {
    throw DimensionError("decision has " + std::to_string(decision.assignment.num_tasks()) +
                         " tasks, layout expects " + std::to_string(layout.num_tasks()));
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.size()));
  for (std::size_t i = 0; i < layout.num_tasks(); ++i) {
    y(static_cast<Eigen::Index>(layout.index(i, decision.assignment.cpu_of(i)))) = 1.0;
  }
  y(static_cast<Eigen::Index>(layout.gamma_index())) = decision.gamma;
  y(static_cast<Eigen::Index>(layout.t_index())) = t;
  return y;
}

Eigen::VectorXd encode(const QcqpForm& form, const Decision& decision) {
  Eigen::VectorXd y = encode(form.layout, decision, 0.0);
  y(static_cast<Eigen::Index>(form.layout.t_index())) = endpoint_latency(form, y);
  return y;
}

}  // namespace mecsdr
