#include "mecsdr/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mecsdr {

namespace {

// Per (task, cpu) latency and energy at the two gamma endpoints.
struct EndpointTables {
  std::size_t cpus = 0;
  std::vector<double> lat0, lat1, en0, en1;  // index i * cpus + k

  EndpointTables(const Instance& inst) : cpus(inst.num_cpus()) {
    const std::size_t n = inst.num_tasks();
    lat0.resize(n * cpus);
    lat1.resize(n * cpus);
    en0.resize(n * cpus);
    en1.resize(n * cpus);
    const Device& dev = inst.device;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < cpus; ++k) {
        const std::size_t at = i * cpus + k;
        lat0[at] = g_coeff(inst, i, k, 0.0);
        lat1[at] = g_coeff(inst, i, k, 1.0);
        if (k == 0) {
          en0[at] = en1[at] = dev.p_comp * lat0[at];
        } else {
          const double rx = dev.p_rx * downlink_time(inst, i, k);
          en0[at] = dev.p_tx * uplink_time(inst, i, k) + rx;
          en1[at] = dev.p_compr() * inst.tasks[i].alpha + rx;
        }
      }
    }
  }
};

struct AffineCost {
  std::vector<double> t0, t1;  // T_k at gamma = 0 and 1
  double e0 = 0.0, e1 = 0.0;
};

AffineCost accumulate(const EndpointTables& tab, const std::vector<std::size_t>& cpu_of) {
  AffineCost c;
  c.t0.assign(tab.cpus, 0.0);
  c.t1.assign(tab.cpus, 0.0);
  for (std::size_t i = 0; i < cpu_of.size(); ++i) {
    const std::size_t k = cpu_of[i];
    const std::size_t at = i * tab.cpus + k;
    c.t0[k] += tab.lat0[at];
    c.t1[k] += tab.lat1[at];
    c.e0 += tab.en0[at];
    c.e1 += tab.en1[at];
  }
  return c;
}

double eval_affine(const AffineCost& c, double lt, double le, double gamma) {
  double t = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.t0.size(); ++k) t = std::max(t, c.t0[k] + (c.t1[k] - c.t0[k]) * gamma);
  return lt * t + le * (c.e0 + (c.e1 - c.e0) * gamma);
}

GammaOptimum minimize_affine(const AffineCost& c, double lt, double le) {
  GammaOptimum best{0.0, eval_affine(c, lt, le, 0.0)};
  auto consider = [&](double g) {
    const double v = eval_affine(c, lt, le, g);
    if (v < best.psi) best = {g, v};
  };
  consider(1.0);
  const std::size_t cpus = c.t0.size();
  for (std::size_t j = 0; j < cpus; ++j) {
    for (std::size_t k = j + 1; k < cpus; ++k) {
      const double slope_j = c.t1[j] - c.t0[j];
      const double slope_k = c.t1[k] - c.t0[k];
      if (slope_j == slope_k) continue;
      const double g = (c.t0[j] - c.t0[k]) / (slope_k - slope_j);
      if (g > 0.0 && g < 1.0) consider(g);
    }
  }
  return best;
}

double endpoint_cost(const AffineCost& c, double lt, double le, double& gamma) {
  double t = 0.0;
  for (std::size_t k = 0; k < c.t0.size(); ++k) t = std::max({t, c.t0[k], c.t1[k]});
  gamma = c.e1 < c.e0 ? 1.0 : 0.0;
  return lt * t + le * std::min(c.e0, c.e1);
}

}  // namespace

GammaOptimum optimal_gamma_for(const Instance& instance, const Assignment& assignment) {
  validate_decision(instance, Decision{assignment, 0.0});
  const EndpointTables tab(instance);
  GammaOptimum g = minimize_affine(accumulate(tab, assignment.cpus()), instance.lambda_t, instance.lambda_e);
  g.psi = objective(instance, Decision{assignment, g.gamma}).psi;
  return g;
}

std::uint64_t assignment_count(const Instance& instance) {
  const std::uint64_t base = instance.num_cpus();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < instance.num_tasks(); ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    count *= base;
  }
  return count;
}

OracleResult solve_exact(const Instance& instance, const OracleLimits& limits) {
  instance.validate();
  const std::uint64_t total = assignment_count(instance);
  if (total > limits.max_assignments) {
    throw OracleSizeError("oracle: (M+1)^N = " +
                          (total == std::numeric_limits<std::uint64_t>::max() ? std::string("overflow")
                                                                               : std::to_string(total)) +
                          " assignments exceeds max_assignments = " + std::to_string(limits.max_assignments));
  }
  const EndpointTables tab(instance);
  const std::size_t n = instance.num_tasks();
  const std::size_t cpus = instance.num_cpus();
  const double lt = instance.lambda_t;
  const double le = instance.lambda_e;

  OracleResult out;
  out.psi_p1 = std::numeric_limits<double>::infinity();
  out.psi_p3 = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> cpu_of(n, 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    const AffineCost c = accumulate(tab, cpu_of);
    const GammaOptimum g = minimize_affine(c, lt, le);
    double gamma_p3 = 0.0;
    const double p3 = endpoint_cost(c, lt, le, gamma_p3);
    if (g.psi < out.psi_p1) {
      out.psi_p1 = g.psi;
      out.best = Decision{Assignment(cpu_of), g.gamma};
    }
    if (p3 < out.psi_p3) {
      out.psi_p3 = p3;
      out.best_p3 = Decision{Assignment(cpu_of), gamma_p3};
    }
    if (limits.keep_trace) out.trace.push_back({Assignment(cpu_of), g.gamma, g.psi, p3});
    ++out.enumerated;

    // Odometer: the last task varies fastest, giving lexicographic order.
    for (std::size_t pos = n; pos-- > 0;) {
      if (++cpu_of[pos] < cpus) break;
      cpu_of[pos] = 0;
    }
  }
  out.cost = objective(instance, out.best);
  out.psi_p1 = out.cost.psi;
  return out;
}

}  // namespace mecsdr
