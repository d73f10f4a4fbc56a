#include "mecsdr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mecsdr {

namespace {

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidInstance(field + " must be a finite positive number");
  }
}

}  // namespace

void Instance::validate() const {
  require_positive(device.r0, "device.r0");
  require_positive(device.p_comp, "device.p_comp");
  require_positive(device.p_tx, "device.p_tx");
  require_positive(device.p_rx, "device.p_rx");
  require_positive(device.jc, "device.jc");
  require_positive(device.ec, "device.ec");
  if (caps.empty()) throw InvalidInstance("caps must contain at least one access point");
  if (tasks.empty()) throw InvalidInstance("tasks must contain at least one task");
  for (std::size_t k = 0; k < caps.size(); ++k) {
    const std::string prefix = "caps[" + std::to_string(k) + "].";
    require_positive(caps[k].r, prefix + "r");
    require_positive(caps[k].c_ul, prefix + "c_ul");
    require_positive(caps[k].c_dl, prefix + "c_dl");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string prefix = "tasks[" + std::to_string(i) + "].";
    require_positive(tasks[i].alpha, prefix + "alpha");
    require_positive(tasks[i].omega, prefix + "omega");
    if (!(tasks[i].beta >= 0.0) || !std::isfinite(tasks[i].beta)) {
      throw InvalidInstance(prefix + "beta must be finite and non-negative");
    }
  }
  if (!(lambda_t >= 0.0 && lambda_t <= 1.0)) throw InvalidInstance("lambda_t must lie in [0, 1]");
  if (!(lambda_e >= 0.0 && lambda_e <= 1.0)) throw InvalidInstance("lambda_e must lie in [0, 1]");
}

Assignment Assignment::from_matrix(const std::vector<std::vector<int>>& x) {
  std::vector<std::size_t> cpu_of;
  cpu_of.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t ones = 0;
    std::size_t where = 0;
    for (std::size_t k = 0; k < x[i].size(); ++k) {
      if (x[i][k] == 1) {
        ++ones;
        where = k;
      } else if (x[i][k] != 0) {
        throw InvalidDecision("allocation row " + std::to_string(i) + " has a non-binary entry");
      }
    }
    if (ones != 1) {
      throw InvalidDecision("allocation row " + std::to_string(i) + " must sum to exactly 1");
    }
    cpu_of.push_back(where);
  }
  return Assignment(std::move(cpu_of));
}

std::vector<std::vector<int>> Assignment::to_matrix(std::size_t num_cpus) const {
  std::vector<std::vector<int>> x(cpu_of_.size(), std::vector<int>(num_cpus, 0));
  for (std::size_t i = 0; i < cpu_of_.size(); ++i) x[i].at(cpu_of_[i]) = 1;
  return x;
}

void validate_decision(const Instance& instance, const Decision& decision) {
  if (decision.assignment.num_tasks() != instance.num_tasks()) {
    throw InvalidDecision("assignment covers " + std::to_string(decision.assignment.num_tasks()) +
                          " tasks but the instance has " + std::to_string(instance.num_tasks()));
  }
  for (std::size_t i = 0; i < instance.num_tasks(); ++i) {
    if (decision.assignment.cpu_of(i) >= instance.num_cpus()) {
      throw InvalidDecision("task " + std::to_string(i) + " is assigned to CPU " +
                            std::to_string(decision.assignment.cpu_of(i)) + " which does not exist");
    }
  }
  if (!(decision.gamma >= 0.0 && decision.gamma <= 1.0)) {
    throw InvalidDecision("gamma must lie in [0, 1]");
  }
}

double uplink_time(const Instance& instance, std::size_t task, std::size_t cpu) {
  if (cpu == 0) throw std::out_of_range("uplink_time: CPU 0 is local");
  return instance.tasks.at(task).alpha / instance.caps.at(cpu - 1).c_ul;
}

double downlink_time(const Instance& instance, std::size_t task, std::size_t cpu) {
  if (cpu == 0) throw std::out_of_range("downlink_time: CPU 0 is local");
  return instance.tasks.at(task).beta / instance.caps.at(cpu - 1).c_dl;
}

double g_coeff(const Instance& instance, std::size_t task, std::size_t cpu, double gamma) {
  const Task& t = instance.tasks.at(task);
  const Device& dev = instance.device;
  if (cpu == 0) return t.omega / dev.r0;
  const Cap& cap = instance.caps.at(cpu - 1);
  const double compress = t.alpha * dev.jc * gamma / dev.r0;
  const double upload = t.alpha * (1.0 - gamma) / cap.c_ul;
  const double decompress = t.alpha * dev.jc * gamma / cap.r;
  const double compute = t.omega / cap.r;
  const double download = t.beta / cap.c_dl;
  return compress + upload + decompress + compute + download;
}

std::vector<double> batch_latency(const Instance& instance, const Decision& decision) {
  validate_decision(instance, decision);
  std::vector<double> per_cpu(instance.num_cpus(), 0.0);
  for (std::size_t i = 0; i < instance.num_tasks(); ++i) {
    const std::size_t k = decision.assignment.cpu_of(i);
    per_cpu[k] += g_coeff(instance, i, k, decision.gamma);
  }
  return per_cpu;
}

EnergyBreakdown energy(const Instance& instance, const Decision& decision) {
  validate_decision(instance, decision);
  const Device& dev = instance.device;
  EnergyBreakdown e;
  for (std::size_t i = 0; i < instance.num_tasks(); ++i) {
    const std::size_t k = decision.assignment.cpu_of(i);
    if (k == 0) {
      e.e_comp += dev.p_comp * g_coeff(instance, i, 0, decision.gamma);
      continue;
    }
    e.e_compr += dev.p_compr() * instance.tasks[i].alpha * decision.gamma;
    e.e_tr += dev.p_tx * uplink_time(instance, i, k) * (1.0 - decision.gamma) +
              dev.p_rx * downlink_time(instance, i, k);
  }
  return e;
}

CostBreakdown objective(const Instance& instance, const Decision& decision) {
  CostBreakdown cost;
  cost.per_cpu_latency = batch_latency(instance, decision);
  cost.latency = *std::max_element(cost.per_cpu_latency.begin(), cost.per_cpu_latency.end());
  const EnergyBreakdown e = energy(instance, decision);
  cost.e_comp = e.e_comp;
  cost.e_compr = e.e_compr;
  cost.e_tr = e.e_tr;
  cost.energy = e.total();
  cost.psi = instance.lambda_t * cost.latency + instance.lambda_e * cost.energy;
  return cost;
}

}  // namespace mecsdr
