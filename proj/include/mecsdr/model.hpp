// System model: one mobile device (CPU 0) offloading a batch of independent
// tasks to M computing access points (CPUs 1..M), with a shared compression
// fraction applied to every offloaded input.
//
// All quantities are SI base units: bits, bits/s, cycles, cycles/s, W, J.

#ifndef MECSDR_MODEL_HPP
#define MECSDR_MODEL_HPP

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mecsdr {

/// One computation job.
struct Task {
  double alpha = 0.0;  ///< input size, bits
  double beta = 0.0;   ///< output size, bits
  double omega = 0.0;  ///< required CPU cycles
};

/// Mobile device parameters.
struct Device {
  double r0 = 0.0;      ///< local CPU rate, cycles/s
  double p_comp = 0.0;  ///< computation power, W
  double p_tx = 0.0;    ///< transmit power, W
  double p_rx = 0.0;    ///< receive power, W
  double jc = 0.0;      ///< compression work, cycles/bit
  double ec = 0.0;      ///< energy per compression cycle, J/cycle

  /// Energy to compress one bit, J/bit.
  double p_compr() const { return jc * ec; }
};

/// Computing access point.
struct Cap {
  double r = 0.0;     ///< service rate, cycles/s
  double c_ul = 0.0;  ///< uplink rate, bits/s
  double c_dl = 0.0;  ///< downlink rate, bits/s
};

struct Instance {
  Device device;
  std::vector<Cap> caps;
  std::vector<Task> tasks;
  double lambda_t = 0.5;
  double lambda_e = 0.5;

  std::size_t num_tasks() const { return tasks.size(); }
  std::size_t num_caps() const { return caps.size(); }
  /// Number of CPUs including the local one.
  std::size_t num_cpus() const { return caps.size() + 1; }

  /// Throws InvalidInstance naming the first offending field.
  void validate() const;
};

/// Which CPU runs each task; CPU 0 is the device itself.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::size_t> cpu_of) : cpu_of_(std::move(cpu_of)) {}

  static Assignment all_local(std::size_t num_tasks) {
    return Assignment(std::vector<std::size_t>(num_tasks, 0));
  }

  /// Builds from a binary N x (M+1) matrix given row-major; every row must be one-hot.
  static Assignment from_matrix(const std::vector<std::vector<int>>& x);

  std::size_t num_tasks() const { return cpu_of_.size(); }
  std::size_t cpu_of(std::size_t task) const { return cpu_of_.at(task); }
  const std::vector<std::size_t>& cpus() const { return cpu_of_; }

  /// x_ik as 0/1.
  int x(std::size_t task, std::size_t cpu) const { return cpu_of_.at(task) == cpu ? 1 : 0; }

  std::vector<std::vector<int>> to_matrix(std::size_t num_cpus) const;

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<std::size_t> cpu_of_;
};

struct Decision {
  Assignment assignment;
  double gamma = 0.0;  ///< compressed fraction of each offloaded input, in [0, 1]
};

struct EnergyBreakdown {
  double e_comp = 0.0;
  double e_compr = 0.0;
  double e_tr = 0.0;

  double total() const { return e_comp + e_compr + e_tr; }
};

struct CostBreakdown {
  std::vector<double> per_cpu_latency;  ///< T_k for k = 0..M, seconds
  double latency = 0.0;                 ///< max_k T_k
  double e_comp = 0.0;
  double e_compr = 0.0;
  double e_tr = 0.0;
  double energy = 0.0;
  double psi = 0.0;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDecision : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidDecision when the assignment does not match the instance
/// shape or gamma lies outside [0, 1].
void validate_decision(const Instance& instance, const Decision& decision);

/// Latency contribution G_ik(gamma) of task i on CPU k. For k = 0 this is
/// omega_i / r0 regardless of gamma. Throws std::out_of_range on bad indices.
double g_coeff(const Instance& instance, std::size_t task, std::size_t cpu, double gamma);

/// Uplink time alpha_i / C_k^UL for an offloading CPU k >= 1.
double uplink_time(const Instance& instance, std::size_t task, std::size_t cpu);
/// Downlink time beta_i / C_k^DL for an offloading CPU k >= 1.
double downlink_time(const Instance& instance, std::size_t task, std::size_t cpu);

/// Per-CPU batch latency T_k = sum of G_ik over tasks placed on k.
std::vector<double> batch_latency(const Instance& instance, const Decision& decision);

EnergyBreakdown energy(const Instance& instance, const Decision& decision);

/// Weighted latency/energy cost psi = lambda_t * max_k T_k + lambda_e * energy.
CostBreakdown objective(const Instance& instance, const Decision& decision);

}  // namespace mecsdr

#endif  // MECSDR_MODEL_HPP
