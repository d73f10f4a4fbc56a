// JSON documents for instances, decisions and experiment configs. All
// quantities are SI base units. Unknown keys are rejected.

#ifndef MECSDR_IO_HPP
#define MECSDR_IO_HPP

#include <stdexcept>
#include <string>

#include "mecsdr/harness.hpp"
#include "mecsdr/model.hpp"

namespace mecsdr {

/// Malformed or incomplete document. The message names the offending field
/// (dotted path such as "caps[1].c_ul") or file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {device:{r0,p_comp,p_tx,p_rx,jc,ec}, caps:[{r,c_ul,c_dl}], tasks:[{alpha,beta,omega}], lambda_t, lambda_e}
/// lambda_t and lambda_e default to 0.5 when absent. The result is validated.
Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& instance);

/// {cpu_of:[...], gamma, psi, latency_s, energy_j, per_cpu_latency_s:[...],
///  e_comp_j, e_compr_j, e_tr_j}. Reading uses cpu_of and gamma only.
std::string dump_decision(const Decision& decision, const CostBreakdown& cost);
Decision parse_decision(const std::string& text);

/// Keys mirror ExperimentConfig: rate_range, n_tasks (array) or n_min/n_max,
/// realizations, seed, instance{...template fields...}, rounding{samples,
/// refine_gamma, include_column_candidate, tol, max_iter}, oracle
/// ("auto"|"on"|"off"), oracle_limit, threads. Absent keys keep defaults.
ExperimentConfig parse_experiment_config(const std::string& text);

/// Reads a whole file. Throws ConfigError naming the path when unreadable.
std::string read_file(const std::string& path);
/// Throws ConfigError naming the path when the file cannot be written.
void write_file(const std::string& path, const std::string& contents);

}  // namespace mecsdr

#endif  // MECSDR_IO_HPP
