#include "mecsdr/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace mecsdr {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "document" : path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(join(path, item.key()), "unknown key");
  }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  const std::string where = join(path, key);
  if (!j.contains(key)) fail(where, "missing");
  const json& v = j.at(key);
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? get_number(j, key, path) : fallback;
}

std::uint64_t get_count(const json& j, const std::string& key, const std::string& path) {
  const std::string where = join(path, key);
  const json& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    fail(where, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  return v.get<bool>();
}

const json& get_array(const json& j, const std::string& key, const std::string& path) {
  const std::string where = join(path, key);
  if (!j.contains(key)) fail(where, "missing");
  const json& v = j.at(key);
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

std::pair<double, double> get_range(const json& j, const std::string& key, const std::string& path) {
  const json& v = get_array(j, key, path);
  if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) fail(join(path, key), "expected [low, high]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"device", "caps", "tasks", "lambda_t", "lambda_e"});
  Instance inst;
  if (!doc.contains("device")) fail("device", "missing");
  const json& dev = doc.at("device");
  require_object(dev, "device", {"r0", "p_comp", "p_tx", "p_rx", "jc", "ec"});
  inst.device.r0 = get_number(dev, "r0", "device");
  inst.device.p_comp = get_number(dev, "p_comp", "device");
  inst.device.p_tx = get_number(dev, "p_tx", "device");
  inst.device.p_rx = get_number(dev, "p_rx", "device");
  inst.device.jc = get_number(dev, "jc", "device");
  inst.device.ec = get_number(dev, "ec", "device");

  const json& caps = get_array(doc, "caps", "");
  for (std::size_t k = 0; k < caps.size(); ++k) {
    const std::string path = "caps[" + std::to_string(k) + "]";
    require_object(caps[k], path, {"r", "c_ul", "c_dl"});
    inst.caps.push_back({get_number(caps[k], "r", path), get_number(caps[k], "c_ul", path),
                         get_number(caps[k], "c_dl", path)});
  }
  const json& tasks = get_array(doc, "tasks", "");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "tasks[" + std::to_string(i) + "]";
    require_object(tasks[i], path, {"alpha", "beta", "omega"});
    inst.tasks.push_back({get_number(tasks[i], "alpha", path), get_number(tasks[i], "beta", path),
                          get_number(tasks[i], "omega", path)});
  }
  inst.lambda_t = get_number_or(doc, "lambda_t", "", 0.5);
  inst.lambda_e = get_number_or(doc, "lambda_e", "", 0.5);
  try {
    inst.validate();
  } catch (const InvalidInstance& e) {
    throw ConfigError(e.what());
  }
  return inst;
}

std::string dump_instance(const Instance& instance) {
  json doc;
  const Device& d = instance.device;
  doc["device"] = {{"r0", d.r0}, {"p_comp", d.p_comp}, {"p_tx", d.p_tx},
                   {"p_rx", d.p_rx}, {"jc", d.jc},       {"ec", d.ec}};
  doc["caps"] = json::array();
  for (const Cap& c : instance.caps) doc["caps"].push_back({{"r", c.r}, {"c_ul", c.c_ul}, {"c_dl", c.c_dl}});
  doc["tasks"] = json::array();
  for (const Task& t : instance.tasks) {
    doc["tasks"].push_back({{"alpha", t.alpha}, {"beta", t.beta}, {"omega", t.omega}});
  }
  doc["lambda_t"] = instance.lambda_t;
  doc["lambda_e"] = instance.lambda_e;
  return doc.dump(2) + "\n";
}

std::string dump_decision(const Decision& decision, const CostBreakdown& cost) {
  json doc;
  doc["cpu_of"] = decision.assignment.cpus();
  doc["gamma"] = decision.gamma;
  doc["psi"] = cost.psi;
  doc["latency_s"] = cost.latency;
  doc["energy_j"] = cost.energy;
  doc["per_cpu_latency_s"] = cost.per_cpu_latency;
  doc["e_comp_j"] = cost.e_comp;
  doc["e_compr_j"] = cost.e_compr;
  doc["e_tr_j"] = cost.e_tr;
  return doc.dump(2) + "\n";
}

Decision parse_decision(const std::string& text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"cpu_of", "gamma", "psi", "latency_s", "energy_j", "per_cpu_latency_s", "e_comp_j",
                           "e_compr_j", "e_tr_j"});
  const json& cpus = get_array(doc, "cpu_of", "");
  std::vector<std::size_t> cpu_of;
  for (std::size_t i = 0; i < cpus.size(); ++i) {
    if (!cpus[i].is_number_unsigned()) fail("cpu_of[" + std::to_string(i) + "]", "expected a non-negative integer");
    cpu_of.push_back(cpus[i].get<std::size_t>());
  }
  return Decision{Assignment(std::move(cpu_of)), get_number(doc, "gamma", "")};
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json doc = parse_text(text);
  require_object(doc, "", {"rate_range", "n_tasks", "n_min", "n_max", "realizations", "seed", "instance", "rounding",
                           "oracle", "oracle_limit", "threads"});
  ExperimentConfig cfg;
  if (doc.contains("rate_range")) {
    if (!doc["rate_range"].is_string()) fail("rate_range", "expected \"low\", \"mid\" or \"high\"");
    try {
      cfg.rate_range = parse_rate_range(doc["rate_range"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("rate_range", e.what());
    }
  }
  if (doc.contains("n_tasks") && (doc.contains("n_min") || doc.contains("n_max"))) {
    fail("n_tasks", "give either n_tasks or n_min/n_max, not both");
  }
  if (doc.contains("n_tasks")) {
    cfg.n_tasks.clear();
    const json& arr = get_array(doc, "n_tasks", "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_unsigned()) fail("n_tasks[" + std::to_string(i) + "]", "expected a positive integer");
      cfg.n_tasks.push_back(arr[i].get<std::size_t>());
    }
  } else if (doc.contains("n_min") || doc.contains("n_max")) {
    const std::uint64_t lo = doc.contains("n_min") ? get_count(doc, "n_min", "") : 1;
    const std::uint64_t hi = doc.contains("n_max") ? get_count(doc, "n_max", "") : 10;
    if (lo > hi) fail("n_min", "must not exceed n_max");
    cfg.n_tasks.clear();
    for (std::uint64_t n = lo; n <= hi; ++n) cfg.n_tasks.push_back(n);
  }
  if (doc.contains("realizations")) cfg.realizations = get_count(doc, "realizations", "");
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed", "");
  if (doc.contains("oracle_limit")) cfg.oracle_limit = get_count(doc, "oracle_limit", "");
  if (doc.contains("threads")) cfg.threads = get_count(doc, "threads", "");
  if (doc.contains("oracle")) {
    const json& v = doc["oracle"];
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "auto") cfg.oracle = OracleMode::kAuto;
    else if (s == "on") cfg.oracle = OracleMode::kOn;
    else if (s == "off") cfg.oracle = OracleMode::kOff;
    else fail("oracle", "expected \"auto\", \"on\" or \"off\"");
  }

  if (doc.contains("instance")) {
    const json& in = doc["instance"];
    const std::string p = "instance";
    require_object(in, p, {"r0", "p_comp", "p_tx", "p_rx", "cap_rates", "alpha", "kappa", "beta_ratio", "jc_range",
                           "ec_range", "lambda_t", "lambda_e"});
    InstanceTemplate& t = cfg.instance;
    t.r0 = get_number_or(in, "r0", p, t.r0);
    t.p_comp = get_number_or(in, "p_comp", p, t.p_comp);
    t.p_tx = get_number_or(in, "p_tx", p, t.p_tx);
    t.p_rx = get_number_or(in, "p_rx", p, t.p_rx);
    t.alpha = get_number_or(in, "alpha", p, t.alpha);
    t.kappa = get_number_or(in, "kappa", p, t.kappa);
    t.beta_ratio = get_number_or(in, "beta_ratio", p, t.beta_ratio);
    t.lambda_t = get_number_or(in, "lambda_t", p, t.lambda_t);
    t.lambda_e = get_number_or(in, "lambda_e", p, t.lambda_e);
    if (in.contains("jc_range")) t.jc_range = get_range(in, "jc_range", p);
    if (in.contains("ec_range")) t.ec_range = get_range(in, "ec_range", p);
    if (in.contains("cap_rates")) {
      t.cap_rates.clear();
      const json& arr = get_array(in, "cap_rates", p);
      for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number()) fail(p + ".cap_rates[" + std::to_string(k) + "]", "expected a number");
        t.cap_rates.push_back(arr[k].get<double>());
      }
    }
  }

  if (doc.contains("rounding")) {
    const json& ro = doc["rounding"];
    const std::string p = "rounding";
    require_object(ro, p, {"samples", "refine_gamma", "include_column_candidate", "tol", "max_iter"});
    RoundingOptions& r = cfg.rounding;
    if (ro.contains("samples")) r.samples = get_count(ro, "samples", p);
    if (ro.contains("refine_gamma")) r.refine_gamma = get_bool(ro, "refine_gamma", p);
    if (ro.contains("include_column_candidate")) {
      r.include_column_candidate = get_bool(ro, "include_column_candidate", p);
    }
    r.solver.tol = get_number_or(ro, "tol", p, r.solver.tol);
    if (ro.contains("max_iter")) r.solver.max_iter = static_cast<int>(get_count(ro, "max_iter", p));
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << contents;
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace mecsdr
