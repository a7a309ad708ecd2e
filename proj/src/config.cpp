#include "mig/config.hpp"

#include <cmath>
#include <stdexcept>

#include "mig/toml.hpp"

namespace mig {

std::string DetectorRequest::to_string() const {
  switch (kind) {
    case DetectorKind::Amf: return "amf";
    case DetectorKind::Ace: return "ace";
    case DetectorKind::Mtd: return "mtd";
    case DetectorKind::Mig: return "mig:" + std::string(measure_name(measure));
    case DetectorKind::LdaMig:
      return "lda:" + std::string(measure_name(measure)) + ":" + projection_path;
  }
  throw std::logic_error("DetectorRequest::to_string: bad enum");
}

DetectorRequest parse_detector(const std::string& text) {
  DetectorRequest r;
  if (text == "amf") {
    r.kind = DetectorKind::Amf;
    return r;
  }
  if (text == "ace") {
    r.kind = DetectorKind::Ace;
    return r;
  }
  if (text == "mtd") {
    r.kind = DetectorKind::Mtd;
    return r;
  }
  const size_t c1 = text.find(':');
  const std::string head = text.substr(0, c1);
  if (head == "mig" && c1 != std::string::npos) {
    r.kind = DetectorKind::Mig;
    r.measure = parse_measure(text.substr(c1 + 1));
    return r;
  }
  if (head == "lda" && c1 != std::string::npos) {
    const size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("detector '" + text + "' is missing a projection path");
    r.kind = DetectorKind::LdaMig;
    r.measure = parse_measure(text.substr(c1 + 1, c2 - c1 - 1));
    r.projection_path = text.substr(c2 + 1);
    if (r.projection_path.empty())
      throw std::invalid_argument("detector '" + text + "' has an empty projection path");
    return r;
  }
  throw std::invalid_argument("unknown detector '" + text +
                              "' (expected amf, ace, mtd, mig:<measure> or lda:<measure>:<path>)");
}

double ExperimentConfig::resolved_q_power() const {
  return cut.q_power > 0.0 ? cut.q_power : clutter_power(clutter) / 10.0;
}

long long ExperimentConfig::resolved_cal_trials() const {
  if (cal_trials > 0) return cal_trials;
  return (long long)std::ceil(100.0 / pfa);
}

void ExperimentConfig::validate() const {
  if (clutter.n < 2) throw std::invalid_argument("config: need at least 2 pulses");
  if (!(pfa > 0.0 && pfa <= 1.0)) throw std::invalid_argument("config: pfa must lie in (0, 1]");
  if (trials < 1) throw std::invalid_argument("config: trials must be positive");
  if (threads < 1) throw std::invalid_argument("config: threads must be positive");
  if (k_secondary < 1) throw std::invalid_argument("config: k_secondary must be positive");
  if (interference.count < 0 || interference.count > k_secondary)
    throw std::invalid_argument("config: interference count must lie in [0, k_secondary]");
  if (training.per_class < 2) throw std::invalid_argument("config: training.per_class too small");
  for (int m : training.target_dims)
    if (m < 1 || m > clutter.n)
      throw std::invalid_argument("config: training target dimension out of range");
  if (robustness.k < 1 || robustness.trials < 1)
    throw std::invalid_argument("config: robustness sizes must be positive");
  for (int l : robustness.l_values)
    if (l < 0) throw std::invalid_argument("config: negative robustness outlier count");
  if (discriminate.per_class < 1)
    throw std::invalid_argument("config: discriminate.per_class must be positive");
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.detectors = {parse_detector("amf"), parse_detector("ace"), parse_detector("mtd"),
                 parse_detector("mig:airm"), parse_detector("mig:lem"),
                 parse_detector("mig:jbld"), parse_detector("mig:skld")};
  c.interference.count = 2;
  if (name == "desk") return c;
  if (name == "paper") {
    c.pfa = 1e-5;
    c.trials = 2000;
    c.k_secondary = 8;
    c.scr_grid_db = {6, 9, 12, 15, 18, 21, 24, 27, 30};
    c.training.per_class = 1000;
    c.training.target_dims = {6, 4, 2, 1};
    c.training.max_iter = 300;
    c.robustness.l_values = {5, 10, 15, 20, 25, 30, 35, 40};
    c.robustness.trials = 2000;
    c.discriminate.per_class = 500;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (expected desk or paper)");
}

namespace {

using toml::Table;
using toml::Value;

int as_count(const Value& v) {
  long long i = v.as_int();
  if (i < 0 || i > (1ll << 31)) throw std::runtime_error("config count out of range");
  return int(i);
}

std::vector<double> as_double_list(const Value& v) {
  std::vector<double> out;
  for (const auto& e : v.as_array()) out.push_back(e.as_double());
  return out;
}

std::vector<int> as_int_list(const Value& v) {
  std::vector<int> out;
  for (const auto& e : v.as_array()) out.push_back(as_count(e));
  return out;
}

// Walks each present key; anything unrecognized is a config error.
void apply_table(const std::string& name, const Table& t, ExperimentConfig& c) {
  auto unknown = [&](const std::string& key) {
    throw std::invalid_argument("config: unknown key '" + (name.empty() ? key : name + "." + key) +
                             "'");
  };
  if (name.empty()) {
    for (const auto& [key, v] : t) {
      if (key == "seed") c.master_seed = uint64_t(v.as_int());
      else if (key == "threads") c.threads = as_count(v);
      else if (key == "pfa") c.pfa = v.as_double();
      else if (key == "trials") c.trials = as_count(v);
      else if (key == "cal_trials") c.cal_trials = v.as_int();
      else if (key == "k_secondary") c.k_secondary = as_count(v);
      else if (key == "scr_grid_db") c.scr_grid_db = as_double_list(v);
      else if (key == "detectors") {
        c.detectors.clear();
        for (const auto& e : v.as_array()) c.detectors.push_back(parse_detector(e.as_string()));
      } else unknown(key);
    }
  } else if (name == "clutter") {
    for (const auto& [key, v] : t) {
      if (key == "pulses") c.clutter.n = as_count(v);
      else if (key == "sigma_n2") c.clutter.sigma_n2 = v.as_double();
      else if (key == "cnr_db") c.clutter.cnr_db = v.as_double();
      else if (key == "rho") c.clutter.rho = v.as_double();
      else if (key == "f_c") c.clutter.f_c = v.as_double();
      else unknown(key);
    }
  } else if (name == "interference") {
    for (const auto& [key, v] : t) {
      if (key == "count") c.interference.count = as_count(v);
      else if (key == "f_i") c.interference.f_i = v.as_double();
      else if (key == "power_db") c.interference.power_db = v.as_double();
      else unknown(key);
    }
  } else if (name == "cut") {
    for (const auto& [key, v] : t) {
      if (key == "tau") c.cut.tau = v.as_double();
      else if (key == "q_power") c.cut.q_power = v.as_double();
      else unknown(key);
    }
  } else if (name == "target") {
    for (const auto& [key, v] : t) {
      if (key == "f_d") c.target.f_d = v.as_double();
      else unknown(key);
    }
  } else if (name == "training") {
    for (const auto& [key, v] : t) {
      if (key == "per_class") c.training.per_class = as_count(v);
      else if (key == "scr_db") c.training.scr_db = v.as_double();
      else if (key == "nu_within") c.training.nu_within = as_count(v);
      else if (key == "nu_between") c.training.nu_between = as_count(v);
      else if (key == "secondary_k") c.training.secondary_k = as_count(v);
      else if (key == "target_dims") c.training.target_dims = as_int_list(v);
      else if (key == "measures") {
        c.training.measures.clear();
        for (const auto& e : v.as_array())
          c.training.measures.push_back(parse_measure(e.as_string()));
      } else if (key == "max_iter") c.training.max_iter = as_count(v);
      else if (key == "grad_tol") c.training.grad_tol = v.as_double();
      else if (key == "seed") c.training.seed = uint64_t(v.as_int());
      else unknown(key);
    }
  } else if (name == "robustness") {
    for (const auto& [key, v] : t) {
      if (key == "k") c.robustness.k = as_count(v);
      else if (key == "l_values") c.robustness.l_values = as_int_list(v);
      else if (key == "trials") c.robustness.trials = as_count(v);
      else unknown(key);
    }
  } else if (name == "discriminate") {
    for (const auto& [key, v] : t) {
      if (key == "projection") c.discriminate.projection_path = v.as_string();
      else if (key == "scr_grid_db") c.discriminate.scr_grid_db = as_double_list(v);
      else if (key == "per_class") c.discriminate.per_class = as_count(v);
      else unknown(key);
    }
  } else {
    throw std::invalid_argument("config: unknown table [" + name + "]");
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  toml::Document doc = toml::parse(text);
  for (const auto& [table, entries] : doc) apply_table(table, entries, c);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  toml::Document doc = toml::parse_file(path);
  ExperimentConfig c = base;
  for (const auto& [table, entries] : doc) apply_table(table, entries, c);
  c.validate();
  return c;
}

}  // namespace mig
