#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "idsgame/errors.hpp"
#include "idsgame/exposure_response.hpp"
#include "idsgame/infection_curve.hpp"
#include "idsgame/mixing.hpp"
#include "idsgame/population.hpp"
#include "idsgame/textio.hpp"
#include "idsgame/threat.hpp"

namespace idsgame {

/// Strict sectioned key-value document:
///   [section]
///   key = value          # trailing comments allowed
/// Unknown sections or keys are errors, as are duplicate keys.
class ConfigDoc {
 public:
  static ConfigDoc parse(const std::string& text) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string stripped = strip(strip_comment(line));
      if (stripped.empty()) continue;
      if (stripped.front() == '[') {
        if (stripped.back() != ']')
          throw config_error("line " + std::to_string(lineno) + ": malformed section header");
        section = strip(stripped.substr(1, stripped.size() - 2));
        if (section.empty())
          throw config_error("line " + std::to_string(lineno) + ": empty section name");
        doc.sections_[section];  // section may legitimately stay empty
        continue;
      }
      const auto eq = stripped.find('=');
      if (eq == std::string::npos)
        throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
      if (section.empty())
        throw config_error("line " + std::to_string(lineno) + ": key outside any section");
      const std::string key = strip(stripped.substr(0, eq));
      const std::string value = strip(stripped.substr(eq + 1));
      if (key.empty() || value.empty())
        throw config_error("line " + std::to_string(lineno) + ": empty key or value");
      auto& sec = doc.sections_[section];
      if (sec.count(key) > 0)
        throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      sec[key] = value;
    }
    return doc;
  }

  bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

  bool has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
  }

  std::string get(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) throw config_error("missing section [" + section + "]");
    const auto kit = it->second.find(key);
    if (kit == it->second.end())
      throw config_error("missing key '" + key + "' in section [" + section + "]");
    return kit->second;
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
  }

  double get_number(const std::string& section, const std::string& key) const {
    try {
      return parse_number(get(section, key));
    } catch (const config_error& e) {
      throw config_error(std::string(e.what()) + " (at [" + section + "] " + key + ")");
    }
  }

  std::vector<double> get_number_list(const std::string& section, const std::string& key) const {
    const std::string raw = get(section, key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
      const std::string s = strip(item);
      if (s.empty()) throw config_error("empty list element at [" + section + "] " + key);
      out.push_back(parse_number(s));
    }
    if (out.empty()) throw config_error("empty list at [" + section + "] " + key);
    return out;
  }

  /// Rejects any section/key pair outside the given schema.
  void enforce_schema(const std::map<std::string, std::set<std::string>>& schema) const {
    for (const auto& [section, keys] : sections_) {
      const auto sit = schema.find(section);
      if (sit == schema.end()) throw config_error("unknown section [" + section + "]");
      for (const auto& [key, value] : keys)
        if (sit->second.count(key) == 0)
          throw config_error("unknown key '" + key + "' in section [" + section + "]");
    }
  }

 private:
  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
  }
  static std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Parsed experiment description: everything needed to assemble games and
/// run sweeps.
struct ExperimentConfig {
  // population
  int d_max = 20;
  double exponent = 2.0;
  std::optional<std::vector<double>> explicit_sizes;
  // threat
  double tau_a = 0.7;
  double beta_ia = 1.0;
  double loss = 10.0;
  double i_min = 1e-3;
  double i_max = 1e3;
  // curve (gamma is swept for the power family)
  std::string curve_family = "power";
  double epsilon = 0.1;
  double gamma = 1.0;
  double xi = 1.0;
  std::vector<double> knot_invest, knot_prob;
  // exposure response
  std::string theta_family = "linear";
  std::optional<double> theta_k;
  std::optional<double> theta_k_times_avg_degree;
  double theta_eta = 1.0;
  // mixing
  double rho = 0.0;
  // sweep grids (defaults: 13 rho points over [-0.3, 0.3], gamma 1..9,
  // eta {0.5, 1, 1.5, 2})
  std::vector<double> rho_grid = {-0.3, -0.25, -0.2, -0.15, -0.1, -0.05, 0.0,
                                  0.05, 0.1,   0.15, 0.2,   0.25, 0.3};
  std::vector<double> gamma_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> eta_grid = {0.5, 1.0, 1.5, 2.0};
  double calibration_gamma = 5.0;
  // execution
  int workers = 1;
  std::uint64_t seed = 1;

  PopulationProfile population() const {
    return explicit_sizes ? PopulationProfile::from_sizes(*explicit_sizes)
                          : make_power_law_population(d_max, exponent);
  }

  ThreatModel threat() const { return ThreatModel(tau_a, beta_ia, loss, i_min, i_max); }

  InfectionCurve curve_with_gamma(double g) const {
    if (curve_family == "power") return InfectionCurve::power(epsilon, g);
    if (curve_family == "exponential") return InfectionCurve::exponential(xi);
    return InfectionCurve::tabulated(knot_invest, knot_prob);
  }
  InfectionCurve curve() const { return curve_with_gamma(gamma); }

  double theta_scale(const PopulationProfile& pop) const {
    if (theta_k) return *theta_k;
    if (theta_k_times_avg_degree) return *theta_k_times_avg_degree / pop.avg_degree();
    throw config_error("theta: provide exactly one of k / k_times_avg_degree");
  }

  ExposureResponse theta(const PopulationProfile& pop) const {
    const double k = theta_scale(pop);
    return theta_family == "linear" ? ExposureResponse::linear(k)
                                    : ExposureResponse::power(k, theta_eta);
  }
};

inline ExperimentConfig parse_experiment_config(const ConfigDoc& doc) {
  static const std::map<std::string, std::set<std::string>> kSchema = {
      {"population", {"d_max", "exponent", "sizes"}},
      {"threat", {"tau_a", "beta_ia", "loss", "i_min", "i_max"}},
      {"curve", {"family", "epsilon", "gamma", "xi", "knot_invest", "knot_prob"}},
      {"theta", {"family", "k", "k_times_avg_degree", "eta"}},
      {"mixing", {"rho"}},
      {"sweep", {"rho_grid", "gamma_grid", "eta_grid", "calibration_gamma", "workers"}},
      {"meta", {"tool", "version", "command", "seed", "created"}},
  };
  doc.enforce_schema(kSchema);

  ExperimentConfig cfg;
  if (doc.has("population", "sizes")) {
    cfg.explicit_sizes = doc.get_number_list("population", "sizes");
    if (doc.has("population", "d_max") || doc.has("population", "exponent"))
      throw config_error("population: give either sizes or d_max/exponent, not both");
  } else {
    if (doc.has("population", "d_max"))
      cfg.d_max = static_cast<int>(doc.get_number("population", "d_max"));
    if (doc.has("population", "exponent")) cfg.exponent = doc.get_number("population", "exponent");
  }
  if (doc.has("threat", "tau_a")) cfg.tau_a = doc.get_number("threat", "tau_a");
  if (doc.has("threat", "beta_ia")) cfg.beta_ia = doc.get_number("threat", "beta_ia");
  if (doc.has("threat", "loss")) cfg.loss = doc.get_number("threat", "loss");
  if (doc.has("threat", "i_min")) cfg.i_min = doc.get_number("threat", "i_min");
  if (doc.has("threat", "i_max")) cfg.i_max = doc.get_number("threat", "i_max");

  if (doc.has("curve", "family")) cfg.curve_family = doc.get("curve", "family");
  if (cfg.curve_family != "power" && cfg.curve_family != "exponential" &&
      cfg.curve_family != "tabulated")
    throw config_error("curve: unknown family '" + cfg.curve_family + "'");
  if (doc.has("curve", "epsilon")) cfg.epsilon = doc.get_number("curve", "epsilon");
  if (doc.has("curve", "gamma")) cfg.gamma = doc.get_number("curve", "gamma");
  if (doc.has("curve", "xi")) cfg.xi = doc.get_number("curve", "xi");
  if (cfg.curve_family == "tabulated") {
    cfg.knot_invest = doc.get_number_list("curve", "knot_invest");
    cfg.knot_prob = doc.get_number_list("curve", "knot_prob");
  }

  if (doc.has("theta", "family")) cfg.theta_family = doc.get("theta", "family");
  if (cfg.theta_family != "linear" && cfg.theta_family != "power")
    throw config_error("theta: unknown family '" + cfg.theta_family + "'");
  if (doc.has("theta", "k")) cfg.theta_k = doc.get_number("theta", "k");
  if (doc.has("theta", "k_times_avg_degree"))
    cfg.theta_k_times_avg_degree = doc.get_number("theta", "k_times_avg_degree");
  if (cfg.theta_k && cfg.theta_k_times_avg_degree)
    throw config_error("theta: provide exactly one of k / k_times_avg_degree");
  if (!cfg.theta_k && !cfg.theta_k_times_avg_degree)
    throw config_error("theta: provide exactly one of k / k_times_avg_degree");
  if (doc.has("theta", "eta")) cfg.theta_eta = doc.get_number("theta", "eta");

  if (doc.has("mixing", "rho")) cfg.rho = doc.get_number("mixing", "rho");

  if (doc.has("sweep", "rho_grid")) cfg.rho_grid = doc.get_number_list("sweep", "rho_grid");
  if (doc.has("sweep", "gamma_grid")) cfg.gamma_grid = doc.get_number_list("sweep", "gamma_grid");
  if (doc.has("sweep", "eta_grid")) cfg.eta_grid = doc.get_number_list("sweep", "eta_grid");
  if (doc.has("sweep", "calibration_gamma"))
    cfg.calibration_gamma = doc.get_number("sweep", "calibration_gamma");
  if (doc.has("sweep", "workers"))
    cfg.workers = static_cast<int>(doc.get_number("sweep", "workers"));
  if (doc.has("meta", "seed"))
    cfg.seed = static_cast<std::uint64_t>(doc.get_number("meta", "seed"));

  for (double r : cfg.rho_grid)
    if (!(r >= -2.0 && r <= 2.0)) throw config_error("sweep: rho grid outside the [-2, 2] band");
  if (cfg.workers < 1) throw config_error("sweep: workers must be >= 1");
  return cfg;
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
  return parse_experiment_config(ConfigDoc::parse(text));
}

}  // namespace idsgame
