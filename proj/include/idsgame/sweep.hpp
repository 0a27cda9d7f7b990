#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "idsgame/config.hpp"
#include "idsgame/equilibrium.hpp"
#include "idsgame/errors.hpp"
#include "idsgame/textio.hpp"
#include "idsgame/version.hpp"

namespace idsgame {

/// One sweep cell at its solved equilibrium.
struct SweepRow {
  double rho = 0.0;
  double gamma = 0.0;
  double eta = 1.0;
  double e_star = 0.0;
  double residual = 0.0;
  bool interior_all = false;
  double avg_investment = 0.0;
  double min_investment = 0.0;
  double max_investment = 0.0;
  int sign_changes = 1;
};

/// One (gamma, eta) cell of the response-shape study.
struct Fig3Row {
  double gamma = 0.0;
  double eta = 0.0;
  double k_prime = 0.0;
  double e_star_rho_low = 0.0;
  double e_star_rho_high = 0.0;
  double relative_increase = 0.0;
  bool interior_all = false;
};

namespace detail {

/// Index-parallel map with deterministic result placement. The earliest
/// failing cell's exception is rethrown regardless of scheduling.
inline void run_parallel(std::size_t n_cells, int workers,
                         const std::function<void(std::size_t)>& body) {
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n_cells)));
  if (nw == 1) {
    for (std::size_t i = 0; i < n_cells; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> errors(n_cells);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= n_cells) return;
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < n_cells; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

inline SweepRow row_from_result(double rho, double gamma, double eta,
                                const EquilibriumResult& eq) {
  SweepRow row;
  row.rho = rho;
  row.gamma = gamma;
  row.eta = eta;
  row.e_star = eq.are;
  row.residual = eq.residual;
  row.interior_all = eq.all_interior();
  double sum = 0.0, lo = eq.investment.front(), hi = eq.investment.front();
  for (double a : eq.investment) {
    sum += a;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  row.avg_investment = sum / static_cast<double>(eq.investment.size());
  row.min_investment = lo;
  row.max_investment = hi;
  row.sign_changes = eq.diagnostics.sign_changes;
  return row;
}

}  // namespace detail

/// Solves every (gamma, rho) cell of the grid under the linear exposure
/// response. Rows come back in grid order (gamma outer, rho inner)
/// independent of the worker count.
inline std::vector<SweepRow> run_figure2_sweep(const ExperimentConfig& cfg) {
  if (cfg.theta_family != "linear")
    throw config_error("figure-2 sweep requires the linear exposure response");
  if (cfg.curve_family != "power")
    throw config_error("figure-2 sweep varies gamma of the power curve family");
  const auto pop = cfg.population();
  const auto threat = cfg.threat();
  const auto theta = cfg.theta(pop);

  const std::size_t n = cfg.gamma_grid.size() * cfg.rho_grid.size();
  std::vector<SweepRow> rows(n);
  detail::run_parallel(n, cfg.workers, [&](std::size_t i) {
    const double gamma = cfg.gamma_grid[i / cfg.rho_grid.size()];
    const double rho = cfg.rho_grid[i % cfg.rho_grid.size()];
    try {
      const GameInstance game(pop, threat, InfectionCurve::power(cfg.epsilon, gamma), theta,
                              make_rho_mixing(pop, rho));
      rows[i] = detail::row_from_result(rho, gamma, 1.0, solve_equilibrium(game));
    } catch (const solver_error& e) {
      throw solver_error("cell (gamma=" + render_number(gamma) + ", rho=" + render_number(rho) +
                         "): " + e.what());
    }
  });
  return rows;
}

/// Finds K' such that the neutral-mixing equilibrium ARE under the power
/// response K' * z^eta, at the calibration gamma, equals target_e (relative
/// tolerance 1e-8). Bisection in log K'; the ARE is increasing in K'.
inline double calibrate_eta(const ExperimentConfig& cfg, double eta, double target_e) {
  if (!(target_e > 0.0)) throw std::invalid_argument("calibrate_eta: target must be positive");
  const auto pop = cfg.population();
  const auto threat = cfg.threat();
  const auto curve = InfectionCurve::power(cfg.epsilon, cfg.calibration_gamma);
  const auto neutral = MixingVector::neutral(pop.d_max());

  const auto are_at = [&](double k_prime) {
    const GameInstance game(pop, threat, curve, ExposureResponse::power(k_prime, eta), neutral);
    return solve_equilibrium(game).are;
  };

  double lo = 1e-12, hi = 1e12;
  if (are_at(lo) > target_e || are_at(hi) < target_e)
    throw solver_error("calibrate_eta: target ARE unattainable within the K' bracket");
  for (int it = 0; it < 300; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double e = are_at(mid);
    if (std::abs(e - target_e) <= 1e-8 * target_e) return mid;
    if (e < target_e)
      lo = mid;
    else
      hi = mid;
    if (hi / lo < 1.0 + 1e-15) break;
  }
  throw solver_error("calibrate_eta: bisection did not reach the target tolerance");
}

/// ARE of the linear-response configuration at the calibration gamma under
/// neutral mixing: the anchor every eta is calibrated to match.
inline double figure3_anchor(const ExperimentConfig& cfg) {
  const auto pop = cfg.population();
  const GameInstance game(pop, cfg.threat(),
                          InfectionCurve::power(cfg.epsilon, cfg.calibration_gamma),
                          ExposureResponse::linear(cfg.theta_scale(pop)),
                          MixingVector::neutral(pop.d_max()));
  return solve_equilibrium(game).are;
}

/// For each (gamma, eta): calibrate K'(eta), solve at the low and high ends
/// of the rho grid, and report the relative ARE increase across them.
inline std::vector<Fig3Row> run_figure3_sweep(const ExperimentConfig& cfg) {
  if (cfg.curve_family != "power")
    throw config_error("figure-3 sweep varies gamma of the power curve family");
  const auto pop = cfg.population();
  const auto threat = cfg.threat();
  const double rho_low = cfg.rho_grid.front();
  const double rho_high = cfg.rho_grid.back();
  const double anchor = figure3_anchor(cfg);

  std::vector<double> k_prime(cfg.eta_grid.size());
  detail::run_parallel(cfg.eta_grid.size(), cfg.workers, [&](std::size_t j) {
    k_prime[j] = calibrate_eta(cfg, cfg.eta_grid[j], anchor);
  });

  const std::size_t n = cfg.gamma_grid.size() * cfg.eta_grid.size();
  std::vector<Fig3Row> rows(n);
  detail::run_parallel(n, cfg.workers, [&](std::size_t i) {
    const double gamma = cfg.gamma_grid[i / cfg.eta_grid.size()];
    const std::size_t j = i % cfg.eta_grid.size();
    const double eta = cfg.eta_grid[j];
    const auto curve = InfectionCurve::power(cfg.epsilon, gamma);
    const auto theta = ExposureResponse::power(k_prime[j], eta);
    try {
      const GameInstance low(pop, threat, curve, theta, make_rho_mixing(pop, rho_low));
      const GameInstance high(pop, threat, curve, theta, make_rho_mixing(pop, rho_high));
      const auto eq_low = solve_equilibrium(low);
      const auto eq_high = solve_equilibrium(high);
      Fig3Row row;
      row.gamma = gamma;
      row.eta = eta;
      row.k_prime = k_prime[j];
      row.e_star_rho_low = eq_low.are;
      row.e_star_rho_high = eq_high.are;
      row.relative_increase = (eq_high.are - eq_low.are) / eq_low.are;
      row.interior_all = eq_low.all_interior() && eq_high.all_interior();
      rows[i] = row;
    } catch (const solver_error& e) {
      throw solver_error("cell (gamma=" + render_number(gamma) + ", eta=" + render_number(eta) +
                         "): " + e.what());
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------
// output rendering

inline std::string figure2_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("figure2_csv: empty table");
  std::string out =
      "rho,gamma,eta,e_star,residual,interior_all,avg_investment,min_investment,max_investment\n";
  for (const auto& r : rows) {
    out += render_number(r.rho) + ',' + render_number(r.gamma) + ',' + render_number(r.eta) +
           ',' + render_number(r.e_star) + ',' + render_number(r.residual) + ',' +
           render_bool(r.interior_all) + ',' + render_number(r.avg_investment) + ',' +
           render_number(r.min_investment) + ',' + render_number(r.max_investment) + '\n';
  }
  return out;
}

inline std::string figure3_csv(const std::vector<Fig3Row>& rows) {
  if (rows.empty()) throw std::invalid_argument("figure3_csv: empty table");
  std::string out =
      "gamma,eta,k_prime,e_star_rho_low,e_star_rho_high,relative_increase,interior_all\n";
  for (const auto& r : rows) {
    out += render_number(r.gamma) + ',' + render_number(r.eta) + ',' + render_number(r.k_prime) +
           ',' + render_number(r.e_star_rho_low) + ',' + render_number(r.e_star_rho_high) + ',' +
           render_number(r.relative_increase) + ',' + render_bool(r.interior_all) + '\n';
  }
  return out;
}

inline std::vector<SweepRow> parse_figure2_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw config_error("figure2 csv: empty file");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw config_error("figure2 csv: bad row '" + line + "'");
    SweepRow r;
    r.rho = parse_number(fields[0]);
    r.gamma = parse_number(fields[1]);
    r.eta = parse_number(fields[2]);
    r.e_star = parse_number(fields[3]);
    r.residual = parse_number(fields[4]);
    r.interior_all = parse_bool(fields[5]);
    r.avg_investment = parse_number(fields[6]);
    r.min_investment = parse_number(fields[7]);
    r.max_investment = parse_number(fields[8]);
    rows.push_back(r);
  }
  return rows;
}

/// Effective configuration as a re-runnable document. Feeding this back in
/// reproduces the same outputs byte for byte.
inline std::string render_manifest(const ExperimentConfig& cfg, const std::string& command) {
  std::string out;
  out += "[meta]\n";
  out += "tool = idsgame\n";
  out += std::string("version = ") + kVersion + "\n";
  out += "command = " + command + "\n";
  out += "seed = " + render_number(static_cast<double>(cfg.seed)) + "\n";
  out += "\n[population]\n";
  if (cfg.explicit_sizes) {
    out += "sizes = ";
    for (std::size_t i = 0; i < cfg.explicit_sizes->size(); ++i)
      out += (i ? "," : "") + render_number((*cfg.explicit_sizes)[i]);
    out += "\n";
  } else {
    out += "d_max = " + render_number(cfg.d_max) + "\n";
    out += "exponent = " + render_number(cfg.exponent) + "\n";
  }
  out += "\n[threat]\n";
  out += "tau_a = " + render_number(cfg.tau_a) + "\n";
  out += "beta_ia = " + render_number(cfg.beta_ia) + "\n";
  out += "loss = " + render_number(cfg.loss) + "\n";
  out += "i_min = " + render_number(cfg.i_min) + "\n";
  out += "i_max = " + render_number(cfg.i_max) + "\n";
  out += "\n[curve]\n";
  out += "family = " + cfg.curve_family + "\n";
  if (cfg.curve_family == "power") {
    out += "epsilon = " + render_number(cfg.epsilon) + "\n";
    out += "gamma = " + render_number(cfg.gamma) + "\n";
  } else if (cfg.curve_family == "exponential") {
    out += "xi = " + render_number(cfg.xi) + "\n";
  } else {
    out += "knot_invest = ";
    for (std::size_t i = 0; i < cfg.knot_invest.size(); ++i)
      out += (i ? "," : "") + render_number(cfg.knot_invest[i]);
    out += "\nknot_prob = ";
    for (std::size_t i = 0; i < cfg.knot_prob.size(); ++i)
      out += (i ? "," : "") + render_number(cfg.knot_prob[i]);
    out += "\n";
  }
  out += "\n[theta]\n";
  out += "family = " + cfg.theta_family + "\n";
  if (cfg.theta_k) out += "k = " + render_number(*cfg.theta_k) + "\n";
  if (cfg.theta_k_times_avg_degree)
    out += "k_times_avg_degree = " + render_number(*cfg.theta_k_times_avg_degree) + "\n";
  if (cfg.theta_family == "power") out += "eta = " + render_number(cfg.theta_eta) + "\n";
  out += "\n[mixing]\n";
  out += "rho = " + render_number(cfg.rho) + "\n";
  out += "\n[sweep]\n";
  out += "rho_grid = ";
  for (std::size_t i = 0; i < cfg.rho_grid.size(); ++i)
    out += (i ? "," : "") + render_number(cfg.rho_grid[i]);
  out += "\ngamma_grid = ";
  for (std::size_t i = 0; i < cfg.gamma_grid.size(); ++i)
    out += (i ? "," : "") + render_number(cfg.gamma_grid[i]);
  out += "\neta_grid = ";
  for (std::size_t i = 0; i < cfg.eta_grid.size(); ++i)
    out += (i ? "," : "") + render_number(cfg.eta_grid[i]);
  out += "\ncalibration_gamma = " + render_number(cfg.calibration_gamma) + "\n";
  out += "workers = " + render_number(cfg.workers) + "\n";
  return out;
}

/// Minimal SVG line chart: one polyline of e_star against rho per gamma.
inline std::string figure2_svg(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("figure2_svg: empty table");
  constexpr int W = 640, H = 420, ML = 60, MR = 20, MT = 20, MB = 40;
  double xmin = rows[0].rho, xmax = rows[0].rho, ymin = rows[0].e_star, ymax = rows[0].e_star;
  std::vector<double> gammas;
  for (const auto& r : rows) {
    xmin = std::min(xmin, r.rho);
    xmax = std::max(xmax, r.rho);
    ymin = std::min(ymin, r.e_star);
    ymax = std::max(ymax, r.e_star);
    if (std::find(gammas.begin(), gammas.end(), r.gamma) == gammas.end())
      gammas.push_back(r.gamma);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
  const auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(W) +
                    "' height='" + std::to_string(H) + "'>\n";
  svg += "<rect width='100%' height='100%' fill='white'/>\n";
  svg += "<line x1='" + std::to_string(ML) + "' y1='" + std::to_string(H - MB) + "' x2='" +
         std::to_string(W - MR) + "' y2='" + std::to_string(H - MB) + "' stroke='black'/>\n";
  svg += "<line x1='" + std::to_string(ML) + "' y1='" + std::to_string(MT) + "' x2='" +
         std::to_string(ML) + "' y2='" + std::to_string(H - MB) + "' stroke='black'/>\n";
  svg += "<text x='" + std::to_string(W / 2) + "' y='" + std::to_string(H - 8) +
         "' font-size='13'>rho</text>\n";
  svg += "<text x='12' y='" + std::to_string(H / 2) +
         "' font-size='13' transform='rotate(-90 12 " + std::to_string(H / 2) +
         ")'>equilibrium ARE</text>\n";
  int ci = 0;
  for (double gamma : gammas) {
    std::string points;
    for (const auto& r : rows)
      if (r.gamma == gamma)
        points += render_number(px(r.rho)) + "," + render_number(py(r.e_star)) + " ";
    svg += "<polyline fill='none' stroke='" + std::string(kColors[ci % 10]) +
           "' stroke-width='1.5' points='" + points + "'/>\n";
    svg += "<text x='" + std::to_string(W - MR - 90) + "' y='" + std::to_string(MT + 16 * (ci + 1)) +
           "' font-size='12' fill='" + kColors[ci % 10] + "'>gamma = " + render_number(gamma) +
           "</text>\n";
    ++ci;
  }
  svg += "</svg>\n";
  return svg;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw config_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace idsgame
