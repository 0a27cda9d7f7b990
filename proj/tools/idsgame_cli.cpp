// Command-line front end: solve single games, run the sweep experiments,
// demo the risk-transfer procedure, run the Monte-Carlo validation, and
// check the model assumptions on a configuration.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure,
// 3 invariant violation (including a failed assumption check).

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idsgame/equilibrium.hpp"
#include "idsgame/mixing_analysis.hpp"
#include "idsgame/network_sim.hpp"
#include "idsgame/sweep.hpp"
#include "idsgame/version.hpp"

using namespace idsgame;

namespace {

ExperimentConfig load_config(const std::string& path, int workers_flag, std::uint64_t seed_flag,
                             bool workers_set, bool seed_set) {
  auto cfg = parse_experiment_config(read_text_file(path));
  if (workers_set) cfg.workers = workers_flag;
  if (seed_set) cfg.seed = seed_flag;
  return cfg;
}

GameInstance game_from_config(const ExperimentConfig& cfg) {
  auto pop = cfg.population();
  const auto theta = cfg.theta(pop);
  return GameInstance(pop, cfg.threat(), cfg.curve(), theta, make_rho_mixing(pop, cfg.rho));
}

void print_equilibrium(const GameInstance& game, const EquilibriumResult& eq) {
  std::printf("equilibrium ARE      : %s\n", render_number(eq.are).c_str());
  std::printf("residual             : %s\n", render_number(eq.residual).c_str());
  std::printf("sign changes on scan : %d\n", eq.diagnostics.sign_changes);
  std::printf("exposure ceiling     : %s\n", render_number(eq.diagnostics.e_upper).c_str());
  std::printf("%4s %12s %12s %14s %14s %9s\n", "d", "g_d", "exposure", "investment",
              "p(infection)", "interior");
  for (int d = 1; d <= game.pop.d_max(); ++d) {
    const std::size_t i = static_cast<std::size_t>(d - 1);
    std::printf("%4d %12s %12s %14s %14s %9s\n", d,
                render_number(game.mixing.at_degree(d)).c_str(),
                render_number(eq.exposure[i]).c_str(), render_number(eq.investment[i]).c_str(),
                render_number(eq.infection_prob[i]).c_str(), eq.interior[i] ? "yes" : "no");
  }
}

int run_solve(const ExperimentConfig& cfg) {
  const auto game = game_from_config(cfg);
  const auto eq = solve_equilibrium(game);
  print_equilibrium(game, eq);
  return 0;
}

int run_fig2(const ExperimentConfig& cfg, const std::string& outdir, bool svg) {
  const auto rows = run_figure2_sweep(cfg);
  for (const auto& r : rows)
    if (r.sign_changes != 1)
      throw invariant_violation("cell (gamma=" + render_number(r.gamma) + ", rho=" +
                                render_number(r.rho) + ") saw multiple residual sign changes");
  write_text_file(outdir + "/fig2.csv", figure2_csv(rows));
  write_text_file(outdir + "/fig2.manifest", render_manifest(cfg, "sweep-fig2"));
  if (svg) write_text_file(outdir + "/fig2.svg", figure2_svg(rows));
  int non_interior = 0;
  for (const auto& r : rows)
    if (!r.interior_all) ++non_interior;
  std::printf("wrote %zu rows to %s/fig2.csv (%d cells with boundary investments)\n", rows.size(),
              outdir.c_str(), non_interior);
  return 0;
}

int run_fig3(const ExperimentConfig& cfg, const std::string& outdir) {
  const auto rows = run_figure3_sweep(cfg);
  write_text_file(outdir + "/fig3.csv", figure3_csv(rows));
  write_text_file(outdir + "/fig3.manifest", render_manifest(cfg, "sweep-fig3"));
  std::printf("wrote %zu rows to %s/fig3.csv\n", rows.size(), outdir.c_str());
  return 0;
}

int run_transfer_demo(std::vector<double> w, std::vector<double> g_from_raw,
                      std::vector<double> g_to_raw) {
  // population realizing the requested edge weights: sizes proportional to w_d / d
  std::vector<double> sizes(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sizes[i] = w[i] / static_cast<double>(i + 1);
  const auto pop = PopulationProfile::from_sizes(sizes);
  const auto g_from = MixingVector::renormalized(pop, g_from_raw);
  const auto g_to = MixingVector::renormalized(pop, g_to_raw);

  const auto steps = transfer_sequence(pop, g_from, g_to);
  std::printf("transfer in %zu steps:\n", steps.size());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    std::printf("  step %zu: raise g_%d by %s, lower g_%d by %s -> (", s + 1, steps[s].d1,
                render_number(steps[s].delta_d1).c_str(), steps[s].d2,
                render_number(steps[s].delta_d2).c_str());
    for (std::size_t i = 0; i < steps[s].g_after.size(); ++i)
      std::printf("%s%s", i ? ", " : "", render_number(steps[s].g_after[i]).c_str());
    std::printf(")\n");
  }

  // demo game: moderate threat, unit-scale linear response
  const ThreatModel threat(0.7, 1.0, 10.0, 1e-3, 1e3);
  const auto curve = InfectionCurve::power(0.1, 1.0);
  const auto theta = ExposureResponse::linear(30.0);
  const auto trace = are_along_transfer(pop, threat, curve, theta, g_from, steps);
  std::printf("equilibrium ARE along the path:");
  for (double e : trace) std::printf(" %s", render_number(e).c_str());
  std::printf("\n");
  return 0;
}

int run_simulate(const ExperimentConfig& cfg, int n, int reps, bool resample) {
  const auto game = game_from_config(cfg);
  const auto eq = solve_equilibrium(game);
  const StrategyProfile profile{eq.investment};
  const double mu = expected_first_hop_attacks(game.pop, game.threat, game.curve, profile);
  SimOutcome out;
  if (resample) {
    out = simulate_first_hop_resampled(game.pop, game.threat, game.curve, profile, n, reps,
                                       cfg.seed);
  } else {
    const auto net = sample_network(game.pop, n, cfg.seed);
    out = simulate_first_hop(net, game.threat, game.curve, profile, reps, cfg.seed + 1);
  }
  std::printf("agents: %d, replications: %d, seed: %llu%s\n", n, reps,
              static_cast<unsigned long long>(cfg.seed),
              resample ? ", fresh network per replication" : "");
  std::printf("first-hop attacks per agent: %s +- %s (SE)\n",
              render_number(out.first_hop_attacks_per_agent).c_str(),
              render_number(out.standard_error).c_str());
  std::printf("analytic expectation       : %s\n", render_number(mu).c_str());
  if (out.standard_error > 0.0)
    std::printf("deviation                  : %s standard errors\n",
                render_number(std::abs(out.first_hop_attacks_per_agent - mu) /
                              out.standard_error)
                    .c_str());
  return 0;
}

int run_check_assumptions(const ExperimentConfig& cfg, int grid) {
  const auto pop = cfg.population();
  const auto threat = cfg.threat();
  const auto curve = cfg.curve();  // construction already enforces curve shape
  std::printf("infection curve: shape constraints hold (decreasing, convex, in [0,1])\n");
  const BestResponseCurve brc(threat, curve);
  if (brc.degenerate()) {
    std::printf("curve is flat on the investment interval; no saturation band to check\n");
    return 3;
  }
  const auto& thr = brc.thresholds();
  std::printf("saturation thresholds: r_min = %s, r_max = %s\n",
              render_number(thr.r_min).c_str(), render_number(thr.r_max).c_str());
  const auto report = check_assumption4(brc, grid);
  if (report.passed) {
    std::printf("r * d/dr p*(r) strictly increasing across %d grid points: OK\n", grid);
    const auto mix = make_rho_mixing(pop, cfg.rho);
    std::printf("mixing vector admissible (gap %s)\n",
                render_number(mix.admissibility_gap(pop)).c_str());
    return 0;
  }
  const auto& v = *report.first_violation;
  std::printf("VIOLATION: r * d/dr p*(r) decreases between r = %s (%s) and r = %s (%s)\n",
              render_number(v.r_lo).c_str(), render_number(v.value_lo).c_str(),
              render_number(v.r_hi).c_str(), render_number(v.value_hi).c_str());
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interdependent-security population game solver"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_dir = ".";
  int workers = 1;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--output-dir", output_dir, "directory for emitted files");
  auto* workers_opt = app.add_option("--workers", workers, "parallel worker count");
  auto* seed_opt = app.add_option("--seed", seed, "random seed for simulations");

  auto* solve_cmd = app.add_subcommand("solve", "solve one game and print the equilibrium");
  auto* fig2_cmd = app.add_subcommand("sweep-fig2", "equilibrium ARE over the (gamma, rho) grid");
  bool svg = false;
  fig2_cmd->add_flag("--svg", svg, "also write a line chart");
  auto* fig3_cmd =
      app.add_subcommand("sweep-fig3", "relative ARE increase over the (gamma, eta) grid");
  auto* transfer_cmd =
      app.add_subcommand("transfer-demo", "walk the risk-transfer construction between mixings");
  std::vector<double> tw = {0.6, 0.3, 0.1};
  std::vector<double> tfrom = {1.02, 1.0, 0.88};
  std::vector<double> tto = {0.942, 1.05, 1.2};
  transfer_cmd->add_option("--w", tw, "edge weights per degree");
  transfer_cmd->add_option("--g-from", tfrom, "starting mixing vector");
  transfer_cmd->add_option("--g-to", tto, "target mixing vector (must dominate)");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo first-hop attack validation");
  int sim_n = 10000, sim_reps = 200;
  bool resample = false;
  sim_cmd->add_option("--n", sim_n, "number of agents");
  sim_cmd->add_option("--reps", sim_reps, "number of replications");
  sim_cmd->add_flag("--resample", resample, "fresh network per replication");
  auto* check_cmd =
      app.add_subcommand("check-assumptions", "validate curve shape and best-response regularity");
  int grid = 64;
  check_cmd->add_option("--grid", grid, "grid points for the regularity check");

  try {
    app.parse(argc, argv);
    const bool needs_config = !transfer_cmd->parsed();
    if (needs_config && config_path.empty())
      throw config_error("--config is required for this subcommand");
    ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = load_config(config_path, workers, seed, workers_opt->count() > 0,
                        seed_opt->count() > 0);

    if (solve_cmd->parsed()) return run_solve(cfg);
    if (fig2_cmd->parsed()) return run_fig2(cfg, output_dir, svg);
    if (fig3_cmd->parsed()) return run_fig3(cfg, output_dir);
    if (transfer_cmd->parsed()) return run_transfer_demo(tw, tfrom, tto);
    if (sim_cmd->parsed()) return run_simulate(cfg, sim_n, sim_reps, resample);
    if (check_cmd->parsed()) return run_check_assumptions(cfg, grid);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const invariant_violation& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return 3;
  } catch (const solver_error& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
