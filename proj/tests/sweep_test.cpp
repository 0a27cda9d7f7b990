#include "idsgame/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "idsgame/config.hpp"

using namespace idsgame;

namespace {

ExperimentConfig small_fig2_config() {
  ExperimentConfig cfg;
  cfg.d_max = 20;
  cfg.exponent = 2.0;
  cfg.theta_k_times_avg_degree = 1000.0;
  cfg.rho_grid = {-0.3, 0.0, 0.3};
  cfg.gamma_grid = {1.0, 9.0};
  cfg.eta_grid = {1.0};
  return cfg;
}

}  // namespace

TEST(Sweep, Figure2RowsComeBackInGridOrder) {
  auto cfg = small_fig2_config();
  const auto rows = run_figure2_sweep(cfg);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_DOUBLE_EQ(rows[0].gamma, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].rho, -0.3);
  EXPECT_DOUBLE_EQ(rows[5].gamma, 9.0);
  EXPECT_DOUBLE_EQ(rows[5].rho, 0.3);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.interior_all);
    EXPECT_LE(r.residual, 1e-10 * std::max(1.0, r.e_star));
    EXPECT_EQ(r.sign_changes, 1);
    EXPECT_LE(r.min_investment, r.avg_investment);
    EXPECT_LE(r.avg_investment, r.max_investment);
  }
  // e_star strictly increases along rho within each gamma block
  EXPECT_LT(rows[0].e_star, rows[1].e_star);
  EXPECT_LT(rows[1].e_star, rows[2].e_star);
  EXPECT_LT(rows[3].e_star, rows[4].e_star);
  EXPECT_LT(rows[4].e_star, rows[5].e_star);
}

TEST(Sweep, ParallelismDoesNotChangeBytes) {
  auto cfg = small_fig2_config();
  cfg.workers = 1;
  const auto csv1 = figure2_csv(run_figure2_sweep(cfg));
  cfg.workers = 4;
  const auto csv4 = figure2_csv(run_figure2_sweep(cfg));
  EXPECT_EQ(csv1, csv4);
}

TEST(Sweep, Figure2CsvRoundTrip) {
  auto cfg = small_fig2_config();
  const auto rows = run_figure2_sweep(cfg);
  const auto csv = figure2_csv(rows);
  const auto parsed = parse_figure2_csv(csv);
  ASSERT_EQ(parsed.size(), rows.size());
  // canonical rendering is idempotent through a parse cycle
  EXPECT_EQ(figure2_csv(parsed), csv);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(parsed[i].e_star, rows[i].e_star, 1e-11 * std::max(1.0, rows[i].e_star));
    EXPECT_EQ(parsed[i].interior_all, rows[i].interior_all);
  }
  EXPECT_THROW(figure2_csv({}), std::invalid_argument);
}

TEST(Sweep, RequiresLinearThetaForFigure2) {
  auto cfg = small_fig2_config();
  cfg.theta_family = "power";
  EXPECT_THROW(run_figure2_sweep(cfg), config_error);
}

TEST(Sweep, CalibrationRoundTripsAndIsMonotone) {
  auto cfg = small_fig2_config();
  const double anchor = figure3_anchor(cfg);

  // eta = 1 must recover the linear K
  const double k1 = calibrate_eta(cfg, 1.0, anchor);
  const double k_linear = cfg.theta_scale(cfg.population());
  EXPECT_NEAR(k1, k_linear, 1e-6 * k_linear);

  // inversion round-trip at eta = 1.6: pick K'0, compute its ARE, recover K'0
  const double eta = 1.6;
  const auto pop = cfg.population();
  const GameInstance game(pop, cfg.threat(),
                          InfectionCurve::power(cfg.epsilon, cfg.calibration_gamma),
                          ExposureResponse::power(5000.0, eta), MixingVector::neutral(20));
  const double target = solve_equilibrium(game).are;
  const double recovered = calibrate_eta(cfg, eta, target);
  EXPECT_NEAR(recovered, 5000.0, 1e-5 * 5000.0);

  // a larger target needs a larger K'
  const double k_small = calibrate_eta(cfg, eta, target * 0.8);
  const double k_large = calibrate_eta(cfg, eta, target * 1.25);
  EXPECT_LT(k_small, recovered);
  EXPECT_GT(k_large, recovered);

  EXPECT_THROW(calibrate_eta(cfg, eta, -1.0), std::invalid_argument);
}

TEST(Sweep, Figure3IncreasesWithGammaAndEta) {
  auto cfg = small_fig2_config();
  cfg.gamma_grid = {1.0, 5.0, 9.0};
  cfg.eta_grid = {0.5, 1.0, 2.0};
  cfg.workers = 4;
  const auto rows = run_figure3_sweep(cfg);
  ASSERT_EQ(rows.size(), 9u);
  const auto at = [&](double gamma, double eta) {
    for (const auto& r : rows)
      if (r.gamma == gamma && r.eta == eta) return r;
    throw std::logic_error("row not found");
  };
  for (double eta : cfg.eta_grid) {
    EXPECT_LT(at(1.0, eta).relative_increase, at(5.0, eta).relative_increase);
    EXPECT_LT(at(5.0, eta).relative_increase, at(9.0, eta).relative_increase);
  }
  for (double gamma : cfg.gamma_grid) {
    EXPECT_LT(at(gamma, 0.5).relative_increase, at(gamma, 1.0).relative_increase);
    EXPECT_LT(at(gamma, 1.0).relative_increase, at(gamma, 2.0).relative_increase);
  }
  // eta = 1 reproduces the linear-response headline increases
  EXPECT_NEAR(at(1.0, 1.0).relative_increase, 0.089, 0.005);
  EXPECT_NEAR(at(9.0, 1.0).relative_increase, 0.170, 0.005);
  for (const auto& r : rows) EXPECT_TRUE(r.interior_all);
}

TEST(Sweep, ManifestReproducesCsvByteForByte) {
  auto cfg = small_fig2_config();
  const auto csv = figure2_csv(run_figure2_sweep(cfg));
  const std::string manifest = render_manifest(cfg, "sweep-fig2");
  const auto cfg2 = parse_experiment_config(manifest);
  const auto csv2 = figure2_csv(run_figure2_sweep(cfg2));
  EXPECT_EQ(csv, csv2);
}

TEST(Sweep, SvgChartContainsOneSeriesPerGamma) {
  auto cfg = small_fig2_config();
  const auto rows = run_figure2_sweep(cfg);
  const auto svg = figure2_svg(rows);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("gamma = 1"), std::string::npos);
  EXPECT_NE(svg.find("gamma = 9"), std::string::npos);
  EXPECT_EQ(svg.find("gamma = 5"), std::string::npos);
}
