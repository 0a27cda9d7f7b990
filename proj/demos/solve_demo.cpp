// Minimal library walkthrough: build a game, solve it, inspect the result.

#include <cstdio>

#include "idsgame/equilibrium.hpp"

int main() {
  using namespace idsgame;

  // power-law population of 20 degrees, heavy direct-attack pressure
  auto pop = make_power_law_population(20, 2.0);
  const ThreatModel threat(0.7, 1.0, 10.0, 1e-3, 1e3);
  const auto curve = InfectionCurve::power(0.1, 1.0);
  const auto theta = ExposureResponse::linear(1000.0 / pop.avg_degree());

  for (double rho : {-0.3, 0.0, 0.3}) {
    const GameInstance game(pop, threat, curve, theta, make_rho_mixing(pop, rho));
    const auto eq = solve_equilibrium(game);
    std::printf("rho = %+.2f  ARE = %8.4f  investment range [%g, %g]  interior: %s\n", rho,
                eq.are, eq.investment.front(), eq.investment.back(),
                eq.all_interior() ? "all" : "some at bounds");
  }
  return 0;
}
