// Shows the dominance ordering in action: as rho rises, the induced risk
// distribution dominates and the equilibrium ARE climbs.

#include <cstdio>

#include "idsgame/equilibrium.hpp"
#include "idsgame/mixing_analysis.hpp"

int main() {
  using namespace idsgame;

  auto pop = make_power_law_population(20, 2.0);
  const ThreatModel threat(0.7, 1.0, 10.0, 1e-3, 1e3);
  const auto curve = InfectionCurve::power(0.1, 2.0);
  const auto theta = ExposureResponse::linear(1000.0 / pop.avg_degree());

  double prev_rho = -0.3;
  auto prev = make_rho_mixing(pop, prev_rho);
  for (double rho = -0.2; rho <= 0.31; rho += 0.1) {
    const auto next = make_rho_mixing(pop, rho);
    const auto order = dominance_condition(pop, next, prev);
    const GameInstance lo(pop, threat, curve, theta, prev);
    const GameInstance hi(pop, threat, curve, theta, next);
    std::printf("rho %+.1f -> %+.1f : dominance %s%s, ARE %.4f -> %.4f\n", prev_rho, rho,
                order.holds ? "holds" : "fails", order.holds_strictly ? " strictly" : "",
                solve_equilibrium(lo).are, solve_equilibrium(hi).are);
    prev = next;
    prev_rho = rho;
  }
  return 0;
}
