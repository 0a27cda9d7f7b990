#pragma once

#include <cmath>
#include <vector>

#include "idsgame/errors.hpp"
#include "idsgame/infection_curve.hpp"

namespace idsgame {

/// Attack environment: direct- and indirect-attack probabilities, loss per
/// infection, and the admissible investment interval.
struct ThreatModel {
  double tau_a;    // probability of a direct attack, in (0, 1]
  double beta_ia;  // probability an infected agent attacks a given neighbor
  double loss;     // expected loss per infection
  double i_min;    // smallest allowed investment, >= 0
  double i_max;    // largest allowed investment, > i_min

  ThreatModel(double tau_a_, double beta_ia_, double loss_, double i_min_, double i_max_)
      : tau_a(tau_a_), beta_ia(beta_ia_), loss(loss_), i_min(i_min_), i_max(i_max_) {
    if (!(tau_a > 0.0) || tau_a > 1.0)
      throw std::invalid_argument("threat: tau_a must lie in (0,1]");
    if (!(beta_ia > 0.0) || beta_ia > 1.0)
      throw std::invalid_argument("threat: beta_ia must lie in (0,1]");
    if (!(loss > 0.0) || !std::isfinite(loss))
      throw std::invalid_argument("threat: loss must be positive and finite");
    if (!(i_min >= 0.0) || !(i_max > i_min) || !std::isfinite(i_max))
      throw std::invalid_argument("threat: need 0 <= i_min < i_max < inf");
  }

  bool contains(double a) const { return a >= i_min && a <= i_max; }
};

/// Per-degree investments, indexed by degree 1..d_max.
struct StrategyProfile {
  std::vector<double> investment;

  double at_degree(int d) const { return investment.at(static_cast<std::size_t>(d - 1)); }

  void validate(const ThreatModel& threat) const {
    for (double a : investment)
      if (!threat.contains(a))
        throw std::invalid_argument("strategy profile: investment outside allowed interval");
  }
};

/// Expected cost of a degree-d agent investing `a` while seeing
/// `exposure_per_neighbor` indirect attacks from each neighbor:
/// (tau_a + d * exposure) * loss * p(a) + a.
inline double cost_of_action(const ThreatModel& threat, const InfectionCurve& curve, int d,
                             double exposure_per_neighbor, double a) {
  if (d < 0) throw std::invalid_argument("cost_of_action: degree must be nonnegative");
  if (!(exposure_per_neighbor >= 0.0))
    throw std::invalid_argument("cost_of_action: exposure must be nonnegative");
  if (!threat.contains(a))
    throw std::invalid_argument("cost_of_action: investment outside allowed interval");
  const double attacks = threat.tau_a + static_cast<double>(d) * exposure_per_neighbor;
  return attacks * threat.loss * curve.value(a) + a;
}

}  // namespace idsgame
