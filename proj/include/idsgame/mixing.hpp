#pragma once

#include <cmath>
#include <vector>

#include "idsgame/errors.hpp"
#include "idsgame/population.hpp"

namespace idsgame {

/// Per-degree risk-bias multipliers g with e_d = g_d * e_avg. An admissible
/// vector satisfies sum_d edge_weight(d) * g_d = 1 for its population.
///
/// Construction accepts vectors within 1e-6 of admissible and rescales them;
/// anything farther off is rejected. `renormalized` rescales unconditionally,
/// for callers holding coarsely rounded inputs.
class MixingVector {
 public:
  static MixingVector neutral(int d_max) {
    if (d_max < 1) throw std::invalid_argument("mixing: d_max must be >= 1");
    return MixingVector(std::vector<double>(static_cast<std::size_t>(d_max), 1.0));
  }

  static MixingVector admissible(const PopulationProfile& pop, std::vector<double> g) {
    const double s = weighted_sum(pop, g);
    if (std::abs(s - 1.0) > 1e-6)
      throw std::invalid_argument("mixing: vector is not admissible (|sum w*g - 1| > 1e-6)");
    if (std::abs(s - 1.0) > 1e-12)
      for (double& v : g) v /= s;
    return MixingVector(std::move(g));
  }

  static MixingVector renormalized(const PopulationProfile& pop, std::vector<double> g) {
    const double s = weighted_sum(pop, g);
    for (double& v : g) v /= s;
    return MixingVector(std::move(g));
  }

  int d_max() const { return static_cast<int>(g_.size()); }
  double at_degree(int d) const { return g_.at(static_cast<std::size_t>(d - 1)); }
  const std::vector<double>& values() const { return g_; }

  double admissibility_gap(const PopulationProfile& pop) const {
    return weighted_sum(pop, g_) - 1.0;
  }

 private:
  explicit MixingVector(std::vector<double> g) : g_(std::move(g)) {
    if (g_.empty()) throw std::invalid_argument("mixing: empty vector");
    for (double v : g_)
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("mixing: entries must be positive and finite");
  }

  static double weighted_sum(const PopulationProfile& pop, const std::vector<double>& g) {
    if (static_cast<int>(g.size()) != pop.d_max())
      throw std::invalid_argument("mixing: length must equal population d_max");
    double s = 0.0;
    for (int d = 1; d <= pop.d_max(); ++d)
      s += pop.edge_weight(d) * g[static_cast<std::size_t>(d - 1)];
    return s;
  }

  std::vector<double> g_;
};

/// Mixing family g_d proportional to d^rho, normalized to admissibility.
/// rho = 0 is the neutral graph; positive rho biases risk toward high degrees.
inline MixingVector make_rho_mixing(const PopulationProfile& pop, double rho) {
  if (!std::isfinite(rho)) throw std::invalid_argument("make_rho_mixing: rho must be finite");
  std::vector<double> g(static_cast<std::size_t>(pop.d_max()));
  for (int d = 1; d <= pop.d_max(); ++d)
    g[static_cast<std::size_t>(d - 1)] = std::pow(static_cast<double>(d), rho);
  return MixingVector::renormalized(pop, std::move(g));
}

}  // namespace idsgame
