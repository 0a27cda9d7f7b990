#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "idsgame/errors.hpp"

namespace idsgame {

/// Degree-partitioned population of unit total mass.
///
/// Degrees run 1..d_max densely; degrees absent from the support carry mass
/// zero. After normalization the size vector equals the degree distribution,
/// so `fraction(d)` and `size(d)` agree. `edge_weight(d)` is the probability
/// that a uniformly random edge endpoint has degree d.
class PopulationProfile {
 public:
  static PopulationProfile from_sizes(std::vector<double> sizes) {
    return PopulationProfile(std::move(sizes));
  }

  int d_max() const { return static_cast<int>(fractions_.size()); }
  double avg_degree() const { return avg_degree_; }

  /// Degree distribution entry, d in 1..d_max.
  double fraction(int d) const { return fractions_[check_degree(d) - 1]; }
  /// Population mass of degree d; equals fraction(d) under unit total mass.
  double size(int d) const { return fraction(d); }
  /// Edge-endpoint weight d*f_d / avg_degree.
  double edge_weight(int d) const { return edge_weights_[check_degree(d) - 1]; }

  const std::vector<double>& fractions() const { return fractions_; }
  const std::vector<double>& edge_weights() const { return edge_weights_; }

 private:
  explicit PopulationProfile(std::vector<double> sizes) {
    if (sizes.empty()) throw std::invalid_argument("population: needs at least degree 1");
    double total = 0.0;
    for (double s : sizes) {
      if (!(s >= 0.0) || !std::isfinite(s))
        throw std::invalid_argument("population: sizes must be finite and nonnegative");
      total += s;
    }
    if (!(total > 0.0)) throw std::invalid_argument("population: total mass must be positive");
    fractions_ = std::move(sizes);
    for (double& s : fractions_) s /= total;

    avg_degree_ = 0.0;
    for (std::size_t i = 0; i < fractions_.size(); ++i)
      avg_degree_ += static_cast<double>(i + 1) * fractions_[i];
    if (!(avg_degree_ > 0.0)) throw std::invalid_argument("population: average degree is zero");

    edge_weights_.resize(fractions_.size());
    for (std::size_t i = 0; i < fractions_.size(); ++i)
      edge_weights_[i] = static_cast<double>(i + 1) * fractions_[i] / avg_degree_;
  }

  int check_degree(int d) const {
    if (d < 1 || d > d_max()) throw std::invalid_argument("population: degree out of range");
    return d;
  }

  std::vector<double> fractions_;
  std::vector<double> edge_weights_;
  double avg_degree_ = 0.0;
};

/// Truncated power-law population: fraction of degree d proportional to d^-exponent.
inline PopulationProfile make_power_law_population(int d_max, double exponent) {
  if (d_max < 1) throw std::invalid_argument("make_power_law_population: d_max must be >= 1");
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw std::invalid_argument("make_power_law_population: exponent must be positive");
  std::vector<double> sizes(static_cast<std::size_t>(d_max));
  for (int d = 1; d <= d_max; ++d)
    sizes[static_cast<std::size_t>(d - 1)] = std::pow(static_cast<double>(d), -exponent);
  return PopulationProfile::from_sizes(std::move(sizes));
}

}  // namespace idsgame
