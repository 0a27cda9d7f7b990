#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "idsgame/errors.hpp"
#include "idsgame/infection_curve.hpp"
#include "idsgame/numeric.hpp"
#include "idsgame/threat.hpp"

namespace idsgame {

/// Risk levels at which the optimal investment saturates: below r_min the
/// floor i_min is optimal, above r_max the cap i_max is.
struct SaturationThresholds {
  double r_min;
  double r_max;
};

inline SaturationThresholds saturation_thresholds(const ThreatModel& threat,
                                                  const InfectionCurve& curve) {
  switch (curve.family()) {
    case InfectionCurve::Family::power: {
      const double eps = curve.power_epsilon();
      const double gamma = curve.power_gamma();
      const double denom = threat.loss * std::pow(eps, gamma);
      return {std::pow(eps + threat.i_min, gamma + 1.0) / denom,
              std::pow(eps + threat.i_max, gamma + 1.0) / denom};
    }
    case InfectionCurve::Family::exponential: {
      const double xi = curve.exponential_xi();
      return {std::exp(xi * threat.i_min) / (threat.loss * xi),
              std::exp(xi * threat.i_max) / (threat.loss * xi)};
    }
    case InfectionCurve::Family::tabulated: {
      // First-order condition r * L * p'(a) + 1 = 0 at each boundary.
      const double slope_lo = curve.derivative(threat.i_min);
      const double slope_hi = curve.derivative(threat.i_max);
      if (!(slope_lo < 0.0) || !(slope_hi < 0.0))
        throw std::invalid_argument(
            "saturation_thresholds: curve has no investment response at a boundary "
            "(degenerate, violates the decreasing-convex requirement)");
      return {-1.0 / (threat.loss * slope_lo), -1.0 / (threat.loss * slope_hi)};
    }
  }
  throw std::logic_error("saturation_thresholds: unreachable");
}

/// Single-agent best response: the investment minimizing expected cost
/// r * loss * p(a) + a against r expected attacks, with its induced
/// infection probability.
///
/// Closed forms: exponential family log(r*L*xi)/xi clipped (the exact
/// minimizer); power family (r*L*eps^gamma)^(1/(gamma+1)) - eps clipped,
/// the family's standard reduced form -- it is the exact minimizer at
/// gamma = 1 and equals the minimizer under loss L/gamma otherwise.
/// Tabulated curves fall back to golden-section minimization.
class BestResponseCurve {
 public:
  BestResponseCurve(ThreatModel threat, InfectionCurve curve)
      : threat_(threat), curve_(std::move(curve)) {
    if (!curve_.covers(threat_.i_min, threat_.i_max))
      throw std::invalid_argument("best response: curve does not cover the investment interval");
    degenerate_ = curve_.degenerate_on(threat_.i_min, threat_.i_max);
    if (!degenerate_) thresholds_ = saturation_thresholds(threat_, curve_);
  }

  const ThreatModel& threat() const { return threat_; }
  const InfectionCurve& curve() const { return curve_; }
  bool degenerate() const { return degenerate_; }

  const SaturationThresholds& thresholds() const {
    if (degenerate_)
      throw std::invalid_argument("best response: degenerate curve has no thresholds");
    return *thresholds_;
  }

  double optimal_investment(double r) const {
    if (!(r >= 0.0)) throw std::invalid_argument("optimal_investment: r must be >= 0");
    if (degenerate_) return threat_.i_min;  // flat p: cost is increasing in a
    switch (curve_.family()) {
      case InfectionCurve::Family::power: {
        const double eps = curve_.power_epsilon();
        const double gamma = curve_.power_gamma();
        const double t = r * threat_.loss * std::pow(eps, gamma);
        const double a = std::pow(t, 1.0 / (gamma + 1.0)) - eps;
        return clip(a);
      }
      case InfectionCurve::Family::exponential: {
        const double xi = curve_.exponential_xi();
        const double t = r * threat_.loss * xi;
        if (t <= 0.0) return threat_.i_min;
        return clip(std::log(t) / xi);
      }
      case InfectionCurve::Family::tabulated: {
        const auto cost = [&](double a) { return r * threat_.loss * curve_.value(a) + a; };
        return golden_section_minimize(cost, threat_.i_min, threat_.i_max, 1e-10);
      }
    }
    throw std::logic_error("optimal_investment: unreachable");
  }

  double optimal_infection_probability(double r) const {
    return curve_.value(optimal_investment(r));
  }

 private:
  double clip(double a) const {
    if (a < threat_.i_min) return threat_.i_min;
    if (a > threat_.i_max) return threat_.i_max;
    return a;
  }

  ThreatModel threat_;
  InfectionCurve curve_;
  bool degenerate_ = false;
  std::optional<SaturationThresholds> thresholds_;
};

/// Result of sampling r * d/dr p*(r) over the saturation band.
struct Assumption4Report {
  bool passed = false;
  std::vector<double> grid;    // sampled r values
  std::vector<double> values;  // r * pstar'(r) at each grid point
  // First adjacent pair where the product failed to increase, if any.
  struct Violation {
    double r_lo, r_hi, value_lo, value_hi;
  };
  std::optional<Violation> first_violation;
};

/// Checks that r * pstar'(r) is strictly increasing over (r_min, r_max),
/// sampling a log-spaced grid with central-difference derivatives.
/// A failed check is reported, not thrown.
inline Assumption4Report check_assumption4(const BestResponseCurve& brc, int grid_size) {
  if (grid_size < 3) throw std::invalid_argument("check_assumption4: grid_size must be >= 3");
  if (brc.degenerate())
    throw std::invalid_argument("check_assumption4: degenerate curve has no saturation band");
  const auto& thr = brc.thresholds();
  // Stay strictly inside the band so the difference stencil avoids the kinks;
  // an overflowed upper threshold is sampled up to the representable range.
  const double lo = thr.r_min * (1.0 + 1e-4);
  const double hi = std::isfinite(thr.r_max) ? thr.r_max * (1.0 - 1e-4) : 1e300;
  if (!(lo < hi))
    throw std::invalid_argument("check_assumption4: saturation band is empty");

  Assumption4Report report;
  report.grid = log_spaced(lo, hi, static_cast<std::size_t>(grid_size));
  report.values.reserve(report.grid.size());
  const auto pstar = [&](double r) { return brc.optimal_infection_probability(r); };
  // r * d/dr pstar computed as the log-derivative d pstar / d ln r, which
  // stays representable even where d/dr pstar alone would underflow.
  constexpr double h = 1e-6;
  for (double r : report.grid)
    report.values.push_back((pstar(r * (1.0 + h)) - pstar(r * (1.0 - h))) / (2.0 * h));

  report.passed = true;
  for (std::size_t k = 0; k + 1 < report.values.size(); ++k) {
    if (!(report.values[k + 1] > report.values[k])) {
      report.passed = false;
      report.first_violation = Assumption4Report::Violation{
          report.grid[k], report.grid[k + 1], report.values[k], report.values[k + 1]};
      break;
    }
  }
  return report;
}

}  // namespace idsgame
