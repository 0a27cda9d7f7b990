#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "idsgame/best_response.hpp"
#include "idsgame/errors.hpp"
#include "idsgame/exposure_response.hpp"
#include "idsgame/infection_curve.hpp"
#include "idsgame/mixing.hpp"
#include "idsgame/numeric.hpp"
#include "idsgame/population.hpp"
#include "idsgame/threat.hpp"

namespace idsgame {

/// One complete game: who plays (population), what they face (threat,
/// infection curve), how aggregate vulnerability feeds back into risk
/// (exposure response) and how degree correlations bias it (mixing).
struct GameInstance {
  PopulationProfile pop;
  ThreatModel threat;
  InfectionCurve curve;
  ExposureResponse theta;
  MixingVector mixing;

  GameInstance(PopulationProfile pop_, ThreatModel threat_, InfectionCurve curve_,
               ExposureResponse theta_, MixingVector mixing_)
      : pop(std::move(pop_)),
        threat(threat_),
        curve(std::move(curve_)),
        theta(std::move(theta_)),
        mixing(std::move(mixing_)) {
    if (mixing.d_max() != pop.d_max())
      throw std::invalid_argument("game: mixing vector length must equal d_max");
    if (std::abs(mixing.admissibility_gap(pop)) > 1e-9)
      throw std::invalid_argument("game: mixing vector is not admissible for this population");
    if (!curve.covers(threat.i_min, threat.i_max))
      throw std::invalid_argument("game: curve does not cover the investment interval");
  }
};

struct SolveOptions {
  double bisect_rel_tol = 1e-12;  // bracket width target, relative
  int newton_polish = 5;          // polish steps after bisection
  int scan_points = 64;           // log-spaced sign-change scan resolution
  std::uint64_t restart_seed = 0;  // nonzero: randomize bracket subdivision
};

struct SolveDiagnostics {
  int bisect_iterations = 0;
  int sign_changes = 0;   // sign changes of the residual over the scan grid
  double e_upper = 0.0;   // exposure ceiling used as the upper bracket
};

/// Equilibrium state: the fixed-point average risk exposure plus everything
/// derived from it per degree.
struct EquilibriumResult {
  double are = 0.0;                    // equilibrium average risk exposure
  std::vector<double> exposure;        // per-degree exposure g_d * are
  std::vector<double> investment;      // equilibrium investments
  std::vector<double> infection_prob;  // infection probability at equilibrium
  std::vector<bool> interior;          // investment strictly inside the interval
  double residual = 0.0;               // |fixed-point residual| at the solution
  SolveDiagnostics diagnostics;

  bool all_interior() const {
    for (bool b : interior)
      if (!b) return false;
    return true;
  }
};

namespace detail {

inline double splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Residual of the equilibrium fixed point at candidate exposure e:
///   theta(d_avg * sum_d w_d * pstar(tau_a + d * g_d * e)) - e.
/// Its unique root is the equilibrium average risk exposure.
inline double fixed_point_residual(const PopulationProfile& pop, const BestResponseCurve& brc,
                                   const ExposureResponse& theta, const std::vector<double>& g,
                                   double e) {
  if (!(e >= 0.0)) throw std::invalid_argument("fixed_point_residual: e must be >= 0");
  const double tau = brc.threat().tau_a;
  double s = 0.0;
  for (int d = 1; d <= pop.d_max(); ++d) {
    const double r = tau + static_cast<double>(d) * g[static_cast<std::size_t>(d - 1)] * e;
    s += pop.edge_weight(d) * brc.optimal_infection_probability(r);
  }
  return theta.value(pop.avg_degree() * s) - e;
}

inline double fixed_point_residual(const GameInstance& game, double e) {
  BestResponseCurve brc(game.threat, game.curve);
  return fixed_point_residual(game.pop, brc, game.theta, game.mixing.values(), e);
}

/// Core fixed-point solve over an arbitrary positive bias vector g. The
/// admissible case is the game equilibrium; off-admissible vectors are
/// useful for derivative probes.
inline EquilibriumResult solve_fixed_point(const PopulationProfile& pop,
                                           const ThreatModel& threat, const InfectionCurve& curve,
                                           const ExposureResponse& theta,
                                           const std::vector<double>& g,
                                           const SolveOptions& opts = {}) {
  if (static_cast<int>(g.size()) != pop.d_max())
    throw std::invalid_argument("solve_fixed_point: bias vector length must equal d_max");
  const BestResponseCurve brc(threat, curve);
  const auto residual_at = [&](double e) {
    return fixed_point_residual(pop, brc, theta, g, e);
  };

  // pstar <= p(i_min) everywhere, so theta(d_avg * p(i_min)) caps the ARE.
  const double e_upper = theta.value(pop.avg_degree() * curve.value(threat.i_min));

  EquilibriumResult result;
  result.diagnostics.e_upper = e_upper;

  double e_star = 0.0;
  if (e_upper > 0.0) {
    double lo = 0.0, hi = e_upper;
    const double v_lo = residual_at(lo);
    const double v_hi = residual_at(hi);
    if (v_lo < 0.0)
      throw solver_error("solve: residual negative at e = 0; exposure response is not R+ valued");
    if (v_hi > 1e-12 * std::max(1.0, e_upper))
      throw solver_error("solve: bracket failure at the exposure ceiling");

    if (opts.restart_seed != 0) {
      // Randomized subdivision: sign-preserving probes, same unique root.
      std::uint64_t state = opts.restart_seed;
      for (int k = 0; k < 8; ++k) {
        const double u = 0.02 + 0.96 * detail::splitmix64_next(state);
        const double probe = lo + u * (hi - lo);
        if (residual_at(probe) > 0.0)
          lo = probe;
        else
          hi = probe;
      }
    }

    int iters = 0;
    while (hi - lo > opts.bisect_rel_tol * std::max(1.0, hi) && iters < 200) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (residual_at(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
      ++iters;
    }
    result.diagnostics.bisect_iterations = iters;
    e_star = 0.5 * (lo + hi);

    double best = e_star;
    double best_abs = std::abs(residual_at(best));
    double e = e_star;
    for (int k = 0; k < opts.newton_polish; ++k) {
      const double deriv = central_difference(residual_at, std::max(e, 1e-30), 1e-7);
      if (!std::isfinite(deriv) || deriv >= 0.0) break;
      const double next = e - residual_at(e) / deriv;
      if (!(next >= lo) || !(next <= hi)) break;
      e = next;
      const double abs_r = std::abs(residual_at(e));
      if (abs_r < best_abs) {
        best = e;
        best_abs = abs_r;
      }
    }
    e_star = best;
  }

  // Scan for multiple sign changes; a unique equilibrium admits exactly one.
  {
    int changes = 0;
    if (e_upper > 0.0) {
      const auto grid =
          log_spaced(e_upper * 1e-9, e_upper, static_cast<std::size_t>(opts.scan_points));
      int prev = 0;
      const auto signum = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
      prev = signum(residual_at(0.0));
      for (double x : grid) {
        const int s = signum(residual_at(x));
        if (s != 0 && prev != 0 && s != prev) ++changes;
        if (s != 0) prev = s;
      }
    }
    result.diagnostics.sign_changes = changes;
  }

  result.are = e_star;
  result.residual = std::abs(residual_at(e_star));
  if (result.residual > 1e-10 * std::max(1.0, e_star))
    throw solver_error("solve: residual " + std::to_string(result.residual) +
                       " above tolerance after convergence");

  const int dmax = pop.d_max();
  result.exposure.resize(static_cast<std::size_t>(dmax));
  result.investment.resize(static_cast<std::size_t>(dmax));
  result.infection_prob.resize(static_cast<std::size_t>(dmax));
  result.interior.resize(static_cast<std::size_t>(dmax));
  for (int d = 1; d <= dmax; ++d) {
    const std::size_t i = static_cast<std::size_t>(d - 1);
    result.exposure[i] = g[i] * e_star;
    const double r = threat.tau_a + static_cast<double>(d) * result.exposure[i];
    const double a = brc.optimal_investment(r);
    result.investment[i] = a;
    result.infection_prob[i] = curve.value(a);
    result.interior[i] = (a > threat.i_min + 1e-9) && (a < threat.i_max - 1e-9);
  }
  return result;
}

/// Unique pure-strategy Nash equilibrium of the game.
inline EquilibriumResult solve_equilibrium(const GameInstance& game, const SolveOptions& opts = {}) {
  return solve_fixed_point(game.pop, game.threat, game.curve, game.theta, game.mixing.values(),
                           opts);
}

/// Average risk exposure induced by an arbitrary strategy profile, computed
/// by both algebraic routes and cross-checked:
///   theta(sum_d d * f_d * p(a_d)) == theta(d_avg * sum_d w_d * p(a_d)).
inline double are_of_profile(const GameInstance& game, const StrategyProfile& profile) {
  if (static_cast<int>(profile.investment.size()) != game.pop.d_max())
    throw std::invalid_argument("are_of_profile: profile length must equal d_max");
  profile.validate(game.threat);
  double by_fraction = 0.0, by_edge_weight = 0.0;
  for (int d = 1; d <= game.pop.d_max(); ++d) {
    const double p = game.curve.value(profile.at_degree(d));
    by_fraction += static_cast<double>(d) * game.pop.fraction(d) * p;
    by_edge_weight += game.pop.edge_weight(d) * p;
  }
  const double v1 = game.theta.value(by_fraction);
  const double v2 = game.theta.value(game.pop.avg_degree() * by_edge_weight);
  if (std::abs(v1 - v2) > 1e-12 * std::max(1.0, std::abs(v1)))
    throw invariant_violation("are_of_profile: the two algebraic forms disagree");
  return v1;
}

/// d(equilibrium ARE)/d(g_d) by the implicit function theorem. Requires an
/// interior equilibrium; at a boundary equilibrium the formula does not
/// apply and an error says so.
inline double equilibrium_sensitivity(const GameInstance& game, int degree) {
  if (degree < 1 || degree > game.pop.d_max())
    throw std::invalid_argument("equilibrium_sensitivity: degree out of range");
  const EquilibriumResult eq = solve_equilibrium(game);
  if (!eq.all_interior())
    throw std::domain_error(
        "equilibrium_sensitivity: equilibrium touches the investment bounds; the implicit-"
        "function formula is invalid there");

  const BestResponseCurve brc(game.threat, game.curve);
  const auto pstar = [&](double r) { return brc.optimal_infection_probability(r); };
  const auto& g = game.mixing.values();
  const double e_star = eq.are;

  double vulnerability = 0.0;  // sum_d w_d * pstar(r_d)
  for (int d = 1; d <= game.pop.d_max(); ++d) {
    const double r = game.threat.tau_a + static_cast<double>(d) * g[static_cast<std::size_t>(d - 1)] * e_star;
    vulnerability += game.pop.edge_weight(d) * pstar(r);
  }
  const double phi_dot =
      game.pop.avg_degree() * game.theta.derivative(game.pop.avg_degree() * vulnerability);

  double dres_de = -1.0;
  for (int d = 1; d <= game.pop.d_max(); ++d) {
    const std::size_t i = static_cast<std::size_t>(d - 1);
    const double r = game.threat.tau_a + static_cast<double>(d) * g[i] * e_star;
    dres_de += phi_dot * game.pop.edge_weight(d) * central_difference(pstar, r, 1e-6) *
               static_cast<double>(d) * g[i];
  }
  if (!(dres_de < 0.0))
    throw invariant_violation("equilibrium_sensitivity: residual derivative in e must be negative");

  const std::size_t i = static_cast<std::size_t>(degree - 1);
  const double r = game.threat.tau_a + static_cast<double>(degree) * g[i] * e_star;
  const double dres_dg = phi_dot * game.pop.edge_weight(degree) *
                         central_difference(pstar, r, 1e-6) * static_cast<double>(degree) * e_star;
  return -dres_dg / dres_de;
}

}  // namespace idsgame
