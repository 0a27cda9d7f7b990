#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "idsgame/equilibrium.hpp"
#include "idsgame/errors.hpp"
#include "idsgame/mixing.hpp"
#include "idsgame/population.hpp"

namespace idsgame {

/// Probability distribution over degrees induced by a mixing vector:
/// v_d = edge_weight(d) * g_d.
struct RiskDistribution {
  std::vector<double> v;
};

inline RiskDistribution risk_distribution(const PopulationProfile& pop,
                                          const MixingVector& mixing) {
  if (mixing.d_max() != pop.d_max())
    throw std::invalid_argument("risk_distribution: dimension mismatch");
  RiskDistribution dist;
  dist.v.resize(static_cast<std::size_t>(pop.d_max()));
  double total = 0.0;
  for (int d = 1; d <= pop.d_max(); ++d) {
    dist.v[static_cast<std::size_t>(d - 1)] = pop.edge_weight(d) * mixing.at_degree(d);
    total += dist.v[static_cast<std::size_t>(d - 1)];
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw invariant_violation("risk_distribution: mass does not sum to one");
  return dist;
}

/// Outcome of the prefix-sum dominance comparison between two mixing vectors.
struct DominanceReport {
  bool holds = false;
  bool holds_strictly = false;       // holds, with strict inequality somewhere
  std::optional<int> fails_at;       // first degree whose prefix comparison fails
};

/// Checks sum_{d' <= d} w_d' g1_d' <= sum_{d' <= d} w_d' g2_d' for every d.
/// When it holds with strictness somewhere, the risk distribution of g1
/// first-order stochastically dominates that of g2 (mass sits on higher
/// degrees), and the equilibrium ARE under g1 is the larger one.
inline DominanceReport dominance_condition(const PopulationProfile& pop, const MixingVector& g1,
                                           const MixingVector& g2) {
  if (g1.d_max() != pop.d_max() || g2.d_max() != pop.d_max())
    throw std::invalid_argument("dominance_condition: dimension mismatch");
  constexpr double tol = 1e-12;
  DominanceReport report;
  report.holds = true;
  double prefix1 = 0.0, prefix2 = 0.0;
  for (int d = 1; d <= pop.d_max(); ++d) {
    prefix1 += pop.edge_weight(d) * g1.at_degree(d);
    prefix2 += pop.edge_weight(d) * g2.at_degree(d);
    if (prefix1 > prefix2 + tol) {
      report.holds = false;
      report.holds_strictly = false;
      report.fails_at = d;
      return report;
    }
    if (prefix1 < prefix2 - tol) report.holds_strictly = true;
  }
  return report;
}

/// Sufficient condition for dominance: the ratios g1_d / g2_d are
/// nondecreasing in d.
inline bool sufficient_ratio_condition(const std::vector<double>& g1,
                                       const std::vector<double>& g2) {
  if (g1.size() != g2.size() || g1.empty())
    throw std::invalid_argument("sufficient_ratio_condition: need equal nonempty lengths");
  for (std::size_t i = 0; i < g1.size(); ++i)
    if (!(g1[i] > 0.0) || !(g2[i] > 0.0))
      throw std::invalid_argument("sufficient_ratio_condition: entries must be positive");
  for (std::size_t i = 0; i + 1 < g1.size(); ++i)
    if (g1[i] / g2[i] > g1[i + 1] / g2[i + 1]) return false;
  return true;
}

inline bool sufficient_ratio_condition(const MixingVector& g1, const MixingVector& g2) {
  return sufficient_ratio_condition(g1.values(), g2.values());
}

/// Prefix-sum ratio lemma: if b_{l+1}/a_{l+1} <= b_l/a_l for all l, then the
/// full-sum ratio sum(b)/sum(a) is a lower bound for every prefix ratio.
/// Returns whether the hypothesis holds; when it does, the conclusion is
/// asserted (its failure would be a logic error, not a data property).
inline bool prefix_ratio_lemma_check(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("prefix_ratio_lemma_check: need equal lengths K > 1");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) throw std::invalid_argument("prefix_ratio_lemma_check: a must be positive");
    if (!(b[i] >= 0.0))
      throw std::invalid_argument("prefix_ratio_lemma_check: b must be nonnegative");
  }
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (b[i + 1] / a[i + 1] > b[i] / a[i]) return false;

  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum_a += a[i];
    sum_b += b[i];
  }
  const double total_ratio = sum_b / sum_a;
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa += a[i];
    pb += b[i];
    if (total_ratio > pb / pa + 1e-12 * std::max(1.0, total_ratio))
      throw invariant_violation("prefix_ratio_lemma_check: conclusion failed under hypothesis");
  }
  return true;
}

/// One risk transfer: g_{d1} rises by delta_d1 while g_{d2} (d2 < d1) drops
/// by delta_d2 = delta_d1 * w_{d1}/w_{d2}, keeping sum w*g exactly fixed.
struct TransferStep {
  int d1 = 0;
  int d2 = 0;
  double delta_d1 = 0.0;
  double delta_d2 = 0.0;
  std::vector<double> g_after;
};

/// Constructive path from g_from up to a dominating g_to through admissible
/// single-pair transfers: repeatedly raise the largest degree still short of
/// its target, paid for by the smallest degree above its target. Terminates
/// in at most 2 * d_max steps because every step closes at least one
/// coordinate gap.
inline std::vector<TransferStep> transfer_sequence(const PopulationProfile& pop,
                                                   const MixingVector& g_from,
                                                   const MixingVector& g_to,
                                                   double gap_tol = 1e-9) {
  const auto report = dominance_condition(pop, g_to, g_from);
  if (!report.holds)
    throw std::invalid_argument(
        "transfer_sequence: target does not dominate the start (prefix condition fails)");

  const int dmax = pop.d_max();
  std::vector<double> g = g_from.values();
  const std::vector<double>& target = g_to.values();
  std::vector<TransferStep> steps;

  for (int iter = 0; iter < 2 * dmax + 4; ++iter) {
    int d1 = 0, d2 = 0;
    for (int d = dmax; d >= 1; --d)
      if (target[static_cast<std::size_t>(d - 1)] > g[static_cast<std::size_t>(d - 1)] + gap_tol) {
        d1 = d;
        break;
      }
    for (int d = 1; d <= dmax; ++d)
      if (g[static_cast<std::size_t>(d - 1)] > target[static_cast<std::size_t>(d - 1)] + gap_tol) {
        d2 = d;
        break;
      }
    if (d1 == 0 && d2 == 0) return steps;  // converged to the target
    if (d1 == 0 || d2 == 0)
      throw invariant_violation(
          "transfer_sequence: one-sided residual gap; start and target do not carry the same "
          "edge-weighted mass");
    const std::size_t i1 = static_cast<std::size_t>(d1 - 1);
    const std::size_t i2 = static_cast<std::size_t>(d2 - 1);
    const double w1 = pop.edge_weight(d1);
    const double w2 = pop.edge_weight(d2);
    const double up = std::min(target[i1] - g[i1], w2 / w1 * (g[i2] - target[i2]));
    const double down = std::min(g[i2] - target[i2], w1 / w2 * (target[i1] - g[i1]));
    g[i1] += up;
    g[i2] -= down;
    steps.push_back(TransferStep{d1, d2, up, down, g});
  }
  throw invariant_violation("transfer_sequence: did not terminate within 2 * d_max steps");
}

/// Equilibrium ARE along a transfer path: element k is the ARE after the
/// first k steps (element 0 is the starting equilibrium). Each step of a
/// dominance-ordered path raises the ARE.
inline std::vector<double> are_along_transfer(const PopulationProfile& pop,
                                              const ThreatModel& threat,
                                              const InfectionCurve& curve,
                                              const ExposureResponse& theta,
                                              const MixingVector& g_from,
                                              const std::vector<TransferStep>& steps) {
  std::vector<double> out;
  out.reserve(steps.size() + 1);
  out.push_back(solve_fixed_point(pop, threat, curve, theta, g_from.values()).are);
  for (const auto& step : steps)
    out.push_back(solve_fixed_point(pop, threat, curve, theta, step.g_after).are);
  return out;
}

}  // namespace idsgame
