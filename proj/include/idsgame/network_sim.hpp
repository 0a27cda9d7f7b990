#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "idsgame/errors.hpp"
#include "idsgame/infection_curve.hpp"
#include "idsgame/population.hpp"
#include "idsgame/rng.hpp"
#include "idsgame/threat.hpp"

namespace idsgame {

/// A sampled simple graph with the population's degree distribution
/// (configuration-model pairing, self-loops and multi-edges repaired by
/// degree-preserving edge swaps).
struct SampledNetwork {
  int n = 0;
  std::vector<int> degree;                  // realized degree per agent
  std::vector<std::pair<int, int>> edges;   // undirected, u < v
  std::vector<std::vector<int>> neighbors;  // adjacency lists
  std::uint64_t seed = 0;

  double realized_avg_degree() const {
    return 2.0 * static_cast<double>(edges.size()) / static_cast<double>(n);
  }
};

namespace detail {

inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace detail

/// Draws per-agent degrees from the population's degree distribution and
/// pairs stubs uniformly at random. Collisions are repaired with random
/// degree-preserving double-edge swaps, up to 100 passes.
inline SampledNetwork sample_network(const PopulationProfile& pop, int n, std::uint64_t seed) {
  if (n <= pop.d_max())
    throw std::invalid_argument("sample_network: need n > d_max to realize the top degree");

  SampledNetwork net;
  net.n = n;
  net.seed = seed;
  Rng rng = Rng::stream(seed, 0);

  // inverse-CDF degree draws
  std::vector<double> cdf(static_cast<std::size_t>(pop.d_max()));
  double acc = 0.0;
  for (int d = 1; d <= pop.d_max(); ++d) {
    acc += pop.fraction(d);
    cdf[static_cast<std::size_t>(d - 1)] = acc;
  }
  cdf.back() = 1.0;
  net.degree.resize(static_cast<std::size_t>(n));
  long long stub_count = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const int d = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
    net.degree[static_cast<std::size_t>(i)] = d;
    stub_count += d;
  }
  // stub completion: an odd stub total cannot be paired
  while (stub_count % 2 != 0) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (net.degree[static_cast<std::size_t>(i)] < pop.d_max()) {
      ++net.degree[static_cast<std::size_t>(i)];
      ++stub_count;
    }
  }

  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(stub_count));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < net.degree[static_cast<std::size_t>(i)]; ++k) stubs.push_back(i);
  // Fisher-Yates
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[rng.below(i)]);

  net.edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u > v) std::swap(u, v);
    net.edges.emplace_back(u, v);
  }

  // repair passes: swap bad edges against random partners
  std::unordered_set<std::uint64_t> seen;
  bool clean = false;
  for (int pass = 0; pass < 100 && !clean; ++pass) {
    seen.clear();
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
      const auto& e = net.edges[i];
      if (e.first == e.second || !seen.insert(detail::edge_key(e.first, e.second)).second)
        bad.push_back(i);
    }
    if (bad.empty()) {
      clean = true;
      break;
    }
    for (std::size_t bi : bad) {
      for (int attempt = 0; attempt < 50; ++attempt) {
        const std::size_t pj = static_cast<std::size_t>(rng.below(net.edges.size()));
        if (pj == bi) continue;
        auto e1 = net.edges[bi];
        auto e2 = net.edges[pj];
        // swap second endpoints
        std::swap(e1.second, e2.second);
        if (e1.first > e1.second) std::swap(e1.first, e1.second);
        if (e2.first > e2.second) std::swap(e2.first, e2.second);
        if (e1.first == e1.second || e2.first == e2.second) continue;
        const auto k1 = detail::edge_key(e1.first, e1.second);
        const auto k2 = detail::edge_key(e2.first, e2.second);
        if (k1 == k2 || seen.count(k1) > 0 || seen.count(k2) > 0) continue;
        seen.erase(detail::edge_key(net.edges[bi].first, net.edges[bi].second));
        seen.erase(detail::edge_key(net.edges[pj].first, net.edges[pj].second));
        seen.insert(k1);
        seen.insert(k2);
        net.edges[bi] = e1;
        net.edges[pj] = e2;
        break;
      }
    }
  }
  if (!clean) {
    // final audit
    seen.clear();
    for (const auto& e : net.edges)
      if (e.first == e.second || !seen.insert(detail::edge_key(e.first, e.second)).second)
        throw solver_error("sample_network: could not realize a simple graph");
  }

  net.neighbors.assign(static_cast<std::size_t>(n), {});
  for (const auto& e : net.edges) {
    net.neighbors[static_cast<std::size_t>(e.first)].push_back(e.second);
    net.neighbors[static_cast<std::size_t>(e.second)].push_back(e.first);
  }
  return net;
}

/// Replicated first-hop attack experiment on a fixed network.
struct SimOutcome {
  double first_hop_attacks_per_agent = 0.0;
  double standard_error = 0.0;
  std::vector<double> per_degree_infection_rate;  // direct infections / population, by degree
  std::vector<double> replication_means;
  int reps = 0;
  std::uint64_t seed = 0;
};

/// Each replication: every agent suffers a direct attack with probability
/// tau_a and is then infected with probability p(a_d); every infected agent
/// attacks each neighbor independently with probability beta_ia. The outcome
/// counts those first-hop attacks per agent.
inline SimOutcome simulate_first_hop(const SampledNetwork& net, const ThreatModel& threat,
                                     const InfectionCurve& curve, const StrategyProfile& profile,
                                     int reps, std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("simulate_first_hop: reps must be >= 1");
  const int max_degree = *std::max_element(net.degree.begin(), net.degree.end());
  if (static_cast<int>(profile.investment.size()) < max_degree)
    throw std::invalid_argument("simulate_first_hop: profile does not cover realized degrees");
  profile.validate(threat);

  // cache p(a_d) per degree
  std::vector<double> p_by_degree(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (int d = 1; d <= max_degree; ++d)
    p_by_degree[static_cast<std::size_t>(d)] = curve.value(profile.at_degree(d));

  std::vector<long long> degree_count(static_cast<std::size_t>(max_degree) + 1, 0);
  for (int d : net.degree) ++degree_count[static_cast<std::size_t>(d)];

  SimOutcome out;
  out.reps = reps;
  out.seed = seed;
  out.replication_means.reserve(static_cast<std::size_t>(reps));
  std::vector<double> infections_by_degree(static_cast<std::size_t>(max_degree) + 1, 0.0);

  for (int rep = 0; rep < reps; ++rep) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep) + 1);
    long long attacks = 0;
    for (int i = 0; i < net.n; ++i) {
      if (!rng.bernoulli(threat.tau_a)) continue;
      const int d = net.degree[static_cast<std::size_t>(i)];
      if (!rng.bernoulli(p_by_degree[static_cast<std::size_t>(d)])) continue;
      infections_by_degree[static_cast<std::size_t>(d)] += 1.0;
      const std::size_t fanout = net.neighbors[static_cast<std::size_t>(i)].size();
      for (std::size_t k = 0; k < fanout; ++k)
        if (rng.bernoulli(threat.beta_ia)) ++attacks;
    }
    out.replication_means.push_back(static_cast<double>(attacks) / net.n);
  }

  double mean = 0.0;
  for (double v : out.replication_means) mean += v;
  mean /= reps;
  out.first_hop_attacks_per_agent = mean;
  if (reps > 1) {
    double ss = 0.0;
    for (double v : out.replication_means) ss += (v - mean) * (v - mean);
    out.standard_error = std::sqrt(ss / (reps - 1) / reps);
  }
  out.per_degree_infection_rate.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (int d = 1; d <= max_degree; ++d)
    if (degree_count[static_cast<std::size_t>(d)] > 0)
      out.per_degree_infection_rate[static_cast<std::size_t>(d)] =
          infections_by_degree[static_cast<std::size_t>(d)] /
          (static_cast<double>(degree_count[static_cast<std::size_t>(d)]) * reps);
  return out;
}

/// As simulate_first_hop, but draws a fresh network for every replication, so
/// the replication spread also covers graph-sampling variation and the mean
/// estimates the population-level expectation.
inline SimOutcome simulate_first_hop_resampled(const PopulationProfile& pop,
                                               const ThreatModel& threat,
                                               const InfectionCurve& curve,
                                               const StrategyProfile& profile, int n, int reps,
                                               std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("simulate_first_hop_resampled: reps must be >= 1");
  SimOutcome out;
  out.reps = reps;
  out.seed = seed;
  out.replication_means.reserve(static_cast<std::size_t>(reps));
  for (int rep = 0; rep < reps; ++rep) {
    const auto net = sample_network(pop, n, seed + 0x51ed2701ULL * (rep + 1));
    const auto one = simulate_first_hop(net, threat, curve, profile, 1,
                                        seed ^ (0xabcd1234ULL + rep));
    out.replication_means.push_back(one.first_hop_attacks_per_agent);
  }
  double mean = 0.0;
  for (double v : out.replication_means) mean += v;
  mean /= reps;
  out.first_hop_attacks_per_agent = mean;
  if (reps > 1) {
    double ss = 0.0;
    for (double v : out.replication_means) ss += (v - mean) * (v - mean);
    out.standard_error = std::sqrt(ss / (reps - 1) / reps);
  }
  return out;
}

/// Analytic expectation the simulation is checked against:
/// tau_a * beta_ia * sum_d d * f_d * p(a_d).
inline double expected_first_hop_attacks(const PopulationProfile& pop, const ThreatModel& threat,
                                         const InfectionCurve& curve,
                                         const StrategyProfile& profile) {
  double s = 0.0;
  for (int d = 1; d <= pop.d_max(); ++d)
    s += static_cast<double>(d) * pop.fraction(d) * curve.value(profile.at_degree(d));
  return threat.tau_a * threat.beta_ia * s;
}

}  // namespace idsgame
