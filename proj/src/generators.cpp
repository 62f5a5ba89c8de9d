#include "care/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "care/edge_split.hpp"
#include "care/errors.hpp"
#include "care/rng.hpp"

namespace care {
namespace {

// Continuous power law x^-exponent on [lo, hi], by inversion.
double sample_power_law(Rng& rng, double lo, double hi, double exponent) {
  const double e = 1.0 - exponent;
  const double a = std::pow(lo, e);
  const double b = std::pow(hi, e);
  return std::pow(a + rng.uniform() * (b - a), 1.0 / e);
}

double power_law_mean(double lo, double hi, double exponent) {
  if (std::abs(exponent - 2.0) < 1e-9) return std::log(hi / lo) / (1.0 / lo - 1.0 / hi);
  const double e1 = 1.0 - exponent;
  const double e2 = 2.0 - exponent;
  return (e1 / e2) * (std::pow(hi, e2) - std::pow(lo, e2)) / (std::pow(hi, e1) - std::pow(lo, e1));
}

// Pairs shuffled stubs, retrying leftovers a few rounds.
void wire_stubs(std::vector<NodeId> stubs, Rng& rng, std::unordered_set<std::uint64_t>& seen,
                std::vector<Edge>& edges, const std::vector<CommunityId>* forbid_same) {
  for (int round = 0; round < 8 && stubs.size() >= 2; ++round) {
    rng.shuffle(std::span(stubs));
    std::vector<NodeId> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId a = stubs[i];
      const NodeId b = stubs[i + 1];
      const bool same = forbid_same && (*forbid_same)[a] == (*forbid_same)[b];
      if (a == b || same || !seen.insert(pair_key(a, b)).second) {
        leftover.push_back(a);
        leftover.push_back(b);
        continue;
      }
      edges.push_back({a, b, 1.0});
    }
    if (stubs.size() % 2) leftover.push_back(stubs.back());
    stubs.swap(leftover);
  }
}

}  // namespace

PlantedGraph generate_planted_graph(const PlantedGraphConfig& config) {
  const std::size_t n = config.nodes;
  if (n < 2 || config.min_community < 2 || config.min_community > config.max_community ||
      config.max_community > n || !(config.mixing >= 0.0 && config.mixing <= 1.0)) {
    throw DataError("invalid planted graph configuration");
  }
  Rng rng(config.seed);
  const double kmax = static_cast<double>(config.max_degree);

  // Lower degree cutoff chosen so the truncated power law has the requested mean.
  double lo = 1.0, hi = kmax;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power_law_mean(mid, kmax, config.degree_exponent) < config.average_degree ? lo : hi) = mid;
  }
  std::vector<std::size_t> degree(n);
  for (auto& k : degree) {
    k = static_cast<std::size_t>(std::llround(sample_power_law(rng, lo, kmax, config.degree_exponent)));
    k = std::max<std::size_t>(k, 1);
  }

  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  while (total < n) {
    const auto s = static_cast<std::size_t>(std::llround(sample_power_law(
        rng, static_cast<double>(config.min_community), static_cast<double>(config.max_community),
        config.community_exponent)));
    sizes.push_back(s);
    total += s;
  }
  // Trim the overshoot from the largest communities.
  while (total > n) {
    auto it = std::max_element(sizes.begin(), sizes.end());
    const std::size_t cut = std::min(total - n, *it - config.min_community);
    if (cut == 0) {
      // Every community is at the minimum; merge the excess into the last one.
      sizes.back() -= std::min(sizes.back() - 1, total - n);
      total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
      break;
    }
    *it -= cut;
    total -= cut;
  }

  std::vector<std::size_t> internal(n);
  for (std::size_t u = 0; u < n; ++u) {
    internal[u] = static_cast<std::size_t>(std::llround((1.0 - config.mixing) * static_cast<double>(degree[u])));
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return internal[a] > internal[b]; });

  std::vector<std::size_t> free_slots = sizes;
  std::vector<CommunityId> community(n);
  std::vector<std::size_t> candidates;
  for (NodeId u : order) {
    candidates.clear();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (free_slots[c] > 0 && sizes[c] > internal[u]) candidates.push_back(c);
    }
    std::size_t chosen;
    if (!candidates.empty()) {
      chosen = candidates[rng.below(candidates.size())];
    } else {
      chosen = 0;
      for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (free_slots[c] > 0 && (free_slots[chosen] == 0 || sizes[c] > sizes[chosen])) chosen = c;
      }
    }
    --free_slots[chosen];
    community[u] = static_cast<CommunityId>(chosen);
    internal[u] = std::min(internal[u], sizes[chosen] - 1);
  }

  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  std::vector<std::vector<NodeId>> internal_stubs(sizes.size());
  std::vector<NodeId> external_stubs;
  for (NodeId u = 0; u < n; ++u) {
    internal_stubs[community[u]].insert(internal_stubs[community[u]].end(), internal[u], u);
    external_stubs.insert(external_stubs.end(), degree[u] - std::min(degree[u], internal[u]), u);
  }
  for (auto& stubs : internal_stubs) wire_stubs(std::move(stubs), rng, seen, edges, nullptr);
  wire_stubs(std::move(external_stubs), rng, seen, edges, &community);

  PlantedGraph out;
  out.graph = Graph::from_edges(n, std::move(edges), false);
  out.community = std::move(community);
  out.community_count = sizes.size();
  return out;
}

}  // namespace care
