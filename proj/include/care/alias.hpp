#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "care/graph.hpp"
#include "care/rng.hpp"

namespace care {

/// Walker/Vose alias table: O(n) build, O(1) draws.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  bool empty() const noexcept { return prob_.empty(); }

  std::size_t sample(Rng& rng) const {
    const std::size_t i = rng.below(prob_.size());
    return rng.uniform() < prob_[i] ? i : alias_[i];
  }

  /// Exact probability the table assigns to outcome i (reconstructed from the table).
  double probability(std::size_t i) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Per-node alias tables over adjacency entries, laid out parallel to the
/// graph's compressed adjacency. Parallel edges are separate entries, so their
/// weights accumulate.
class NeighborSampler {
 public:
  NeighborSampler() = default;
  explicit NeighborSampler(const Graph& g);

  /// Local index into neighbors(u); u must have at least one out-entry.
  std::size_t sample_entry(const Graph& g, NodeId u, Rng& rng) const {
    const std::size_t base = g.adjacency_offset(u);
    const std::size_t i = rng.below(g.out_degree(u));
    return rng.uniform() < prob_[base + i] ? i : alias_[base + i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Weight-proportional neighbor of u, or nullopt when u has no out-neighbors.
inline std::optional<NodeId> sample_neighbor(const Graph& g, const NeighborSampler& sampler,
                                             NodeId u, Rng& rng) {
  if (g.out_degree(u) == 0) return std::nullopt;
  return g.neighbors(u)[sampler.sample_entry(g, u, rng)];
}

}  // namespace care
