#pragma once

#include <cstdint>
#include <filesystem>
#include <unordered_set>
#include <vector>

#include "care/graph.hpp"
#include "care/rng.hpp"

namespace care {

struct NodePair {
  NodeId u{0};
  NodeId v{0};

  friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// Order-independent 64-bit key for an unordered node pair.
constexpr std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
  const NodeId lo = a < b ? a : b;
  const NodeId hi = a < b ? b : a;
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

using PairKeySet = std::unordered_set<std::uint64_t>;

/// Keys of every (undirected) adjacent pair in g.
PairKeySet edge_key_set(const Graph& g);

/// Link-prediction split: a residual graph plus held-out positives and an
/// equally sized set of non-edges of the original graph.
struct EdgeSplit {
  Graph residual;
  std::vector<Edge> removed_edges;
  std::vector<NodePair> negative_edges;
};

/// Removes floor(removal_fraction * |E|) uniformly chosen edges (no
/// connectivity constraint) and draws as many distinct non-edges.
/// Deterministic for a fixed seed. Throws DataError when the graph is
/// directed, the fraction selects no edge, or non-edges run out.
EdgeSplit split_edges(const Graph& g, double removal_fraction, std::uint64_t seed);

/// Draws `count` distinct unordered non-self-loop pairs whose keys are in
/// neither `edges` nor `exclude`; the drawn keys are added to `exclude`.
std::vector<NodePair> sample_non_edges(std::size_t node_count, std::size_t count,
                                       const PairKeySet& edges, PairKeySet& exclude, Rng& rng);

/// Writes the residual edge list, removed positives and negatives (`u v` lines).
void write_edge_split(const EdgeSplit& split, const std::filesystem::path& residual_path,
                      const std::filesystem::path& positives_path,
                      const std::filesystem::path& negatives_path);

}  // namespace care
