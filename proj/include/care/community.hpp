#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "care/graph.hpp"
#include "care/rng.hpp"

namespace care {

using CommunityId = std::uint32_t;

/// Non-overlapping node -> community assignment with a members index.
/// Community ids are dense in [0, community_count()).
class Partition {
 public:
  Partition() = default;

  /// Relabels ids densely in order of first appearance and scores the result on g.
  static Partition from_assignment(const Graph& g, std::span<const CommunityId> assignment);

  std::size_t node_count() const noexcept { return assignment_.size(); }
  std::size_t community_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  CommunityId community_of(NodeId u) const noexcept { return assignment_[u]; }
  std::span<const CommunityId> assignment() const noexcept { return assignment_; }
  /// Sorted member list.
  std::span<const NodeId> members(CommunityId c) const noexcept {
    return {members_.data() + offsets_[c], members_.data() + offsets_[c + 1]};
  }
  double modularity() const noexcept { return modularity_; }

 private:
  std::vector<CommunityId> assignment_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> members_;
  double modularity_{0.0};
};

/// Newman modularity with resolution 1, summed over ordered node pairs.
/// Directed graphs are scored on their symmetrized form. Throws DataError
/// when the graph has no edge weight or the assignment size is wrong.
double modularity(const Graph& g, std::span<const CommunityId> assignment);

struct LouvainConfig {
  int max_passes{20};
  double min_gain{1e-7};
  std::uint64_t seed{0};
};

/// Per-pass record of a louvain() run.
struct LouvainTrace {
  std::vector<double> modularity;       // Q on the input graph after each pass
  std::vector<double> gain;             // summed local-move gain of each pass
  std::vector<std::size_t> communities; // community count after each pass
};

/// Invoked for every accepted local move with the modularity change it caused.
using MoveObserver = std::function<void(NodeId node, CommunityId from, CommunityId to, double delta_q)>;

/// Local moving phase on an undirected working graph. Nodes are swept in a
/// per-call shuffled order until a full sweep moves nothing; each node joins
/// the neighbouring community with the largest strictly positive gain (ties
/// keep the current community, else the lowest id). Returns the summed gain.
double local_moving_pass(const Graph& working, std::vector<CommunityId>& assignment, Rng& rng,
                         const MoveObserver& observer = {});

/// Collapses each community into one node. Requires dense ids in
/// [0, community count). Intra-community weight becomes a self-loop.
Graph aggregate_graph(const Graph& working, std::span<const CommunityId> assignment);

/// Two-phase Louvain modularity maximisation. Throws DataError on an edgeless graph.
Partition louvain(const Graph& g, const LouvainConfig& config = {}, LouvainTrace* trace = nullptr);

/// `name community` lines in node id order.
void write_communities(std::ostream& out, const Graph& g, const Partition& p);

}  // namespace care
