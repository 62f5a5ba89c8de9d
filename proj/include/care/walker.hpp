#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "care/alias.hpp"
#include "care/community.hpp"
#include "care/graph.hpp"
#include "care/rng.hpp"

namespace care {

struct WalkConfig {
  /// Probability of a community jump at each step; 0 gives a plain weighted walk.
  double alpha{0.2};
  std::size_t max_length{80};
  std::size_t walks_per_node{10};
  std::uint64_t seed{0};
  std::size_t workers{1};
};

inline constexpr double kClassificationAlpha = 0.2;
inline constexpr double kLinkPredictionAlpha = 0.15;

/// Candidate pools for community steps. Each node maps to the sorted,
/// de-duplicated union of the members of every community it belongs to
/// (itself included). Built from a Partition or from overlapping covers.
class CommunityMembership {
 public:
  CommunityMembership() = default;
  explicit CommunityMembership(const Partition& partition);
  /// `communities[c]` lists the members of community c; a node may appear in several.
  CommunityMembership(std::size_t node_count, const std::vector<std::vector<NodeId>>& communities);

  std::size_t node_count() const noexcept { return pool_of_.size(); }
  std::span<const NodeId> pool(NodeId u) const noexcept {
    const std::size_t p = pool_of_[u];
    return {nodes_.data() + offsets_[p], nodes_.data() + offsets_[p + 1]};
  }
  /// True when a and b share at least one community.
  bool same_community(NodeId a, NodeId b) const;

 private:
  std::vector<std::size_t> pool_of_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> nodes_;
};

struct WalkStats {
  std::size_t neighbor_steps{0};
  std::size_t community_steps{0};
  std::size_t backtrack_steps{0};
  std::size_t early_stops{0};

  WalkStats& operator+=(const WalkStats& o) {
    neighbor_steps += o.neighbor_steps;
    community_steps += o.community_steps;
    backtrack_steps += o.backtrack_steps;
    early_stops += o.early_stops;
    return *this;
  }
};

/// One community-aware walk from `start`, at most cfg.max_length nodes.
///
/// Each step draws r in [0,1): r >= alpha takes a weight-proportional
/// out-neighbor step, r < alpha jumps uniformly to another member of the
/// current node's community pool. When the chosen step has no candidate
/// (no out-neighbors, or a pool holding only the current node) the walk
/// backtracks: the most recent path node with an out-neighbor not yet on
/// the path is found and one such fresh neighbor (weight-proportional) is
/// appended. If no such node exists the walk stops early.
std::vector<NodeId> community_aware_walk(const Graph& g, const NeighborSampler& sampler,
                                         const CommunityMembership& membership, NodeId start,
                                         const WalkConfig& cfg, Rng& rng, WalkStats* stats = nullptr);

/// Walks stored back to back.
class WalkCorpus {
 public:
  std::size_t size() const noexcept { return offsets_.size() - 1; }
  bool empty() const noexcept { return size() == 0; }
  std::size_t token_count() const noexcept { return nodes_.size(); }
  std::span<const NodeId> operator[](std::size_t i) const noexcept {
    return {nodes_.data() + offsets_[i], nodes_.data() + offsets_[i + 1]};
  }
  std::span<const NodeId> tokens() const noexcept { return nodes_; }

  void push_back(std::span<const NodeId> walk) {
    nodes_.insert(nodes_.end(), walk.begin(), walk.end());
    offsets_.push_back(nodes_.size());
  }
  void reserve(std::size_t walks, std::size_t tokens) {
    offsets_.reserve(walks + 1);
    nodes_.reserve(tokens);
  }

  friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> nodes_;
};

/// walks_per_node rounds; each round visits a freshly shuffled node order and
/// emits one walk per node. Walk (round, node) uses an RNG stream derived
/// from (seed, round, node), so output is identical for any worker count.
WalkCorpus generate_corpus(const Graph& g, const NeighborSampler& sampler,
                           const CommunityMembership& membership, const WalkConfig& cfg,
                           WalkStats* stats = nullptr);

/// Seed of the RNG stream for walk (round, node).
std::uint64_t walk_stream_seed(std::uint64_t seed, std::size_t round, NodeId node);
/// Node visiting order of one round.
std::vector<NodeId> round_order(std::size_t node_count, std::uint64_t seed, std::size_t round);

/// Replays a walk; returns the index of the first inadmissible transition
/// (or of an out-of-range node), or nullopt if every step is valid.
std::optional<std::size_t> find_invalid_step(const Graph& g, const CommunityMembership& membership,
                                             std::span<const NodeId> walk);

/// One walk per line, space-separated external node names.
void write_walks(std::ostream& out, const Graph& g, const WalkCorpus& corpus);

}  // namespace care
