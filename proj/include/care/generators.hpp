#pragma once

#include <cstdint>
#include <vector>

#include "care/community.hpp"
#include "care/graph.hpp"

namespace care {

/// LFR-style benchmark: power-law degrees and community sizes, with a
/// fraction `mixing` of every node's edges leaving its community.
struct PlantedGraphConfig {
  std::size_t nodes{1000};
  double average_degree{15.0};
  std::size_t max_degree{50};
  double degree_exponent{2.5};
  std::size_t min_community{20};
  std::size_t max_community{100};
  double community_exponent{1.5};
  double mixing{0.3};
  std::uint64_t seed{0};
};

struct PlantedGraph {
  Graph graph;
  /// Planted community of every node.
  std::vector<CommunityId> community;
  std::size_t community_count{0};
};

/// Simple undirected graph (no self-loops or parallel edges) with planted communities.
PlantedGraph generate_planted_graph(const PlantedGraphConfig& config);

}  // namespace care
