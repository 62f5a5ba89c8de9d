#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace care {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src{0};
  NodeId dst{0};
  double weight{1.0};

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable weighted graph in compressed adjacency form.
///
/// Undirected edges are stored in both endpoints' lists; a self-loop is
/// stored once but counts twice towards the weighted degree. Parallel edges
/// stay separate entries. Directed graphs keep out-edges only.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. `names` maps dense ids to external labels;
  /// when empty, decimal ids are used. Throws DataError on bad ids/weights.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges, bool directed,
                          std::vector<std::string> names = {});

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// Number of input edges; an undirected edge counts once.
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }
  /// Sum of edge weights, each undirected edge counted once.
  double total_weight() const noexcept { return total_weight_; }

  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::span<const double> neighbor_weights(NodeId u) const noexcept {
    return {weights_.data() + offsets_[u], weights_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
  std::size_t adjacency_offset(NodeId u) const noexcept { return offsets_[u]; }
  std::size_t adjacency_size() const noexcept { return targets_.size(); }

  /// k_u: incident weight (out-weight when directed), undirected self-loops twice.
  double weighted_degree(NodeId u) const noexcept { return degree_[u]; }

  /// Input edges in insertion order.
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(NodeId u, NodeId v) const noexcept;

  std::string_view name(NodeId u) const noexcept { return names_[u]; }
  std::span<const std::string> names() const noexcept { return names_; }
  std::optional<NodeId> find(std::string_view name) const;

  /// Undirected view of a directed graph (each arc becomes an edge); copy if already undirected.
  Graph symmetrized() const;

 private:
  bool directed_{false};
  double total_weight_{0.0};
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<double> degree_;
  std::vector<Edge> edges_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

struct EdgeListOptions {
  bool directed{false};
  /// When false the optional weight column is ignored and every edge gets 1.0.
  bool weighted{true};
  std::string comment_prefix{"#"};
};

/// Parses `src dst [weight]` lines. Node ids are non-negative integer tokens,
/// mapped to dense NodeIds in first-seen order and kept as names. Throws ParseError with the line number.
Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

/// Writes `src dst weight` lines using external names; weights round-trip exactly.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(std::ostream& out, const Graph& g, std::span<const Edge> edges);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Fixed significant-digit formatting (`%.{digits}g`).
std::string format_double(double value, int significant_digits);

}  // namespace care
