#include "care/edge_split.hpp"

#include <fstream>
#include <numeric>

#include "care/errors.hpp"

namespace care {

PairKeySet edge_key_set(const Graph& g) {
  PairKeySet keys;
  keys.reserve(g.edge_count() * 2);
  for (const Edge& e : g.edges()) keys.insert(pair_key(e.src, e.dst));
  return keys;
}

std::vector<NodePair> sample_non_edges(std::size_t node_count, std::size_t count,
                                       const PairKeySet& edges, PairKeySet& exclude, Rng& rng) {
  std::vector<NodePair> out;
  if (count == 0) return out;

  const std::uint64_t n = node_count;
  const std::uint64_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  std::uint64_t taken = 0;
  for (std::uint64_t key : edges) {
    if ((key >> 32) != (key & 0xffffffffULL)) ++taken;
  }
  for (std::uint64_t key : exclude) {
    if (!edges.contains(key)) ++taken;
  }
  const std::uint64_t available = all_pairs - std::min(all_pairs, taken);
  if (available < count) {
    throw DataError("graph too dense: " + std::to_string(available) +
                    " non-edges available, " + std::to_string(count) + " requested");
  }

  out.reserve(count);
  if (available < 4 * static_cast<std::uint64_t>(count)) {
    // Dense regime: enumerate the complement and take a random prefix.
    std::vector<NodePair> pool;
    pool.reserve(available);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const auto key = pair_key(u, v);
        if (!edges.contains(key) && !exclude.contains(key)) pool.push_back({u, v});
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      out.push_back(pool[i]);
      exclude.insert(pair_key(pool[i].u, pool[i].v));
    }
    return out;
  }

  while (out.size() < count) {
    auto u = static_cast<NodeId>(rng.below(n));
    auto v = static_cast<NodeId>(rng.below(n));
    if (u == v) continue;
    const auto key = pair_key(u, v);
    if (edges.contains(key) || exclude.contains(key)) continue;
    exclude.insert(key);
    if (u > v) std::swap(u, v);
    out.push_back({u, v});
  }
  return out;
}

EdgeSplit split_edges(const Graph& g, double removal_fraction, std::uint64_t seed) {
  if (g.directed()) throw DataError("edge splitting requires an undirected graph");
  if (!(removal_fraction > 0.0 && removal_fraction < 1.0)) {
    throw DataError("removal fraction must lie in (0, 1)");
  }
  const auto edges = g.edges();
  const auto removed_count =
      static_cast<std::size_t>(removal_fraction * static_cast<double>(edges.size()));
  if (removed_count < 1) throw DataError("removal fraction selects no edge");

  Rng rng(seed);
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));

  std::vector<char> removed(edges.size(), 0);
  for (std::size_t i = 0; i < removed_count; ++i) removed[order[i]] = 1;

  EdgeSplit split;
  std::vector<Edge> kept;
  kept.reserve(edges.size() - removed_count);
  split.removed_edges.reserve(removed_count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    (removed[i] ? split.removed_edges : kept).push_back(edges[i]);
  }
  split.residual = Graph::from_edges(g.node_count(), std::move(kept), false,
                                     std::vector<std::string>(g.names().begin(), g.names().end()));

  const PairKeySet keys = edge_key_set(g);
  PairKeySet drawn;
  split.negative_edges = sample_non_edges(g.node_count(), removed_count, keys, drawn, rng);
  return split;
}

void write_edge_split(const EdgeSplit& split, const std::filesystem::path& residual_path,
                      const std::filesystem::path& positives_path,
                      const std::filesystem::path& negatives_path) {
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw DataError("cannot write '" + p.string() + "'");
    return out;
  };
  const Graph& g = split.residual;
  {
    auto out = open(residual_path);
    write_edge_list(out, g);
  }
  {
    auto out = open(positives_path);
    write_edge_list(out, g, split.removed_edges);
  }
  {
    auto out = open(negatives_path);
    for (const auto& p : split.negative_edges) out << g.name(p.u) << ' ' << g.name(p.v) << '\n';
  }
}

}  // namespace care
