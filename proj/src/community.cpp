#include "care/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "care/errors.hpp"

namespace care {
namespace {

// Dense relabel in order of first appearance; returns the community count.
std::size_t relabel_dense(std::vector<CommunityId>& assignment) {
  constexpr auto unset = std::numeric_limits<CommunityId>::max();
  std::vector<CommunityId> remap;
  CommunityId next = 0;
  for (CommunityId& c : assignment) {
    if (c >= remap.size()) remap.resize(static_cast<std::size_t>(c) + 1, unset);
    if (remap[c] == unset) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

}  // namespace

Partition Partition::from_assignment(const Graph& g, std::span<const CommunityId> assignment) {
  if (assignment.size() != g.node_count()) {
    throw DataError("assignment size does not match node count");
  }
  Partition p;
  p.assignment_.assign(assignment.begin(), assignment.end());
  const std::size_t count = relabel_dense(p.assignment_);

  p.offsets_.assign(count + 1, 0);
  for (CommunityId c : p.assignment_) ++p.offsets_[c + 1];
  std::partial_sum(p.offsets_.begin(), p.offsets_.end(), p.offsets_.begin());
  p.members_.resize(p.assignment_.size());
  std::vector<std::size_t> cursor(p.offsets_.begin(), p.offsets_.end() - 1);
  for (NodeId u = 0; u < p.assignment_.size(); ++u) p.members_[cursor[p.assignment_[u]]++] = u;

  p.modularity_ = g.total_weight() > 0.0 ? care::modularity(g, p.assignment_)
                                         : std::numeric_limits<double>::quiet_NaN();
  return p;
}

double modularity(const Graph& g, std::span<const CommunityId> assignment) {
  if (assignment.size() != g.node_count()) {
    throw DataError("assignment size does not match node count");
  }
  const double m = g.total_weight();
  if (!(m > 0.0)) throw DataError("graph has no edges");

  CommunityId max_id = 0;
  for (CommunityId c : assignment) max_id = std::max(max_id, c);
  std::vector<double> internal(static_cast<std::size_t>(max_id) + 1, 0.0);
  std::vector<double> total(internal.size(), 0.0);

  // Each edge (directed or not) contributes A_uv + A_vu = 2w; a self-loop has A_uu = 2w.
  for (const Edge& e : g.edges()) {
    const CommunityId cu = assignment[e.src];
    const CommunityId cv = assignment[e.dst];
    if (cu == cv) internal[cu] += 2.0 * e.weight;
    total[cu] += e.weight;
    total[cv] += e.weight;
  }
  const double two_m = 2.0 * m;
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) {
    const double share = total[c] / two_m;
    q += internal[c] / two_m - share * share;
  }
  return q;
}

double local_moving_pass(const Graph& working, std::vector<CommunityId>& assignment, Rng& rng,
                         const MoveObserver& observer) {
  const std::size_t n = working.node_count();
  if (assignment.size() != n) throw DataError("assignment size does not match node count");
  const double m = working.total_weight();
  if (!(m > 0.0)) throw DataError("graph has no edges");
  const double two_m = 2.0 * m;

  std::vector<double> total(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    if (assignment[u] >= n) throw DataError("community id out of range");
    total[assignment[u]] += working.weighted_degree(u);
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  rng.shuffle(std::span(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<CommunityId> touched;

  constexpr int kMaxSweeps = 10000;
  double gain = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool moved = false;
    for (NodeId u : order) {
      const CommunityId current = assignment[u];
      const double k = working.weighted_degree(u);

      touched.clear();
      const auto adj = working.neighbors(u);
      const auto wts = working.neighbor_weights(u);
      for (std::size_t i = 0; i < adj.size(); ++i) {
        if (adj[i] == u) continue;
        const CommunityId c = assignment[adj[i]];
        if (!seen[c]) {
          seen[c] = 1;
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += wts[i];
      }

      total[current] -= k;
      const double current_score = (seen[current] ? link[current] : 0.0) - total[current] * k / two_m;
      CommunityId best = current;
      double best_score = current_score;
      for (CommunityId c : touched) {
        if (c == current) continue;
        const double score = link[c] - total[c] * k / two_m;
        if (score > best_score || (score == best_score && best != current && c < best)) {
          best = c;
          best_score = score;
        }
      }
      // Guard against accepting pure rounding noise as an improvement.
      if (best != current && !(best_score - current_score > 1e-12 * std::max(1.0, k))) {
        best = current;
      }
      total[best] += k;
      if (best != current) {
        assignment[u] = best;
        const double delta = (best_score - current_score) / m;
        gain += delta;
        moved = true;
        if (observer) observer(u, current, best, delta);
      }
      for (CommunityId c : touched) seen[c] = 0;
    }
    if (!moved) break;
  }
  return gain;
}

Graph aggregate_graph(const Graph& working, std::span<const CommunityId> assignment) {
  if (assignment.size() != working.node_count()) {
    throw DataError("assignment size does not match node count");
  }
  std::size_t count = 0;
  for (CommunityId c : assignment) count = std::max<std::size_t>(count, static_cast<std::size_t>(c) + 1);

  std::vector<std::pair<std::uint64_t, double>> keyed;
  keyed.reserve(working.edge_count());
  for (const Edge& e : working.edges()) {
    const CommunityId a = assignment[e.src];
    const CommunityId b = assignment[e.dst];
    const CommunityId lo = std::min(a, b);
    const CommunityId hi = std::max(a, b);
    keyed.emplace_back((static_cast<std::uint64_t>(lo) << 32) | hi, e.weight);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<Edge> merged;
  for (std::size_t i = 0; i < keyed.size();) {
    const std::uint64_t key = keyed[i].first;
    double w = 0.0;
    for (; i < keyed.size() && keyed[i].first == key; ++i) w += keyed[i].second;
    merged.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffULL), w});
  }
  return Graph::from_edges(count, std::move(merged), false);
}

Partition louvain(const Graph& g, const LouvainConfig& config, LouvainTrace* trace) {
  if (!(g.total_weight() > 0.0)) throw DataError("graph has no edges");

  Graph symmetric;
  const Graph* base = &g;
  if (g.directed()) {
    symmetric = g.symmetrized();
    base = &symmetric;
  }

  Rng rng(config.seed);
  std::vector<CommunityId> node_community(g.node_count());
  std::iota(node_community.begin(), node_community.end(), CommunityId{0});

  Graph level;
  for (int pass = 0; pass < config.max_passes; ++pass) {
    const Graph& work = pass == 0 ? *base : level;
    std::vector<CommunityId> assignment(work.node_count());
    std::iota(assignment.begin(), assignment.end(), CommunityId{0});

    const double gain = local_moving_pass(work, assignment, rng);
    const std::size_t count = relabel_dense(assignment);
    for (CommunityId& c : node_community) c = assignment[c];

    if (trace) {
      trace->modularity.push_back(modularity(*base, node_community));
      trace->gain.push_back(gain);
      trace->communities.push_back(count);
    }
    if (gain < config.min_gain || count == work.node_count()) break;
    Graph next = aggregate_graph(work, assignment);
    level = std::move(next);
  }
  return Partition::from_assignment(*base, node_community);
}

void write_communities(std::ostream& out, const Graph& g, const Partition& p) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    out << g.name(u) << ' ' << p.community_of(u) << '\n';
  }
}

}  // namespace care
