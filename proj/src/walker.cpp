#include "care/walker.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

#include "care/errors.hpp"

namespace care {

CommunityMembership::CommunityMembership(const Partition& partition) {
  const std::size_t n = partition.node_count();
  pool_of_.assign(partition.assignment().begin(), partition.assignment().end());
  offsets_.reserve(partition.community_count() + 1);
  offsets_.push_back(0);
  nodes_.reserve(n);
  for (CommunityId c = 0; c < partition.community_count(); ++c) {
    const auto members = partition.members(c);
    nodes_.insert(nodes_.end(), members.begin(), members.end());
    offsets_.push_back(nodes_.size());
  }
}

CommunityMembership::CommunityMembership(std::size_t node_count,
                                         const std::vector<std::vector<NodeId>>& communities) {
  std::vector<std::vector<std::size_t>> memberships(node_count);
  for (std::size_t c = 0; c < communities.size(); ++c) {
    for (NodeId u : communities[c]) {
      if (u >= node_count) throw DataError("community member out of range");
      memberships[u].push_back(c);
    }
  }

  std::map<std::vector<std::size_t>, std::size_t> pool_index;
  offsets_.push_back(0);
  pool_of_.resize(node_count);
  std::vector<NodeId> merged;
  for (NodeId u = 0; u < node_count; ++u) {
    auto& ids = memberships[u];
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty()) {
      // Uncovered nodes form their own singleton pool.
      pool_of_[u] = offsets_.size() - 1;
      nodes_.push_back(u);
      offsets_.push_back(nodes_.size());
      continue;
    }
    auto [it, inserted] = pool_index.try_emplace(ids, offsets_.size() - 1);
    if (inserted) {
      merged.clear();
      for (std::size_t c : ids) merged.insert(merged.end(), communities[c].begin(), communities[c].end());
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      nodes_.insert(nodes_.end(), merged.begin(), merged.end());
      offsets_.push_back(nodes_.size());
    }
    pool_of_[u] = it->second;
  }
}

bool CommunityMembership::same_community(NodeId a, NodeId b) const {
  const auto p = pool(a);
  return std::binary_search(p.begin(), p.end(), b);
}

namespace {

// Weight-proportional choice among u's out-neighbors that are not on the path.
std::optional<NodeId> fresh_neighbor(const Graph& g, NodeId u, std::span<const NodeId> on_path,
                                     Rng* rng) {
  const auto adj = g.neighbors(u);
  const auto wts = g.neighbor_weights(u);
  auto fresh = [&](NodeId v) { return !std::binary_search(on_path.begin(), on_path.end(), v); };

  double total = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (fresh(adj[i])) total += wts[i];
  }
  if (total <= 0.0) return std::nullopt;
  if (rng == nullptr) return adj.front();  // existence probe only

  double target = rng->uniform() * total;
  std::optional<NodeId> last;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (!fresh(adj[i])) continue;
    last = adj[i];
    target -= wts[i];
    if (target < 0.0) return adj[i];
  }
  return last;
}

}  // namespace

std::vector<NodeId> community_aware_walk(const Graph& g, const NeighborSampler& sampler,
                                         const CommunityMembership& membership, NodeId start,
                                         const WalkConfig& cfg, Rng& rng, WalkStats* stats) {
  std::vector<NodeId> walk;
  walk.reserve(cfg.max_length);
  walk.push_back(start);
  if (cfg.max_length == 0) return walk;

  NodeId current = start;
  std::vector<NodeId> sorted_path;
  while (walk.size() < cfg.max_length) {
    if (rng.bernoulli(cfg.alpha)) {
      const auto pool = membership.pool(current);
      if (pool.size() > 1) {
        // Uniform over the pool minus `current`, which sits at `self`.
        const auto self =
            static_cast<std::size_t>(std::lower_bound(pool.begin(), pool.end(), current) - pool.begin());
        std::size_t pick = rng.below(pool.size() - 1);
        if (pick >= self) ++pick;
        current = pool[pick];
        walk.push_back(current);
        if (stats) ++stats->community_steps;
        continue;
      }
    } else if (g.out_degree(current) > 0) {
      current = g.neighbors(current)[sampler.sample_entry(g, current, rng)];
      walk.push_back(current);
      if (stats) ++stats->neighbor_steps;
      continue;
    }

    // Backtrack to the latest path node that still has an unvisited neighbor.
    sorted_path.assign(walk.begin(), walk.end());
    std::sort(sorted_path.begin(), sorted_path.end());
    std::optional<NodeId> next;
    for (auto it = walk.rbegin(); it != walk.rend() && !next; ++it) {
      if (fresh_neighbor(g, *it, sorted_path, nullptr)) next = fresh_neighbor(g, *it, sorted_path, &rng);
    }
    if (!next) {
      if (stats) ++stats->early_stops;
      break;
    }
    current = *next;
    walk.push_back(current);
    if (stats) ++stats->backtrack_steps;
  }
  return walk;
}

std::uint64_t walk_stream_seed(std::uint64_t seed, std::size_t round, NodeId node) {
  return derive_seed(seed, round + 1, static_cast<std::uint64_t>(node) + 1);
}

std::vector<NodeId> round_order(std::size_t node_count, std::uint64_t seed, std::size_t round) {
  std::vector<NodeId> order(node_count);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(derive_seed(seed, round + 1, 0));
  rng.shuffle(std::span(order));
  return order;
}

WalkCorpus generate_corpus(const Graph& g, const NeighborSampler& sampler,
                           const CommunityMembership& membership, const WalkConfig& cfg,
                           WalkStats* stats) {
  if (membership.node_count() != g.node_count()) {
    throw DataError("community membership does not cover the graph");
  }
  const std::size_t n = g.node_count();
  const std::size_t total = n * cfg.walks_per_node;

  std::vector<std::vector<NodeId>> walks(total);
  std::vector<std::vector<NodeId>> orders;
  orders.reserve(cfg.walks_per_node);
  for (std::size_t r = 0; r < cfg.walks_per_node; ++r) orders.push_back(round_order(n, cfg.seed, r));

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, std::max<std::size_t>(1, total)));
  std::vector<WalkStats> worker_stats(workers);

  auto run = [&](std::size_t worker) {
    for (std::size_t i = worker; i < total; i += workers) {
      const std::size_t round = i / n;
      const NodeId node = orders[round][i % n];
      Rng rng(walk_stream_seed(cfg.seed, round, node));
      walks[i] = community_aware_walk(g, sampler, membership, node, cfg, rng, &worker_stats[worker]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  WalkCorpus corpus;
  std::size_t tokens = 0;
  for (const auto& w : walks) tokens += w.size();
  corpus.reserve(total, tokens);
  for (auto& w : walks) {
    corpus.push_back(w);
    std::vector<NodeId>().swap(w);
  }
  if (stats) {
    for (const auto& s : worker_stats) *stats += s;
  }
  return corpus;
}

std::optional<std::size_t> find_invalid_step(const Graph& g, const CommunityMembership& membership,
                                             std::span<const NodeId> walk) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> prefix;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (walk[i] >= n) return i;
    if (i > 0) {
      const NodeId a = walk[i - 1];
      const NodeId b = walk[i];
      const bool edge_step = g.has_edge(a, b);
      const bool jump_step = a != b && membership.same_community(a, b);
      bool backtrack_step = false;
      if (!edge_step && !jump_step && !std::binary_search(prefix.begin(), prefix.end(), b)) {
        backtrack_step = std::any_of(prefix.begin(), prefix.end(),
                                     [&](NodeId x) { return g.has_edge(x, b); });
      }
      if (!edge_step && !jump_step && !backtrack_step) return i;
    }
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), walk[i]), walk[i]);
  }
  return std::nullopt;
}

void write_walks(std::ostream& out, const Graph& g, const WalkCorpus& corpus) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto walk = corpus[i];
    for (std::size_t j = 0; j < walk.size(); ++j) {
      if (j) out << ' ';
      out << g.name(walk[j]);
    }
    out << '\n';
  }
}

}  // namespace care
