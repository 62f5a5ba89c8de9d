#include <doctest.h>

#include <map>
#include <sstream>

#include "care/alias.hpp"
#include "care/community.hpp"
#include "care/walker.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace care;

namespace {

Partition one_community(const Graph& g) {
  return Partition::from_assignment(g, std::vector<CommunityId>(g.node_count(), 0));
}

Partition singletons(const Graph& g) {
  std::vector<CommunityId> c(g.node_count());
  std::iota(c.begin(), c.end(), CommunityId{0});
  return Partition::from_assignment(g, c);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph::from_edges(n, edges, false);
}

// Exact single-step transition probability when both step kinds always have a candidate.
double transition(const Graph& g, const CommunityMembership& m, double alpha, NodeId a, NodeId b) {
  double neighbor = 0.0;
  const auto adj = g.neighbors(a);
  const auto w = g.neighbor_weights(a);
  double total = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    total += w[i];
    if (adj[i] == b) neighbor += w[i];
  }
  const auto pool = m.pool(a);
  const bool in_pool = a != b && std::binary_search(pool.begin(), pool.end(), b);
  return (1.0 - alpha) * neighbor / total + alpha * (in_pool ? 1.0 / static_cast<double>(pool.size() - 1) : 0.0);
}

}  // namespace

TEST_CASE("isolated start yields a length-1 walk") {
  const Graph g = Graph::from_edges(3, {{0, 1}}, false);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  Rng rng(1);
  for (double alpha : {0.0, 0.2, 1.0}) {
    const auto walk = community_aware_walk(g, s, m, 2, {.alpha = alpha, .max_length = 10}, rng);
    CHECK(walk == std::vector<NodeId>{2});
  }
}

TEST_CASE("path graph with alpha 0 bounces along the edge") {
  const Graph g = Graph::from_edges(2, {{0, 1}}, false);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  Rng rng(1);
  const auto walk = community_aware_walk(g, s, m, 0, {.alpha = 0.0, .max_length = 5}, rng);
  CHECK(walk == std::vector<NodeId>{0, 1, 0, 1, 0});
}

TEST_CASE("dead ends backtrack to a fresh neighbor or stop") {
  // Directed: 0 -> 1 -> 2 and 0 -> 3; 2 and 3 are sinks.
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 3}}, true);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  WalkStats stats;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto walk = community_aware_walk(g, s, m, 0, {.alpha = 0.0, .max_length = 10}, rng, &stats);
    CHECK(walk.size() == 4);  // one branch, a backtrack to the other, then exhaustion
    CHECK_FALSE(find_invalid_step(g, m, walk).has_value());
    std::vector<NodeId> sorted = walk;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<NodeId>{0, 1, 2, 3});
  }
  CHECK(stats.early_stops == 50);
  CHECK(stats.backtrack_steps > 0);
}

TEST_CASE("community-only walks on a singleton pool backtrack") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}}, false);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  Rng rng(4);
  WalkStats stats;
  const auto walk = community_aware_walk(g, s, m, 0, {.alpha = 1.0, .max_length = 10}, rng, &stats);
  CHECK(walk == std::vector<NodeId>{0, 1, 2});
  CHECK(stats.community_steps == 0);
  CHECK(stats.early_stops == 1);
}

TEST_CASE("community jump rate tracks alpha") {
  SUBCASE("K4, alpha 0.5, 1e5 steps") {
    const Graph g = complete_graph(4);
    const NeighborSampler s(g);
    const CommunityMembership m(one_community(g));
    Rng rng(6);
    WalkStats stats;
    std::size_t steps = 0;
    while (steps < 100000) {
      const auto walk = community_aware_walk(g, s, m, static_cast<NodeId>(steps % 4),
                                             {.alpha = 0.5, .max_length = 100}, rng, &stats);
      steps += walk.size() - 1;
    }
    const double rate = double(stats.community_steps) / double(stats.community_steps + stats.neighbor_steps);
    CHECK(stats.backtrack_steps == 0);
    CHECK(std::abs(rate - 0.5) < 0.01);
  }
}

TEST_CASE("overlapping communities pool their members") {
  const CommunityMembership m(6, {{0, 1, 2}, {2, 3}, {4}});
  auto pool = [&](NodeId u) {
    const auto p = m.pool(u);
    return std::vector<NodeId>(p.begin(), p.end());
  };
  CHECK(pool(0) == std::vector<NodeId>{0, 1, 2});
  CHECK(pool(2) == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(pool(3) == std::vector<NodeId>{2, 3});
  CHECK(pool(4) == std::vector<NodeId>{4});
  CHECK(pool(5) == std::vector<NodeId>{5});
  CHECK(m.same_community(3, 2));
  CHECK_FALSE(m.same_community(3, 0));

  // Jumps from node 2 land uniformly on {0, 1, 3}.
  const Graph g = Graph::from_edges(6, {{2, 5}}, false);
  const NeighborSampler s(g);
  Rng rng(12);
  std::map<NodeId, long> seen;
  for (int i = 0; i < 30000; ++i) {
    const auto walk = community_aware_walk(g, s, m, 2, {.alpha = 1.0, .max_length = 2}, rng);
    ++seen[walk[1]];
  }
  const std::map<NodeId, double> expected{{0, 1.0 / 3}, {1, 1.0 / 3}, {3, 1.0 / 3}};
  const auto [stat, bins] = stats::chi2_statistic(expected, seen, 30000);
  CHECK(stat < stats::chi2_critical(bins - 1));
}

TEST_CASE("walk paths follow the exact step distribution") {
  // Weighted graph where every node has neighbors and a community partner.
  const Graph g = Graph::from_edges(
      6, {{0, 1, 3.0}, {0, 2, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {3, 4, 1.0}, {3, 5, 4.0}, {4, 5, 1.0}, {1, 1, 1.0}},
      false);
  const NeighborSampler s(g);
  const CommunityMembership m(Partition::from_assignment(g, std::vector<CommunityId>{0, 0, 0, 1, 1, 1}));

  for (double alpha : {0.0, 0.2, 0.7}) {
    CAPTURE(alpha);
    // Exact distribution of 4-node paths from node 2.
    std::map<std::vector<NodeId>, double> exact;
    for (NodeId a = 0; a < 6; ++a) {
      for (NodeId b = 0; b < 6; ++b) {
        for (NodeId c = 0; c < 6; ++c) {
          const double p = transition(g, m, alpha, 2, a) * transition(g, m, alpha, a, b) * transition(g, m, alpha, b, c);
          if (p > 0.0) exact[{2, a, b, c}] = p;
        }
      }
    }
    std::map<std::vector<NodeId>, long> seen;
    const long draws = 200000;
    for (long i = 0; i < draws; ++i) {
      Rng rng(walk_stream_seed(99, 0, static_cast<NodeId>(i)));
      ++seen[community_aware_walk(g, s, m, 2, {.alpha = alpha, .max_length = 4}, rng)];
    }
    const auto [stat, bins] = stats::chi2_statistic(exact, seen, draws);
    CHECK(stat < stats::chi2_critical(bins - 1));
  }
}

TEST_CASE("alpha 0 matches an independent weighted walk in distribution") {
  Rng gen(77);
  for (int trial = 0; trial < 5; ++trial) {
    Graph g = oracle::random_small_graph(gen, 6);
    const NeighborSampler s(g);
    const Partition p = louvain(g, {.seed = 1});
    const CommunityMembership m(p);
    const NodeId start = 0;
    if (g.out_degree(start) == 0) continue;

    std::map<std::vector<NodeId>, long> a, b;
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
      Rng r1(walk_stream_seed(5, 1, static_cast<NodeId>(i)));
      Rng r2(walk_stream_seed(5, 1, static_cast<NodeId>(i)));
      ++a[community_aware_walk(g, s, m, start, {.alpha = 0.0, .max_length = 3}, r1)];
      ++b[oracle::weighted_walk(g, start, 3, r2)];
    }
    // Two-sample chi-square over the union of observed paths.
    std::map<std::vector<NodeId>, bool> keys;
    for (const auto& [k, v] : a) keys[k] = true;
    for (const auto& [k, v] : b) keys[k] = true;
    double stat = 0.0;
    int bins = 0;
    for (const auto& [k, unused] : keys) {
      const double x = a.count(k) ? double(a[k]) : 0.0;
      const double y = b.count(k) ? double(b[k]) : 0.0;
      if (x + y < 10) continue;
      stat += (x - y) * (x - y) / (x + y);
      ++bins;
    }
    if (bins > 1) CHECK(stat < stats::chi2_critical(bins - 1));
  }
}

TEST_CASE("corpus shape, validity and worker independence") {
  Rng gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = oracle::random_small_graph(gen, 8);
    const NeighborSampler s(g);
    const CommunityMembership m(louvain(g, {.seed = 2}));
    const WalkConfig cfg{.alpha = 0.3, .max_length = 12, .walks_per_node = 3, .seed = 42};
    const WalkCorpus one = generate_corpus(g, s, m, cfg);
    CHECK(one.size() == 3 * g.node_count());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].size() >= 1);
      CHECK(one[i].size() <= cfg.max_length);
      CHECK_FALSE(find_invalid_step(g, m, one[i]).has_value());
    }
    // Each round starts exactly one walk at every node.
    for (std::size_t r = 0; r < 3; ++r) {
      std::vector<int> starts(g.node_count(), 0);
      for (std::size_t i = r * g.node_count(); i < (r + 1) * g.node_count(); ++i) ++starts[one[i][0]];
      CHECK(std::all_of(starts.begin(), starts.end(), [](int c) { return c == 1; }));
    }
    for (std::size_t workers : {2u, 3u, 8u}) {
      WalkConfig parallel = cfg;
      parallel.workers = workers;
      CHECK(generate_corpus(g, s, m, parallel) == one);
    }
    WalkConfig other = cfg;
    other.seed = 43;
    CHECK_FALSE(generate_corpus(g, s, m, other) == one);
  }
}

TEST_CASE("single node corpus") {
  const Graph g = Graph::from_edges(1, {}, false);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  const WalkCorpus c = generate_corpus(g, s, m, {.walks_per_node = 1});
  REQUIRE(c.size() == 1);
  CHECK(c[0].size() == 1);
}

TEST_CASE("replay checker rejects inadmissible steps") {
  const Graph g = oracle::barbell();
  const CommunityMembership m(Partition::from_assignment(g, std::vector<CommunityId>{0, 0, 0, 1, 1, 1}));
  const std::vector<NodeId> good{0, 1, 2, 3, 5, 4};
  const std::vector<NodeId> bad{0, 1, 4};
  const std::vector<NodeId> out_of_range{0, 9};
  CHECK_FALSE(find_invalid_step(g, m, good).has_value());
  CHECK(find_invalid_step(g, m, bad) == std::size_t{2});
  CHECK(find_invalid_step(g, m, out_of_range) == std::size_t{1});
}

TEST_CASE("walk dump writes one line per walk") {
  const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}}, false);
  const NeighborSampler s(g);
  const CommunityMembership m(singletons(g));
  const WalkCorpus c = generate_corpus(g, s, m, {.max_length = 6, .walks_per_node = 2, .seed = 1});
  std::ostringstream out;
  write_walks(out, g, c);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0, single = 0;
  while (std::getline(in, line)) {
    ++lines;
    if (line == "4") ++single;
  }
  CHECK(lines == 10);
  CHECK(single == 2);
}
