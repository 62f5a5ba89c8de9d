#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "care/alias.hpp"
#include "care/edge_split.hpp"
#include "care/errors.hpp"
#include "care/graph.hpp"
#include "oracles.hpp"

using namespace care;

namespace {

Graph parse(const std::string& text, EdgeListOptions options = {}) {
  std::istringstream in(text);
  return load_edge_list(in, options);
}

// (u, v, weight) adjacency entries as a sorted multiset.
std::vector<std::tuple<NodeId, NodeId, double>> adjacency_multiset(const Graph& g) {
  std::vector<std::tuple<NodeId, NodeId, double>> out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto adj = g.neighbors(u);
    const auto w = g.neighbor_weights(u);
    for (std::size_t i = 0; i < adj.size(); ++i) out.emplace_back(u, adj[i], w[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("path graph loads with dense ids") {
  const Graph g = parse("0 1\n1 2\n");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.total_weight() == 2.0);
  CHECK_FALSE(g.directed());
  CHECK(g.name(0) == "0");
  CHECK(g.find("2") == NodeId{2});
  CHECK_FALSE(g.find("9").has_value());
}

TEST_CASE("ids are assigned in first-seen order") {
  const Graph g = parse("# header\n17 4 2\n\n4 100\n");
  REQUIRE(g.node_count() == 3);
  CHECK(g.name(0) == "17");
  CHECK(g.name(1) == "4");
  CHECK(g.name(2) == "100");
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 1));
  // weights ignored unless requested
  CHECK(parse("17 4 2\n", {.weighted = false}).total_weight() == 1.0);
  CHECK(parse("17 4 2\n").total_weight() == 2.0);
}

TEST_CASE("malformed lines report the line number") {
  auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("0 x\n") == 1);
  CHECK(line_of("0 1\n1\n") == 2);
  CHECK(line_of("0 1 2 3\n") == 1);
  CHECK(line_of("0 1\n0 2 abc\n") == 2);
  CHECK(line_of("0 1 0\n") == 1);
  CHECK(line_of("0 1 -1\n") == 1);
  CHECK(line_of("0 1 nan\n") == 1);
  CHECK(line_of("0 1 inf\n") == 1);
  CHECK(line_of("0 1\n-1 2\n") == 2);
}

TEST_CASE("weighted degree conventions") {
  const Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, false);
  for (NodeId u = 0; u < 3; ++u) CHECK(tri.weighted_degree(u) == 2.0);

  CHECK(oracle::barbell().weighted_degree(2) == 3.0);

  const Graph loop = Graph::from_edges(1, {{0, 0, 1.0}}, false);
  CHECK(loop.weighted_degree(0) == 2.0);
  CHECK(loop.total_weight() == 1.0);
  CHECK(loop.out_degree(0) == 1);

  const Graph dir = Graph::from_edges(3, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 0.5}}, true);
  CHECK(dir.weighted_degree(0) == 2.5);
  CHECK(dir.weighted_degree(2) == 0.0);
  CHECK(dir.has_edge(0, 1));
  CHECK_FALSE(dir.has_edge(1, 0));
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}, false), DataError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, 0.0}}, false), DataError);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, -3.0}}, false), DataError);
}

TEST_CASE("parallel edges are kept and undirected adjacency is symmetric") {
  const Graph g = parse("0 1 1\n0 1 2\n1 2 1\n2 2 4\n");
  CHECK(g.edge_count() == 4);
  CHECK(g.out_degree(0) == 2);
  CHECK(g.total_weight() == 8.0);
  CHECK(g.weighted_degree(2) == 9.0);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph r = oracle::random_small_graph(rng);
    std::map<std::tuple<NodeId, NodeId, double>, int> count;
    for (NodeId u = 0; u < r.node_count(); ++u) {
      for (std::size_t i = 0; i < r.out_degree(u); ++i) ++count[{u, r.neighbors(u)[i], r.neighbor_weights(u)[i]}];
    }
    for (const auto& [key, c] : count) {
      const auto [u, v, w] = key;
      CHECK(count[{v, u, w}] == c);
    }
  }
}

TEST_CASE("edge list round-trips") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_small_graph(rng);
    std::ostringstream out;
    write_edge_list(out, g);
    const Graph back = parse(out.str());
    // Relabel through names, since first-seen order may differ.
    std::vector<std::tuple<std::string, std::string, double>> a, b;
    for (const Edge& e : g.edges()) a.emplace_back(g.name(e.src), g.name(e.dst), e.weight);
    for (const Edge& e : back.edges()) b.emplace_back(back.name(e.src), back.name(e.dst), e.weight);
    CHECK(a == b);
    if (back.node_count() == g.node_count()) CHECK(adjacency_multiset(back).size() == adjacency_multiset(g).size());
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 2.5}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.123456789123, 4) == "0.1235");
}

TEST_CASE("symmetrized directed graph") {
  const Graph dir = Graph::from_edges(3, {{0, 1, 2.0}, {1, 0, 1.0}, {1, 2, 1.0}}, true);
  const Graph u = dir.symmetrized();
  CHECK_FALSE(u.directed());
  CHECK(u.weighted_degree(0) == 3.0);
  CHECK(u.weighted_degree(1) == 4.0);
  CHECK(u.total_weight() == dir.total_weight());
}

TEST_CASE("alias sampling follows weights") {
  SUBCASE("single neighbor and isolated node") {
    const Graph g = Graph::from_edges(3, {{0, 1}}, false);
    const NeighborSampler s(g);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(sample_neighbor(g, s, 0, rng) == NodeId{1});
    CHECK_FALSE(sample_neighbor(g, s, 2, rng).has_value());
  }
  SUBCASE("3:1 weights give 0.75 +- 0.01") {
    const Graph g = Graph::from_edges(3, {{0, 1, 3.0}, {0, 2, 1.0}}, false);
    const NeighborSampler s(g);
    Rng rng(2);
    int a = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) a += *sample_neighbor(g, s, 0, rng) == 1;
    CHECK(std::abs(a / double(draws) - 0.75) < 0.01);
  }
  SUBCASE("parallel edges accumulate") {
    const Graph g = Graph::from_edges(3, {{0, 1, 1.0}, {0, 1, 1.0}, {0, 2, 2.0}, {0, 1, 1.0}}, false);
    const NeighborSampler s(g);
    Rng rng(3);
    int a = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) a += *sample_neighbor(g, s, 0, rng) == 1;
    const double sigma = std::sqrt(0.6 * 0.4 / draws);
    CHECK(std::abs(a / double(draws) - 0.6) < 3 * sigma);
  }
  SUBCASE("every node within 3 sigma on random graphs") {
    Rng gen(4);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = oracle::random_small_graph(gen);
      const NeighborSampler s(g);
      Rng rng(100 + trial);
      const int draws = 100000;
      for (NodeId u = 0; u < g.node_count(); ++u) {
        if (g.out_degree(u) == 0) continue;
        std::map<NodeId, double> expected;
        double total = 0.0;
        for (std::size_t i = 0; i < g.out_degree(u); ++i) {
          expected[g.neighbors(u)[i]] += g.neighbor_weights(u)[i];
          total += g.neighbor_weights(u)[i];
        }
        std::map<NodeId, int> seen;
        for (int i = 0; i < draws; ++i) ++seen[*sample_neighbor(g, s, u, rng)];
        for (const auto& [v, w] : expected) {
          const double p = w / total;
          const double sigma = std::sqrt(p * (1 - p) / draws);
          CHECK(std::abs(seen[v] / double(draws) - p) <= 3 * sigma + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("alias table reproduces its distribution exactly") {
  const std::vector<double> w{1, 2, 3, 4, 0.5};
  const AliasTable t(w);
  double total = 0;
  for (double x : w) total += x;
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(t.probability(i) == doctest::Approx(w[i] / total).epsilon(1e-12));
}

TEST_CASE("edge split partitions the edge multiset") {
  Rng gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_small_graph(gen, 12);
    const std::size_t n = g.node_count();
    if (g.edge_count() < 2 || n * (n - 1) / 2 < g.edge_count() + g.edge_count() / 2) continue;
    const EdgeSplit split = split_edges(g, 0.5, 77 + trial);
    CHECK(split.removed_edges.size() == g.edge_count() / 2);
    CHECK(split.negative_edges.size() == split.removed_edges.size());
    CHECK(split.residual.node_count() == g.node_count());

    std::vector<std::tuple<NodeId, NodeId, double>> all, parts;
    for (const Edge& e : g.edges()) all.emplace_back(e.src, e.dst, e.weight);
    for (const Edge& e : split.residual.edges()) parts.emplace_back(e.src, e.dst, e.weight);
    for (const Edge& e : split.removed_edges) parts.emplace_back(e.src, e.dst, e.weight);
    std::sort(all.begin(), all.end());
    std::sort(parts.begin(), parts.end());
    CHECK(all == parts);

    PairKeySet negs;
    for (const NodePair& p : split.negative_edges) {
      CHECK(p.u != p.v);
      CHECK_FALSE(g.has_edge(p.u, p.v));
      CHECK(negs.insert(pair_key(p.u, p.v)).second);
    }
  }
}

TEST_CASE("edge split edge cases") {
  const Graph two = Graph::from_edges(2, {{0, 1}}, false);
  CHECK_THROWS_AS(split_edges(two, 0.5, 1), DataError);  // floor(0.5) = 0 edges
  CHECK_THROWS_AS(split_edges(two, 1.0, 1), DataError);
  CHECK_THROWS_AS(split_edges(Graph::from_edges(2, {{0, 1}}, true), 0.5, 1), DataError);

  // K4 has no non-edges left to sample.
  const Graph k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, false);
  CHECK_THROWS_WITH_AS(split_edges(k4, 0.5, 1), doctest::Contains("dense"), DataError);

  // 10 edges at 0.5 remove 5.
  std::vector<Edge> ring;
  for (NodeId u = 0; u < 10; ++u) ring.push_back({u, static_cast<NodeId>((u + 1) % 10)});
  const Graph r = Graph::from_edges(10, ring, false);
  const EdgeSplit a = split_edges(r, 0.5, 3);
  const EdgeSplit b = split_edges(r, 0.5, 3);
  CHECK(a.removed_edges.size() == 5);
  CHECK(a.removed_edges == b.removed_edges);
  CHECK(a.negative_edges == b.negative_edges);
}
