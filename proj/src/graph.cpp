#include "care/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "care/errors.hpp"

namespace care {

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges, bool directed,
                        std::vector<std::string> names) {
  if (node_count > std::numeric_limits<NodeId>::max()) {
    throw DataError("node count exceeds NodeId range");
  }
  if (!names.empty() && names.size() != node_count) {
    throw DataError("name table size does not match node count");
  }

  Graph g;
  g.directed_ = directed;
  g.offsets_.assign(node_count + 1, 0);
  g.degree_.assign(node_count, 0.0);

  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw DataError("edge endpoint out of range");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw DataError("edge weight must be positive and finite");
    }
    ++g.offsets_[e.src + 1];
    if (!directed && e.src != e.dst) ++g.offsets_[e.dst + 1];
    g.total_weight_ += e.weight;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  g.targets_.resize(g.offsets_.back());
  g.weights_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  auto place = [&](NodeId from, NodeId to, double w) {
    const std::size_t slot = cursor[from]++;
    g.targets_[slot] = to;
    g.weights_[slot] = w;
  };
  for (const Edge& e : edges) {
    place(e.src, e.dst, e.weight);
    g.degree_[e.src] += e.weight;
    if (!directed) {
      if (e.src != e.dst) place(e.dst, e.src, e.weight);
      g.degree_[e.dst] += e.weight;
    }
  }

  // Sort each segment by target so has_edge can binary search; stable keeps
  // parallel edges in input order.
  std::vector<std::pair<NodeId, double>> scratch;
  for (std::size_t u = 0; u < node_count; ++u) {
    const std::size_t begin = g.offsets_[u];
    const std::size_t end = g.offsets_[u + 1];
    if (end - begin < 2) continue;
    scratch.clear();
    for (std::size_t i = begin; i < end; ++i) scratch.emplace_back(g.targets_[i], g.weights_[i]);
    std::stable_sort(scratch.begin(), scratch.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = begin; i < end; ++i) {
      g.targets_[i] = scratch[i - begin].first;
      g.weights_[i] = scratch[i - begin].second;
    }
  }

  g.edges_ = std::move(edges);
  if (names.empty()) {
    names.reserve(node_count);
    for (std::size_t u = 0; u < node_count; ++u) names.push_back(std::to_string(u));
  }
  g.names_ = std::move(names);
  g.index_.reserve(node_count);
  for (std::size_t u = 0; u < node_count; ++u) {
    if (!g.index_.emplace(g.names_[u], static_cast<NodeId>(u)).second) {
      throw DataError("duplicate node name '" + g.names_[u] + "'");
    }
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  const auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<NodeId> Graph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Graph Graph::symmetrized() const {
  return from_edges(node_count(), edges_, false, names_);
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string_view trim_left(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

}  // namespace

Graph load_edge_list(std::istream& in, const EdgeListOptions& options) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Edge> edges;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(names.size()));
    if (inserted) names.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim_left(line);
    if (body.empty()) continue;
    if (!options.comment_prefix.empty() && body.starts_with(options.comment_prefix)) continue;

    const auto tokens = split_tokens(body);
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw ParseError(line_no, "expected 'src dst [weight]', got " + std::to_string(tokens.size()) +
                                    " tokens");
    }
    double weight = 1.0;
    if (tokens.size() == 3 && options.weighted) {
      const auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), weight);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(weight)) {
        throw ParseError(line_no, "non-numeric weight '" + std::string(tok) + "'");
      }
      if (weight <= 0.0) {
        throw ParseError(line_no, "weight must be positive, got " + std::string(tok));
      }
    }
    for (std::size_t i = 0; i < 2; ++i) {
      const auto tok = tokens[i];
      if (!std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError(line_no, "node id must be a non-negative integer, got '" + std::string(tok) + "'");
      }
    }
    const NodeId src = intern(tokens[0]);
    const NodeId dst = intern(tokens[1]);
    edges.push_back({src, dst, weight});
  }
  if (in.bad()) throw DataError("read error after line " + std::to_string(line_no));

  const std::size_t n = names.size();
  return Graph::from_edges(n, std::move(edges), options.directed, std::move(names));
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path.string() + "'");
  try {
    return load_edge_list(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void write_edge_list(std::ostream& out, const Graph& g, std::span<const Edge> edges) {
  for (const Edge& e : edges) {
    out << g.name(e.src) << ' ' << g.name(e.dst) << ' ' << format_double(e.weight) << '\n';
  }
}

void write_edge_list(std::ostream& out, const Graph& g) { write_edge_list(out, g, g.edges()); }

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_double(double value, int significant_digits) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, significant_digits);
  return std::string(buf, ptr);
}

}  // namespace care
