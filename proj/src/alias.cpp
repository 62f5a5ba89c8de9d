#include "care/alias.hpp"

#include <numeric>

#include "care/errors.hpp"

namespace care {
namespace {

// Vose's construction over weights[0..n); writes prob/alias into the given slots.
void build_alias(std::span<const double> weights, double* prob, std::uint32_t* alias,
                 std::vector<std::uint32_t>& small, std::vector<std::uint32_t>& large) {
  const std::size_t n = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DataError("alias table needs a positive total weight");

  small.clear();
  large.clear();
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = weights[i] * static_cast<double>(n) / total;
    alias[i] = static_cast<std::uint32_t>(i);
    (prob[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    alias[s] = l;
    prob[l] = (prob[l] + prob[s]) - 1.0;
    if (prob[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t i : large) prob[i] = 1.0;
  for (std::uint32_t i : small) prob[i] = 1.0;
}

}  // namespace

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  if (weights.empty()) return;
  std::vector<std::uint32_t> small, large;
  build_alias(weights, prob_.data(), alias_.data(), small, large);
}

double AliasTable::probability(std::size_t i) const {
  const double n = static_cast<double>(prob_.size());
  double p = prob_[i] / n;
  for (std::size_t j = 0; j < prob_.size(); ++j) {
    if (j != i && alias_[j] == i) p += (1.0 - prob_[j]) / n;
  }
  return p;
}

NeighborSampler::NeighborSampler(const Graph& g)
    : prob_(g.adjacency_size()), alias_(g.adjacency_size()) {
  std::vector<std::uint32_t> small, large;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.out_degree(u) == 0) continue;
    const std::size_t base = g.adjacency_offset(u);
    build_alias(g.neighbor_weights(u), prob_.data() + base, alias_.data() + base, small, large);
  }
}

}  // namespace care
