#include "care/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "care/alias.hpp"
#include "care/errors.hpp"

namespace care {
namespace {

constexpr double kExpClamp = 30.0;
constexpr int kNegativeRedraws = 16;

// -log(sigmoid(x)) without overflow.
double neg_log_sigmoid(double x) noexcept {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// Four independent accumulators let the compiler vectorise without reassociating.
double dot4(const double* a, const double* b, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

bool EmbeddingModel::all_finite() const noexcept {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(input_.data().begin(), input_.data().end(), finite) &&
         std::all_of(output_.data().begin(), output_.data().end(), finite);
}

EmbeddingModel init_embeddings(std::size_t node_count, std::size_t dim, Rng& rng) {
  if (node_count == 0 || dim == 0) throw DataError("embedding needs at least one node and one dimension");
  EmbeddingModel model(node_count, dim);
  const double scale = 1.0 / static_cast<double>(dim);
  for (NodeId u = 0; u < node_count; ++u) {
    for (double& x : model.input(u)) x = (rng.uniform() - 0.5) * scale;
  }
  return model;
}

double sigmoid(double x) noexcept {
  return 1.0 / (1.0 + std::exp(-std::clamp(x, -kExpClamp, kExpClamp)));
}

double score(const EmbeddingModel& model, NodeId u, NodeId v) {
  return sigmoid(dot(model.input(u), model.output(v)));
}

double pair_loss(const EmbeddingModel& model, NodeId center, NodeId context,
                 std::span<const NodeId> negatives) {
  const auto in = model.input(center);
  double loss = neg_log_sigmoid(dot(in, model.output(context)));
  for (NodeId n : negatives) loss += neg_log_sigmoid(-dot(in, model.output(n)));
  return loss;
}

PairGradient pair_loss_gradient(const EmbeddingModel& model, NodeId center, NodeId context,
                                std::span<const NodeId> negatives) {
  const std::size_t d = model.dim();
  const auto in = model.input(center);
  PairGradient grad;
  grad.center.assign(d, 0.0);

  auto accumulate = [&](NodeId target, double coeff, std::vector<double>& target_grad) {
    const auto out = model.output(target);
    target_grad.assign(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      grad.center[k] += coeff * out[k];
      target_grad[k] = coeff * in[k];
    }
  };
  accumulate(context, sigmoid(dot(in, model.output(context))) - 1.0, grad.context);
  grad.negatives.resize(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    accumulate(negatives[i], sigmoid(dot(in, model.output(negatives[i]))), grad.negatives[i]);
  }
  return grad;
}

double sgd_pair_update(EmbeddingModel& model, NodeId center, NodeId context,
                       std::span<const NodeId> negatives, double lr) {
  const std::size_t d = model.dim();
  thread_local std::vector<double> center_step;
  center_step.assign(d, 0.0);
  double* in = model.input(center).data();
  double loss = 0.0;

  auto visit = [&](NodeId target, double label) {
    double* out = model.output(target).data();
    const double x = dot4(in, out, d);
    loss += label > 0.0 ? neg_log_sigmoid(x) : neg_log_sigmoid(-x);
    const double g = (label - sigmoid(x)) * lr;
    for (std::size_t k = 0; k < d; ++k) {
      center_step[k] += g * out[k];
      out[k] += g * in[k];
    }
  };
  visit(context, 1.0);
  for (NodeId n : negatives) visit(n, 0.0);
  for (std::size_t k = 0; k < d; ++k) in[k] += center_step[k];
  return loss;
}

double LearningRateSchedule::at(std::size_t processed) const noexcept {
  if (total_ == 0) return initial_;
  const double progress = static_cast<double>(processed) / static_cast<double>(total_);
  return std::max(floor(), initial_ * (1.0 - progress));
}

std::size_t window_pair_count(std::size_t length, std::size_t window) noexcept {
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(length - 1, i + window);
    pairs += hi - lo;
  }
  return pairs;
}

TrainStats train(const WalkCorpus& corpus, const TrainConfig& cfg, EmbeddingModel& model) {
  TrainStats stats;
  stats.final_lr = cfg.initial_lr;
  if (corpus.empty() || corpus.token_count() == 0) return stats;

  const std::size_t n = model.node_count();
  std::vector<double> frequency(n, 0.0);
  for (NodeId u : corpus.tokens()) {
    if (u >= n) throw DataError("corpus references node " + std::to_string(u) + " outside the model");
    frequency[u] += 1.0;
  }
  for (double& f : frequency) f = std::pow(f, 0.75);
  const AliasTable noise(frequency);

  const LearningRateSchedule schedule(cfg.initial_lr, corpus.token_count());
  std::atomic<std::size_t> processed{0};

  struct Partial {
    std::size_t pairs{0};
    double loss{0.0};
  };

  auto run = [&](std::size_t worker, std::size_t workers, Rng rng, Partial& out) {
    std::vector<NodeId> negatives;
    negatives.reserve(cfg.negatives);
    for (std::size_t w = worker; w < corpus.size(); w += workers) {
      const auto walk = corpus[w];
      const std::size_t len = walk.size();
      for (std::size_t i = 0; i < len; ++i) {
        const double lr = schedule.at(processed.fetch_add(1, std::memory_order_relaxed));
        const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
        const std::size_t hi = std::min(len - 1, i + cfg.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const NodeId context = walk[j];
          negatives.clear();
          for (std::size_t k = 0; k < cfg.negatives; ++k) {
            for (int attempt = 0; attempt < kNegativeRedraws; ++attempt) {
              const auto candidate = static_cast<NodeId>(noise.sample(rng));
              if (candidate != context) {
                negatives.push_back(candidate);
                break;
              }
            }
          }
          out.loss += sgd_pair_update(model, walk[i], context, negatives, lr);
          ++out.pairs;
        }
      }
    }
  };

  const std::size_t workers = cfg.deterministic ? 1 : std::max<std::size_t>(1, cfg.workers);
  std::vector<Partial> partials(workers);
  if (workers == 1) {
    run(0, 1, Rng(cfg.seed), partials[0]);
  } else {
    // Lock-free shared updates: concurrent writes to the same row may be lost.
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back(run, w, workers, Rng(derive_seed(cfg.seed, w)), std::ref(partials[w]));
    }
  }

  for (const auto& p : partials) {
    stats.pairs += p.pairs;
    stats.mean_loss += p.loss;
  }
  stats.positions = processed.load();
  stats.mean_loss = stats.pairs ? stats.mean_loss / static_cast<double>(stats.pairs) : 0.0;
  stats.final_lr = schedule.at(stats.positions > 0 ? stats.positions - 1 : 0);
  return stats;
}

void write_embeddings(std::ostream& out, const Graph& g, const DenseMatrix& vectors) {
  out << vectors.rows() << ' ' << vectors.cols() << '\n';
  for (std::size_t u = 0; u < vectors.rows(); ++u) {
    out << g.name(static_cast<NodeId>(u));
    for (double x : vectors.row(u)) out << ' ' << format_double(x, 9);
    out << '\n';
  }
}

LoadedEmbeddings read_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing embedding header");
  std::size_t rows = 0, cols = 0;
  {
    std::istringstream header(line);
    if (!(header >> rows >> cols) || cols == 0) throw ParseError(1, "expected '<nodes> <dim>' header");
  }
  LoadedEmbeddings result;
  result.vectors = DenseMatrix(rows, cols);
  result.names.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "expected " + std::to_string(rows) + " rows");
    std::istringstream row(line);
    std::string name;
    row >> name;
    auto values = result.vectors.row(r);
    for (std::size_t c = 0; c < cols; ++c) {
      std::string tok;
      if (!(row >> tok)) throw ParseError(line_no, "expected " + std::to_string(cols) + " values");
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), values[c]);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "non-numeric value '" + tok + "'");
      }
    }
    result.names.push_back(std::move(name));
  }
  return result;
}

DenseMatrix align_embeddings(const Graph& g, const LoadedEmbeddings& loaded) {
  DenseMatrix out(g.node_count(), loaded.vectors.cols());
  std::vector<char> filled(g.node_count(), 0);
  for (std::size_t r = 0; r < loaded.names.size(); ++r) {
    const auto id = g.find(loaded.names[r]);
    if (!id) throw DataError("embedding for unknown node '" + loaded.names[r] + "'");
    std::copy_n(loaded.vectors.row(r).begin(), out.cols(), out.row(*id).begin());
    filled[*id] = 1;
  }
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!filled[u]) throw DataError("no embedding for node '" + std::string(g.name(u)) + "'");
  }
  return out;
}

}  // namespace care
