#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "care/graph.hpp"
#include "care/matrix.hpp"
#include "care/rng.hpp"
#include "care/walker.hpp"

namespace care {

/// Input (node) and output (context) vectors; the embedding is the input matrix.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::size_t node_count, std::size_t dim)
      : input_(node_count, dim), output_(node_count, dim) {}

  std::size_t node_count() const noexcept { return input_.rows(); }
  std::size_t dim() const noexcept { return input_.cols(); }

  std::span<double> input(NodeId u) noexcept { return input_.row(u); }
  std::span<const double> input(NodeId u) const noexcept { return input_.row(u); }
  std::span<double> output(NodeId u) noexcept { return output_.row(u); }
  std::span<const double> output(NodeId u) const noexcept { return output_.row(u); }

  const DenseMatrix& input_matrix() const noexcept { return input_; }
  const DenseMatrix& output_matrix() const noexcept { return output_; }

  bool all_finite() const noexcept;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;

 private:
  DenseMatrix input_;
  DenseMatrix output_;
};

inline constexpr std::size_t kDefaultDimension = 128;

/// Input entries i.i.d. uniform on [-0.5/d, 0.5/d); output entries zero.
EmbeddingModel init_embeddings(std::size_t node_count, std::size_t dim, Rng& rng);

/// Logistic function with the exponent clamped to [-30, 30].
double sigmoid(double x) noexcept;

/// sigma(input(u) . output(v)).
double score(const EmbeddingModel& model, NodeId u, NodeId v);

/// Negative-sampling loss of one (center, context) pair:
/// -log s(u.v) - sum_n log s(-u.n).
double pair_loss(const EmbeddingModel& model, NodeId center, NodeId context,
                 std::span<const NodeId> negatives);

struct PairGradient {
  std::vector<double> center;                  // d loss / d input(center)
  std::vector<double> context;                 // d loss / d output(context)
  std::vector<std::vector<double>> negatives;  // d loss / d output(negatives[i])
};

/// Analytic gradient of pair_loss. Duplicate negatives each get their own entry.
PairGradient pair_loss_gradient(const EmbeddingModel& model, NodeId center, NodeId context,
                                std::span<const NodeId> negatives);

/// One SGD step on pair_loss with learning rate lr; returns the pre-update loss.
/// Output rows are updated as targets are visited, the center row once at the end.
double sgd_pair_update(EmbeddingModel& model, NodeId center, NodeId context,
                       std::span<const NodeId> negatives, double lr);

struct TrainConfig {
  std::size_t window{10};
  double initial_lr{0.025};
  std::size_t negatives{5};
  std::uint64_t seed{0};
  /// Single trainer thread, bit-reproducible. Otherwise `workers` threads
  /// update the shared matrices without locking.
  bool deterministic{true};
  std::size_t workers{1};
};

inline constexpr double kMinLearningRateRatio = 1e-4;

/// Linear decay from initial to initial * 1e-4 over `total` center positions.
class LearningRateSchedule {
 public:
  LearningRateSchedule(double initial, std::size_t total) : initial_(initial), total_(total) {}
  double at(std::size_t processed) const noexcept;
  double floor() const noexcept { return initial_ * kMinLearningRateRatio; }

 private:
  double initial_;
  std::size_t total_;
};

struct TrainStats {
  std::size_t positions{0};
  std::size_t pairs{0};
  double mean_loss{0.0};
  double final_lr{0.0};
};

/// Skip-gram with negative sampling over every walk position and every
/// in-walk context within `window`. Negatives follow unigram^0.75 of corpus
/// frequencies. Throws DataError if the corpus names a node outside the model.
TrainStats train(const WalkCorpus& corpus, const TrainConfig& cfg, EmbeddingModel& model);

/// Number of (center, context) pairs a walk of `length` produces.
std::size_t window_pair_count(std::size_t length, std::size_t window) noexcept;

/// word2vec text format: `|V| d`, then `name v1 .. vd` with 9 significant digits.
void write_embeddings(std::ostream& out, const Graph& g, const DenseMatrix& vectors);

struct LoadedEmbeddings {
  std::vector<std::string> names;
  DenseMatrix vectors;
};

LoadedEmbeddings read_embeddings(std::istream& in);

/// Rows of `loaded` reordered to g's node ids. Throws DataError on unknown or missing nodes.
DenseMatrix align_embeddings(const Graph& g, const LoadedEmbeddings& loaded);

}  // namespace care
