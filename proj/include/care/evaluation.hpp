#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "care/edge_split.hpp"
#include "care/graph.hpp"
#include "care/logistic.hpp"
#include "care/matrix.hpp"
#include "care/metrics.hpp"
#include "care/pipeline.hpp"

namespace care {

/// Multi-label annotation; nodes without labels have an empty list.
struct LabelSet {
  std::vector<LabelList> node_labels;
  std::vector<std::string> label_names;

  std::size_t label_count() const noexcept { return label_names.size(); }
  std::size_t labeled_count() const noexcept;
};

/// Reads `node label [label ...]` lines; label tokens get dense ids in
/// first-seen order. Repeated node lines merge. Unknown nodes are a ParseError.
LabelSet load_labels(std::istream& in, const Graph& g, std::string_view comment_prefix = "#");
LabelSet load_labels(const std::filesystem::path& path, const Graph& g);

struct EvalReport {
  std::string task;
  std::string dataset;
  double train_fraction{0.0};
  std::string op;
  double alpha{0.0};
  std::uint64_t seed{0};
  std::optional<double> micro_f1;
  std::optional<double> macro_f1;
  std::optional<double> auc;
  /// Labels with no positive training example (constant-negative classifiers).
  std::vector<LabelId> untrained_labels;
};

inline constexpr std::string_view kReportHeader =
    "task,dataset,train_fraction,operator,alpha,seed,micro_f1,macro_f1,auc";

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const EvalReport& report);

/// Top-k prediction: for each row, the k labels with the highest scores
/// (ties to the lower label id).
LabelList top_k_labels(std::span<const double> scores, std::size_t k);

/// One-vs-rest logistic regression on a seeded train_fraction of the
/// labeled nodes; each test node is assigned as many top-scoring labels as
/// it truly has. Fills micro/macro F1.
EvalReport classify_experiment(const DenseMatrix& embeddings, const LabelSet& labels,
                               double train_fraction, std::uint64_t seed,
                               const LogisticConfig& classifier = {});

enum class EdgeOperator { Hadamard, Average, WeightedL1, WeightedL2 };

inline constexpr EdgeOperator kAllEdgeOperators[] = {EdgeOperator::Hadamard, EdgeOperator::Average,
                                                     EdgeOperator::WeightedL1, EdgeOperator::WeightedL2};

std::string_view to_string(EdgeOperator op) noexcept;
/// Accepts hadamard, average, weighted-l1, weighted-l2 (case-insensitive, `_` or `-`).
std::optional<EdgeOperator> parse_edge_operator(std::string_view text);

/// Element-wise edge feature; throws DataError on a dimension mismatch.
std::vector<double> edge_features(std::span<const double> fu, std::span<const double> fv, EdgeOperator op);
void edge_features_into(std::span<const double> fu, std::span<const double> fv, EdgeOperator op,
                        std::span<double> out);

struct LinkPredictionConfig {
  double removal_fraction{0.5};
  EmbedConfig embed{};
  LogisticConfig classifier{};
  std::uint64_t seed{0};
};

/// Link-prediction protocol: split off removal_fraction of the edges, embed
/// the residual graph, train on residual edges against as many sampled
/// non-edges, test on the removed edges against the split's negatives.
/// One report (AUC) per operator, all sharing a single embedding.
std::vector<EvalReport> linkpred_experiment(const Graph& g, const LinkPredictionConfig& cfg,
                                            std::span<const EdgeOperator> operators,
                                            const ProgressFn& progress = {});
EvalReport linkpred_experiment(const Graph& g, const LinkPredictionConfig& cfg, EdgeOperator op);

}  // namespace care
