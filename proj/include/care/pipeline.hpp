#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "care/community.hpp"
#include "care/errors.hpp"
#include "care/graph.hpp"
#include "care/skipgram.hpp"
#include "care/walker.hpp"

namespace care {

/// End-to-end embedding settings. The per-stage seeds inside `louvain`,
/// `walk` and `train` are ignored; every stage derives its own stream from `seed`.
struct EmbedConfig {
  LouvainConfig louvain{};
  WalkConfig walk{};
  TrainConfig train{};
  std::size_t dim{kDefaultDimension};
  std::uint64_t seed{0};
};

struct EmbedResult {
  Partition partition;
  EmbeddingModel model;
  WalkStats walk_stats;
  TrainStats train_stats;
  std::size_t walk_count{0};
  std::size_t token_count{0};
};

/// Called at the start of each stage ("community", "walk", "train").
using ProgressFn = std::function<void(std::string_view stage)>;

/// Raised by embed_graph; names the stage that failed.
class StageError : public DataError {
 public:
  StageError(std::string stage, const std::string& what)
      : DataError(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Communities, then the walk corpus, then skip-gram training.
EmbedResult embed_graph(const Graph& g, const EmbedConfig& cfg, const ProgressFn& progress = {});

}  // namespace care
