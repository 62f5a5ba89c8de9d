#include "care/pipeline.hpp"

#include "care/alias.hpp"
#include "care/errors.hpp"

namespace care {
namespace {

enum SeedStream : std::uint64_t { kLouvainStream = 1, kWalkStream, kInitStream, kTrainStream };

template <class F>
auto run_stage(const char* stage, const ProgressFn& progress, F&& body) {
  if (progress) progress(stage);
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const DataError& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

EmbedResult embed_graph(const Graph& g, const EmbedConfig& cfg, const ProgressFn& progress) {
  EmbedResult result;

  result.partition = run_stage("community", progress, [&] {
    LouvainConfig config = cfg.louvain;
    config.seed = derive_seed(cfg.seed, kLouvainStream);
    return care::louvain(g, config);
  });

  WalkCorpus corpus = run_stage("walk", progress, [&] {
    WalkConfig walk = cfg.walk;
    walk.seed = derive_seed(cfg.seed, kWalkStream);
    const NeighborSampler sampler(g);
    const CommunityMembership membership(result.partition);
    return generate_corpus(g, sampler, membership, walk, &result.walk_stats);
  });
  result.walk_count = corpus.size();
  result.token_count = corpus.token_count();

  run_stage("train", progress, [&] {
    Rng init_rng(derive_seed(cfg.seed, kInitStream));
    result.model = init_embeddings(g.node_count(), cfg.dim, init_rng);
    TrainConfig train = cfg.train;
    train.seed = derive_seed(cfg.seed, kTrainStream);
    result.train_stats = care::train(corpus, train, result.model);
    return 0;
  });
  if (!result.model.all_finite()) throw InvariantError("training produced non-finite parameters");
  return result;
}

}  // namespace care
