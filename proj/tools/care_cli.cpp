// care: command-line front end for community-aware network embedding.
//
//   care communities    --edges G --output communities.txt
//   care walks          --edges G --output walks.txt
//   care embed          --edges G --output embeddings.txt [--deterministic]
//   care eval-classify  --labels L (--embeddings E | --edges G) --output report.csv
//   care eval-linkpred  --edges G --operator hadamard --output report.csv
//
// Flags may also come from a flat key=value file given with --config; every
// command that writes a file also writes `<output>.config` with the fully
// resolved settings, which can be fed back through --config.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "care/alias.hpp"
#include "care/community.hpp"
#include "care/errors.hpp"
#include "care/evaluation.hpp"
#include "care/graph.hpp"
#include "care/pipeline.hpp"
#include "care/skipgram.hpp"
#include "care/walker.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

struct RunConfig {
  std::string edges;
  std::string labels;
  std::string embeddings;
  std::string output;
  std::string dataset;
  bool directed{false};
  bool weighted{false};
  double alpha{care::kClassificationAlpha};
  std::size_t walk_length{80};
  std::size_t walks_per_node{10};
  std::size_t dim{care::kDefaultDimension};
  std::size_t window{10};
  double lr{0.025};
  std::size_t negatives{5};
  std::size_t workers{1};
  std::uint64_t seed{0};
  bool deterministic{false};
  std::vector<double> train_fractions{0.5};
  std::vector<std::string> operators{"hadamard"};
  double removal_fraction{0.5};
};

void progress(std::string_view stage) { std::cerr << "[care] " << stage << "...\n"; }

care::Graph load_graph(const RunConfig& cfg) {
  if (cfg.edges.empty()) throw care::DataError("--edges is required");
  progress("load");
  care::EdgeListOptions options;
  options.directed = cfg.directed;
  options.weighted = cfg.weighted;
  care::Graph g = care::load_edge_list(std::filesystem::path(cfg.edges), options);
  std::cerr << "[care] " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  return g;
}

care::EmbedConfig embed_config(const RunConfig& cfg) {
  care::EmbedConfig e;
  e.walk.alpha = cfg.alpha;
  e.walk.max_length = cfg.walk_length;
  e.walk.walks_per_node = cfg.walks_per_node;
  e.walk.workers = cfg.workers;
  e.train.window = cfg.window;
  e.train.initial_lr = cfg.lr;
  e.train.negatives = cfg.negatives;
  e.train.deterministic = cfg.deterministic || cfg.workers <= 1;
  e.train.workers = cfg.deterministic ? 1 : cfg.workers;
  e.dim = cfg.dim;
  e.seed = cfg.seed;
  return e;
}

// Output sink: the named file, or stdout when no path was given.
class Sink {
 public:
  Sink(const std::string& path, std::ios::openmode mode = std::ios::out) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, mode);
      if (!*file_) throw care::DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw care::DataError("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void echo_config(const CLI::App& app, const RunConfig& cfg, const std::string& command) {
  const std::string text = app.config_to_str(true, false);
  std::cerr << "[care] " << command << " config:\n" << text;
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output + ".config");
    out << "# care " << command << '\n' << text;
  }
}

std::string dataset_name(const RunConfig& cfg) {
  if (!cfg.dataset.empty()) return cfg.dataset;
  const std::string& source = !cfg.edges.empty() ? cfg.edges : cfg.labels;
  return std::filesystem::path(source).stem().string();
}

int cmd_communities(const RunConfig& cfg) {
  const care::Graph g = load_graph(cfg);
  progress("community");
  care::LouvainConfig lc;
  lc.seed = cfg.seed;
  const care::Partition p = care::louvain(g, lc);

  Sink sink(cfg.output);
  care::write_communities(sink.stream(), g, p);
  sink.close();

  std::map<std::size_t, std::size_t> histogram;
  for (care::CommunityId c = 0; c < p.community_count(); ++c) ++histogram[p.members(c).size()];
  std::cerr << "modularity " << care::format_double(p.modularity(), 9) << '\n'
            << "communities " << p.community_count() << '\n'
            << "size_histogram";
  for (auto [size, count] : histogram) std::cerr << ' ' << size << ':' << count;
  std::cerr << '\n';
  return kOk;
}

int cmd_walks(const RunConfig& cfg) {
  const care::Graph g = load_graph(cfg);
  progress("community");
  care::LouvainConfig lc;
  lc.seed = cfg.seed;
  const care::Partition p = g.total_weight() > 0.0
                                ? care::louvain(g, lc)
                                : care::Partition::from_assignment(g, std::vector<care::CommunityId>(g.node_count()));
  progress("walk");
  care::WalkConfig wc = embed_config(cfg).walk;
  wc.seed = cfg.seed;
  const care::NeighborSampler sampler(g);
  const care::WalkCorpus corpus = care::generate_corpus(g, sampler, care::CommunityMembership(p), wc);
  Sink sink(cfg.output);
  care::write_walks(sink.stream(), g, corpus);
  sink.close();
  std::cerr << "[care] " << corpus.size() << " walks, " << corpus.token_count() << " tokens\n";
  return kOk;
}

int cmd_embed(const RunConfig& cfg) {
  const care::Graph g = load_graph(cfg);
  const care::EmbedResult r = care::embed_graph(g, embed_config(cfg), progress);
  Sink sink(cfg.output);
  care::write_embeddings(sink.stream(), g, r.model.input_matrix());
  sink.close();
  std::cerr << "[care] modularity " << care::format_double(r.partition.modularity(), 9) << ", "
            << r.partition.community_count() << " communities, " << r.walk_count << " walks, "
            << r.train_stats.pairs << " pairs, mean loss " << care::format_double(r.train_stats.mean_loss, 6)
            << '\n';
  return kOk;
}

void append_reports(const RunConfig& cfg, const std::vector<care::EvalReport>& reports) {
  const bool fresh = cfg.output.empty() || !std::filesystem::exists(cfg.output) ||
                     std::filesystem::file_size(cfg.output) == 0;
  Sink sink(cfg.output, std::ios::out | std::ios::app);
  if (fresh) care::write_report_header(sink.stream());
  for (const auto& r : reports) care::write_report_row(sink.stream(), r);
  sink.close();
}

int cmd_eval_classify(const RunConfig& cfg) {
  if (cfg.labels.empty()) throw care::DataError("--labels is required");
  care::Graph g;
  care::DenseMatrix embeddings;
  if (!cfg.embeddings.empty()) {
    std::ifstream in(cfg.embeddings);
    if (!in) throw care::DataError("cannot open embeddings '" + cfg.embeddings + "'");
    care::LoadedEmbeddings loaded = care::read_embeddings(in);
    g = cfg.edges.empty() ? care::Graph::from_edges(loaded.names.size(), {}, false, loaded.names) : load_graph(cfg);
    embeddings = care::align_embeddings(g, loaded);
  } else {
    g = load_graph(cfg);
    embeddings = care::embed_graph(g, embed_config(cfg), progress).model.input_matrix();
  }
  const care::LabelSet labels = care::load_labels(std::filesystem::path(cfg.labels), g);
  if (labels.labeled_count() == 0) throw care::DataError("no node carries a label");

  std::vector<care::EvalReport> reports;
  for (double fraction : cfg.train_fractions) {
    progress("classify");
    care::EvalReport r = care::classify_experiment(embeddings, labels, fraction, cfg.seed);
    r.dataset = dataset_name(cfg);
    r.alpha = cfg.alpha;
    std::cerr << "[care] train " << fraction << ": micro " << care::format_double(*r.micro_f1, 6)
              << " macro " << care::format_double(*r.macro_f1, 6) << '\n';
    reports.push_back(std::move(r));
  }
  append_reports(cfg, reports);
  return kOk;
}

int cmd_eval_linkpred(const RunConfig& cfg) {
  if (cfg.directed) throw care::DataError("link prediction needs an undirected graph");
  const care::Graph g = load_graph(cfg);
  std::vector<care::EdgeOperator> ops;
  for (const auto& name : cfg.operators) {
    if (name == "all") {
      ops.assign(std::begin(care::kAllEdgeOperators), std::end(care::kAllEdgeOperators));
      continue;
    }
    const auto op = care::parse_edge_operator(name);
    if (!op) throw care::DataError("unknown operator '" + name + "'");
    ops.push_back(*op);
  }
  care::LinkPredictionConfig lp;
  lp.removal_fraction = cfg.removal_fraction;
  lp.embed = embed_config(cfg);
  lp.seed = cfg.seed;
  auto reports = care::linkpred_experiment(g, lp, ops, progress);
  for (auto& r : reports) {
    r.dataset = dataset_name(cfg);
    std::cerr << "[care] " << r.op << ": auc " << care::format_double(*r.auc, 6) << '\n';
  }
  append_reports(cfg, reports);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-aware random walk network embedding"};
  app.set_config("--config", "", "Read flags from a key=value file");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  RunConfig cfg;
  app.add_option("--edges", cfg.edges, "Edge list: `src dst [weight]` per line");
  app.add_option("--labels", cfg.labels, "Label file: `node label [label ...]` per line");
  app.add_option("--embeddings", cfg.embeddings, "Precomputed embeddings (word2vec text)");
  app.add_option("--output", cfg.output, "Output file (stdout when omitted)");
  app.add_option("--dataset", cfg.dataset, "Dataset name for reports");
  app.add_flag("--directed", cfg.directed, "Treat edges as directed");
  app.add_flag("--weighted", cfg.weighted, "Read the weight column");
  auto* alpha = app.add_option("--alpha", cfg.alpha, "Community-jump probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--walk-length", cfg.walk_length, "Maximum walk length")->check(CLI::PositiveNumber);
  app.add_option("--walks-per-node", cfg.walks_per_node, "Walks per node")->check(CLI::PositiveNumber);
  app.add_option("--dim", cfg.dim, "Embedding dimension")->check(CLI::PositiveNumber);
  app.add_option("--window", cfg.window, "Skip-gram window")->check(CLI::PositiveNumber);
  app.add_option("--lr", cfg.lr, "Initial learning rate")->check(CLI::PositiveNumber);
  app.add_option("--negatives", cfg.negatives, "Negative samples per pair")->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_flag("--deterministic", cfg.deterministic, "Single-threaded, bit-reproducible training");
  app.add_option("--train-fraction", cfg.train_fractions, "Classifier train fraction(s)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--operator", cfg.operators, "Edge operator(s): hadamard|average|weighted-l1|weighted-l2|all");
  app.add_option("--removal-fraction", cfg.removal_fraction, "Fraction of edges held out")
      ->check(CLI::Range(0.0, 1.0));

  auto* communities = app.add_subcommand("communities", "Detect communities (Louvain)");
  auto* walks = app.add_subcommand("walks", "Dump the community-aware walk corpus");
  auto* embed = app.add_subcommand("embed", "Learn node embeddings");
  auto* classify = app.add_subcommand("eval-classify", "Multi-label node classification");
  auto* linkpred = app.add_subcommand("eval-linkpred", "Link prediction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::string command;
  for (auto* sub : {communities, walks, embed, classify, linkpred}) {
    if (sub->parsed()) command = sub->get_name();
  }
  if (linkpred->parsed() && alpha->count() == 0) alpha->default_val(care::kLinkPredictionAlpha);

  try {
    echo_config(app, cfg, command);
    if (communities->parsed()) return cmd_communities(cfg);
    if (walks->parsed()) return cmd_walks(cfg);
    if (embed->parsed()) return cmd_embed(cfg);
    if (classify->parsed()) return cmd_eval_classify(cfg);
    if (linkpred->parsed()) return cmd_eval_linkpred(cfg);
  } catch (const care::DataError& e) {
    std::cerr << "care " << command << ": error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "care " << command << ": internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsage;
}
