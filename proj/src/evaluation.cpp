#include "care/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "care/errors.hpp"

namespace care {

std::size_t LabelSet::labeled_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(node_labels.begin(), node_labels.end(), [](const LabelList& l) { return !l.empty(); }));
}

LabelSet load_labels(std::istream& in, const Graph& g, std::string_view comment_prefix) {
  LabelSet set;
  set.node_labels.resize(g.node_count());
  std::unordered_map<std::string, LabelId> ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string node;
    if (!(tokens >> node)) continue;
    if (!comment_prefix.empty() && std::string_view(node).starts_with(comment_prefix)) continue;
    const auto id = g.find(node);
    if (!id) throw ParseError(line_no, "label for unknown node '" + node + "'");
    std::string label;
    bool any = false;
    while (tokens >> label) {
      auto [it, inserted] = ids.try_emplace(label, static_cast<LabelId>(set.label_names.size()));
      if (inserted) set.label_names.push_back(label);
      set.node_labels[*id].push_back(it->second);
      any = true;
    }
    if (!any) throw ParseError(line_no, "node '" + node + "' has no label");
  }
  for (auto& l : set.node_labels) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return set;
}

LabelSet load_labels(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file '" + path.string() + "'");
  try {
    return load_labels(in, g);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void write_report_header(std::ostream& out) { out << kReportHeader << '\n'; }

void write_report_row(std::ostream& out, const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << r.task << ',' << r.dataset << ',' << format_double(r.train_fraction) << ',' << r.op << ','
      << format_double(r.alpha) << ',' << r.seed << ',' << opt(r.micro_f1) << ',' << opt(r.macro_f1)
      << ',' << opt(r.auc) << '\n';
}

LabelList top_k_labels(std::span<const double> scores, std::size_t k) {
  std::vector<LabelId> order(scores.size());
  std::iota(order.begin(), order.end(), LabelId{0});
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](LabelId a, LabelId b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  LabelList top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(top.begin(), top.end());
  return top;
}

EvalReport classify_experiment(const DenseMatrix& embeddings, const LabelSet& labels,
                               double train_fraction, std::uint64_t seed,
                               const LogisticConfig& classifier) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  if (labels.node_labels.size() != embeddings.rows()) {
    throw DataError("label table does not match the embedding rows");
  }
  std::vector<NodeId> labeled;
  for (NodeId u = 0; u < labels.node_labels.size(); ++u) {
    if (!labels.node_labels[u].empty()) labeled.push_back(u);
  }
  if (labeled.size() < 2) throw DataError("need at least two labeled nodes");

  Rng rng(seed);
  rng.shuffle(std::span(labeled));
  auto train_count = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(labeled.size())));
  train_count = std::clamp<std::size_t>(train_count, 1, labeled.size() - 1);

  const std::size_t d = embeddings.cols();
  const std::size_t label_count = labels.label_count();
  DenseMatrix train_x(train_count, d);
  for (std::size_t i = 0; i < train_count; ++i) {
    std::copy_n(embeddings.row(labeled[i]).begin(), d, train_x.row(i).begin());
  }

  EvalReport report;
  report.task = "classification";
  report.train_fraction = train_fraction;
  report.seed = seed;

  std::vector<LogisticRegression> models(label_count);
  std::vector<bool> y(train_count);
  for (LabelId l = 0; l < label_count; ++l) {
    bool any = false;
    for (std::size_t i = 0; i < train_count; ++i) {
      const auto& ls = labels.node_labels[labeled[i]];
      y[i] = std::binary_search(ls.begin(), ls.end(), l);
      any = any || y[i];
    }
    if (!any) report.untrained_labels.push_back(l);
    models[l].fit(train_x, y, classifier);
  }

  std::vector<LabelList> predicted, truth;
  std::vector<double> scores(label_count);
  for (std::size_t i = train_count; i < labeled.size(); ++i) {
    const auto x = embeddings.row(labeled[i]);
    for (LabelId l = 0; l < label_count; ++l) scores[l] = models[l].decision(x);
    const auto& t = labels.node_labels[labeled[i]];
    predicted.push_back(top_k_labels(scores, t.size()));
    truth.push_back(t);
  }
  const F1Scores f1 = micro_macro_f1(predicted, truth, label_count);
  report.micro_f1 = f1.micro;
  report.macro_f1 = f1.macro;
  return report;
}

std::string_view to_string(EdgeOperator op) noexcept {
  switch (op) {
    case EdgeOperator::Hadamard: return "hadamard";
    case EdgeOperator::Average: return "average";
    case EdgeOperator::WeightedL1: return "weighted-l1";
    case EdgeOperator::WeightedL2: return "weighted-l2";
  }
  return "unknown";
}

std::optional<EdgeOperator> parse_edge_operator(std::string_view text) {
  std::string norm;
  for (char c : text) norm += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (EdgeOperator op : kAllEdgeOperators) {
    if (norm == to_string(op)) return op;
  }
  if (norm == "l1") return EdgeOperator::WeightedL1;
  if (norm == "l2") return EdgeOperator::WeightedL2;
  return std::nullopt;
}

void edge_features_into(std::span<const double> fu, std::span<const double> fv, EdgeOperator op,
                        std::span<double> out) {
  if (fu.size() != fv.size() || out.size() != fu.size()) {
    throw DataError("edge feature dimension mismatch");
  }
  for (std::size_t i = 0; i < fu.size(); ++i) {
    switch (op) {
      case EdgeOperator::Hadamard: out[i] = fu[i] * fv[i]; break;
      case EdgeOperator::Average: out[i] = (fu[i] + fv[i]) / 2.0; break;
      case EdgeOperator::WeightedL1: out[i] = std::abs(fu[i] - fv[i]); break;
      case EdgeOperator::WeightedL2: {
        const double diff = fu[i] - fv[i];
        out[i] = diff * diff;
        break;
      }
    }
  }
}

std::vector<double> edge_features(std::span<const double> fu, std::span<const double> fv, EdgeOperator op) {
  if (fu.size() != fv.size()) throw DataError("edge feature dimension mismatch");
  std::vector<double> out(fu.size());
  edge_features_into(fu, fv, op, out);
  return out;
}

namespace {

enum SplitStream : std::uint64_t { kSplitStream = 101, kTrainNegativeStream, kEmbedStream };

DenseMatrix featurize(const DenseMatrix& emb, std::span<const NodePair> pairs, EdgeOperator op) {
  DenseMatrix x(pairs.size(), emb.cols());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    edge_features_into(emb.row(pairs[i].u), emb.row(pairs[i].v), op, x.row(i));
  }
  return x;
}

}  // namespace

std::vector<EvalReport> linkpred_experiment(const Graph& g, const LinkPredictionConfig& cfg,
                                            std::span<const EdgeOperator> operators,
                                            const ProgressFn& progress) {
  if (progress) progress("split");
  const EdgeSplit split = split_edges(g, cfg.removal_fraction, derive_seed(cfg.seed, kSplitStream));

  EmbedConfig embed = cfg.embed;
  embed.seed = derive_seed(cfg.seed, kEmbedStream);
  const EmbedResult embedded = embed_graph(split.residual, embed, progress);
  const DenseMatrix& emb = embedded.model.input_matrix();

  // Training pairs: residual edges vs fresh non-edges disjoint from the test negatives.
  if (progress) progress("classify");
  std::vector<NodePair> train_pairs;
  for (const Edge& e : split.residual.edges()) train_pairs.push_back({e.src, e.dst});
  const std::size_t train_positive = train_pairs.size();
  {
    const PairKeySet keys = edge_key_set(g);
    PairKeySet taken;
    for (const auto& p : split.negative_edges) taken.insert(pair_key(p.u, p.v));
    Rng rng(derive_seed(cfg.seed, kTrainNegativeStream));
    const auto negatives = sample_non_edges(g.node_count(), train_positive, keys, taken, rng);
    train_pairs.insert(train_pairs.end(), negatives.begin(), negatives.end());
  }
  std::vector<bool> train_y(train_pairs.size(), false);
  std::fill_n(train_y.begin(), train_positive, true);

  std::vector<NodePair> test_pairs;
  for (const Edge& e : split.removed_edges) test_pairs.push_back({e.src, e.dst});
  const std::size_t test_positive = test_pairs.size();
  test_pairs.insert(test_pairs.end(), split.negative_edges.begin(), split.negative_edges.end());
  std::vector<bool> test_y(test_pairs.size(), false);
  std::fill_n(test_y.begin(), test_positive, true);

  std::vector<EvalReport> reports;
  for (EdgeOperator op : operators) {
    LogisticRegression model;
    model.fit(featurize(emb, train_pairs, op), train_y, cfg.classifier);
    const DenseMatrix test_x = featurize(emb, test_pairs, op);
    std::vector<double> scores(test_pairs.size());
    for (std::size_t i = 0; i < test_pairs.size(); ++i) scores[i] = model.decision(test_x.row(i));

    EvalReport r;
    r.task = "link_prediction";
    r.train_fraction = 1.0 - cfg.removal_fraction;
    r.op = std::string(to_string(op));
    r.alpha = cfg.embed.walk.alpha;
    r.seed = cfg.seed;
    r.auc = auc_roc(scores, test_y);
    reports.push_back(std::move(r));
  }
  return reports;
}

EvalReport linkpred_experiment(const Graph& g, const LinkPredictionConfig& cfg, EdgeOperator op) {
  const EdgeOperator ops[] = {op};
  return linkpred_experiment(g, cfg, ops).front();
}

}  // namespace care
