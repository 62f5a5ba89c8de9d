#include "care/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "care/errors.hpp"

namespace care {

F1Scores micro_macro_f1(std::span<const LabelList> predicted, std::span<const LabelList> truth,
                        std::size_t label_count) {
  if (predicted.size() != truth.size()) throw DataError("prediction and truth sizes differ");
  if (predicted.empty()) throw DataError("empty evaluation set");
  if (label_count == 0) throw DataError("empty label universe");

  std::vector<std::size_t> tp(label_count, 0), fp(label_count, 0), fn(label_count, 0);
  auto check = [&](LabelId l) {
    if (l >= label_count) throw DataError("label id outside the label universe");
  };
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto& p = predicted[i];
    const auto& t = truth[i];
    for (LabelId l : p) {
      check(l);
      if (std::binary_search(t.begin(), t.end(), l)) ++tp[l]; else ++fp[l];
    }
    for (LabelId l : t) {
      check(l);
      if (!std::binary_search(p.begin(), p.end(), l)) ++fn[l];
    }
  }

  const double sum_tp = static_cast<double>(std::accumulate(tp.begin(), tp.end(), std::size_t{0}));
  const double sum_fp = static_cast<double>(std::accumulate(fp.begin(), fp.end(), std::size_t{0}));
  const double sum_fn = static_cast<double>(std::accumulate(fn.begin(), fn.end(), std::size_t{0}));

  auto f1 = [](double tp_, double fp_, double fn_) {
    const double precision = tp_ + fp_ > 0.0 ? tp_ / (tp_ + fp_) : 0.0;
    const double recall = tp_ + fn_ > 0.0 ? tp_ / (tp_ + fn_) : 0.0;
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  };

  F1Scores scores;
  scores.micro = f1(sum_tp, sum_fp, sum_fn);
  double macro = 0.0;
  for (std::size_t l = 0; l < label_count; ++l) {
    macro += f1(static_cast<double>(tp[l]), static_cast<double>(fp[l]), static_cast<double>(fn[l]));
  }
  scores.macro = macro / static_cast<double>(label_count);
  return scores;
}

double auc_roc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw DataError("score and label sizes differ");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw DataError("AUC needs both positive and negative examples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U: for each tie block, positives beat every earlier negative
  // and half of the negatives inside the block.
  double wins = 0.0;
  std::size_t negatives_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t block_pos = 0, block_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? block_pos : block_neg)++;
      ++j;
    }
    wins += static_cast<double>(block_pos) *
            (static_cast<double>(negatives_below) + 0.5 * static_cast<double>(block_neg));
    negatives_below += block_neg;
    i = j;
  }
  return wins / (static_cast<double>(positives) * static_cast<double>(negatives));
}

}  // namespace care
