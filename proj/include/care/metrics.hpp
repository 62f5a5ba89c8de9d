#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace care {

using LabelId = std::uint32_t;
/// Sorted, de-duplicated label ids of one node.
using LabelList = std::vector<LabelId>;

struct F1Scores {
  double micro{0.0};
  double macro{0.0};
};

/// Micro-F1 from pooled TP/FP/FN (precision and recall first), macro-F1 as
/// the mean per-label F1 over all `label_count` labels; a label with no
/// TP, FP or FN scores 0. Throws DataError on empty or mismatched input.
F1Scores micro_macro_f1(std::span<const LabelList> predicted, std::span<const LabelList> truth,
                        std::size_t label_count);

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Throws DataError unless both classes are present.
double auc_roc(std::span<const double> scores, const std::vector<bool>& labels);

}  // namespace care
