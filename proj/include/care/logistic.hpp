#pragma once

#include <functional>
#include <span>
#include <vector>

#include "care/matrix.hpp"

namespace care {

struct LbfgsOptions {
  int max_iterations{100};
  int history{10};
  /// Stop when the largest gradient component falls below this.
  double gradient_tolerance{1e-5};
  /// Stop when the relative objective decrease falls below this.
  double function_tolerance{2.2e-9};
};

struct LbfgsResult {
  int iterations{0};
  double value{0.0};
  bool converged{false};
};

/// Objective: returns f(x) and writes the gradient into the second argument.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

/// Limited-memory BFGS with a backtracking Armijo line search; x is updated in place.
LbfgsResult minimize_lbfgs(const Objective& objective, std::vector<double>& x,
                           const LbfgsOptions& options = {});

struct LogisticConfig {
  /// Weight penalty (l2/2)*|w|^2 added to the summed log-loss; the bias is not penalised.
  double l2{1.0};
  LbfgsOptions solver{};
};

/// Binary L2-regularised logistic regression.
class LogisticRegression {
 public:
  /// labels[i] is true for the positive class. A single-class training set
  /// yields a constant classifier.
  void fit(const DenseMatrix& features, const std::vector<bool>& labels, const LogisticConfig& config = {});

  double decision(std::span<const double> features) const;
  double probability(std::span<const double> features) const;

  bool is_constant() const noexcept { return constant_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  const LbfgsResult& solver_result() const noexcept { return result_; }

 private:
  std::vector<double> weights_;
  double bias_{0.0};
  bool constant_{false};
  LbfgsResult result_{};
};

}  // namespace care
