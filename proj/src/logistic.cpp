#include "care/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "care/errors.hpp"

namespace care {
namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& objective, std::vector<double>& x,
                           const LbfgsOptions& options) {
  const std::size_t n = x.size();
  std::vector<double> grad(n), next_x(n), next_grad(n), direction(n);
  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> alpha(static_cast<std::size_t>(std::max(1, options.history)));

  LbfgsResult result;
  double value = objective(x, grad);
  result.value = value;
  if (max_abs(grad) <= options.gradient_tolerance) {
    result.converged = true;
    return result;
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Two-loop recursion: direction = -H * grad.
    std::copy(grad.begin(), grad.end(), direction.begin());
    for (std::size_t k = memory.size(); k-- > 0;) {
      const Pair& p = memory[k];
      double a = 0.0;
      for (std::size_t i = 0; i < n; ++i) a += p.s[i] * direction[i];
      a *= p.rho;
      alpha[k] = a;
      for (std::size_t i = 0; i < n; ++i) direction[i] -= a * p.y[i];
    }
    double gamma = 1.0;
    if (!memory.empty()) {
      const Pair& last = memory.back();
      double yy = 0.0;
      for (double v : last.y) yy += v * v;
      gamma = 1.0 / (last.rho * yy);
    } else {
      gamma = 1.0 / std::max(1.0, std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0)));
    }
    for (double& d : direction) d *= gamma;
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const Pair& p = memory[k];
      double b = 0.0;
      for (std::size_t i = 0; i < n; ++i) b += p.y[i] * direction[i];
      b *= p.rho;
      for (std::size_t i = 0; i < n; ++i) direction[i] += p.s[i] * (alpha[k] - b);
    }
    for (double& d : direction) d = -d;

    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += grad[i] * direction[i];
    if (slope >= 0.0) {
      // Not a descent direction; restart from steepest descent.
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
      slope = -std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
    }

    double step = 1.0;
    double next_value = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) next_x[i] = x[i] + step * direction[i];
      next_value = objective(next_x, next_grad);
      if (std::isfinite(next_value) && next_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.iterations = iter + 1;
    if (!accepted) break;

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = next_x[i] - x[i];
      p.y[i] = next_grad[i] - grad[i];
      sy += p.s[i] * p.y[i];
    }
    const double previous = value;
    x.swap(next_x);
    grad.swap(next_grad);
    value = next_value;
    result.value = value;

    if (sy > 1e-12) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > static_cast<std::size_t>(options.history)) memory.pop_front();
    }
    if (max_abs(grad) <= options.gradient_tolerance ||
        (previous - value) <= options.function_tolerance * std::max({std::abs(previous), std::abs(value), 1.0})) {
      result.converged = true;
      break;
    }
  }
  return result;
}

void LogisticRegression::fit(const DenseMatrix& features, const std::vector<bool>& labels,
                             const LogisticConfig& config) {
  const std::size_t rows = features.rows();
  const std::size_t d = features.cols();
  if (labels.size() != rows) throw DataError("label count does not match feature rows");
  if (rows == 0) throw DataError("empty training set");

  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  weights_.assign(d, 0.0);
  result_ = {};
  if (positives == 0 || positives == rows) {
    constant_ = true;
    bias_ = positives == 0 ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    return;
  }
  constant_ = false;

  // Parameters: d weights followed by the bias.
  std::vector<double> params(d + 1, 0.0);
  const double l2 = config.l2;
  auto objective = [&](std::span<const double> p, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto x = features.row(r);
      double z = p[d];
      for (std::size_t k = 0; k < d; ++k) z += p[k] * x[k];
      const double sign = labels[r] ? 1.0 : -1.0;
      loss += log1pexp(-sign * z);
      // d/dz log(1 + exp(-s z)) = -s * sigmoid(-s z)
      const double t = -sign * z;
      const double coeff = -sign * (t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)));
      for (std::size_t k = 0; k < d; ++k) grad[k] += coeff * x[k];
      grad[d] += coeff;
    }
    for (std::size_t k = 0; k < d; ++k) {
      loss += 0.5 * l2 * p[k] * p[k];
      grad[k] += l2 * p[k];
    }
    return loss;
  };
  result_ = minimize_lbfgs(objective, params, config.solver);
  std::copy_n(params.begin(), d, weights_.begin());
  bias_ = params[d];
}

double LogisticRegression::decision(std::span<const double> features) const {
  if (constant_) return bias_;
  double z = bias_;
  for (std::size_t k = 0; k < weights_.size(); ++k) z += weights_[k] * features[k];
  return z;
}

double LogisticRegression::probability(std::span<const double> features) const {
  const double z = decision(features);
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace care
