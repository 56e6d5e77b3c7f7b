// Kernelized Pegasos on the hinge loss with K(x,z) = exp(-gamma |x-z|^2) + 1.
// The constant term plays the role of an (implicitly regularized) bias.
// Decision values g_j = sum_i alpha_i y_i K(x_i, x_j) are kept up to date
// incrementally, so a step costs O(1) unless the sample violates the margin.

#include <cmath>
#include <numeric>

#include "see/models.hpp"
#include "see/rng.hpp"

namespace see::detail {
namespace {

double rbf(double gamma, std::span<const double> a, std::span<const double> b) {
  return std::exp(-gamma * squared_distance(a, b));
}

}  // namespace

RbfSvmParams train_rbf_svm(const ModelSpec& spec, const Dataset& data) {
  const std::size_t n = data.size();
  const double lambda = 1.0 / (spec.c * static_cast<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = data.label(i) == ClassLabel::Malicious ? 1.0 : -1.0;
  }

  std::vector<std::size_t> alpha(n, 0);
  std::vector<double> g(n, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.train_seed);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t i : order) {
      ++t;
      const double f = g[i] / (lambda * static_cast<double>(t));
      if (y[i] * f < 1.0) {
        ++alpha[i];
        const auto& xi = data.sample(i);
        for (std::size_t j = 0; j < n; ++j) {
          g[j] += y[i] * (rbf(spec.gamma, xi, data.sample(j)) + 1.0);
        }
      }
    }
  }

  RbfSvmParams p;
  p.gamma = spec.gamma;
  const double scale = 1.0 / (lambda * static_cast<double>(t));
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0) continue;
    double c = scale * static_cast<double>(alpha[i]) * y[i];
    p.support.push_back(data.sample(i));
    p.coef.push_back(c);
    p.bias += c;
  }
  return p;
}

double rbf_decision(const RbfSvmParams& p, std::span<const double> x) {
  double s = p.bias;
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    s += p.coef[i] * rbf(p.gamma, p.support[i], x);
  }
  return s;
}

}  // namespace see::detail
