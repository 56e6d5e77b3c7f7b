// Pegasos-style primal subgradient descent on the regularized hinge loss
//   lambda/2 |w|^2 + 1/n sum max(0, 1 - y (w.x + b)),  lambda = 1/(c n)
// The bias rides along as a constant input feature. Step size 1/(lambda t).
// The returned weights average the iterates of the final epoch.

#include <cmath>
#include <numeric>

#include "see/errors.hpp"
#include "see/models.hpp"
#include "see/rng.hpp"

namespace see::detail {

LinearSvmParams train_linear_svm(const ModelSpec& spec, const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double lambda = 1.0 / (spec.c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);

  // w[d] is the bias weight.
  std::vector<double> w(d + 1, 0.0);
  std::vector<double> avg(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.train_seed);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    const bool last = epoch + 1 == spec.epochs;
    for (std::size_t idx : order) {
      ++t;
      const auto& x = data.sample(idx);
      const double y = data.label(idx) == ClassLabel::Malicious ? 1.0 : -1.0;
      double margin = w[d];
      for (std::size_t j = 0; j < d; ++j) margin += w[j] * x[j];
      margin *= y;

      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) w[j] += eta * y * x[j];
        w[d] += eta * y;
      }
      double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (norm > radius) {
        for (double& v : w) v *= radius / norm;
      }
      if (last) {
        for (std::size_t j = 0; j <= d; ++j) avg[j] += w[j];
      }
    }
  }
  for (double& v : avg) v /= static_cast<double>(n);

  LinearSvmParams p;
  p.w.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(d));
  p.b = avg[d];
  return p;
}

ClassLabel predict_linear(const LinearSvmParams& p, std::span<const double> x) {
  double s = p.b + dot(p.w, x);
  return s >= 0.0 ? ClassLabel::Malicious : ClassLabel::Legitimate;
}

}  // namespace see::detail
