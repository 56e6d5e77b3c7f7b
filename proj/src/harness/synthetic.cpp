#include <cmath>
#include <numbers>

#include "see/errors.hpp"
#include "see/harness.hpp"
#include "see/normalizer.hpp"

namespace see {
namespace {

Dataset blobs(const SyntheticSpec& spec, Rng& rng) {
  const double offset = spec.separation / std::sqrt(static_cast<double>(spec.d));
  std::vector<FeatureVector> samples;
  std::vector<ClassLabel> labels;
  for (std::size_t i = 0; i < spec.n; ++i) {
    // Alternate classes so any n is balanced within one sample.
    const bool malicious = i % 2 == 1;
    FeatureVector x(spec.d);
    for (double& v : x) v = rng.gaussian() + (malicious ? offset : 0.0);
    samples.push_back(std::move(x));
    labels.push_back(malicious ? ClassLabel::Malicious : ClassLabel::Legitimate);
  }
  return Dataset(std::move(samples), std::move(labels));
}

Dataset moons(const SyntheticSpec& spec, Rng& rng) {
  std::vector<FeatureVector> samples;
  std::vector<ClassLabel> labels;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool malicious = i % 2 == 1;
    const double t = std::numbers::pi * rng.uniform01();
    FeatureVector x(2);
    if (malicious) {
      x[0] = 1.0 - std::cos(t);
      x[1] = 0.5 - std::sin(t);
    } else {
      x[0] = std::cos(t);
      x[1] = std::sin(t);
    }
    for (double& v : x) v += spec.noise * rng.gaussian();
    samples.push_back(std::move(x));
    labels.push_back(malicious ? ClassLabel::Malicious : ClassLabel::Legitimate);
  }
  return Dataset(std::move(samples), std::move(labels));
}

}  // namespace

nlohmann::json SyntheticSpec::to_json() const {
  return {{"generator", generator}, {"d", d}, {"separation", separation},
          {"n", n}, {"noise", noise}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  SyntheticSpec s;
  s.generator = j.value("generator", s.generator);
  s.d = j.value("d", s.d);
  s.separation = j.value("separation", s.separation);
  s.n = j.value("n", s.n);
  s.noise = j.value("noise", s.noise);
  return s;
}

Dataset make_synthetic(const SyntheticSpec& spec, Rng& rng) {
  if (spec.n < 2) throw ConfigError("synthetic data needs n >= 2");
  Dataset raw;
  if (spec.generator == "blobs") {
    if (spec.d < 1) throw ConfigError("blobs need d >= 1");
    raw = blobs(spec, rng);
  } else if (spec.generator == "moons") {
    if (spec.d != 2) throw ConfigError("moons are two-dimensional");
    if (spec.noise < 0.0) throw ConfigError("moons noise must be >= 0");
    raw = moons(spec, rng);
  } else {
    throw ConfigError("unknown synthetic generator '" + spec.generator + "'");
  }
  return apply_normalizer(fit_normalizer(raw), raw, true);
}

}  // namespace see
