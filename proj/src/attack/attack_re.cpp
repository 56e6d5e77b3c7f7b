#include "see/attack_re.hpp"

#include <cmath>
#include <optional>

#include "see/errors.hpp"

namespace see {
namespace {

constexpr int kMaxRedraws = 100;

FeatureVector gram_schmidt_probe(std::span<const double> x_l,
                                 std::span<const double> x_m,
                                 std::optional<double> magnitude, double lambda_max,
                                 Rng& rng) {
  require_dim(x_l.size(), x_m.size());
  const std::size_t d = x_l.size();
  FeatureVector x0(d);
  for (std::size_t j = 0; j < d; ++j) x0[j] = x_l[j] - x_m[j];
  const double x0_sq = dot(x0, x0);
  if (x0_sq == 0.0) throw Error("orthonormal_probe: x_L and x_M coincide");

  FeatureVector xr(d);
  double norm = 0.0;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxRedraws) {
      throw Error("orthonormal_probe: no direction orthogonal to x_L - x_M "
                  "(dimension must be >= 2)");
    }
    for (double& v : xr) v = rng.gaussian();
    const double coef = dot(xr, x0) / x0_sq;
    for (std::size_t j = 0; j < d; ++j) xr[j] -= coef * x0[j];
    norm = std::sqrt(dot(xr, xr));
    if (norm > 1e-12) break;
  }

  const double lambda = magnitude ? *magnitude : rng.uniform(0.0, lambda_max);
  FeatureVector xs(d);
  for (std::size_t j = 0; j < d; ++j) {
    xs[j] = xr[j] * (lambda / norm) + 0.5 * (x_l[j] + x_m[j]);
  }
  return xs;
}

}  // namespace

void ReConfig::validate() const {
  if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be > 0");
  if (!(r_exploit > 0.0)) throw ConfigError("R_Exploit must be > 0");
  if (!(surrogate_c > 0.0)) throw ConfigError("surrogate c must be > 0");
  if (!(r_min > 0.0) || !(r_min <= r_max)) {
    throw ConfigError("RE radii need 0 < R_min <= R_max");
  }
  if (attack_count < 1) throw ConfigError("N_Attack must be >= 1");
  if (max_seed_probes < 1) throw ConfigError("max_seed_probes must be >= 1");
}

Dataset ExploreSet::to_dataset() const {
  std::vector<FeatureVector> samples;
  std::vector<ClassLabel> labels;
  samples.reserve(size());
  for (const auto& x : legitimate) {
    samples.push_back(x);
    labels.push_back(ClassLabel::Legitimate);
  }
  for (const auto& x : malicious) {
    samples.push_back(x);
    labels.push_back(ClassLabel::Malicious);
  }
  return Dataset(std::move(samples), std::move(labels));
}

FeatureVector orthonormal_probe(std::span<const double> x_l,
                                std::span<const double> x_m, double lambda_max,
                                Rng& rng) {
  return gram_schmidt_probe(x_l, x_m, std::nullopt, lambda_max, rng);
}

FeatureVector orthonormal_probe_at(std::span<const double> x_l,
                                   std::span<const double> x_m, double magnitude,
                                   Rng& rng) {
  return gram_schmidt_probe(x_l, x_m, magnitude, 0.0, rng);
}

Surrogate train_surrogate(const ExploreSet& explored, double c, std::uint64_t seed) {
  ModelSpec spec = ModelSpec::linear_svm(c);
  spec.train_seed = seed;
  return Surrogate{train(spec, explored.to_dataset())};
}

ReExploration re_explore(const SeedSet& seed, ProbeOracle& oracle,
                         const ReConfig& cfg, Rng& rng) {
  cfg.validate();
  if (seed.legitimate.empty() || seed.malicious.empty()) {
    throw Error("RE exploration needs one legitimate and one malicious seed");
  }
  ExploreSet pools{seed.legitimate, seed.malicious};

  for (std::size_t i = 0; i < cfg.explore_budget; ++i) {
    const FeatureVector* x_l = nullptr;
    const FeatureVector* x_m = nullptr;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) {
        throw Error("RE exploration: could not draw distinct x_L and x_M");
      }
      x_l = &pools.legitimate[rng.index(pools.legitimate.size())];
      x_m = &pools.malicious[rng.index(pools.malicious.size())];
      if (*x_l != *x_m) break;
    }
    FeatureVector x_s = orthonormal_probe(*x_l, *x_m, cfg.lambda_max, rng);
    clip_unit(x_s);
    ClassLabel label = oracle.predict(x_s, ProbePhase::Explore);
    (label == ClassLabel::Legitimate ? pools.legitimate : pools.malicious)
        .push_back(std::move(x_s));
  }

  Surrogate surrogate = train_surrogate(pools, cfg.surrogate_c, rng.next_u64());
  return ReExploration{std::move(pools), std::move(surrogate)};
}

AttackSet re_exploit(const ExploreSet& explored, const Surrogate& surrogate,
                     const ReConfig& cfg, Rng& rng) {
  cfg.validate();
  if (explored.legitimate.empty()) {
    throw Error("RE exploitation needs a nonempty legitimate pool");
  }
  Prober probe = [&surrogate](std::span<const double> x) {
    return surrogate.predict(x);
  };
  AnchorSet anchors = explore_anchors(explored.legitimate, probe, cfg.surrogate_budget,
                                      cfg.r_min, cfg.r_max, rng);
  return exploit_anchors(anchors.anchors, cfg.attack_count, cfg.r_exploit, rng);
}

double surrogate_report(const Surrogate& surrogate, const Dataset& reference) {
  require_dim(surrogate.model.dim(), reference.dim());
  return holdout_accuracy(surrogate.model, reference);
}

}  // namespace see
