#pragma once

#include <functional>
#include <span>
#include <vector>

#include "see/oracle.hpp"
#include "see/rng.hpp"
#include "see/types.hpp"

namespace see {

struct ApConfig {
  std::size_t explore_budget = 1000;
  std::size_t attack_count = 2000;
  double r_min = 0.1;
  double r_max = 0.5;
  double r_exploit = 0.1;
  std::size_t max_seed_probes = 10000;

  void validate() const;
};

struct SeedSet {
  std::vector<FeatureVector> legitimate;
  std::vector<FeatureVector> malicious;
  std::size_t probe_count = 0;
};

/// Oracle-confirmed Legitimate samples, seeds first.
struct AnchorSet {
  std::vector<FeatureVector> anchors;
  std::size_t seed_count = 0;
  std::size_t probes_spent = 0;

  std::size_t explored() const noexcept { return anchors.size() - seed_count; }
};

struct AttackSet {
  std::vector<FeatureVector> attacks;
};

/// Anything that labels a probe. The true oracle and the adversary's own
/// surrogate both fit.
using Prober = std::function<ClassLabel(std::span<const double>)>;

/// Uniform random points in [0,1]^d, probed in the seed phase, until a
/// Legitimate sample (and, if asked, a Malicious one) turns up.
SeedSet find_seed(ProbeOracle& oracle, Rng& rng, bool need_malicious,
                  std::size_t max_seed_probes);

/// Adds N(0, radius^2) noise to every component, then clips to [0,1].
FeatureVector perturb(std::span<const double> x, double radius, Rng& rng);

/// R_i = (R_max - R_min) * (count_legitimate / i) + R_min
double dynamic_radius(std::size_t i, std::size_t count_legitimate, double r_min,
                      double r_max);

/// lambda * a + (1 - lambda) * b
FeatureVector convex_combine(std::span<const double> a, std::span<const double> b,
                             double lambda);

/// Radius-adaptive neighborhood search. Spends exactly `probes` calls to
/// `probe` and keeps every sample it labels Legitimate.
AnchorSet explore_anchors(std::vector<FeatureVector> seeds, const Prober& probe,
                          std::size_t probes, double r_min, double r_max, Rng& rng);

/// Perturbation plus pairwise convex combination of anchors. Probes nothing.
AttackSet exploit_anchors(std::span<const FeatureVector> anchors,
                          std::size_t attack_count, double r_exploit, Rng& rng);

AnchorSet ap_explore(const SeedSet& seed, ProbeOracle& oracle, const ApConfig& cfg,
                     Rng& rng);
AttackSet ap_exploit(const AnchorSet& anchors, const ApConfig& cfg, Rng& rng);

}  // namespace see
