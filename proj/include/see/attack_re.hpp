#pragma once

#include <span>
#include <vector>

#include "see/attack_ap.hpp"
#include "see/models.hpp"
#include "see/oracle.hpp"
#include "see/rng.hpp"

namespace see {

struct ReConfig {
  std::size_t explore_budget = 1000;
  std::size_t attack_count = 2000;
  double lambda_max = 0.25;
  double r_exploit = 0.5;
  double surrogate_c = 10.0;
  /// Free probes against the surrogate during exploitation.
  std::size_t surrogate_budget = 5000;
  /// Neighborhood bounds for the surrogate-side anchor search.
  double r_min = 0.1;
  double r_max = 0.5;
  std::size_t max_seed_probes = 10000;

  void validate() const;
};

/// Probes split by the oracle's answer. The union is the training set for
/// the surrogate.
struct ExploreSet {
  std::vector<FeatureVector> legitimate;
  std::vector<FeatureVector> malicious;

  std::size_t size() const noexcept { return legitimate.size() + malicious.size(); }
  Dataset to_dataset() const;
};

/// The adversary's linear stand-in for the defender. Querying it costs no
/// oracle budget.
struct Surrogate {
  Model model;

  ClassLabel predict(std::span<const double> x) const { return model.predict(x); }
};

struct ReExploration {
  ExploreSet explored;
  Surrogate surrogate;
};

/// Gram-Schmidt probe: a random direction orthogonal to x_L - x_M, scaled to
/// a magnitude drawn uniformly from [0, lambda_max], placed at the midpoint.
/// The result is not clipped.
FeatureVector orthonormal_probe(std::span<const double> x_l,
                                std::span<const double> x_m, double lambda_max,
                                Rng& rng);

/// Same construction with the offset magnitude fixed.
FeatureVector orthonormal_probe_at(std::span<const double> x_l,
                                   std::span<const double> x_m, double magnitude,
                                   Rng& rng);

Surrogate train_surrogate(const ExploreSet& explored, double c, std::uint64_t seed);

ReExploration re_explore(const SeedSet& seed, ProbeOracle& oracle,
                         const ReConfig& cfg, Rng& rng);

/// Anchor search against the surrogate seeded by the legitimate pool, then
/// the usual perturb-and-combine exploitation. Never touches the oracle.
AttackSet re_exploit(const ExploreSet& explored, const Surrogate& surrogate,
                     const ReConfig& cfg, Rng& rng);

/// Accuracy of the surrogate on data the adversary never sees. Diagnostic.
double surrogate_report(const Surrogate& surrogate, const Dataset& reference);

}  // namespace see
