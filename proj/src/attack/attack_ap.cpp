#include "see/attack_ap.hpp"

#include "see/errors.hpp"

namespace see {

void ApConfig::validate() const {
  if (!(r_min > 0.0) || !(r_min <= r_max)) {
    throw ConfigError("AP radii need 0 < R_min <= R_max");
  }
  if (!(r_exploit > 0.0)) throw ConfigError("R_Exploit must be > 0");
  if (explore_budget < 1) throw ConfigError("B_Explore must be >= 1");
  if (attack_count < 1) throw ConfigError("N_Attack must be >= 1");
  if (max_seed_probes < 1) throw ConfigError("max_seed_probes must be >= 1");
}

SeedSet find_seed(ProbeOracle& oracle, Rng& rng, bool need_malicious,
                  std::size_t max_seed_probes) {
  SeedSet seed;
  const std::size_t d = oracle.dim();
  auto done = [&] {
    return !seed.legitimate.empty() && (!need_malicious || !seed.malicious.empty());
  };
  while (!done() && seed.probe_count < max_seed_probes) {
    FeatureVector x(d);
    for (double& v : x) v = rng.uniform01();
    ClassLabel label = oracle.predict(x, ProbePhase::Seed);
    ++seed.probe_count;
    auto& pool = label == ClassLabel::Legitimate ? seed.legitimate : seed.malicious;
    if (pool.empty()) pool.push_back(std::move(x));
  }
  if (seed.legitimate.empty()) {
    throw SeedFailure("no Legitimate seed found in " + std::to_string(max_seed_probes) +
                      " random probes");
  }
  if (need_malicious && seed.malicious.empty()) {
    throw SeedFailure("no Malicious seed found in " + std::to_string(max_seed_probes) +
                      " random probes");
  }
  return seed;
}

FeatureVector perturb(std::span<const double> x, double radius, Rng& rng) {
  if (radius < 0.0) throw Error("perturbation radius must be >= 0");
  FeatureVector out(x.begin(), x.end());
  for (double& v : out) v += radius * rng.gaussian();
  clip_unit(out);
  return out;
}

double dynamic_radius(std::size_t i, std::size_t count_legitimate, double r_min,
                      double r_max) {
  if (i < 1) throw Error("dynamic_radius: probe index starts at 1");
  return (r_max - r_min) *
             (static_cast<double>(count_legitimate) / static_cast<double>(i)) +
         r_min;
}

FeatureVector convex_combine(std::span<const double> a, std::span<const double> b,
                             double lambda) {
  require_dim(a.size(), b.size());
  FeatureVector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    out[j] = lambda * a[j] + (1.0 - lambda) * b[j];
  }
  return out;
}

AnchorSet explore_anchors(std::vector<FeatureVector> seeds, const Prober& probe,
                          std::size_t probes, double r_min, double r_max, Rng& rng) {
  if (seeds.empty()) throw Error("anchor search needs at least one legitimate seed");
  AnchorSet out;
  out.seed_count = seeds.size();
  out.anchors = std::move(seeds);
  out.anchors.reserve(out.seed_count + probes);

  std::size_t count_legitimate = 0;
  for (std::size_t i = 1; i <= probes; ++i) {
    // Copy: push_back below may reallocate.
    FeatureVector base = out.anchors[rng.index(out.anchors.size())];
    double radius = dynamic_radius(i, count_legitimate, r_min, r_max);
    FeatureVector candidate = perturb(base, radius, rng);
    ClassLabel label = probe(candidate);
    ++out.probes_spent;
    if (label == ClassLabel::Legitimate) {
      out.anchors.push_back(std::move(candidate));
      ++count_legitimate;
    }
  }
  return out;
}

AttackSet exploit_anchors(std::span<const FeatureVector> anchors,
                          std::size_t attack_count, double r_exploit, Rng& rng) {
  if (anchors.empty()) throw Error("exploitation needs a nonempty anchor set");
  AttackSet out;
  out.attacks.reserve(attack_count);
  for (std::size_t i = 0; i < attack_count; ++i) {
    const auto& a = anchors[rng.index(anchors.size())];
    const auto& b = anchors[rng.index(anchors.size())];
    FeatureVector pa = perturb(a, r_exploit, rng);
    FeatureVector pb = perturb(b, r_exploit, rng);
    double lambda = rng.uniform01();
    out.attacks.push_back(convex_combine(pa, pb, lambda));
  }
  return out;
}

AnchorSet ap_explore(const SeedSet& seed, ProbeOracle& oracle, const ApConfig& cfg,
                     Rng& rng) {
  cfg.validate();
  Prober probe = [&oracle](std::span<const double> x) {
    return oracle.predict(x, ProbePhase::Explore);
  };
  return explore_anchors(seed.legitimate, probe, cfg.explore_budget, cfg.r_min,
                         cfg.r_max, rng);
}

AttackSet ap_exploit(const AnchorSet& anchors, const ApConfig& cfg, Rng& rng) {
  cfg.validate();
  return exploit_anchors(anchors.anchors, cfg.attack_count, cfg.r_exploit, rng);
}

}  // namespace see
