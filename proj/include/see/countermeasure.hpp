#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "json.hpp"
#include "see/attack_ap.hpp"
#include "see/attack_re.hpp"
#include "see/models.hpp"
#include "see/rng.hpp"

namespace see {

/// Previously seen attacks with epsilon-ball matching. The ball radius is
/// epsilon * sqrt(d) so one epsilon means the same thing across
/// dimensionalities.
class Blacklist {
 public:
  Blacklist(std::vector<FeatureVector> entries, double epsilon, std::size_t dim);

  const std::vector<FeatureVector>& entries() const noexcept { return entries_; }
  double epsilon() const noexcept { return epsilon_; }
  double effective_radius() const noexcept { return radius_; }
  std::size_t dim() const noexcept { return dim_; }

  /// Distance to the nearest entry <= effective_radius (inclusive).
  bool is_blocked(std::span<const double> x) const;

  void save_csv(const std::filesystem::path& path) const;
  static Blacklist load_csv(const std::filesystem::path& path, double epsilon);

 private:
  std::vector<FeatureVector> entries_;
  double epsilon_;
  double radius_;
  std::size_t dim_;
};

Blacklist build_blacklist(const AttackSet& first_wave, double epsilon, std::size_t dim);

inline bool is_blocked(const Blacklist& bl, std::span<const double> x) {
  return bl.is_blocked(x);
}

struct BlacklistOutcome {
  double stopped_fraction = 0.0;
  std::size_t second_wave_ea_count = 0;
  std::size_t stopped_count = 0;
  /// Share of genuine Legitimate rows the blacklist would also block.
  std::optional<double> false_positive_rate;

  nlohmann::json to_json() const;
  static BlacklistOutcome from_json(const nlohmann::json& j);
};

/// What the adversary still holds once exploration is over.
using AttackerState = std::variant<AnchorSet, ReExploration>;

struct BlacklistConfig {
  double epsilon = 0.1;
  std::size_t first_wave = 2000;
  std::size_t second_wave = 2000;
  /// AP: exploitation radius. RE: exploitation settings for both waves.
  double ap_r_exploit = 0.1;
  ReConfig re;
};

/// Wave 1 fills the blacklist; wave 2 comes from the same attacker state.
/// stopped_fraction = blocked effective wave-2 attacks / effective wave-2
/// attacks (0 when wave 2 has no effective attacks).
BlacklistOutcome blacklist_experiment(const AttackerState& attacker,
                                      const Model& defender, const BlacklistConfig& cfg,
                                      Rng& rng);

/// Scores two prepared waves; the protocol core of blacklist_experiment.
BlacklistOutcome score_waves(const AttackSet& first_wave, const AttackSet& second_wave,
                             const Model& defender, double epsilon);

double false_positive_rate(const Blacklist& bl, const Dataset& data);

}  // namespace see
