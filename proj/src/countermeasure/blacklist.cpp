#include <cmath>

#include "see/countermeasure.hpp"
#include "see/csv.hpp"
#include "see/errors.hpp"
#include "see/metrics.hpp"

namespace see {

Blacklist::Blacklist(std::vector<FeatureVector> entries, double epsilon, std::size_t dim)
    : entries_(std::move(entries)),
      epsilon_(epsilon),
      radius_(epsilon * std::sqrt(static_cast<double>(dim))),
      dim_(dim) {
  if (!(epsilon > 0.0)) throw ConfigError("blacklist epsilon must be > 0");
  if (dim == 0) throw ConfigError("blacklist dimensionality must be >= 1");
  for (const auto& e : entries_) require_dim(dim_, e.size());
}

bool Blacklist::is_blocked(std::span<const double> x) const {
  require_dim(dim_, x.size());
  const double r2 = radius_ * radius_;
  for (const auto& e : entries_) {
    if (squared_distance(e, x) <= r2) return true;
  }
  return false;
}

void Blacklist::save_csv(const std::filesystem::path& path) const {
  write_vectors_csv(path, entries_, default_feature_names(dim_));
}

Blacklist Blacklist::load_csv(const std::filesystem::path& path, double epsilon) {
  auto rows = read_vectors_csv(path);
  if (rows.empty()) throw ParseError("blacklist CSV has no entries: " + path.string());
  std::size_t d = rows.front().size();
  return Blacklist(std::move(rows), epsilon, d);
}

Blacklist build_blacklist(const AttackSet& first_wave, double epsilon, std::size_t dim) {
  return Blacklist(first_wave.attacks, epsilon, dim);
}

nlohmann::json BlacklistOutcome::to_json() const {
  nlohmann::json j = {{"stopped_fraction", stopped_fraction},
                      {"second_wave_ea_count", second_wave_ea_count},
                      {"stopped_count", stopped_count}};
  j["false_positive_rate"] =
      false_positive_rate ? nlohmann::json(*false_positive_rate) : nlohmann::json(nullptr);
  return j;
}

BlacklistOutcome BlacklistOutcome::from_json(const nlohmann::json& j) {
  BlacklistOutcome o;
  o.stopped_fraction = j.at("stopped_fraction").get<double>();
  o.second_wave_ea_count = j.at("second_wave_ea_count").get<std::size_t>();
  o.stopped_count = j.at("stopped_count").get<std::size_t>();
  if (j.contains("false_positive_rate") && !j["false_positive_rate"].is_null()) {
    o.false_positive_rate = j["false_positive_rate"].get<double>();
  }
  return o;
}

BlacklistOutcome score_waves(const AttackSet& first_wave, const AttackSet& second_wave,
                             const Model& defender, double epsilon) {
  Blacklist bl = build_blacklist(first_wave, epsilon, defender.dim());
  EffectiveAttackSet ea = effective_attacks(defender, second_wave);
  BlacklistOutcome out;
  out.second_wave_ea_count = ea.members.size();
  for (const auto& x : ea.members) out.stopped_count += bl.is_blocked(x);
  if (out.second_wave_ea_count > 0) {
    out.stopped_fraction = static_cast<double>(out.stopped_count) /
                           static_cast<double>(out.second_wave_ea_count);
  }
  return out;
}

BlacklistOutcome blacklist_experiment(const AttackerState& attacker,
                                      const Model& defender, const BlacklistConfig& cfg,
                                      Rng& rng) {
  auto wave = [&](std::size_t count) -> AttackSet {
    if (const auto* ap = std::get_if<AnchorSet>(&attacker)) {
      return exploit_anchors(ap->anchors, count, cfg.ap_r_exploit, rng);
    }
    const auto& re = std::get<ReExploration>(attacker);
    ReConfig rc = cfg.re;
    rc.attack_count = count;
    return re_exploit(re.explored, re.surrogate, rc, rng);
  };
  AttackSet first = wave(cfg.first_wave);
  AttackSet second = wave(cfg.second_wave);
  return score_waves(first, second, defender, cfg.epsilon);
}

double false_positive_rate(const Blacklist& bl, const Dataset& data) {
  std::size_t legit = 0;
  std::size_t blocked = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.label(i) != ClassLabel::Legitimate) continue;
    ++legit;
    blocked += bl.is_blocked(data.sample(i));
  }
  return legit ? static_cast<double>(blocked) / static_cast<double>(legit) : 0.0;
}

}  // namespace see
