#include <filesystem>

#include "doctest.h"
#include "see/countermeasure.hpp"
#include "see/errors.hpp"

using namespace see;

TEST_SUITE("countermeasure") {

TEST_CASE("effective radius scales with sqrt(d)") {
  CHECK(Blacklist({}, 0.1, 4).effective_radius() == doctest::Approx(0.2));
  CHECK(Blacklist({}, 0.1, 1).effective_radius() == doctest::Approx(0.1));
  CHECK_THROWS_AS(Blacklist({}, 0.0, 2), ConfigError);
}

TEST_CASE("matching") {
  Blacklist empty = build_blacklist(AttackSet{}, 0.1, 2);
  std::vector<double> x{0.5, 0.5};
  CHECK_FALSE(empty.is_blocked(x));

  Blacklist bl({{0.5, 0.5}}, 0.1, 2);
  CHECK(is_blocked(bl, x));

  Blacklist origin({{0, 0, 0, 0}}, 0.1, 4);
  std::vector<double> edge{0.1, 0.1, 0.1, 0.1};
  CHECK(origin.is_blocked(edge));
  std::vector<double> past{0.2 + 1e-6, 0, 0, 0};
  CHECK_FALSE(origin.is_blocked(past));
}

TEST_CASE("identical waves are fully stopped") {
  Model accept = Model::constant(2, ClassLabel::Legitimate);
  AttackSet wave{{{0.1, 0.2}, {0.7, 0.7}, {0.3, 0.9}}};
  BlacklistOutcome out = score_waves(wave, wave, accept, 0.1);
  CHECK(out.stopped_fraction == 1.0);
  CHECK(out.stopped_count == 3);
  CHECK(out.second_wave_ea_count == 3);
}

TEST_CASE("tiny epsilon stops almost nothing") {
  Rng rng(3);
  AnchorSet anchors{{{0.5, 0.5}, {0.2, 0.8}}, 1, 0};
  BlacklistConfig cfg;
  cfg.epsilon = 1e-9;
  cfg.first_wave = 500;
  cfg.second_wave = 500;
  Model accept = Model::constant(2, ClassLabel::Legitimate);
  BlacklistOutcome out = blacklist_experiment(anchors, accept, cfg, rng);
  CHECK(out.stopped_fraction < 0.01);
}

TEST_CASE("no effective second-wave attacks means nothing stopped") {
  Model reject = Model::constant(1, ClassLabel::Malicious);
  AttackSet wave{{{0.1}}};
  CHECK(score_waves(wave, wave, reject, 0.1).stopped_fraction == 0.0);
}

TEST_CASE("false positives and csv round trip") {
  Blacklist bl({{0.0, 0.0}}, 0.1, 2);
  Dataset d({{0.05, 0.05}, {0.9, 0.9}, {0.0, 0.0}},
            {ClassLabel::Legitimate, ClassLabel::Legitimate, ClassLabel::Malicious});
  CHECK(false_positive_rate(bl, d) == 0.5);

  auto path = std::filesystem::temp_directory_path() / "see_blacklist_test.csv";
  bl.save_csv(path);
  Blacklist back = Blacklist::load_csv(path, 0.1);
  CHECK(back.entries() == bl.entries());
  CHECK(back.dim() == 2);
  std::filesystem::remove(path);

  BlacklistOutcome o{0.25, 4, 1, 0.1};
  CHECK(BlacklistOutcome::from_json(o.to_json()).false_positive_rate == o.false_positive_rate);
}

}
