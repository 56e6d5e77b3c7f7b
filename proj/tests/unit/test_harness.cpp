#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "see/errors.hpp"
#include "see/harness.hpp"

using namespace see;
using nlohmann::json;

namespace {

ExperimentConfig small(AttackKind kind, std::size_t runs = 3) {
  ExperimentConfig cfg;
  cfg.dataset.synthetic = SyntheticSpec{};
  cfg.attack = kind;
  cfg.runs = runs;
  cfg.master_seed = 17;
  cfg.ap.explore_budget = cfg.re.explore_budget = 150;
  cfg.ap.attack_count = cfg.re.attack_count = 200;
  cfg.re.surrogate_budget = 300;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("bare config carries the protocol defaults") {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::object());
  CHECK(cfg.runs == 30);
  CHECK(cfg.ap.explore_budget == 1000);
  CHECK(cfg.ap.attack_count == 2000);
  CHECK(cfg.ap.r_min == 0.1);
  CHECK(cfg.ap.r_max == 0.5);
  CHECK(cfg.ap.r_exploit == 0.1);
  CHECK(cfg.re.r_exploit == 0.5);
  CHECK(cfg.re.lambda_max == 0.25);
  CHECK(cfg.re.surrogate_c == 10.0);
  CHECK(cfg.cv_folds == 5);
  CHECK(cfg.dataset.synthetic.has_value());
  CHECK(cfg.defender.kind == ModelKind::LinearSvm);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"runs", 0}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"rnus", 3}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"attack", "XX"}}), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(json{{"sweep", {{"param", "R_min"}, {"values", {0.1}}}}}),
      ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(json{{"sweep", {{"param", "R_Exploit"}, {"values", json::array()}}}}),
      ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"defender", {{"kind", "mlp"}}}}),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/cfg.json"), ConfigError);
  auto cfg = ExperimentConfig::from_json(
      json{{"dataset", {{"csv", "data.csv"}, {"label_column", "class"}}}}, "/base");
  CHECK(*cfg.dataset.csv == std::filesystem::path("/base/data.csv"));
  CHECK(std::get<std::string>(cfg.dataset.csv_options.label_column) == "class");
}

TEST_CASE("config json round trip") {
  ExperimentConfig cfg = small(AttackKind::RE);
  cfg.blacklist = BlacklistSettings{};
  cfg.sweep = SweepSpec{"B_Explore", {100, 200}};
  ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("synthetic generators") {
  SyntheticSpec blobs;
  Rng a(1), b(1);
  Dataset d1 = make_synthetic(blobs, a), d2 = make_synthetic(blobs, b);
  CHECK(d1.samples() == d2.samples());
  CHECK(d1.size() == 400);
  const double frac = static_cast<double>(d1.count(ClassLabel::Malicious)) / 400.0;
  CHECK(std::abs(frac - 0.5) <= 0.05);
  for (const auto& x : d1.samples()) {
    for (double v : x) REQUIRE((v >= 0.0 && v <= 1.0));
  }
  Model m = train(ModelSpec::linear_svm(1.0), d1);
  Rng c(2);
  CHECK(holdout_accuracy(m, make_synthetic(blobs, c)) >= 0.99);

  SyntheticSpec moons;
  moons.generator = "moons";
  Rng r(3);
  CHECK(make_synthetic(moons, r).dim() == 2);
  SyntheticSpec bad;
  bad.generator = "spirals";
  CHECK_THROWS_AS(make_synthetic(bad, r), ConfigError);
}

TEST_CASE("runs honour the probe budget") {
  for (AttackKind kind : {AttackKind::AP, AttackKind::RE}) {
    RunReport rep = run_experiment(small(kind));
    REQUIRE(rep.runs.size() == 3);
    for (const auto& r : rep.runs) {
      CHECK(r.explore_probes == 150);
      CHECK(r.exploit_probes == 0);
      CHECK(r.seed_probes >= 1);
      CHECK(r.metrics.ear > 0.0);
    }
    CHECK(rep.runs[0].surrogate_accuracy.has_value() == (kind == AttackKind::RE));
  }
}

TEST_CASE("aggregates match the per-run rows") {
  RunReport rep = run_experiment(small(AttackKind::AP, 4));
  double mean = 0.0;
  for (const auto& r : rep.runs) mean += r.metrics.ear;
  mean /= 4;
  double ss = 0.0;
  for (const auto& r : rep.runs) ss += (r.metrics.ear - mean) * (r.metrics.ear - mean);
  CHECK(rep.at("ear").mean == doctest::Approx(mean));
  CHECK(rep.at("ear").std == doctest::Approx(std::sqrt(ss / 3)));
  CHECK_THROWS_AS(rep.at("nope"), Error);
}

TEST_CASE("reports are byte-identical across executions and worker counts") {
  ExperimentConfig cfg = small(AttackKind::RE, 4);
  cfg.blacklist = BlacklistSettings{};
  const std::string a = run_experiment(cfg).to_json().dump();
  cfg.workers = 3;
  const std::string b = run_experiment(cfg).to_json().dump();
  CHECK(a == b);
  cfg.master_seed = 18;
  CHECK(run_experiment(cfg).to_json().dump() != a);
}

TEST_CASE("each run is reproducible from its index") {
  ExperimentConfig cfg = small(AttackKind::AP, 3);
  RunReport rep = run_experiment(cfg);
  Dataset data = prepare_dataset(cfg);
  CHECK(run_single(cfg, data, 2).to_json() == rep.runs[2].to_json());
}

TEST_CASE("report emission") {
  RunReport rep = run_experiment(small(AttackKind::AP, 2));
  auto dir = std::filesystem::temp_directory_path() / "see_report_test";
  emit_report(rep, ReportFormat::Json, dir / "r.json");
  emit_report(rep, ReportFormat::Csv, dir / "r.csv");
  RunReport back = RunReport::from_json(json::parse(slurp(dir / "r.json")));
  CHECK(back.to_json() == rep.to_json());

  std::istringstream csv(slurp(dir / "r.csv"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("run_index,", 0) == 0);
  CHECK(lines[3].rfind("mean,", 0) == 0);
  CHECK(lines[4].rfind("std,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps") {
  ExperimentConfig cfg = small(AttackKind::AP, 2);
  cfg.sweep = SweepSpec{"R_Exploit", {0.1}};
  auto one = run_sweep(cfg);
  REQUIRE(one.size() == 1);
  cfg.sweep.reset();
  CHECK(one[0].second.to_json() == run_experiment(cfg).to_json());

  cfg.sweep = SweepSpec{"B_Explore", {50, 100}};
  auto two = run_sweep(cfg);
  CHECK(two[1].second.runs[0].explore_probes == 100);
  auto path = std::filesystem::temp_directory_path() / "see_sweep_test.csv";
  write_sweep_csv("B_Explore", two, path);
  std::string text = slurp(path);
  CHECK(text.rfind("B_Explore,ear_mean,ear_std,sigma,knn_dist,mst_dist\n", 0) == 0);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(apply_parameter(cfg, "B_Explore", 2.5), ConfigError);
}

TEST_CASE("seed failures name the run") {
  ExperimentConfig cfg = small(AttackKind::RE, 3);
  cfg.re.max_seed_probes = 1;
  try {
    run_experiment(cfg);
    FAIL("expected SeedFailure");
  } catch (const SeedFailure& e) {
    CHECK(std::string(e.what()).rfind("run ", 0) == 0);
  }
}

TEST_CASE("loopback oracle gives the same runs as the local one") {
  ExperimentConfig cfg = small(AttackKind::AP, 2);
  RunReport local = run_experiment(cfg);
  cfg.oracle = OracleMode::Loopback;
  RunReport remote = run_experiment(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(remote.runs[i].metrics.ear == local.runs[i].metrics.ear);
    CHECK(remote.runs[i].explore_probes == 150);
  }
}

TEST_CASE("csv datasets feed experiments") {
  auto dir = std::filesystem::temp_directory_path() / "see_csv_exp";
  std::filesystem::create_directories(dir);
  {
    Rng rng(4);
    Dataset d = make_synthetic(SyntheticSpec{}, rng);
    std::ofstream out(dir / "data.csv");
    out << "a,b,class\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
      out << d.sample(i)[0] * 10 << ',' << d.sample(i)[1] * 3 << ','
          << (d.label(i) == ClassLabel::Malicious ? "bad" : "good") << '\n';
    }
  }
  json j = {{"dataset", {{"csv", "data.csv"}, {"label_column", "class"}, {"positive_label", "bad"}}},
            {"runs", 1},
            {"ap", {{"B_Explore", 100}, {"N_Attack", 100}}}};
  std::ofstream(dir / "cfg.json") << j.dump();
  ExperimentConfig cfg = ExperimentConfig::load(dir / "cfg.json");
  RunReport rep = run_experiment(cfg);
  CHECK(rep.runs[0].defender_accuracy > 0.95);
  std::filesystem::remove_all(dir);
}

}
