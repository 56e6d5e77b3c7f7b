// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion.
//
//   see_acceptance            run every criterion
//   see_acceptance 3 7        run only the listed criteria
//
// Exit status is 1 when any selected criterion fails, 77 when every selected
// criterion was skipped, 0 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "see/attack_re.hpp"
#include "see/errors.hpp"
#include "see/harness.hpp"
#include "see/metrics.hpp"
#include "see/oracle.hpp"

using namespace see;

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig blobs_config(AttackKind kind, ModelSpec defender = ModelSpec::linear_svm(1.0)) {
  ExperimentConfig cfg;
  cfg.dataset.synthetic = SyntheticSpec{};  // 2-D blobs, 6 sigma apart, n = 400
  cfg.defender = defender;
  cfg.attack = kind;
  cfg.runs = 30;
  cfg.master_seed = 2024;
  return cfg;
}

ExperimentConfig moons_config(AttackKind kind) {
  ExperimentConfig cfg = blobs_config(kind, ModelSpec::knn(3));
  SyntheticSpec moons;
  moons.generator = "moons";
  moons.noise = 0.15;
  cfg.dataset.synthetic = moons;
  return cfg;
}

// Reports are cached so criteria that share a configuration run it once.
std::map<std::string, RunReport> g_cache;

const RunReport& cached(const std::string& key, const ExperimentConfig& cfg) {
  auto it = g_cache.find(key);
  if (it == g_cache.end()) it = g_cache.emplace(key, run_experiment(cfg)).first;
  return it->second;
}

ExperimentConfig c3_config() {
  ExperimentConfig cfg = blobs_config(AttackKind::AP);
  cfg.blacklist = BlacklistSettings{};
  return cfg;
}

ExperimentConfig c4_config() {
  ExperimentConfig cfg = blobs_config(AttackKind::RE);
  cfg.blacklist = BlacklistSettings{};
  return cfg;
}

const RunReport& c3_report() { return cached("c3", c3_config()); }
const RunReport& c4_report() { return cached("c4", c4_config()); }
const RunReport& c5_knn() {
  return cached("c5knn", blobs_config(AttackKind::AP, ModelSpec::knn(3)));
}
const RunReport& c5_forest() {
  return cached("c5rf", blobs_config(AttackKind::AP, ModelSpec::random_forest(50)));
}

// Spanning trees of K_n enumerated through Pruefer sequences.
double brute_mst(const std::vector<FeatureVector>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  if (n == 2) return distance(pts[0], pts[1]);
  const std::size_t len = n - 2;
  std::vector<std::size_t> seq(len, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t v : seq) ++degree[v];
    double total = 0.0;
    for (std::size_t v : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += distance(pts[leaf], pts[v]);
      --degree[leaf];
      --degree[v];
    }
    std::size_t u = n, w = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (u == n ? u : w) = i;
    }
    total += distance(pts[u], pts[w]);
    best = std::min(best, total);
    std::size_t pos = 0;
    while (pos < len && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == len) break;
  }
  return best / static_cast<double>(n - 1);
}

double brute_knn(const std::vector<FeatureVector>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  const std::size_t kk = std::min(k, n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(distance(pts[i], pts[j]));
    }
    std::sort(d.begin(), d.end());
    total += std::accumulate(d.begin(), d.begin() + static_cast<long>(kk), 0.0) /
             static_cast<double>(kk);
  }
  return total / static_cast<double>(n);
}

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const std::size_t d = 1 + rng.index(4);
    std::vector<FeatureVector> pts(n, FeatureVector(d));
    for (auto& p : pts) {
      for (double& v : p) v = rng.uniform01();
    }
    // Occasional duplicates exercise zero-length edges and distance ties.
    if (n > 2 && trial % 5 == 0) pts[n - 1] = pts[0];
    worst = std::max(worst, std::abs(knn_dist(pts, kDefaultKnnK) - brute_knn(pts, kDefaultKnnK)));
    worst = std::max(worst, std::abs(mst_dist(pts) - brute_mst(pts)));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-9 && secs < 10.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("max |fast - brute| = %.3g over 200 sets, %.2f s", worst, secs)};
}

Outcome gram_schmidt() {
  const auto t0 = Clock::now();
  Rng rng(2);
  const double lambda_max = 0.25;
  double worst_dot = 0.0;
  double worst_norm = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t d = 2 + rng.index(9);
    FeatureVector xl(d), xm(d), mid(d), x0(d);
    for (std::size_t k = 0; k < d; ++k) {
      xl[k] = rng.uniform01();
      xm[k] = rng.uniform01();
      mid[k] = (xl[k] + xm[k]) / 2;
      x0[k] = xl[k] - xm[k];
    }
    FeatureVector xs = orthonormal_probe(xl, xm, lambda_max, rng);
    FeatureVector off(d);
    for (std::size_t k = 0; k < d; ++k) off[k] = xs[k] - mid[k];
    worst_dot = std::max(worst_dot, std::abs(dot(off, x0)) / std::sqrt(dot(x0, x0)));
    worst_norm = std::max(worst_norm, std::sqrt(dot(off, off)));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_dot <= 1e-9 && worst_norm <= lambda_max && secs < 5.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("max |<off,x0>|/|x0| = %.3g, max |off| = %.6f, %.2f s", worst_dot, worst_norm,
              secs)};
}

Outcome ap_accuracy() {
  const auto t0 = Clock::now();
  const double ear = c3_report().at("ear").mean;
  const double secs = seconds_since(t0);
  return {ear >= 0.90 && secs < 120.0 ? Verdict::Pass : Verdict::Fail,
          fmt("AP EAR %.4f +- %.4f (need >= 0.90), %.1f s", ear, c3_report().at("ear").std,
              secs)};
}

Outcome re_accuracy_diversity() {
  const auto t0 = Clock::now();
  const RunReport& re = c4_report();
  const double secs = seconds_since(t0);
  const RunReport& ap = c3_report();
  const double ear = re.at("ear").mean;
  bool diverse = true;
  std::string cmp;
  for (const char* f : {"sigma", "knn_dist", "mst_dist"}) {
    diverse = diverse && re.at(f).mean > ap.at(f).mean;
    cmp += fmt(" %s RE %.4f vs AP %.4f;", f, re.at(f).mean, ap.at(f).mean);
  }
  const bool ok = ear >= 0.85 && diverse && secs < 300.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("RE EAR %.4f (need >= 0.85);", ear) + cmp + fmt(" %.1f s", secs)};
}

Outcome nonlinear_defenders() {
  const double knn = c5_knn().at("ear").mean;
  const double rf = c5_forest().at("ear").mean;
  return {knn >= 0.80 && rf >= 0.80 ? Verdict::Pass : Verdict::Fail,
          fmt("AP EAR vs kNN(3) %.4f, vs RandomForest(50) %.4f (need >= 0.80)", knn, rf)};
}

Outcome budget_accounting() {
  std::size_t runs = 0;
  std::size_t bad = 0;
  double seed_total = 0.0;
  for (const RunReport* rep : {&c3_report(), &c4_report(), &c5_knn(), &c5_forest()}) {
    for (const auto& r : rep->runs) {
      ++runs;
      bad += r.explore_probes != 1000 || r.exploit_probes != 0 || r.seed_probes < 1;
      seed_total += static_cast<double>(r.seed_probes);
    }
  }
  return {bad == 0 ? Verdict::Pass : Verdict::Fail,
          fmt("%zu runs, %zu violations; mean seed probes %.2f reported separately", runs, bad,
              seed_total / static_cast<double>(runs))};
}

Outcome blacklist() {
  const auto t0 = Clock::now();
  const double ap = c3_report().at("bl_stopped_fraction").mean;
  const double re = c4_report().at("bl_stopped_fraction").mean;
  const double fp = c3_report().at("bl_false_positive_rate").mean;
  const double secs = seconds_since(t0);
  const bool ok = ap - re >= 0.20 && re <= 0.05 && secs < 300.0;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("stopped AP %.4f, RE %.4f, gap %.4f (need >= 0.20, RE <= 0.05); "
              "AP blacklist blocks %.2f of legitimate rows",
              ap, re, ap - re, fp)};
}

Outcome sweep_trends() {
  ExperimentConfig ap = moons_config(AttackKind::AP);
  ap.sweep = SweepSpec{"R_Exploit", {0.1, 0.9}};
  auto ap_pts = run_sweep(ap);
  const double ear01 = ap_pts[0].second.at("ear").mean;
  const double ear09 = ap_pts[1].second.at("ear").mean;

  ExperimentConfig re = moons_config(AttackKind::RE);
  re.sweep = SweepSpec{"B_Explore", {250, 2000}};
  auto re_pts = run_sweep(re);
  const double b250 = re_pts[0].second.at("ear").mean;
  const double b2000 = re_pts[1].second.at("ear").mean;

  const bool ok = ear01 - ear09 >= 0.05 && b2000 >= b250;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("moons/kNN(3): AP EAR R_Exploit 0.1 -> %.4f, 0.9 -> %.4f (drop %.4f, need >= "
              "0.05); RE EAR B_Explore 250 -> %.4f, 2000 -> %.4f (need 2000 >= 250)",
              ear01, ear09, ear01 - ear09, b250, b2000)};
}

Outcome determinism() {
  std::size_t checked = 0;
  std::size_t differ = 0;
  auto compare = [&](const RunReport& first, ExperimentConfig cfg) {
    ++checked;
    differ += run_experiment(cfg).to_json().dump() != first.to_json().dump();
  };
  compare(c3_report(), c3_config());
  compare(c4_report(), c4_config());
  compare(c5_knn(), blobs_config(AttackKind::AP, ModelSpec::knn(3)));
  ExperimentConfig threaded = c4_config();
  threaded.workers = 4;
  compare(c4_report(), threaded);
  return {differ == 0 ? Verdict::Pass : Verdict::Fail,
          fmt("%zu/%zu repeated configurations produced byte-identical JSON", checked - differ,
              checked)};
}

Outcome remote_equivalence() {
  ExperimentConfig cfg = c3_config();
  cfg.oracle = OracleMode::Loopback;
  cfg.service_budget = cfg.ap.explore_budget + cfg.ap.max_seed_probes;
  const RunReport remote = run_experiment(cfg);
  const RunReport& local = c3_report();
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < local.runs.size(); ++i) {
    mismatched += remote.runs[i].metrics.ear != local.runs[i].metrics.ear ||
                  remote.runs[i].explore_probes != local.runs[i].explore_probes;
  }

  // A capped key answers 429 once its allowance is spent.
  auto model = std::make_shared<const Model>(Model::linear({1.0, -1.0}, 0.0));
  ServiceOptions opts;
  opts.budget_per_key = 1000;
  DefenderService svc(model, opts);
  svc.start();
  ProbeOracle oracle(std::make_unique<RemoteSource>(svc.endpoint(), 2));
  std::vector<double> x{0.2, 0.7};
  std::size_t answered = 0;
  bool exhausted = false;
  try {
    for (int i = 0; i < 1001; ++i) {
      oracle.predict(x, ProbePhase::Explore);
      ++answered;
    }
  } catch (const BudgetExhausted&) {
    exhausted = true;
  }
  httplib::Client cli("127.0.0.1", svc.port());
  auto res = cli.Post("/predict", R"({"features":[0.2,0.7]})", "application/json");
  const int status = res ? res->status : -1;
  svc.stop();

  const bool ok = mismatched == 0 && exhausted && answered == 1000 && status == 429;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt("%zu/%zu runs match the in-process EAR; budget 1000 answered %zu then %s "
              "(HTTP %d)",
              local.runs.size() - mismatched, local.runs.size(), answered,
              exhausted ? "BudgetExhausted" : "no refusal", status)};
}

Outcome cancer_dataset() {
  const char* path = std::getenv("SEE_CANCER_CSV");
  if (!path || !*path) {
    return {Verdict::Skip, "set SEE_CANCER_CSV to the UCI Breast Cancer CSV to enable"};
  }
  ExperimentConfig cfg = blobs_config(AttackKind::AP);
  cfg.dataset.synthetic.reset();
  cfg.dataset.csv = path;
  if (const char* col = std::getenv("SEE_CANCER_LABEL")) {
    cfg.dataset.csv_options.label_column = std::string(col);
  }
  cfg.dataset.csv_options.positive_label =
      std::getenv("SEE_CANCER_POSITIVE") ? std::getenv("SEE_CANCER_POSITIVE") : "4";
  const double ear = run_experiment(cfg).at("ear").mean;
  return {std::abs(ear - 0.99) <= 0.05 ? Verdict::Pass : Verdict::Fail,
          fmt("AP EAR %.4f (need within 0.05 of 0.99)", ear)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "metric oracles", metric_oracles},
      {2, "gram-schmidt geometry", gram_schmidt},
      {3, "AP accuracy", ap_accuracy},
      {4, "RE accuracy and diversity", re_accuracy_diversity},
      {5, "non-linear defenders", nonlinear_defenders},
      {6, "budget accounting", budget_accounting},
      {7, "blacklist", blacklist},
      {8, "sweep trends", sweep_trends},
      {9, "determinism", determinism},
      {10, "remote oracle equivalence", remote_equivalence},
      {11, "breast cancer dataset", cancer_dataset},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  int ran = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
      continue;
    }
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("error: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("%s criterion %d (%s): %s\n", tag, c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.verdict == Verdict::Fail;
    ran += o.verdict != Verdict::Skip;
  }
  if (failures > 0) return 1;
  return ran == 0 ? 77 : 0;
}
