#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "see/csv.hpp"
#include "see/errors.hpp"
#include "see/harness.hpp"
#include "see/normalizer.hpp"
#include "see/oracle.hpp"

namespace see {

namespace {

// Stream reserved for dataset generation so it never collides with a run index.
constexpr std::uint64_t kDataStream = 0xda7a5eedULL << 32;

struct OracleHandle {
  std::unique_ptr<DefenderService> service;
  std::unique_ptr<ProbeOracle> oracle;

  OracleHandle() = default;
  OracleHandle(OracleHandle&&) = default;
  ~OracleHandle() {
    oracle.reset();
    if (service) service->stop();
  }
};

OracleHandle make_oracle(const ExperimentConfig& cfg, std::shared_ptr<const Model> model) {
  OracleHandle h;
  const std::size_t budget = cfg.explore_budget();
  if (cfg.oracle == OracleMode::Local) {
    h.oracle = std::make_unique<ProbeOracle>(ProbeOracle::local(std::move(model), budget));
    return h;
  }
  ServiceOptions opts;
  opts.budget_per_key = cfg.service_budget;
  opts.worker_threads = 1;
  const std::size_t dim = model->dim();
  h.service = std::make_unique<DefenderService>(std::move(model), opts);
  h.service->start();
  h.oracle = std::make_unique<ProbeOracle>(
      std::make_unique<RemoteSource>(h.service->endpoint(), dim), budget);
  return h;
}

AttackSet second_wave(const ExperimentConfig& cfg, const AttackerState& state,
                      std::size_t count, Rng& rng) {
  if (const auto* ap = std::get_if<AnchorSet>(&state)) {
    return exploit_anchors(ap->anchors, count, cfg.ap.r_exploit, rng);
  }
  const auto& re = std::get<ReExploration>(state);
  ReConfig rc = cfg.re;
  rc.attack_count = count;
  return re_exploit(re.explored, re.surrogate, rc, rng);
}

}  // namespace

Dataset prepare_dataset(const ExperimentConfig& cfg) {
  Dataset raw = [&] {
    if (cfg.dataset.synthetic) {
      Rng rng = Rng::derive(cfg.master_seed, kDataStream);
      return make_synthetic(*cfg.dataset.synthetic, rng);
    }
    return load_csv(*cfg.dataset.csv, cfg.dataset.csv_options);
  }();
  if (!raw.has_both_classes()) {
    throw ConfigError("dataset needs both Legitimate and Malicious rows");
  }
  return apply_normalizer(fit_normalizer(raw), raw, true);
}

RunRecord run_single(const ExperimentConfig& cfg, const Dataset& data,
                     std::size_t run_index) {
  Rng rng = Rng::derive(cfg.master_seed, run_index);
  const Dataset shuffled = shuffle(data, rng);

  ModelSpec spec = cfg.defender;
  spec.train_seed = rng.next_u64();

  RunRecord rec;
  rec.run_index = run_index;
  rec.defender_accuracy = cross_validate(spec, shuffled, cfg.cv_folds);
  auto defender = std::make_shared<const Model>(train(spec, shuffled));

  OracleHandle handle = make_oracle(cfg, defender);
  ProbeOracle& oracle = *handle.oracle;

  const bool re = cfg.attack == AttackKind::RE;
  const std::size_t max_seed = re ? cfg.re.max_seed_probes : cfg.ap.max_seed_probes;
  SeedSet seed = find_seed(oracle, rng, re, max_seed);

  std::optional<AttackerState> state;
  AttackSet attacks;
  if (!re) {
    AnchorSet anchors = ap_explore(seed, oracle, cfg.ap, rng);
    rec.explored_legitimate = anchors.explored();
    rec.explore_set_size = anchors.anchors.size();
    const std::size_t before = oracle.ledger().total();
    attacks = ap_exploit(anchors, cfg.ap, rng);
    rec.exploit_probes = oracle.ledger().total() - before;
    state = std::move(anchors);
  } else {
    ReExploration ex = re_explore(seed, oracle, cfg.re, rng);
    rec.explored_legitimate = ex.explored.legitimate.size() - seed.legitimate.size();
    rec.explore_set_size = ex.explored.size();
    rec.surrogate_accuracy = surrogate_report(ex.surrogate, shuffled);
    const std::size_t before = oracle.ledger().total();
    attacks = re_exploit(ex.explored, ex.surrogate, cfg.re, rng);
    rec.exploit_probes = oracle.ledger().total() - before;
    state = std::move(ex);
  }
  rec.seed_probes = oracle.seed_probes_used();
  rec.explore_probes = oracle.probes_used();

  rec.metrics = evaluate(effective_attacks(*defender, attacks), cfg.knn_k);

  if (cfg.blacklist) {
    AttackSet wave2 = second_wave(cfg, *state, cfg.blacklist->new_attacks, rng);
    BlacklistOutcome out = score_waves(attacks, wave2, *defender, cfg.blacklist->epsilon);
    if (cfg.blacklist->false_positives) {
      Blacklist bl = build_blacklist(attacks, cfg.blacklist->epsilon, data.dim());
      out.false_positive_rate = false_positive_rate(bl, shuffled);
    }
    rec.blacklist = out;
  }
  return rec;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = prepare_dataset(cfg);

  std::vector<std::optional<RunRecord>> slots(cfg.runs);
  std::vector<std::exception_ptr> errors(cfg.runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.runs; i = next++) {
      try {
        slots[i] = run_single(cfg, data, i);
      } catch (const SeedFailure& e) {
        errors[i] = std::make_exception_ptr(
            SeedFailure("run " + std::to_string(i) + ": " + e.what()));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::min(cfg.workers, cfg.runs);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Report the lowest failing run so the error does not depend on scheduling.
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  RunReport report;
  report.config = cfg.to_json();
  report.runs.reserve(cfg.runs);
  for (auto& s : slots) report.runs.push_back(std::move(*s));
  report.aggregate = aggregate_runs(report.runs);
  return report;
}

std::vector<std::pair<double, RunReport>> run_sweep(const ExperimentConfig& cfg) {
  if (!cfg.sweep || cfg.sweep->values.empty()) {
    throw ConfigError("sweep needs a parameter and at least one value");
  }
  std::vector<std::pair<double, RunReport>> out;
  out.reserve(cfg.sweep->values.size());
  for (double v : cfg.sweep->values) {
    ExperimentConfig point = cfg;
    apply_parameter(point, cfg.sweep->param, v);
    out.emplace_back(v, run_experiment(point));
  }
  return out;
}

}  // namespace see
