// attack: command-line front end for the seed-explore-exploit harness.

#include <csignal>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "see/csv.hpp"
#include "see/errors.hpp"
#include "see/harness.hpp"
#include "see/metrics.hpp"
#include "see/oracle.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSeed = 3;

see::DefenderService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

void print_summary(const see::RunReport& report) {
  auto line = [&](const char* name) {
    auto it = report.aggregate.find(name);
    if (it == report.aggregate.end()) return;
    std::printf("  %-22s %.4f +- %.4f\n", name, it->second.mean, it->second.std);
  };
  std::printf("%zu runs\n", report.runs.size());
  for (const char* f : {"ear", "sigma", "knn_dist", "mst_dist", "seed_probes",
                        "explore_probes", "defender_accuracy", "surrogate_accuracy",
                        "bl_stopped_fraction", "bl_false_positive_rate"}) {
    line(f);
  }
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw see::ConfigError("--bind expects HOST:PORT");
  try {
    const int port = std::stoi(bind.substr(colon + 1));
    if (port < 0 || port > 65535) throw see::ConfigError("port out of range");
    return {bind.substr(0, colon), port};
  } catch (const std::logic_error&) {
    throw see::ConfigError("--bind expects HOST:PORT");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-explore-exploit attack simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;

  auto* run = app.add_subcommand("run", "Run an experiment and write report.json/report.csv");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--workers", workers, "Parallel runs");
  run->add_option("--out", out_dir, "Output directory");

  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over one parameter");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--param", sweep_param, "R_Exploit, B_Explore or epsilon");
  sweep->add_option("--values", sweep_values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--seed", seed, "Override master_seed");
  sweep->add_option("--workers", workers, "Parallel runs");
  sweep->add_option("--out", out_dir, "Output directory");

  std::string model_path;
  std::string bind = "127.0.0.1:8080";
  std::optional<std::size_t> budget;
  auto* serve = app.add_subcommand("serve", "Serve a trained model over HTTP");
  serve->add_option("--model", model_path, "Model JSON")->required();
  serve->add_option("--bind", bind, "HOST:PORT");
  serve->add_option("--budget", budget, "Per api-key /predict cap");

  std::string ea_path;
  std::size_t knn_k = see::kDefaultKnnK;
  std::optional<std::size_t> total;
  auto* metrics = app.add_subcommand("metrics", "Diversity metrics for an attack CSV");
  metrics->add_option("--ea", ea_path, "Effective attacks, one vector per row")->required();
  metrics->add_option("--k", knn_k, "Neighbors for knn_dist");
  metrics->add_option("--total", total, "N_Attack, to report EAR");

  std::string model_out = "model.json";
  auto* train = app.add_subcommand("train", "Train the configured defender on the full dataset");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--out", model_out, "Model JSON to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto load_config = [&] {
      see::ExperimentConfig cfg = see::ExperimentConfig::load(config_path);
      if (seed) cfg.master_seed = *seed;
      if (workers) cfg.workers = *workers;
      if (out_dir) cfg.out_dir = *out_dir;
      cfg.validate();
      return cfg;
    };

    if (*run) {
      const auto cfg = load_config();
      const auto report = see::run_experiment(cfg);
      see::emit_report(report, see::ReportFormat::Json, cfg.out_dir / "report.json");
      see::emit_report(report, see::ReportFormat::Csv, cfg.out_dir / "report.csv");
      print_summary(report);
      std::printf("wrote %s\n", (cfg.out_dir / "report.json").string().c_str());
    } else if (*sweep) {
      auto cfg = load_config();
      if (!sweep_param.empty() || !sweep_values.empty()) {
        cfg.sweep = see::SweepSpec{sweep_param, sweep_values};
      }
      cfg.validate();
      if (!cfg.sweep) throw see::ConfigError("no sweep given in config or on the command line");
      const auto results = see::run_sweep(cfg);
      nlohmann::json all = nlohmann::json::array();
      for (const auto& [value, rep] : results) {
        all.push_back({{"value", value}, {"report", rep.to_json()}});
        std::printf("%s=%g  ear %.4f +- %.4f\n", cfg.sweep->param.c_str(), value,
                    rep.at("ear").mean, rep.at("ear").std);
      }
      std::filesystem::create_directories(cfg.out_dir);
      std::ofstream(cfg.out_dir / "sweep.json") << all.dump(2) << "\n";
      see::write_sweep_csv(cfg.sweep->param, results, cfg.out_dir / "sweep.csv");
      std::printf("wrote %s\n", (cfg.out_dir / "sweep.csv").string().c_str());
    } else if (*serve) {
      auto model = std::make_shared<const see::Model>(see::Model::load(model_path));
      const auto [host, port] = parse_bind(bind);
      see::ServiceOptions opts;
      opts.host = host;
      opts.port = port;
      opts.budget_per_key = budget;
      see::DefenderService service(model, opts);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::fprintf(stderr, "serving d=%zu on %s:%d\n", model->dim(), host.c_str(), port);
      service.run();
      g_service = nullptr;
    } else if (*metrics) {
      const auto rows = see::read_vectors_csv(ea_path);
      see::EffectiveAttackSet ea{rows, total.value_or(rows.size())};
      if (ea.total_attacks < rows.size()) {
        throw see::ConfigError("--total is smaller than the number of rows");
      }
      if (ea.total_attacks == 0) throw see::ConfigError("no attacks in " + ea_path);
      std::cout << see::evaluate(ea, knn_k).to_json().dump(2) << "\n";
    } else if (*train) {
      const auto cfg = load_config();
      const auto data = see::prepare_dataset(cfg);
      see::ModelSpec spec = cfg.defender;
      spec.train_seed = cfg.master_seed;
      const auto model = see::train(spec, data);
      model.save(model_out);
      std::printf("training accuracy %.4f, wrote %s\n", see::holdout_accuracy(model, data),
                  model_out.c_str());
    }
  } catch (const see::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const see::SeedFailure& e) {
    std::fprintf(stderr, "seed failure: %s\n", e.what());
    return kExitSeed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
  return 0;
}
