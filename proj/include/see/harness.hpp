#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "see/attack_ap.hpp"
#include "see/attack_re.hpp"
#include "see/countermeasure.hpp"
#include "see/csv.hpp"
#include "see/metrics.hpp"
#include "see/models.hpp"
#include "see/rng.hpp"

namespace see {

enum class AttackKind { AP, RE };
enum class OracleMode {
  Local,
  /// Each run's defender is served over HTTP on 127.0.0.1 and probed
  /// through the wire protocol.
  Loopback
};

std::string_view to_string(AttackKind kind) noexcept;
std::string_view to_string(OracleMode mode) noexcept;

/// Generators: "blobs" (two isotropic unit-variance Gaussians whose centers
/// are `separation` apart along the diagonal; class 1 is Malicious) and
/// "moons" (two interleaved half circles with Gaussian `noise`). Output is
/// min-max normalized to [0,1]^d and class-balanced.
struct SyntheticSpec {
  std::string generator = "blobs";
  std::size_t d = 2;
  double separation = 6.0;
  std::size_t n = 400;
  double noise = 0.15;

  nlohmann::json to_json() const;
  static SyntheticSpec from_json(const nlohmann::json& j);
};

Dataset make_synthetic(const SyntheticSpec& spec, Rng& rng);

struct DatasetSource {
  std::optional<std::filesystem::path> csv;
  CsvOptions csv_options;
  std::optional<SyntheticSpec> synthetic;
};

struct BlacklistSettings {
  double epsilon = 0.1;
  std::size_t new_attacks = 2000;
  bool false_positives = true;
};

struct SweepSpec {
  /// One of R_Exploit, B_Explore, epsilon.
  std::string param;
  std::vector<double> values;
};

struct ExperimentConfig {
  DatasetSource dataset;
  ModelSpec defender = ModelSpec::linear_svm(1.0);
  AttackKind attack = AttackKind::AP;
  ApConfig ap;
  ReConfig re;
  std::size_t runs = 30;
  std::uint64_t master_seed = 0;
  std::size_t cv_folds = 5;
  std::size_t knn_k = kDefaultKnnK;
  OracleMode oracle = OracleMode::Local;
  /// Per-key /predict cap for the loopback service; unset means no cap on
  /// the server side (the client still enforces B_Explore).
  std::optional<std::size_t> service_budget;
  std::optional<BlacklistSettings> blacklist;
  std::optional<SweepSpec> sweep;
  std::size_t workers = 1;
  std::filesystem::path out_dir = ".";

  std::size_t explore_budget() const noexcept;
  void validate() const;

  /// Everything that determines results; workers and output paths are left
  /// out so reports do not depend on them.
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Applies a sweep value to the matching field of the configured attack.
void apply_parameter(ExperimentConfig& cfg, const std::string& param, double value);

struct RunRecord {
  std::size_t run_index = 0;
  DiversityReport metrics;
  std::size_t seed_probes = 0;
  std::size_t explore_probes = 0;
  /// Probes to the true defender after exploration ended; always 0.
  std::size_t exploit_probes = 0;
  /// AP: anchors found beyond the seed. RE: legitimate-pool growth.
  std::size_t explored_legitimate = 0;
  std::size_t explore_set_size = 0;
  double defender_accuracy = 0.0;
  std::optional<double> surrogate_accuracy;
  std::optional<BlacklistOutcome> blacklist;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
  /// Flat numeric view used for aggregation and CSV output.
  std::map<std::string, double> fields() const;
};

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single run.
  double std = 0.0;
};

struct RunReport {
  nlohmann::json config;
  std::vector<RunRecord> runs;
  std::map<std::string, Summary> aggregate;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
  const Summary& at(const std::string& field) const;
};

std::map<std::string, Summary> aggregate_runs(const std::vector<RunRecord>& runs);

/// Loads or generates the data and normalizes it over all rows.
Dataset prepare_dataset(const ExperimentConfig& cfg);

/// One seed-explore-exploit run, reproducible from (master_seed, run_index).
RunRecord run_single(const ExperimentConfig& cfg, const Dataset& data,
                     std::size_t run_index);

RunReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::pair<double, RunReport>> run_sweep(const ExperimentConfig& cfg);

enum class ReportFormat { Json, Csv };

void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path);

std::string report_csv(const RunReport& report);

/// value, EAR mean/std, sigma, knn_dist, mst_dist (means) per sweep point.
void write_sweep_csv(const std::string& param,
                     const std::vector<std::pair<double, RunReport>>& results,
                     const std::filesystem::path& path);

}  // namespace see
