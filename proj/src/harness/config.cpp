#include <fstream>
#include <set>

#include "see/errors.hpp"
#include "see/harness.hpp"

namespace see {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

json ap_to_json(const ApConfig& ap) {
  return {{"B_Explore", ap.explore_budget}, {"N_Attack", ap.attack_count},
          {"R_min", ap.r_min},              {"R_max", ap.r_max},
          {"R_Exploit", ap.r_exploit},      {"max_seed_probes", ap.max_seed_probes}};
}

ApConfig ap_from_json(const json& j) {
  reject_unknown(j, {"B_Explore", "N_Attack", "R_min", "R_max", "R_Exploit", "max_seed_probes"},
                 "ap");
  ApConfig ap;
  ap.explore_budget = j.value("B_Explore", ap.explore_budget);
  ap.attack_count = j.value("N_Attack", ap.attack_count);
  ap.r_min = j.value("R_min", ap.r_min);
  ap.r_max = j.value("R_max", ap.r_max);
  ap.r_exploit = j.value("R_Exploit", ap.r_exploit);
  ap.max_seed_probes = j.value("max_seed_probes", ap.max_seed_probes);
  return ap;
}

json re_to_json(const ReConfig& re) {
  return {{"B_Explore", re.explore_budget}, {"N_Attack", re.attack_count},
          {"lambda_max", re.lambda_max},    {"R_Exploit", re.r_exploit},
          {"surrogate_c", re.surrogate_c},  {"B_surrogate", re.surrogate_budget},
          {"R_min", re.r_min},              {"R_max", re.r_max},
          {"max_seed_probes", re.max_seed_probes}};
}

ReConfig re_from_json(const json& j) {
  reject_unknown(j,
                 {"B_Explore", "N_Attack", "lambda_max", "R_Exploit", "surrogate_c",
                  "B_surrogate", "R_min", "R_max", "max_seed_probes"},
                 "re");
  ReConfig re;
  re.explore_budget = j.value("B_Explore", re.explore_budget);
  re.attack_count = j.value("N_Attack", re.attack_count);
  re.lambda_max = j.value("lambda_max", re.lambda_max);
  re.r_exploit = j.value("R_Exploit", re.r_exploit);
  re.surrogate_c = j.value("surrogate_c", re.surrogate_c);
  re.surrogate_budget = j.value("B_surrogate", re.surrogate_budget);
  re.r_min = j.value("R_min", re.r_min);
  re.r_max = j.value("R_max", re.r_max);
  re.max_seed_probes = j.value("max_seed_probes", re.max_seed_probes);
  return re;
}

json dataset_to_json(const DatasetSource& ds) {
  if (ds.synthetic) return {{"synthetic", ds.synthetic->to_json()}};
  json j = {{"csv", ds.csv ? ds.csv->string() : ""},
            {"positive_label", ds.csv_options.positive_label},
            {"categorical", ds.csv_options.categorical}};
  std::visit([&j](const auto& col) { j["label_column"] = col; },
             ds.csv_options.label_column);
  return j;
}

DatasetSource dataset_from_json(const json& j, const std::filesystem::path& base) {
  reject_unknown(j, {"synthetic", "csv", "label_column", "positive_label", "categorical"},
                 "dataset");
  DatasetSource ds;
  if (j.contains("synthetic")) {
    if (j.contains("csv")) throw ConfigError("dataset takes either csv or synthetic");
    reject_unknown(j["synthetic"], {"generator", "d", "separation", "n", "noise"},
                   "dataset.synthetic");
    ds.synthetic = SyntheticSpec::from_json(j["synthetic"]);
    return ds;
  }
  if (!j.contains("csv")) throw ConfigError("dataset needs csv or synthetic");
  std::filesystem::path p = j["csv"].get<std::string>();
  ds.csv = p.is_relative() && !base.empty() ? base / p : p;
  if (j.contains("label_column")) {
    const auto& col = j["label_column"];
    if (col.is_string()) {
      ds.csv_options.label_column = col.get<std::string>();
    } else {
      ds.csv_options.label_column = col.get<std::int64_t>();
    }
  }
  ds.csv_options.positive_label = j.value("positive_label", ds.csv_options.positive_label);
  ds.csv_options.categorical =
      j.value("categorical", std::vector<std::string>{});
  return ds;
}

}  // namespace

std::string_view to_string(AttackKind kind) noexcept {
  return kind == AttackKind::AP ? "AP" : "RE";
}

std::string_view to_string(OracleMode mode) noexcept {
  return mode == OracleMode::Local ? "local" : "loopback";
}

std::size_t ExperimentConfig::explore_budget() const noexcept {
  return attack == AttackKind::AP ? ap.explore_budget : re.explore_budget;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
  if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
  if (!dataset.csv && !dataset.synthetic) throw ConfigError("no dataset configured");
  defender.validate();
  if (attack == AttackKind::AP) {
    ap.validate();
  } else {
    re.validate();
    if (re.explore_budget < 1) throw ConfigError("B_Explore must be >= 1");
  }
  if (blacklist) {
    if (!(blacklist->epsilon > 0.0)) throw ConfigError("blacklist epsilon must be > 0");
    if (blacklist->new_attacks < 1) throw ConfigError("N_Attack_New must be >= 1");
  }
  if (sweep) {
    static const std::set<std::string> params = {"R_Exploit", "B_Explore", "epsilon"};
    if (!params.count(sweep->param)) {
      throw ConfigError("sweep parameter must be R_Exploit, B_Explore or epsilon");
    }
    if (sweep->values.empty()) throw ConfigError("sweep needs at least one value");
    if (sweep->param == "epsilon" && !blacklist) {
      throw ConfigError("an epsilon sweep needs the blacklist experiment enabled");
    }
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

json ExperimentConfig::to_json() const {
  json j = {{"dataset", dataset_to_json(dataset)},
            {"defender", defender.to_json()},
            {"attack", to_string(attack)},
            {"ap", ap_to_json(ap)},
            {"re", re_to_json(re)},
            {"runs", runs},
            {"master_seed", master_seed},
            {"cv_folds", cv_folds},
            {"knn_k", knn_k},
            {"oracle", to_string(oracle)}};
  j["service_budget"] = service_budget ? json(*service_budget) : json(nullptr);
  if (blacklist) {
    j["blacklist"] = {{"epsilon", blacklist->epsilon},
                      {"N_Attack_New", blacklist->new_attacks},
                      {"false_positives", blacklist->false_positives}};
  } else {
    j["blacklist"] = nullptr;
  }
  if (sweep) {
    j["sweep"] = {{"param", sweep->param}, {"values", sweep->values}};
  } else {
    j["sweep"] = nullptr;
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j,
                                             const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"dataset", "defender", "attack", "ap", "re", "runs", "master_seed",
                    "cv_folds", "knn_k", "oracle", "service_budget", "blacklist", "sweep",
                    "workers", "out_dir"},
                   "config");
    if (j.contains("dataset")) {
      cfg.dataset = dataset_from_json(j["dataset"], base_dir);
    } else {
      cfg.dataset.synthetic = SyntheticSpec{};
    }
    if (j.contains("defender")) cfg.defender = ModelSpec::from_json(j["defender"]);
    std::string attack = j.value("attack", std::string("AP"));
    if (attack == "AP" || attack == "ap") {
      cfg.attack = AttackKind::AP;
    } else if (attack == "RE" || attack == "re") {
      cfg.attack = AttackKind::RE;
    } else {
      throw ConfigError("attack must be AP or RE");
    }
    if (j.contains("ap")) cfg.ap = ap_from_json(j["ap"]);
    if (j.contains("re")) cfg.re = re_from_json(j["re"]);
    cfg.runs = j.value("runs", cfg.runs);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.cv_folds = j.value("cv_folds", cfg.cv_folds);
    cfg.knn_k = j.value("knn_k", cfg.knn_k);
    std::string oracle = j.value("oracle", std::string("local"));
    if (oracle == "local") {
      cfg.oracle = OracleMode::Local;
    } else if (oracle == "loopback") {
      cfg.oracle = OracleMode::Loopback;
    } else {
      throw ConfigError("oracle must be local or loopback");
    }
    if (j.contains("service_budget") && !j["service_budget"].is_null()) {
      cfg.service_budget = j["service_budget"].get<std::size_t>();
    }
    if (j.contains("blacklist") && !j["blacklist"].is_null()) {
      const auto& b = j["blacklist"];
      reject_unknown(b, {"epsilon", "N_Attack_New", "false_positives"}, "blacklist");
      BlacklistSettings s;
      s.epsilon = b.value("epsilon", s.epsilon);
      s.new_attacks = b.value("N_Attack_New", s.new_attacks);
      s.false_positives = b.value("false_positives", s.false_positives);
      cfg.blacklist = s;
    }
    if (j.contains("sweep") && !j["sweep"].is_null()) {
      const auto& s = j["sweep"];
      reject_unknown(s, {"param", "values"}, "sweep");
      cfg.sweep = SweepSpec{s.at("param").get<std::string>(),
                            s.at("values").get<std::vector<double>>()};
    }
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config '" + path.string() + "' is not JSON");
  return from_json(j, path.parent_path());
}

void apply_parameter(ExperimentConfig& cfg, const std::string& param, double value) {
  const bool ap = cfg.attack == AttackKind::AP;
  if (param == "R_Exploit") {
    (ap ? cfg.ap.r_exploit : cfg.re.r_exploit) = value;
  } else if (param == "B_Explore") {
    if (value < 1.0 || value != std::floor(value)) {
      throw ConfigError("B_Explore values must be positive integers");
    }
    (ap ? cfg.ap.explore_budget : cfg.re.explore_budget) = static_cast<std::size_t>(value);
  } else if (param == "epsilon") {
    if (!cfg.blacklist) cfg.blacklist = BlacklistSettings{};
    cfg.blacklist->epsilon = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + param + "'");
  }
  cfg.sweep.reset();
  cfg.validate();
}

}  // namespace see
