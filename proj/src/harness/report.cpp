#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "see/errors.hpp"
#include "see/harness.hpp"

namespace see {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

json RunRecord::to_json() const {
  json j = {{"run_index", run_index},
            {"metrics", metrics.to_json()},
            {"seed_probes", seed_probes},
            {"explore_probes", explore_probes},
            {"exploit_probes", exploit_probes},
            {"explored_legitimate", explored_legitimate},
            {"explore_set_size", explore_set_size},
            {"defender_accuracy", defender_accuracy}};
  j["surrogate_accuracy"] = surrogate_accuracy ? json(*surrogate_accuracy) : json(nullptr);
  j["blacklist"] = blacklist ? blacklist->to_json() : json(nullptr);
  return j;
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  r.run_index = j.at("run_index").get<std::size_t>();
  r.metrics = DiversityReport::from_json(j.at("metrics"));
  r.seed_probes = j.at("seed_probes").get<std::size_t>();
  r.explore_probes = j.at("explore_probes").get<std::size_t>();
  r.exploit_probes = j.at("exploit_probes").get<std::size_t>();
  r.explored_legitimate = j.at("explored_legitimate").get<std::size_t>();
  r.explore_set_size = j.at("explore_set_size").get<std::size_t>();
  r.defender_accuracy = j.at("defender_accuracy").get<double>();
  if (j.contains("surrogate_accuracy") && !j["surrogate_accuracy"].is_null()) {
    r.surrogate_accuracy = j["surrogate_accuracy"].get<double>();
  }
  if (j.contains("blacklist") && !j["blacklist"].is_null()) {
    r.blacklist = BlacklistOutcome::from_json(j["blacklist"]);
  }
  return r;
}

std::map<std::string, double> RunRecord::fields() const {
  std::map<std::string, double> f = {
      {"ear", metrics.ear},
      {"sigma", metrics.sigma},
      {"knn_dist", metrics.knn_dist},
      {"mst_dist", metrics.mst_dist},
      {"seed_probes", static_cast<double>(seed_probes)},
      {"explore_probes", static_cast<double>(explore_probes)},
      {"exploit_probes", static_cast<double>(exploit_probes)},
      {"explored_legitimate", static_cast<double>(explored_legitimate)},
      {"explore_set_size", static_cast<double>(explore_set_size)},
      {"defender_accuracy", defender_accuracy},
  };
  if (surrogate_accuracy) f["surrogate_accuracy"] = *surrogate_accuracy;
  if (blacklist) {
    f["bl_stopped_fraction"] = blacklist->stopped_fraction;
    f["bl_stopped_count"] = static_cast<double>(blacklist->stopped_count);
    f["bl_second_wave_ea"] = static_cast<double>(blacklist->second_wave_ea_count);
    if (blacklist->false_positive_rate) {
      f["bl_false_positive_rate"] = *blacklist->false_positive_rate;
    }
  }
  return f;
}

std::map<std::string, Summary> aggregate_runs(const std::vector<RunRecord>& runs) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : runs) {
    for (const auto& [k, v] : r.fields()) columns[k].push_back(v);
  }
  std::map<std::string, Summary> out;
  for (const auto& [k, vals] : columns) {
    Summary s;
    double sum = 0.0;
    for (double v : vals) sum += v;
    s.mean = sum / static_cast<double>(vals.size());
    if (vals.size() > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - s.mean) * (v - s.mean);
      s.std = std::sqrt(ss / static_cast<double>(vals.size() - 1));
    }
    out[k] = s;
  }
  return out;
}

json RunReport::to_json() const {
  json runs_j = json::array();
  for (const auto& r : runs) runs_j.push_back(r.to_json());
  json agg = json::object();
  for (const auto& [k, s] : aggregate) agg[k] = {{"mean", s.mean}, {"std", s.std}};
  return {{"config", config}, {"runs", runs_j}, {"aggregate", agg}};
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.config = j.at("config");
  for (const auto& run : j.at("runs")) r.runs.push_back(RunRecord::from_json(run));
  for (const auto& [k, v] : j.at("aggregate").items()) {
    r.aggregate[k] = Summary{v.at("mean").get<double>(), v.at("std").get<double>()};
  }
  return r;
}

const Summary& RunReport::at(const std::string& field) const {
  auto it = aggregate.find(field);
  if (it == aggregate.end()) throw Error("report has no field '" + field + "'");
  return it->second;
}

std::string report_csv(const RunReport& report) {
  std::set<std::string> names;
  for (const auto& r : report.runs) {
    for (const auto& [k, _] : r.fields()) names.insert(k);
  }
  std::ostringstream out;
  out << "run_index";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (const auto& r : report.runs) {
    const auto f = r.fields();
    out << r.run_index;
    for (const auto& n : names) {
      out << ',';
      if (auto it = f.find(n); it != f.end()) out << fmt(it->second);
    }
    out << '\n';
  }
  for (const char* row : {"mean", "std"}) {
    out << row;
    for (const auto& n : names) {
      out << ',';
      if (auto it = report.aggregate.find(n); it != report.aggregate.end()) {
        out << fmt(row[0] == 'm' ? it->second.mean : it->second.std);
      }
    }
    out << '\n';
  }
  return out.str();
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  if (format == ReportFormat::Json) {
    write_text(path, report.to_json().dump(2) + "\n");
  } else {
    write_text(path, report_csv(report));
  }
}

void write_sweep_csv(const std::string& param,
                     const std::vector<std::pair<double, RunReport>>& results,
                     const std::filesystem::path& path) {
  std::ostringstream out;
  out << param << ",ear_mean,ear_std,sigma,knn_dist,mst_dist\n";
  for (const auto& [value, rep] : results) {
    out << fmt(value) << ',' << fmt(rep.at("ear").mean) << ',' << fmt(rep.at("ear").std)
        << ',' << fmt(rep.at("sigma").mean) << ',' << fmt(rep.at("knn_dist").mean) << ','
        << fmt(rep.at("mst_dist").mean) << '\n';
  }
  write_text(path, out.str());
}

}  // namespace see
