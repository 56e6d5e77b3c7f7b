#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "see/attack_ap.hpp"
#include "see/attack_re.hpp"
#include "see/countermeasure.hpp"
#include "see/errors.hpp"
#include "see/harness.hpp"
#include "see/metrics.hpp"
#include "see/models.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

see::Dataset to_dataset(const std::vector<see::FeatureVector>& x,
                        const std::vector<int>& y) {
  std::vector<see::ClassLabel> labels;
  labels.reserve(y.size());
  for (int v : y) labels.push_back(see::label_from_int(v));
  return see::Dataset(x, std::move(labels));
}

}  // namespace

PYBIND11_MODULE(_see, m) {
  m.doc() = "Seed-explore-exploit attack simulation core";

  auto base = py::register_exception<see::Error>(m, "Error");
  py::register_exception<see::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<see::SeedFailure>(m, "SeedFailure", base.ptr());
  py::register_exception<see::BudgetExhausted>(m, "BudgetExhausted", base.ptr());
  py::register_exception<see::DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<see::TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<see::ParseError>(m, "ParseError", base.ptr());

  py::class_<see::Model>(m, "Model")
      .def_static(
          "train",
          [](const std::string& spec_json, const std::vector<see::FeatureVector>& x,
             const std::vector<int>& y) {
            return see::train(see::ModelSpec::from_json(json::parse(spec_json)),
                              to_dataset(x, y));
          },
          py::arg("spec_json"), py::arg("x"), py::arg("y"))
      .def_static("from_json",
                  [](const std::string& s) { return see::Model::from_json(json::parse(s)); })
      .def("to_json", [](const see::Model& mdl) { return mdl.to_json().dump(); })
      .def_property_readonly("dim", &see::Model::dim)
      .def("predict",
           [](const see::Model& mdl, const see::FeatureVector& x) {
             return see::to_int(mdl.predict(x));
           })
      .def("predict_many", [](const see::Model& mdl, const std::vector<see::FeatureVector>& xs) {
        std::vector<int> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(see::to_int(mdl.predict(x)));
        return out;
      });

  m.def("deviation", [](const std::vector<see::FeatureVector>& pts) {
    return see::deviation(pts);
  });
  m.def(
      "knn_dist",
      [](const std::vector<see::FeatureVector>& pts, std::size_t k) {
        return see::knn_dist(pts, k);
      },
      py::arg("points"), py::arg("k") = see::kDefaultKnnK);
  m.def("mst_dist", [](const std::vector<see::FeatureVector>& pts) {
    return see::mst_dist(pts);
  });

  m.def(
      "perturb",
      [](const see::FeatureVector& x, double radius, std::uint64_t seed) {
        see::Rng rng(seed);
        return see::perturb(x, radius, rng);
      },
      py::arg("x"), py::arg("radius"), py::arg("seed") = 0);
  m.def(
      "orthonormal_probe",
      [](const see::FeatureVector& xl, const see::FeatureVector& xm, double lambda_max,
         std::uint64_t seed) {
        see::Rng rng(seed);
        return see::orthonormal_probe(xl, xm, lambda_max, rng);
      },
      py::arg("x_l"), py::arg("x_m"), py::arg("lambda_max") = 0.25, py::arg("seed") = 0);

  m.def(
      "is_blocked",
      [](const std::vector<see::FeatureVector>& entries, const see::FeatureVector& x,
         double epsilon) {
        see::Blacklist bl(entries, epsilon, x.size());
        return bl.is_blocked(x);
      },
      py::arg("entries"), py::arg("x"), py::arg("epsilon") = 0.1);

  m.def(
      "make_synthetic",
      [](const std::string& spec_json, std::uint64_t seed) {
        see::Rng rng(seed);
        auto d = see::make_synthetic(see::SyntheticSpec::from_json(json::parse(spec_json)), rng);
        std::vector<int> y;
        for (auto l : d.labels()) y.push_back(see::to_int(l));
        return py::make_tuple(d.samples(), y);
      },
      py::arg("spec_json") = "{}", py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        auto cfg = see::ExperimentConfig::from_json(json::parse(config_json));
        py::gil_scoped_release release;
        return see::run_experiment(cfg).to_json().dump();
      },
      py::arg("config_json"));
  m.def(
      "run_sweep",
      [](const std::string& config_json) {
        auto cfg = see::ExperimentConfig::from_json(json::parse(config_json));
        py::gil_scoped_release release;
        json out = json::array();
        for (const auto& [v, rep] : see::run_sweep(cfg)) {
          out.push_back({{"value", v}, {"report", rep.to_json()}});
        }
        return out.dump();
      },
      py::arg("config_json"));
}
