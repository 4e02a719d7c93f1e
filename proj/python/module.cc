// Copyright 2026 The LIHE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lihe/checks.h"
#include "lihe/decoupling.h"
#include "lihe/errors.h"
#include "lihe/estimator.h"
#include "lihe/hemix.h"
#include "lihe/lorentz.h"
#include "lihe/metrics.h"
#include "lihe/trainer.h"

namespace py = pybind11;

namespace {

py::dict toy_result_dict(const lihe::ToyExperimentResult& r) {
  py::dict d;
  d["initial_loss"] = r.initial_loss;
  d["final_loss"] = r.final_loss;
  d["initial_full_loss"] = r.initial_full_loss;
  d["final_full_loss"] = r.final_full_loss;
  d["accuracy"] = r.accuracy;
  d["apex_ratio"] = r.apex.ratio ? py::cast(*r.apex.ratio) : py::none();
  d["loss_trace"] = r.trained.loss_trace;
  d["bundle"] = r.trained.bundle;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lihe, m) {
  m.doc() = "Bindings for the lihe C++ core";

  py::register_exception<lihe::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<lihe::ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  static py::exception<lihe::ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lihe::ParseError& e) {
      PyErr_SetObject(parse_error.ptr(), py::make_tuple(e.what(), e.line(), e.reason()).ptr());
    }
  });

  // geometry
  py::class_<lihe::CurvedPoint>(m, "CurvedPoint")
      .def_readonly("time", &lihe::CurvedPoint::time)
      .def_readonly("spatial", &lihe::CurvedPoint::spatial)
      .def_readonly("kappa", &lihe::CurvedPoint::kappa)
      .def("ambient", &lihe::CurvedPoint::ambient);
  m.def("lift", &lihe::lift, py::arg("z"), py::arg("kappa") = lihe::kDefaultKappa);
  m.def("lorentz_inner", py::overload_cast<const lihe::Vec&, const lihe::Vec&>(&lihe::lorentz_inner));
  m.def("geodesic_distance", &lihe::geodesic_distance);
  m.def("satisfies_invariant", &lihe::satisfies_invariant);

  // similarity
  py::enum_<lihe::EmbedMode>(m, "EmbedMode")
      .value("LIFT", lihe::EmbedMode::kLift)
      .value("EXP_MAP", lihe::EmbedMode::kExpMap);
  py::class_<lihe::ProjectionBundle>(m, "ProjectionBundle")
      .def_readwrite("w_ev", &lihe::ProjectionBundle::w_ev)
      .def_readwrite("w_et", &lihe::ProjectionBundle::w_et)
      .def_readwrite("w_hv", &lihe::ProjectionBundle::w_hv)
      .def_readwrite("w_ht", &lihe::ProjectionBundle::w_ht)
      .def_readwrite("alpha", &lihe::ProjectionBundle::alpha)
      .def_readwrite("tau", &lihe::ProjectionBundle::tau)
      .def_readwrite("kappa", &lihe::ProjectionBundle::kappa)
      .def_readwrite("embed_mode", &lihe::ProjectionBundle::embed_mode)
      .def_property_readonly("dim", &lihe::ProjectionBundle::dim)
      .def_static("random", &lihe::ProjectionBundle::random, py::arg("dim"), py::arg("seed"),
                  py::arg("alpha") = lihe::kDefaultAlpha, py::arg("tau") = lihe::kDefaultTau,
                  py::arg("kappa") = lihe::kDefaultKappa)
      .def_static("identity", &lihe::ProjectionBundle::identity, py::arg("dim"),
                  py::arg("alpha") = lihe::kDefaultAlpha, py::arg("tau") = lihe::kDefaultTau,
                  py::arg("kappa") = lihe::kDefaultKappa)
      .def("to_json", &lihe::bundle_to_json)
      .def_static("from_json", &lihe::bundle_from_json);
  m.def("load_bundle", &lihe::load_bundle);
  m.def("save_bundle", &lihe::save_bundle);
  m.def("sim_euclidean", &lihe::sim_euclidean);
  m.def("sim_hyperbolic", &lihe::sim_hyperbolic);
  m.def("hemix", &lihe::hemix);
  m.def("mix_scores", &lihe::mix_scores);

  // mixing-weight analysis
  py::class_<lihe::MixtureErrorModel>(m, "MixtureErrorModel")
      .def(py::init([](double b_e, double b_h, double sigma_e, double sigma_h, double rho) {
             return lihe::MixtureErrorModel{b_e, b_h, sigma_e, sigma_h, rho};
           }),
           py::arg("b_e"), py::arg("b_h"), py::arg("sigma_e"), py::arg("sigma_h"), py::arg("rho"))
      .def_readwrite("b_e", &lihe::MixtureErrorModel::b_e)
      .def_readwrite("b_h", &lihe::MixtureErrorModel::b_h)
      .def_readwrite("sigma_e", &lihe::MixtureErrorModel::sigma_e)
      .def_readwrite("sigma_h", &lihe::MixtureErrorModel::sigma_h)
      .def_readwrite("rho", &lihe::MixtureErrorModel::rho);
  m.def("mse_of_mix", &lihe::mse_of_mix, py::arg("alpha"), py::arg("model"));
  m.def("quadratic_coeffs", [](const lihe::MixtureErrorModel& mm) {
    const auto q = lihe::quadratic_coeffs(mm);
    return py::make_tuple(q.a, q.b, q.c);
  });
  // None when the quadratic is degenerate.
  m.def("optimal_alpha", [](const lihe::MixtureErrorModel& mm) -> py::object {
    const auto o = lihe::optimal_alpha(mm);
    return o.value ? py::cast(*o.value) : py::none();
  });
  m.def("monte_carlo_mse", [](double alpha, const lihe::MixtureErrorModel& mm, std::int64_t n,
                              std::uint64_t seed) {
    const auto r = lihe::monte_carlo_mse(alpha, mm, n, seed);
    return py::make_tuple(r.estimate, r.std_error);
  }, py::arg("alpha"), py::arg("model"), py::arg("n"), py::arg("seed"));

  // decoupling
  py::class_<lihe::DecoupleResult>(m, "DecoupleResult")
      .def_readonly("count", &lihe::DecoupleResult::count)
      .def_readonly("phrases", &lihe::DecoupleResult::phrases)
      .def_readonly("raw", &lihe::DecoupleResult::raw)
      .def("__eq__", &lihe::DecoupleResult::operator==);
  m.def("parse_response", &lihe::parse_response);
  m.def("render_response", &lihe::render_response);
  m.def("rule_based_decompose", &lihe::rule_based_decompose);
  m.def("build_prompt", [](const std::string& expr, bool include_examples) {
    const auto p = lihe::build_prompt(expr, include_examples);
    py::dict d;
    d["general"] = p.general;
    d["constraints"] = p.constraints;
    d["examples"] = p.examples;
    d["query"] = p.query;
    d["user_message"] = p.user_message();
    return d;
  }, py::arg("expression"), py::arg("include_examples") = true);

  // metrics; boxes are (x1, y1, x2, y2) tuples
  using BoxTuple = std::tuple<double, double, double, double>;
  const auto to_box = [](const BoxTuple& t) {
    return lihe::Box{std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)};
  };
  const auto to_sample = [to_box](const std::vector<BoxTuple>& gt,
                                  const std::vector<BoxTuple>& pred) {
    lihe::EvalSample s;
    for (const auto& b : gt) s.gt_boxes.push_back(to_box(b));
    for (const auto& b : pred) s.pred_boxes.push_back(to_box(b));
    return s;
  };
  m.def("iou", [to_box](const BoxTuple& a, const BoxTuple& b) { return lihe::iou(to_box(a), to_box(b)); });
  m.def("match_sample", [to_sample](const std::vector<BoxTuple>& gt, const std::vector<BoxTuple>& pred,
                                    double thresh) {
    const auto r = lihe::match_sample(to_sample(gt, pred), thresh);
    py::dict d;
    d["tp"] = r.tp;
    d["fp"] = r.fp;
    d["fn"] = r.fn;
    d["f1"] = r.f1;
    return d;
  }, py::arg("gt"), py::arg("pred"), py::arg("iou_thresh") = lihe::kDefaultIouThreshold);
  using Pair = std::pair<std::vector<BoxTuple>, std::vector<BoxTuple>>;
  m.def("precision_at_f1", [to_sample](const std::vector<Pair>& samples, double thresh) {
    std::vector<lihe::EvalSample> s;
    for (const auto& [gt, pred] : samples) s.push_back(to_sample(gt, pred));
    return lihe::precision_at_f1(s, thresh);
  }, py::arg("samples"), py::arg("iou_thresh") = lihe::kDefaultIouThreshold);
  m.def("n_acc", [to_sample](const std::vector<Pair>& samples) {
    std::vector<lihe::EvalSample> s;
    for (const auto& [gt, pred] : samples) s.push_back(to_sample(gt, pred));
    return lihe::n_acc(s);
  });

  // toy training and self-checks
  m.def("run_toy_experiment", [](std::uint64_t seed, int steps, double alpha, int batch_images) {
    lihe::ToyExperimentConfig cfg;
    cfg.train.seed = seed;
    cfg.train.steps = steps;
    cfg.train.alpha = alpha;
    cfg.train.batch_images = batch_images;
    lihe::ToyExperimentResult r;
    {
      py::gil_scoped_release release;
      r = lihe::run_toy_experiment(cfg);
    }
    return toy_result_dict(r);
  }, py::arg("seed") = 42, py::arg("steps") = 500, py::arg("alpha") = lihe::kDefaultAlpha,
     py::arg("batch_images") = lihe::TrainConfig{}.batch_images);
  m.def("run_geometry_suite", [](int cases, std::uint64_t seed) {
    py::list out;
    for (const auto& r : lihe::run_geometry_suite(cases, seed)) {
      out.append(py::module_::import("json").attr("loads")(r.to_json().dump()));
    }
    return out;
  }, py::arg("cases") = 1000, py::arg("seed") = 42);
}
