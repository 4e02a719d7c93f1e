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

#include "lihe/hemix.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lihe/errors.h"

namespace lihe {
namespace {

using nlohmann::json;

void check_square(const Mat& m, Eigen::Index dim, const char* name) {
  if (m.rows() != dim || m.cols() != dim) {
    throw ContractViolation(std::string("projection ") + name + " must be " +
                            std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (!m.allFinite()) {
    throw DomainError(std::string("projection ") + name + " has non-finite entries");
  }
}

void check_feature(const Vec& f, Eigen::Index dim) {
  if (f.size() != dim) {
    throw ContractViolation("feature has dimension " + std::to_string(f.size()) +
                            ", bundle expects " + std::to_string(dim));
  }
}

json flatten(const Mat& m) {
  // Row-major flattening, independent of Eigen's storage order.
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Mat unflatten(const json& j, Eigen::Index dim, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim * dim) {
    throw ContractViolation(std::string("weight file: ") + name + " must hold D*D values");
  }
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = j.at(r * dim + c).get<double>();
  }
  return m;
}

}  // namespace

void ProjectionBundle::validate(bool allow_endpoint_alpha) const {
  const Eigen::Index d = w_ev.rows();
  if (d < 1) throw ContractViolation("projection bundle must have D >= 1");
  check_square(w_ev, d, "W_EV");
  check_square(w_et, d, "W_ET");
  check_square(w_hv, d, "W_HV");
  check_square(w_ht, d, "W_HT");
  const bool alpha_ok = allow_endpoint_alpha ? (alpha >= 0.0 && alpha <= 1.0)
                                             : (alpha > 0.0 && alpha < 1.0);
  if (!alpha_ok) {
    throw DomainError("mixing weight alpha out of range: " + std::to_string(alpha));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("temperature tau must be > 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be > 0");
}

ProjectionBundle ProjectionBundle::random(Eigen::Index dim, std::uint64_t seed, double alpha,
                                          double tau, double kappa) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double gain = 1.0 / std::sqrt(static_cast<double>(dim));
  auto draw = [&] {
    Mat m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = gain * unit(rng);
    }
    return m;
  };
  ProjectionBundle b;
  b.w_ev = draw();
  b.w_et = draw();
  b.w_hv = draw();
  b.w_ht = draw();
  b.alpha = alpha;
  b.tau = tau;
  b.kappa = kappa;
  b.validate(/*allow_endpoint_alpha=*/true);
  return b;
}

ProjectionBundle ProjectionBundle::identity(Eigen::Index dim, double alpha, double tau,
                                            double kappa) {
  ProjectionBundle b;
  b.w_ev = b.w_et = b.w_hv = b.w_ht = Mat::Identity(dim, dim);
  b.alpha = alpha;
  b.tau = tau;
  b.kappa = kappa;
  b.validate(/*allow_endpoint_alpha=*/true);
  return b;
}

double sim_euclidean(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle) {
  check_feature(f_v, bundle.dim());
  check_feature(f_t, bundle.dim());
  const Vec u = bundle.w_ev.transpose() * f_v;
  const Vec w = bundle.w_et.transpose() * f_t;
  return u.dot(w);
}

CurvedPoint hyperbolic_embed(const Vec& f, const Mat& w, double kappa, EmbedMode mode) {
  check_feature(f, w.rows());
  if (w.cols() != w.rows()) throw ContractViolation("projection must be square");
  const Vec z = w.transpose() * f;
  if (!z.allFinite()) throw DomainError("hyperbolic_embed: non-finite projection");
  if (mode == EmbedMode::kLift) return lift(z, kappa);
  const CurvedPoint origin = apex(z.size(), kappa);
  TangentVector v;
  v.time = 0.0;
  v.spatial = z;
  v.base = origin;
  return exp_map(origin, v);
}

double sim_hyperbolic(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle) {
  const CurvedPoint a = hyperbolic_embed(f_v, bundle.w_hv, bundle.kappa, bundle.embed_mode);
  const CurvedPoint b = hyperbolic_embed(f_t, bundle.w_ht, bundle.kappa, bundle.embed_mode);
  return lorentz_inner(a, b);
}

double hemix(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle) {
  if (!(bundle.alpha >= 0.0 && bundle.alpha <= 1.0)) {
    throw DomainError("hemix: alpha must lie in [0, 1]");
  }
  return mix_scores(sim_euclidean(f_v, f_t, bundle), sim_hyperbolic(f_v, f_t, bundle),
                    bundle.alpha);
}

std::string bundle_to_json(const ProjectionBundle& bundle) {
  json j;
  j["format"] = "lihe-bundle";
  j["v"] = 1;
  j["D"] = bundle.dim();
  j["kappa"] = bundle.kappa;
  j["alpha"] = bundle.alpha;
  j["tau"] = bundle.tau;
  j["layout"] = "row-major";
  j["embed"] = bundle.embed_mode == EmbedMode::kLift ? "lift" : "exp_map";
  j["w_ev"] = flatten(bundle.w_ev);
  j["w_et"] = flatten(bundle.w_et);
  j["w_hv"] = flatten(bundle.w_hv);
  j["w_ht"] = flatten(bundle.w_ht);
  return j.dump();
}

ProjectionBundle bundle_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ContractViolation(std::string("weight file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("layout", "row-major") != "row-major") {
      throw ContractViolation("weight file: only row-major layout is supported");
    }
    const auto dim = j.at("D").get<Eigen::Index>();
    if (dim < 1) throw ContractViolation("weight file: D must be >= 1");
    ProjectionBundle b;
    b.w_ev = unflatten(j.at("w_ev"), dim, "w_ev");
    b.w_et = unflatten(j.at("w_et"), dim, "w_et");
    b.w_hv = unflatten(j.at("w_hv"), dim, "w_hv");
    b.w_ht = unflatten(j.at("w_ht"), dim, "w_ht");
    b.alpha = j.at("alpha").get<double>();
    b.tau = j.at("tau").get<double>();
    b.kappa = j.at("kappa").get<double>();
    const std::string embed = j.value("embed", "lift");
    if (embed == "lift") {
      b.embed_mode = EmbedMode::kLift;
    } else if (embed == "exp_map") {
      b.embed_mode = EmbedMode::kExpMap;
    } else {
      throw ContractViolation("weight file: unknown embed mode '" + embed + "'");
    }
    b.validate(/*allow_endpoint_alpha=*/true);
    return b;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("weight file: ") + e.what());
  }
}

void save_bundle(const ProjectionBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << bundle_to_json(bundle) << '\n';
}

ProjectionBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return bundle_from_json(buf.str());
}

}  // namespace lihe
