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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "lihe/lorentz.h"

namespace lihe {

using Mat = Eigen::MatrixXd;

inline constexpr double kDefaultTau = 0.07;
inline constexpr double kDefaultAlpha = 0.5;
inline constexpr int kDefaultDim = 512;

// How a projected feature z = f W is placed on the hyperboloid.
enum class EmbedMode {
  kLift,    // time coordinate from sqrt(|z|^2 + 1/kappa)
  kExpMap,  // exp_map at the apex along the tangent (0, z)
};

// Learnable state of the hybrid similarity. Features are row vectors, so
// every projection is f * W with W of shape D x D (row-major on disk).
struct ProjectionBundle {
  Mat w_ev;
  Mat w_et;
  Mat w_hv;
  Mat w_ht;
  double alpha = kDefaultAlpha;
  double tau = kDefaultTau;
  double kappa = kDefaultKappa;
  EmbedMode embed_mode = EmbedMode::kLift;

  Eigen::Index dim() const { return w_ev.rows(); }

  // Throws DomainError / ContractViolation when an invariant is broken.
  // alpha must lie strictly inside (0, 1) unless `allow_endpoint_alpha`.
  void validate(bool allow_endpoint_alpha = false) const;

  // Uniform(-1, 1) entries scaled by 1/sqrt(D), deterministic in `seed`.
  static ProjectionBundle random(Eigen::Index dim, std::uint64_t seed,
                                 double alpha = kDefaultAlpha, double tau = kDefaultTau,
                                 double kappa = kDefaultKappa);
  static ProjectionBundle identity(Eigen::Index dim, double alpha = kDefaultAlpha,
                                   double tau = kDefaultTau, double kappa = kDefaultKappa);
};

// <f_v W_EV, f_t W_ET>
double sim_euclidean(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle);

// z = f W, then placed on the sheet according to `mode`.
CurvedPoint hyperbolic_embed(const Vec& f, const Mat& w, double kappa,
                             EmbedMode mode = EmbedMode::kLift);

// Lorentzian inner product of the two embedded points; always <= -1/kappa.
double sim_hyperbolic(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle);

// (1 - alpha) Sim_E + alpha Sim_H
double hemix(const Vec& f_v, const Vec& f_t, const ProjectionBundle& bundle);

// Mixing in isolation, shared by hemix() and the loss so both produce the
// same bits for the same component scores.
inline double mix_scores(double sim_e, double sim_h, double alpha) {
  return (1.0 - alpha) * sim_e + alpha * sim_h;
}

// Weight file: JSON object {"format":"lihe-bundle","v":1,"D","kappa","alpha",
// "tau","layout":"row-major","embed":"lift"|"exp_map","w_ev","w_et","w_hv",
// "w_ht"} with each matrix a flat float64 array of D*D entries.
void save_bundle(const ProjectionBundle& bundle, const std::filesystem::path& path);
ProjectionBundle load_bundle(const std::filesystem::path& path);
std::string bundle_to_json(const ProjectionBundle& bundle);
ProjectionBundle bundle_from_json(const std::string& text);

}  // namespace lihe
