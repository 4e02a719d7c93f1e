# Copyright 2026 The LIHE Toolkit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hyperbolic-Euclidean similarity mixing, referring-expression decoupling
and grounding metrics, backed by the lihe C++ core."""

from ._lihe import (
    ContractViolation,
    CurvedPoint,
    DecoupleResult,
    DomainError,
    EmbedMode,
    MixtureErrorModel,
    ParseError,
    ProjectionBundle,
    build_prompt,
    geodesic_distance,
    hemix,
    iou,
    lift,
    load_bundle,
    lorentz_inner,
    match_sample,
    mix_scores,
    monte_carlo_mse,
    mse_of_mix,
    n_acc,
    optimal_alpha,
    parse_response,
    precision_at_f1,
    quadratic_coeffs,
    render_response,
    rule_based_decompose,
    run_geometry_suite,
    run_toy_experiment,
    satisfies_invariant,
    save_bundle,
    sim_euclidean,
    sim_hyperbolic,
)

__version__ = "0.1.0"
