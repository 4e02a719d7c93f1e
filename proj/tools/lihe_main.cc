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

// lihe: command-line entry point for the geometry checks, the estimator
// analysis, toy training, decoupling, grounding, evaluation and the full
// pipeline.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lihe/checks.h"
#include "lihe/decoupling.h"
#include "lihe/errors.h"
#include "lihe/estimator.h"
#include "lihe/grounding.h"
#include "lihe/hemix.h"
#include "lihe/io.h"
#include "lihe/pipeline.h"
#include "lihe/trainer.h"

namespace fs = std::filesystem;
using lihe::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSampleFailures = 1;
constexpr int kExitConfig = 2;

struct Global {
  std::uint64_t seed = 42;
  std::string log_level = "warn";
  std::string out;
};

// Emit the resolved configuration on stderr so stdout stays machine-readable.
void print_config(const Global& g, const std::string& command, Json options) {
  Json cfg;
  cfg["command"] = command;
  cfg["seed"] = g.seed;
  cfg["log_level"] = g.log_level;
  cfg["out"] = g.out.empty() ? Json(nullptr) : Json(g.out);
  cfg["options"] = std::move(options);
  std::cerr << cfg.dump() << "\n";
}

// Writes `text` to --out when given, otherwise to stdout.
void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    lihe::write_text(g.out, text);
  }
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

Json property_rows(const std::vector<lihe::PropertyResult>& results, bool* all_passed) {
  Json rows = Json::array();
  *all_passed = true;
  for (const auto& r : results) {
    rows.push_back(r.to_json());
    *all_passed = *all_passed && r.passed;
  }
  return rows;
}

// --- geom-check ------------------------------------------------------------

struct GeomCheckArgs {
  int cases = 1000;
};

int run_geom_check(const Global& g, const GeomCheckArgs& a) {
  print_config(g, "geom-check", {{"cases", a.cases}});
  const auto results = lihe::run_geometry_suite(a.cases, g.seed);
  for (const auto& r : results) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, worst "
              << r.worst << ")\n";
  }
  bool ok = false;
  Json rows = property_rows(results, &ok);
  emit(g, pretty({{"passed", ok}, {"properties", rows}}));
  return ok ? kExitOk : kExitSampleFailures;
}

// --- grad-check ------------------------------------------------------------

struct GradCheckArgs {
  int batches = 50;
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  int max_dim = 16;
};

int run_grad_check(const Global& g, const GradCheckArgs& a) {
  print_config(g, "grad-check",
               {{"batches", a.batches},
                {"epsilon", a.epsilon},
                {"tolerance", a.tolerance},
                {"max_dim", a.max_dim}});
  const auto r = lihe::run_gradient_suite(a.batches, g.seed, a.epsilon, a.tolerance, a.max_dim);
  std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (worst " << r.worst << ")\n";
  emit(g, pretty(r.to_json()));
  return r.passed ? kExitOk : kExitSampleFailures;
}

// --- analyze-alpha ---------------------------------------------------------

struct AnalyzeAlphaArgs {
  lihe::MixtureErrorModel model;
  std::int64_t mc_n = 1000000;
};

int run_analyze_alpha(const Global& g, const AnalyzeAlphaArgs& a) {
  const auto& m = a.model;
  print_config(g, "analyze-alpha",
               {{"b_e", m.b_e},
                {"b_h", m.b_h},
                {"sigma_e", m.sigma_e},
                {"sigma_h", m.sigma_h},
                {"rho", m.rho},
                {"mc_n", a.mc_n}});
  m.validate();
  const lihe::QuadraticCoeffs q = lihe::quadratic_coeffs(m);
  const lihe::OptimalAlpha opt = lihe::optimal_alpha(m);

  Json report;
  report["coefficients"] = {{"A", q.a}, {"B", q.b}, {"C", q.c}};
  if (opt.value) {
    const double s = *opt.value;
    report["alpha_star"] = s;
    report["alpha_star_in_unit_interval"] = !opt.outside_unit_interval;
    report["mse_at_alpha_star"] = lihe::mse_of_mix(s, m);
    report["closed_form_minimum"] = q.c - q.b * q.b / q.a;
    report["improves_on_endpoints"] =
        lihe::mse_of_mix(s, m) < std::min(lihe::mse_of_mix(0.0, m), lihe::mse_of_mix(1.0, m));
  } else {
    report["alpha_star"] = nullptr;
    report["degenerate"] = true;
  }

  Json curve = Json::array();
  for (int i = 0; i <= 10; ++i) {
    const double alpha = i / 10.0;
    curve.push_back({{"alpha", alpha}, {"mse", lihe::mse_of_mix(alpha, m)}});
  }
  report["curve"] = std::move(curve);

  if (a.mc_n > 0) {
    std::vector<double> probes = {0.0, 0.5, 1.0};
    if (opt.value) probes.push_back(*opt.value);
    Json checks = Json::array();
    bool agree = true;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double alpha = probes[i];
      const auto mc = lihe::monte_carlo_mse(alpha, m, a.mc_n, g.seed + i);
      const double closed = lihe::mse_of_mix(alpha, m);
      const double dev = std::abs(mc.estimate - closed);
      const bool ok = dev <= 3.0 * mc.std_error || dev <= 1e-12;
      agree = agree && ok;
      checks.push_back({{"alpha", alpha},
                        {"closed_form", closed},
                        {"monte_carlo", mc.estimate},
                        {"std_error", mc.std_error},
                        {"within_3_std_error", ok}});
    }
    report["oracle"] = {{"n", a.mc_n}, {"agrees", agree}, {"checks", checks}};
  }
  emit(g, pretty(report));
  return kExitOk;
}

// --- train-toy -------------------------------------------------------------

struct TrainToyArgs {
  lihe::TrainConfig train;
  int dim = 8;
  int parents = 3;
  int children = 3;
  int train_samples = 512;
  int eval_samples = 256;
  double noise = 0.05;
  std::string optimizer = "adam";
  std::string data;
  std::string trace_csv;
  std::string apex_json;
};

fs::path sibling(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  p.replace_extension();
  return p.string() + suffix;
}

std::string trace_to_csv(const std::vector<double>& trace) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "step,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) csv << i << "," << trace[i] << "\n";
  return csv.str();
}

int run_train_toy(const Global& g, TrainToyArgs a) {
  a.train.seed = g.seed;
  a.train.optimizer = a.optimizer == "sgd" ? lihe::OptimizerKind::kSgd : lihe::OptimizerKind::kAdam;
  const std::string trace_path =
      !a.trace_csv.empty() ? a.trace_csv : (g.out.empty() ? "" : sibling(g.out, ".loss.csv").string());
  const std::string apex_path =
      !a.apex_json.empty() ? a.apex_json : (g.out.empty() ? "" : sibling(g.out, ".apex.json").string());
  print_config(g, "train-toy",
               {{"steps", a.train.steps},
                {"lr", a.train.lr},
                {"alpha", a.train.alpha},
                {"tau", a.train.tau},
                {"kappa", a.train.kappa},
                {"dim", a.dim},
                {"negatives", a.train.negatives_per_image},
                {"intra_negatives", a.train.intra_negatives},
                {"batch_images", a.train.batch_images},
                {"optimizer", a.optimizer},
                {"weight_decay", a.train.weight_decay},
                {"parents", a.parents},
                {"children", a.children},
                {"train_samples", a.train_samples},
                {"eval_samples", a.eval_samples},
                {"noise", a.noise},
                {"data", a.data.empty() ? Json(nullptr) : Json(a.data)},
                {"trace_csv", trace_path},
                {"apex_json", apex_path}});
  a.train.validate();

  Json summary;
  lihe::TrainResult trained;
  if (!a.data.empty()) {
    std::size_t skipped = 0;
    const lihe::GroundingBatch batch =
        lihe::batch_from_records(lihe::read_jsonl(a.data), &skipped);
    if (batch.images.empty()) throw lihe::DomainError("no valid training records in " + a.data);
    const Eigen::Index d = batch.images.front().text.size();
    lihe::LossOptions opts;
    opts.intra_negatives = a.train.intra_negatives;
    const lihe::ProjectionBundle start = lihe::initial_bundle(d, a.train);
    summary["records_used"] = batch.images.size();
    summary["records_skipped_invalid"] = skipped;
    summary["initial_loss"] = lihe::mean_batch_loss(batch, start, a.train.batch_images, opts);
    trained = lihe::train(batch, a.train, start);
    summary["final_loss"] =
        lihe::mean_batch_loss(batch, trained.bundle, a.train.batch_images, opts);
    summary["selection_accuracy"] = lihe::selection_accuracy(batch, trained.bundle);
    summary["apex"] = nullptr;
  } else {
    lihe::ToyExperimentConfig cfg;
    cfg.train = a.train;
    cfg.parents = a.parents;
    cfg.children_per_parent = a.children;
    cfg.dim = a.dim;
    cfg.train_samples = a.train_samples;
    cfg.eval_samples = a.eval_samples;
    cfg.noise_scale = a.noise;
    lihe::ToyExperimentResult r = lihe::run_toy_experiment(cfg);
    summary["initial_loss"] = r.initial_loss;
    summary["final_loss"] = r.final_loss;
    summary["initial_full_set_loss"] = r.initial_full_loss;
    summary["final_full_set_loss"] = r.final_full_loss;
    summary["heldout_selection_accuracy"] = r.accuracy;
    summary["apex"] = r.apex.to_json();
    trained = std::move(r.trained);
  }

  if (!g.out.empty()) lihe::save_bundle(trained.bundle, g.out);
  if (!trace_path.empty()) lihe::write_text(trace_path, trace_to_csv(trained.loss_trace));
  if (!apex_path.empty()) lihe::write_text(apex_path, pretty(summary["apex"]));
  std::cout << pretty(summary);
  return kExitOk;
}

// --- decouple --------------------------------------------------------------

struct DecoupleArgs {
  std::string expr;
  std::string image;
  bool offline = false;
  double timeout_s = 30.0;
  int retries = 2;
  bool no_examples = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json decoupled_json(const lihe::DecoupleResult& r) {
  return {{"count", r.count}, {"phrases", r.phrases}, {"raw", r.raw}};
}

int run_decouple(const Global& g, const DecoupleArgs& a) {
  print_config(g, "decouple",
               {{"expr", a.expr},
                {"image", a.image.empty() ? Json(nullptr) : Json(a.image)},
                {"offline", a.offline},
                {"vlm_timeout_s", a.timeout_s},
                {"retries", a.retries},
                {"include_examples", !a.no_examples}});
  if (a.offline) {
    emit(g, decoupled_json(lihe::rule_based_decompose(a.expr)).dump() + "\n");
    return kExitOk;
  }
  lihe::VlmClientConfig cfg = lihe::VlmClientConfig::from_env();
  cfg.timeout = std::chrono::duration<double>(a.timeout_s);
  std::optional<std::string> image;
  if (!a.image.empty()) image = read_file(a.image);
  lihe::HttpVlmTransport transport(cfg);
  try {
    const auto r = lihe::decouple_via_service(a.expr, image, transport, a.retries, !a.no_examples);
    emit(g, decoupled_json(r).dump() + "\n");
    return kExitOk;
  } catch (const lihe::DecoupleError& e) {
    spdlog::error("decoupling failed after {} attempt(s): {}", e.attempts(), e.what());
    Json err = {{"error", e.what()},
                {"kind", e.kind() == lihe::DecoupleError::Kind::kParse ? "parse" : "transport"},
                {"attempts", e.attempts()},
                {"raw", e.raw()}};
    emit(g, err.dump() + "\n");
    return kExitSampleFailures;
  }
}

// --- ground ----------------------------------------------------------------

struct GroundArgs {
  std::string anchors;
  std::string texts;
  std::string weights;
  double top_frac = lihe::kDefaultTopFraction;
  bool distinct = false;
};

int run_ground(const Global& g, const GroundArgs& a) {
  print_config(g, "ground",
               {{"anchors", a.anchors},
                {"texts", a.texts},
                {"weights", a.weights},
                {"top_frac", a.top_frac},
                {"distinct_anchors", a.distinct}});
  const lihe::ProjectionBundle bundle = lihe::load_bundle(a.weights);
  const lihe::AnchorTable anchors = lihe::anchors_from_records(lihe::read_jsonl(a.anchors));
  const auto texts = lihe::texts_from_records(lihe::read_jsonl(a.texts));
  lihe::GroundingOptions opts;
  opts.top_fraction = a.top_frac;
  opts.distinct_anchors = a.distinct;

  std::vector<Json> rows;
  int failures = 0;
  for (const auto& t : texts) {
    try {
      const auto it = anchors.find(t.image_id);
      if (it == anchors.end()) throw lihe::DomainError("no anchors for image '" + t.image_id + "'");
      lihe::GroundingSample s;
      s.sample_id = t.sample_id;
      s.anchors = it->second;
      s.decoupled.count = t.phrases.size();
      s.decoupled.phrases = t.phrases;
      s.phrase_features = t.features;
      const auto out = lihe::ground(s, bundle, opts);
      rows.push_back(lihe::box_set_to_json(out.sample_id, out.boxes));
    } catch (const std::exception& e) {
      spdlog::error("sample {} failed: {}", t.sample_id, e.what());
      ++failures;
    }
  }
  emit(g, lihe::to_jsonl("predictions", rows));
  if (failures) std::cerr << failures << " sample(s) failed\n";
  return failures ? kExitSampleFailures : kExitOk;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string gt;
  std::string pred;
  double iou = lihe::kDefaultIouThreshold;
  std::string metric = "grec";
  bool per_sample = false;
};

int run_eval(const Global& g, const EvalArgs& a) {
  print_config(g, "eval",
               {{"gt", a.gt},
                {"pred", a.pred},
                {"iou", a.iou},
                {"metric", a.metric},
                {"per_sample", a.per_sample}});
  const auto gt = lihe::box_sets_from_records(lihe::read_jsonl(a.gt));
  const auto pred = lihe::box_sets_from_records(lihe::read_jsonl(a.pred));
  const auto samples = lihe::join_for_eval(gt, pred);
  const auto kind = a.metric == "wrec" ? lihe::MetricKind::kWrec : lihe::MetricKind::kGrec;
  emit(g, pretty(lihe::evaluation_report(samples, a.iou, kind, a.per_sample)));
  return kExitOk;
}

// --- pipeline --------------------------------------------------------------

struct PipelineArgs {
  lihe::PipelineConfig cfg;
  std::string lexicon;
  bool offline = false;
  double timeout_s = 30.0;
  bool no_examples = false;
};

int run_pipeline_cmd(const Global& g, PipelineArgs a) {
  if (g.out.empty()) throw std::runtime_error("pipeline needs --out <directory>");
  if (!a.lexicon.empty()) a.cfg.lexicon = a.lexicon;
  a.cfg.include_examples = !a.no_examples;
  a.cfg.encoder_seed = g.seed;
  print_config(g, "pipeline",
               {{"anchors", a.cfg.anchors.string()},
                {"expressions", a.cfg.expressions.string()},
                {"weights", a.cfg.weights.string()},
                {"gt", a.cfg.ground_truth.string()},
                {"lexicon", a.lexicon.empty() ? Json(nullptr) : Json(a.lexicon)},
                {"top_frac", a.cfg.grounding.top_fraction},
                {"distinct_anchors", a.cfg.grounding.distinct_anchors},
                {"iou", a.cfg.iou},
                {"offline", a.offline},
                {"vlm_timeout_s", a.timeout_s},
                {"retries", a.cfg.retries},
                {"include_examples", a.cfg.include_examples}});

  std::unique_ptr<lihe::HttpVlmTransport> transport;
  if (!a.offline) {
    lihe::VlmClientConfig vc = lihe::VlmClientConfig::from_env();
    vc.timeout = std::chrono::duration<double>(a.timeout_s);
    transport = std::make_unique<lihe::HttpVlmTransport>(vc);
  }
  const lihe::PipelineResult r = lihe::run_pipeline(a.cfg, transport.get());

  const fs::path dir(g.out);
  fs::create_directories(dir);
  lihe::write_jsonl(dir / "predictions.jsonl", "predictions", r.predictions);
  lihe::write_text(dir / "report.json", pretty(r.report));
  std::cerr << "wrote " << (dir / "predictions.jsonl").string() << " and "
            << (dir / "report.json").string() << "\n";
  if (!r.failures.empty()) std::cerr << r.failures.size() << " sample(s) failed\n";
  return r.failures.empty() ? kExitOk : kExitSampleFailures;
}

void setup_logging(const std::string& level) {
  auto logger = spdlog::stderr_color_mt("lihe");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic/Euclidean grounding toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")
      ->capture_default_str()
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
  app.add_option("--out", g.out, "Output file (directory for pipeline)");

  GeomCheckArgs geom;
  auto* geom_cmd = app.add_subcommand("geom-check", "Hyperboloid property suite");
  geom_cmd->add_option("--cases", geom.cases, "Random cases per property")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  GradCheckArgs grad;
  auto* grad_cmd = app.add_subcommand("grad-check", "Analytic vs finite-difference gradients");
  grad_cmd->add_option("--batches", grad.batches)->capture_default_str()->check(CLI::PositiveNumber);
  grad_cmd->add_option("--epsilon", grad.epsilon)->capture_default_str()->check(CLI::Range(1e-6, 1e-4));
  grad_cmd->add_option("--tolerance", grad.tolerance)->capture_default_str();
  grad_cmd->add_option("--max-dim", grad.max_dim)->capture_default_str()->check(CLI::Range(2, 512));

  AnalyzeAlphaArgs alpha;
  auto* alpha_cmd = app.add_subcommand("analyze-alpha", "Optimal mixing weight for an error model");
  alpha_cmd->add_option("--b-e", alpha.model.b_e)->required();
  alpha_cmd->add_option("--b-h", alpha.model.b_h)->required();
  alpha_cmd->add_option("--sigma-e", alpha.model.sigma_e)->required();
  alpha_cmd->add_option("--sigma-h", alpha.model.sigma_h)->required();
  alpha_cmd->add_option("--rho", alpha.model.rho)->required();
  alpha_cmd->add_option("--mc-n", alpha.mc_n, "Monte Carlo draws (0 disables)")
      ->capture_default_str();

  TrainToyArgs toy;
  auto* toy_cmd = app.add_subcommand("train-toy", "Train projections on synthetic hierarchical data");
  toy_cmd->add_option("--steps", toy.train.steps)->capture_default_str();
  toy_cmd->add_option("--lr", toy.train.lr)->capture_default_str();
  toy_cmd->add_option("--alpha", toy.train.alpha)->capture_default_str();
  toy_cmd->add_option("--tau", toy.train.tau)->capture_default_str();
  toy_cmd->add_option("--kappa", toy.train.kappa)->capture_default_str();
  toy_cmd->add_option("--dim", toy.dim)->capture_default_str()->check(CLI::PositiveNumber);
  toy_cmd->add_option("--negatives", toy.train.negatives_per_image)->capture_default_str();
  toy_cmd->add_flag("--intra-negatives", toy.train.intra_negatives);
  toy_cmd->add_option("--batch-images", toy.train.batch_images)->capture_default_str();
  toy_cmd->add_option("--optimizer", toy.optimizer)
      ->capture_default_str()
      ->check(CLI::IsMember({"adam", "sgd"}));
  toy_cmd->add_option("--weight-decay", toy.train.weight_decay)->capture_default_str();
  toy_cmd->add_option("--parents", toy.parents)->capture_default_str();
  toy_cmd->add_option("--children", toy.children)->capture_default_str();
  toy_cmd->add_option("--train-samples", toy.train_samples)->capture_default_str();
  toy_cmd->add_option("--eval-samples", toy.eval_samples)->capture_default_str();
  toy_cmd->add_option("--noise", toy.noise)->capture_default_str();
  toy_cmd->add_option("--data", toy.data, "Training records JSONL instead of synthetic data");
  toy_cmd->add_option("--trace-csv", toy.trace_csv, "Loss trace CSV (default <out>.loss.csv)");
  toy_cmd->add_option("--apex-json", toy.apex_json, "Apex report (default <out>.apex.json)");

  DecoupleArgs dec;
  auto* dec_cmd = app.add_subcommand("decouple", "Count-first decomposition of an expression");
  dec_cmd->add_option("--expr", dec.expr)->required();
  dec_cmd->add_option("--image", dec.image)->check(CLI::ExistingFile);
  dec_cmd->add_flag("--offline", dec.offline, "Rule-based decomposer, no service call");
  dec_cmd->add_option("--vlm-timeout-s", dec.timeout_s)->capture_default_str();
  dec_cmd->add_option("--retries", dec.retries)->capture_default_str()->check(CLI::NonNegativeNumber);
  dec_cmd->add_flag("--no-examples", dec.no_examples, "Drop the in-context example block");

  GroundArgs gr;
  auto* gr_cmd = app.add_subcommand("ground", "Select one anchor per phrase");
  gr_cmd->add_option("--anchors", gr.anchors)->required();
  gr_cmd->add_option("--texts", gr.texts)->required();
  gr_cmd->add_option("--weights", gr.weights)->required();
  gr_cmd->add_option("--top-frac", gr.top_frac)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  gr_cmd->add_flag("--distinct-anchors", gr.distinct);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  ev_cmd->add_option("--gt", ev.gt)->required();
  ev_cmd->add_option("--pred", ev.pred)->required();
  ev_cmd->add_option("--iou", ev.iou)->capture_default_str();
  ev_cmd->add_option("--metric", ev.metric)->capture_default_str()->check(CLI::IsMember({"grec", "wrec"}));
  ev_cmd->add_flag("--per-sample", ev.per_sample);

  PipelineArgs pl;
  auto* pl_cmd = app.add_subcommand("pipeline", "decouple, ground and evaluate JSONL inputs");
  pl_cmd->add_option("--anchors", pl.cfg.anchors)->required();
  pl_cmd->add_option("--expressions", pl.cfg.expressions)->required();
  pl_cmd->add_option("--weights", pl.cfg.weights)->required();
  pl_cmd->add_option("--gt", pl.cfg.ground_truth)->required();
  pl_cmd->add_option("--lexicon", pl.lexicon, "JSON object phrase -> feature");
  pl_cmd->add_option("--top-frac", pl.cfg.grounding.top_fraction)
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  pl_cmd->add_flag("--distinct-anchors", pl.cfg.grounding.distinct_anchors);
  pl_cmd->add_option("--iou", pl.cfg.iou)->capture_default_str();
  pl_cmd->add_flag("--offline", pl.offline);
  pl_cmd->add_option("--vlm-timeout-s", pl.timeout_s)->capture_default_str();
  pl_cmd->add_option("--retries", pl.cfg.retries)->capture_default_str()->check(CLI::NonNegativeNumber);
  pl_cmd->add_flag("--no-examples", pl.no_examples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    setup_logging(g.log_level);
    if (*geom_cmd) return run_geom_check(g, geom);
    if (*grad_cmd) return run_grad_check(g, grad);
    if (*alpha_cmd) return run_analyze_alpha(g, alpha);
    if (*toy_cmd) return run_train_toy(g, toy);
    if (*dec_cmd) return run_decouple(g, dec);
    if (*gr_cmd) return run_ground(g, gr);
    if (*ev_cmd) return run_eval(g, ev);
    if (*pl_cmd) return run_pipeline_cmd(g, pl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
