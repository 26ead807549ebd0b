// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vtalign/vtalign.h"

namespace {

// Exit code for command-line usage errors; library failures exit with
// their status code (1-8).
constexpr int kUsageExit = 64;

struct Failure {
  vtalign_status status;
};

void check(vtalign_status status) {
  if (status != VTALIGN_OK) throw Failure{status};
}

struct ProblemDeleter {
  void operator()(vtalign_problem* p) const { vtalign_problem_free(p); }
};
struct ResultDeleter {
  void operator()(vtalign_result* r) const { vtalign_result_free(r); }
};
using ProblemPtr = std::unique_ptr<vtalign_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<vtalign_result, ResultDeleter>;

ProblemPtr load(const std::string& manifest) {
  vtalign_problem* p = nullptr;
  check(vtalign_problem_load_manifest(manifest.c_str(), &p));
  return ProblemPtr(p);
}

const std::map<std::string, vtalign_rounding> kRoundings{
    {"nearest", VTALIGN_ROUNDING_NEAREST},
    {"feature", VTALIGN_ROUNDING_FEATURE},
    {"model", VTALIGN_ROUNDING_MODEL}};

const std::map<std::string, vtalign_supervision> kSupervision{
    {"none", VTALIGN_SUPERVISION_NONE},
    {"soft", VTALIGN_SUPERVISION_SOFT},
    {"hard", VTALIGN_SUPERVISION_HARD}};

struct SynthArgs {
  vtalign_synth_config config{};
  std::string out_dir;
};

struct AlignArgs {
  std::string manifest;
  std::optional<vtalign_rounding> rounding;
  vtalign_supervision supervision = VTALIGN_SUPERVISION_SOFT;
  std::optional<double> gap_tol;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

struct EvalArgs {
  std::string predictions;
  std::string annotations;
};

struct SweepArgs {
  std::vector<std::string> manifests;
  std::vector<std::string> grid;
  vtalign_supervision supervision = VTALIGN_SUPERVISION_SOFT;
  std::optional<double> gap_tol;
  std::optional<int> max_iter;
  unsigned threads = 0;
  std::string out_dir;
};

void run_synth(const SynthArgs& a) {
  check(vtalign_synthesize(&a.config, nullptr, a.out_dir.c_str()));
  std::printf("wrote %s/manifest.json\n", a.out_dir.c_str());
}

void run_align(const AlignArgs& a) {
  ProblemPtr problem = load(a.manifest);
  vtalign_params params;
  check(vtalign_problem_get_params(problem.get(), &params));
  if (a.rounding) params.rounding = *a.rounding;
  if (a.gap_tol) params.gap_tol = *a.gap_tol;
  if (a.max_iter) params.max_iter = *a.max_iter;
  if (a.seed) params.seed = *a.seed;
  check(vtalign_problem_set_params(problem.get(), &params));

  vtalign_result* raw = nullptr;
  check(vtalign_problem_solve(problem.get(), a.supervision, &raw));
  ResultPtr result(raw);
  check(vtalign_result_write(result.get(), a.out_dir.c_str()));

  std::printf("iterations=%d converged=%d objective=%.12g gap=%.6g",
              vtalign_result_iterations(result.get()), vtalign_result_converged(result.get()),
              vtalign_result_final_objective(result.get()),
              vtalign_result_final_gap(result.get()));
  double model = 0.0, diagonal = 0.0, random = 0.0;
  if (vtalign_result_mean_jaccard(result.get(), &model, &diagonal, &random) == VTALIGN_OK) {
    std::printf(" jaccard=%.6f diagonal=%.6f random=%.6f", model, diagonal, random);
  }
  std::printf("\n");
}

void run_eval(const EvalArgs& a) {
  double score = 0.0;
  check(vtalign_evaluate_files(a.predictions.c_str(), a.annotations.c_str(), &score));
  std::printf("jaccard=%.6f\n", score);
}

void run_sweep(const SweepArgs& a) {
  std::vector<ProblemPtr> owned;
  std::vector<const vtalign_problem*> datasets;
  for (const auto& m : a.manifests) {
    owned.push_back(load(m));
    if (a.gap_tol || a.max_iter) {
      vtalign_params params;
      check(vtalign_problem_get_params(owned.back().get(), &params));
      if (a.gap_tol) params.gap_tol = *a.gap_tol;
      if (a.max_iter) params.max_iter = *a.max_iter;
      check(vtalign_problem_set_params(owned.back().get(), &params));
    }
    datasets.push_back(owned.back().get());
  }
  std::vector<const char*> axes;
  for (const auto& g : a.grid) axes.push_back(g.c_str());
  std::filesystem::create_directories(a.out_dir);
  const std::string csv = (std::filesystem::path(a.out_dir) / "sweep.csv").string();
  check(vtalign_sweep(datasets.data(), datasets.size(), axes.data(), axes.size(), a.supervision,
                      a.threads, csv.c_str()));
  std::printf("wrote %s\n", csv.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly supervised alignment of video intervals to text sentences"};
  app.set_version_flag("--version", std::string(vtalign_version()));
  app.require_subcommand(1);

  SynthArgs synth;
  vtalign_synth_config_default(&synth.config);
  auto* s = app.add_subcommand("synth", "Write a synthetic suite and its manifest");
  s->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  s->add_option("--seed", synth.config.seed, "Generator seed")->capture_default_str();
  s->add_option("--noise", synth.config.noise, "Video feature noise")->capture_default_str();
  s->add_option("--streams", synth.config.streams, "Number of streams")->capture_default_str();
  s->add_option("--supervised-streams", synth.config.supervised_streams,
                "Streams flagged as supervised (the last ones)")
      ->capture_default_str();
  s->add_option("--sentences", synth.config.sentences, "Sentences per stream")
      ->capture_default_str();
  s->add_option("--intervals", synth.config.intervals, "Video intervals per stream")
      ->capture_default_str();
  s->add_option("--text-dim", synth.config.text_dim, "Text feature dimension")
      ->capture_default_str();
  s->add_option("--video-dim", synth.config.video_dim, "Video feature dimension")
      ->capture_default_str();
  s->add_option("--min-duration", synth.config.min_duration,
                "Shortest sentence duration accepted by the sampler")
      ->capture_default_str();
  s->add_option("--concentration", synth.config.concentration,
                "Dirichlet concentration of durations")
      ->capture_default_str();

  AlignArgs align;
  auto* a = app.add_subcommand("align", "Solve, round and write predictions");
  a->add_option("--manifest", align.manifest, "Manifest JSON")->required();
  a->add_option("--rounding", align.rounding, "Rounding (overrides the manifest)")
      ->transform(CLI::CheckedTransformer(kRoundings, CLI::ignore_case));
  a->add_option("--supervision", align.supervision, "Use of supervised streams")
      ->transform(CLI::CheckedTransformer(kSupervision, CLI::ignore_case))
      ->default_str("soft");
  a->add_option("--gap-tol", align.gap_tol, "Duality gap tolerance");
  a->add_option("--max-iter", align.max_iter, "Iteration budget");
  a->add_option("--seed", align.seed, "Seed of the random baseline");
  a->add_option("--out-dir", align.out_dir, "Output directory")->required();

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score a prediction file against an annotation file");
  e->add_option("--predictions", eval.predictions, "Prediction CSV")->required();
  e->add_option("--annotations", eval.annotations, "Annotation CSV")->required();

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Grid search of hyperparameters over datasets");
  w->add_option("--manifest", sweep.manifests, "Manifest JSON (repeatable)")->required();
  w->add_option("--grid", sweep.grid, "Axis as name=v1,v2,... (repeatable)")->required();
  w->add_option("--supervision", sweep.supervision, "Use of supervised streams")
      ->transform(CLI::CheckedTransformer(kSupervision, CLI::ignore_case))
      ->default_str("soft");
  w->add_option("--gap-tol", sweep.gap_tol, "Duality gap tolerance");
  w->add_option("--max-iter", sweep.max_iter, "Iteration budget");
  w->add_option("--threads", sweep.threads, "Worker threads (0: all cores)");
  w->add_option("--out-dir", sweep.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::fprintf(stderr, "error: usage: %s\n", err.what());
    return kUsageExit;
  }

  try {
    if (*s) run_synth(synth);
    if (*a) run_align(align);
    if (*e) run_eval(eval);
    if (*w) run_sweep(sweep);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", vtalign_status_name(f.status), vtalign_last_error());
    return static_cast<int>(f.status);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: io_error: %s\n", ex.what());
    return static_cast<int>(VTALIGN_ERR_IO);
  }
  return 0;
}
