// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_PIPELINE_HPP
#define VTALIGN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vtalign/rounding.hpp"
#include "vtalign/solver.hpp"
#include "vtalign/supervision.hpp"
#include "vtalign/synth.hpp"

namespace vtalign {

struct Hyperparameters {
  double lambda = 1e-3;
  double sigma = 1e9;
  // Absolute target durations. Without mu every row of stream n targets
  // I_n / J_n; with mu_background the background rows target it and the
  // sentence rows share the rest.
  std::optional<double> mu;
  std::optional<double> mu_background;
  double alpha = 0.0;
  double beta = 1.0;
  double kappa = 1.0;
  RoundingMethod rounding = RoundingMethod::Model;
  double gap_tol = 1e-6;
  int max_iter = 2000;
  std::uint64_t seed = 7;
  bool affine = true;

  // Sets one numeric field by name (lambda, sigma, mu, mu_background, alpha,
  // beta, kappa, gap_tol, max_iter). Throws InvalidArgument for unknown
  // names.
  void set(const std::string& name, double value);
  void validate() const;
};

struct StreamRecord {
  std::string id;
  std::filesystem::path phi;
  std::filesystem::path psi;
  std::optional<std::filesystem::path> annotation;
  bool supervised = false;
};

struct Manifest {
  std::vector<StreamRecord> streams;
  Hyperparameters hyper;
  std::filesystem::path base_dir;  // relative stream paths resolve here
};

/// JSON manifest: {"streams": [{"id", "phi", "psi", "annotation"?,
/// "supervised"?}], "hyperparameters": {...}}. Missing hyperparameters keep
/// their defaults.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

const char* rounding_name(RoundingMethod method);
RoundingMethod parse_rounding(const std::string& name);
const char* supervision_name(SupervisionMode mode);
SupervisionMode parse_supervision(const std::string& name);

struct LoadedStream {
  StreamRecord record;
  FeatureMatrix phi_raw;
  FeatureMatrix psi_raw;
  std::optional<Annotation> annotation;  // in interleaved row indices
};

struct LoadedManifest {
  std::vector<LoadedStream> streams;
  Hyperparameters hyper;
};

// Reads every referenced file; errors name the stream id.
LoadedManifest load_manifest(const Manifest& manifest);

struct AlignOptions {
  std::optional<RoundingMethod> rounding;
  SupervisionMode supervision = SupervisionMode::Soft;
  std::optional<double> gap_tol;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> overrides;
};

struct StreamOutcome {
  std::string id;
  AlignmentPath prediction;
  bool supervised = false;
  std::optional<double> jaccard;
  std::optional<double> diagonal_jaccard;
  std::optional<double> random_jaccard;
};

struct AlignOutcome {
  std::vector<StreamOutcome> streams;  // manifest order
  SolveResult solve;
  Hyperparameters hyper;  // after options were applied
  SupervisionMode supervision = SupervisionMode::Soft;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;

  // Means over unsupervised streams that carry an annotation.
  std::optional<double> mean_jaccard() const;
  std::optional<double> mean_diagonal_jaccard() const;
  std::optional<double> mean_random_jaccard() const;
};

/// Runs the whole pipeline on loaded data and rounds every stream.
AlignOutcome run_align(const LoadedManifest& data, const AlignOptions& options);

// Writes <id>.pred.csv per stream, report.json, trace.csv and w_star.csv.
void write_align_outputs(const AlignOutcome& outcome, const std::filesystem::path& out_dir);

// Jaccard of one prediction file against one annotation file; background
// rows are the even indices.
double evaluate_files(const std::filesystem::path& predictions,
                      const std::filesystem::path& annotations);

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepRow {
  std::vector<double> values;  // one per axis
  double mean = 0.0;
  double standard_error = 0.0;
  int n_seeds = 0;
};

/// Cartesian grid over the axes; every point runs align and scores the
/// unsupervised annotated streams of each dataset. Points run concurrently
/// on up to `threads` workers; rows come back in grid order.
std::vector<SweepRow> run_sweep(const std::vector<LoadedManifest>& datasets,
                                const std::vector<GridAxis>& grid, const AlignOptions& options,
                                unsigned threads = 0);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<GridAxis>& grid,
                     const std::vector<SweepRow>& rows);

// "name=v1,v2,..."
GridAxis parse_grid_axis(const std::string& text);

/// Writes a synthetic suite (features, annotations, manifest.json) into
/// out_dir and returns the manifest path. The last `supervised_streams`
/// streams are flagged as supervised.
std::filesystem::path write_synth_suite(const SynthConfig& config,
                                        const Hyperparameters& hyper,
                                        const std::filesystem::path& out_dir,
                                        int supervised_streams = 0);

// Hyperparameters that synth writes into its manifests.
Hyperparameters synth_default_hyperparameters();

}  // namespace vtalign

#endif  // VTALIGN_PIPELINE_HPP
