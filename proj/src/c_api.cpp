// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/vtalign.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "vtalign/error.hpp"
#include "vtalign/io.hpp"
#include "vtalign/pipeline.hpp"

struct vtalign_matrix {
  vtalign::FeatureMatrix value;
};

struct vtalign_problem {
  vtalign::LoadedManifest data;
};

struct vtalign_result {
  vtalign::AlignOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

vtalign_status to_status(vtalign::ErrorKind kind) {
  using vtalign::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return VTALIGN_ERR_INVALID_ARGUMENT;
    case ErrorKind::ShapeMismatch: return VTALIGN_ERR_SHAPE_MISMATCH;
    case ErrorKind::NonFinite: return VTALIGN_ERR_NON_FINITE;
    case ErrorKind::Infeasible: return VTALIGN_ERR_INFEASIBLE;
    case ErrorKind::Parse: return VTALIGN_ERR_PARSE;
    case ErrorKind::Io: return VTALIGN_ERR_IO;
    case ErrorKind::SizeGuard: return VTALIGN_ERR_SIZE_GUARD;
  }
  return VTALIGN_ERR_INTERNAL;
}

template <typename F>
vtalign_status guarded(F&& body) {
  try {
    body();
    return VTALIGN_OK;
  } catch (const vtalign::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return VTALIGN_ERR_INTERNAL;
}

void require_arg(const void* p, const char* name) {
  vtalign::require(p != nullptr, vtalign::ErrorKind::InvalidArgument,
                   std::string(name) + " must not be NULL");
}

vtalign::Hyperparameters to_hyper(const vtalign_params& p) {
  vtalign::Hyperparameters h;
  h.lambda = p.lambda;
  h.sigma = p.sigma;
  if (!std::isnan(p.mu)) h.mu = p.mu;
  if (!std::isnan(p.mu_background)) h.mu_background = p.mu_background;
  h.alpha = p.alpha;
  h.beta = p.beta;
  h.kappa = p.kappa;
  switch (p.rounding) {
    case VTALIGN_ROUNDING_NEAREST: h.rounding = vtalign::RoundingMethod::Nearest; break;
    case VTALIGN_ROUNDING_FEATURE: h.rounding = vtalign::RoundingMethod::Feature; break;
    case VTALIGN_ROUNDING_MODEL: h.rounding = vtalign::RoundingMethod::Model; break;
    default: vtalign::fail(vtalign::ErrorKind::InvalidArgument, "unknown rounding");
  }
  h.gap_tol = p.gap_tol;
  h.max_iter = p.max_iter;
  h.seed = p.seed;
  h.affine = p.affine != 0;
  h.validate();
  return h;
}

vtalign_params from_hyper(const vtalign::Hyperparameters& h) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  vtalign_params p{};
  p.lambda = h.lambda;
  p.sigma = h.sigma;
  p.mu = h.mu ? *h.mu : nan;
  p.mu_background = h.mu_background ? *h.mu_background : nan;
  p.alpha = h.alpha;
  p.beta = h.beta;
  p.kappa = h.kappa;
  switch (h.rounding) {
    case vtalign::RoundingMethod::Nearest: p.rounding = VTALIGN_ROUNDING_NEAREST; break;
    case vtalign::RoundingMethod::Feature: p.rounding = VTALIGN_ROUNDING_FEATURE; break;
    case vtalign::RoundingMethod::Model: p.rounding = VTALIGN_ROUNDING_MODEL; break;
  }
  p.gap_tol = h.gap_tol;
  p.max_iter = h.max_iter;
  p.seed = h.seed;
  p.affine = h.affine ? 1 : 0;
  return p;
}

vtalign::SupervisionMode to_mode(vtalign_supervision s) {
  switch (s) {
    case VTALIGN_SUPERVISION_NONE: return vtalign::SupervisionMode::None;
    case VTALIGN_SUPERVISION_SOFT: return vtalign::SupervisionMode::Soft;
    case VTALIGN_SUPERVISION_HARD: return vtalign::SupervisionMode::Hard;
  }
  vtalign::fail(vtalign::ErrorKind::InvalidArgument, "unknown supervision mode");
}

const vtalign::StreamOutcome& stream_at(const vtalign_result* r, size_t index) {
  require_arg(r, "result");
  vtalign::require(index < r->outcome.streams.size(), vtalign::ErrorKind::InvalidArgument,
                   "stream index out of range");
  return r->outcome.streams[index];
}

}  // namespace

extern "C" {

const char* vtalign_status_name(vtalign_status status) {
  switch (status) {
    case VTALIGN_OK: return "ok";
    case VTALIGN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case VTALIGN_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case VTALIGN_ERR_NON_FINITE: return "non_finite";
    case VTALIGN_ERR_INFEASIBLE: return "infeasible";
    case VTALIGN_ERR_PARSE: return "parse_error";
    case VTALIGN_ERR_IO: return "io_error";
    case VTALIGN_ERR_SIZE_GUARD: return "size_guard";
    case VTALIGN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* vtalign_last_error(void) { return g_last_error.c_str(); }

const char* vtalign_version(void) { return "1.0.0"; }

vtalign_status vtalign_matrix_create(size_t rows, size_t cols, const double* row_major,
                                     vtalign_matrix** out) {
  return guarded([&] {
    require_arg(out, "out");
    vtalign::require(rows > 0 && cols > 0, vtalign::ErrorKind::InvalidArgument,
                     "matrix dimensions must be positive");
    auto m = std::make_unique<vtalign_matrix>();
    m->value = vtalign::FeatureMatrix::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
    if (row_major != nullptr) {
      for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
          m->value(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              row_major[r * cols + c];
        }
      }
    }
    vtalign::require_finite(m->value, "matrix");
    *out = m.release();
  });
}

vtalign_status vtalign_matrix_read(const char* path, vtalign_matrix** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    auto m = std::make_unique<vtalign_matrix>();
    m->value = vtalign::read_matrix(path);
    *out = m.release();
  });
}

vtalign_status vtalign_matrix_write(const vtalign_matrix* m, const char* path) {
  return guarded([&] {
    require_arg(m, "matrix");
    require_arg(path, "path");
    vtalign::write_matrix(path, m->value);
  });
}

size_t vtalign_matrix_rows(const vtalign_matrix* m) {
  return m ? static_cast<size_t>(m->value.rows()) : 0;
}

size_t vtalign_matrix_cols(const vtalign_matrix* m) {
  return m ? static_cast<size_t>(m->value.cols()) : 0;
}

vtalign_status vtalign_matrix_copy(const vtalign_matrix* m, double* row_major, size_t capacity) {
  return guarded([&] {
    require_arg(m, "matrix");
    require_arg(row_major, "row_major");
    const auto rows = m->value.rows();
    const auto cols = m->value.cols();
    vtalign::require(capacity >= static_cast<size_t>(rows * cols),
                     vtalign::ErrorKind::InvalidArgument, "output buffer too small");
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) row_major[r * cols + c] = m->value(r, c);
    }
  });
}

void vtalign_matrix_free(vtalign_matrix* m) { delete m; }

vtalign_status vtalign_minimize_linear(const vtalign_matrix* cost, const uint8_t* forbidden,
                                       int32_t* assignment, double* value) {
  return guarded([&] {
    require_arg(cost, "cost");
    require_arg(assignment, "assignment");
    const auto rows = cost->value.rows();
    const auto cols = cost->value.cols();
    std::optional<vtalign::CellMask> mask;
    if (forbidden != nullptr) {
      mask = vtalign::empty_mask(static_cast<int>(rows), static_cast<int>(cols));
      for (Eigen::Index j = 0; j < rows; ++j) {
        for (Eigen::Index i = 0; i < cols; ++i) (*mask)(j, i) = forbidden[j * cols + i] != 0;
      }
    }
    const auto best = vtalign::minimize_linear(cost->value, mask ? &*mask : nullptr);
    for (int i = 0; i < best.path.i_count(); ++i) assignment[i] = best.path[i];
    if (value != nullptr) *value = best.value;
  });
}

void vtalign_params_default(vtalign_params* params) {
  if (params != nullptr) *params = from_hyper(vtalign::Hyperparameters{});
}

vtalign_status vtalign_problem_create(const vtalign_params* params, vtalign_problem** out) {
  return guarded([&] {
    require_arg(out, "out");
    auto p = std::make_unique<vtalign_problem>();
    if (params != nullptr) p->data.hyper = to_hyper(*params);
    *out = p.release();
  });
}

vtalign_status vtalign_problem_load_manifest(const char* path, vtalign_problem** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    auto p = std::make_unique<vtalign_problem>();
    p->data = vtalign::load_manifest(vtalign::read_manifest(path));
    *out = p.release();
  });
}

vtalign_status vtalign_problem_add_stream(vtalign_problem* problem, const char* id,
                                          const vtalign_matrix* phi,
                                          const vtalign_matrix* psi_raw,
                                          const int32_t* annotation, size_t n_intervals,
                                          int supervised) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(id, "id");
    require_arg(phi, "phi");
    require_arg(psi_raw, "psi_raw");
    for (const auto& s : problem->data.streams) {
      vtalign::require(s.record.id != id, vtalign::ErrorKind::InvalidArgument,
                       std::string("duplicate stream id '") + id + "'");
    }
    vtalign::LoadedStream s;
    s.record.id = id;
    s.record.supervised = supervised != 0;
    s.phi_raw = phi->value;
    s.psi_raw = psi_raw->value;
    if (annotation != nullptr) {
      vtalign::Annotation ann;
      for (size_t n = 0; n < n_intervals; ++n) {
        ann.intervals.push_back(
            {annotation[3 * n], annotation[3 * n + 1], annotation[3 * n + 2]});
      }
      ann.validate(2 * static_cast<int>(s.psi_raw.cols()) + 1,
                   static_cast<int>(s.phi_raw.cols()));
      s.annotation = std::move(ann);
    }
    vtalign::require(!s.record.supervised || s.annotation, vtalign::ErrorKind::InvalidArgument,
                     "supervised streams need an annotation");
    problem->data.streams.push_back(std::move(s));
  });
}

size_t vtalign_problem_stream_count(const vtalign_problem* problem) {
  return problem ? problem->data.streams.size() : 0;
}

vtalign_status vtalign_problem_get_params(const vtalign_problem* problem, vtalign_params* out) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(out, "out");
    *out = from_hyper(problem->data.hyper);
  });
}

vtalign_status vtalign_problem_set_params(vtalign_problem* problem, const vtalign_params* params) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(params, "params");
    problem->data.hyper = to_hyper(*params);
  });
}

void vtalign_problem_free(vtalign_problem* problem) { delete problem; }

vtalign_status vtalign_problem_solve(const vtalign_problem* problem,
                                     vtalign_supervision supervision, vtalign_result** out) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(out, "out");
    vtalign::require(!problem->data.streams.empty(), vtalign::ErrorKind::InvalidArgument,
                     "problem has no streams");
    vtalign::AlignOptions options;
    options.supervision = to_mode(supervision);
    auto r = std::make_unique<vtalign_result>();
    r->outcome = vtalign::run_align(problem->data, options);
    *out = r.release();
  });
}

int32_t vtalign_result_iterations(const vtalign_result* result) {
  return result ? result->outcome.solve.iterations : 0;
}

int vtalign_result_converged(const vtalign_result* result) {
  return result && result->outcome.solve.converged ? 1 : 0;
}

double vtalign_result_final_objective(const vtalign_result* result) {
  return result ? result->outcome.solve.final_objective()
                : std::numeric_limits<double>::quiet_NaN();
}

double vtalign_result_final_gap(const vtalign_result* result) {
  return result ? result->outcome.solve.final_gap() : std::numeric_limits<double>::quiet_NaN();
}

size_t vtalign_result_trace_length(const vtalign_result* result) {
  return result ? result->outcome.solve.objective_trace.size() : 0;
}

vtalign_status vtalign_result_copy_trace(const vtalign_result* result, double* objective,
                                         double* gap, size_t capacity) {
  return guarded([&] {
    require_arg(result, "result");
    const auto& s = result->outcome.solve;
    vtalign::require(capacity >= s.objective_trace.size(), vtalign::ErrorKind::InvalidArgument,
                     "output buffer too small");
    for (size_t t = 0; t < s.objective_trace.size(); ++t) {
      if (objective != nullptr) objective[t] = s.objective_trace[t];
      if (gap != nullptr) gap[t] = s.gap_trace[t];
    }
  });
}

size_t vtalign_result_stream_count(const vtalign_result* result) {
  return result ? result->outcome.streams.size() : 0;
}

const char* vtalign_result_stream_id(const vtalign_result* result, size_t index) {
  if (result == nullptr || index >= result->outcome.streams.size()) return nullptr;
  return result->outcome.streams[index].id.c_str();
}

vtalign_status vtalign_result_stream_path(const vtalign_result* result, size_t index,
                                          int32_t* assignment, size_t capacity,
                                          size_t* length) {
  return guarded([&] {
    const auto& s = stream_at(result, index);
    const auto n = static_cast<size_t>(s.prediction.i_count());
    if (length != nullptr) *length = n;
    if (assignment == nullptr) return;
    vtalign::require(capacity >= n, vtalign::ErrorKind::InvalidArgument,
                     "output buffer too small");
    for (size_t i = 0; i < n; ++i) assignment[i] = s.prediction[static_cast<int>(i)];
  });
}

vtalign_status vtalign_result_stream_jaccard(const vtalign_result* result, size_t index,
                                             double* jaccard) {
  return guarded([&] {
    const auto& s = stream_at(result, index);
    require_arg(jaccard, "jaccard");
    vtalign::require(s.jaccard.has_value(), vtalign::ErrorKind::InvalidArgument,
                     "stream '" + s.id + "' has no annotation");
    *jaccard = *s.jaccard;
  });
}

vtalign_status vtalign_result_mean_jaccard(const vtalign_result* result, double* model,
                                           double* diagonal, double* random) {
  return guarded([&] {
    require_arg(result, "result");
    const auto m = result->outcome.mean_jaccard();
    vtalign::require(m.has_value(), vtalign::ErrorKind::InvalidArgument,
                     "no unsupervised stream carries an annotation");
    if (model != nullptr) *model = *m;
    if (diagonal != nullptr) *diagonal = *result->outcome.mean_diagonal_jaccard();
    if (random != nullptr) *random = *result->outcome.mean_random_jaccard();
  });
}

vtalign_status vtalign_result_model(const vtalign_result* result, vtalign_matrix** w_star) {
  return guarded([&] {
    require_arg(result, "result");
    require_arg(w_star, "w_star");
    auto m = std::make_unique<vtalign_matrix>();
    m->value = result->outcome.solve.w_star;
    *w_star = m.release();
  });
}

vtalign_status vtalign_result_write(const vtalign_result* result, const char* out_dir) {
  return guarded([&] {
    require_arg(result, "result");
    require_arg(out_dir, "out_dir");
    vtalign::write_align_outputs(result->outcome, out_dir);
  });
}

void vtalign_result_free(vtalign_result* result) { delete result; }

vtalign_status vtalign_evaluate_files(const char* predictions, const char* annotations,
                                      double* score) {
  return guarded([&] {
    require_arg(predictions, "predictions");
    require_arg(annotations, "annotations");
    require_arg(score, "score");
    *score = vtalign::evaluate_files(predictions, annotations);
  });
}

void vtalign_synth_config_default(vtalign_synth_config* config) {
  if (config == nullptr) return;
  const vtalign::SynthConfig d;
  config->sentences = d.sentences;
  config->intervals = d.intervals;
  config->text_dim = d.text_dim;
  config->video_dim = d.video_dim;
  config->noise = d.noise;
  config->concentration = d.concentration;
  config->seed = d.seed;
  config->streams = d.streams;
  config->supervised_streams = 0;
  config->min_duration = d.min_duration;
}

vtalign_status vtalign_synthesize(const vtalign_synth_config* config,
                                  const vtalign_params* params, const char* out_dir) {
  return guarded([&] {
    require_arg(config, "config");
    require_arg(out_dir, "out_dir");
    vtalign::SynthConfig c;
    c.sentences = config->sentences;
    c.intervals = config->intervals;
    c.text_dim = config->text_dim;
    c.video_dim = config->video_dim;
    c.noise = config->noise;
    c.concentration = config->concentration;
    c.seed = config->seed;
    c.streams = config->streams;
    c.min_duration = config->min_duration;
    const vtalign::Hyperparameters h =
        params != nullptr ? to_hyper(*params) : vtalign::synth_default_hyperparameters();
    vtalign::write_synth_suite(c, h, out_dir, config->supervised_streams);
  });
}

vtalign_status vtalign_sweep(const vtalign_problem* const* datasets, size_t n_datasets,
                             const char* const* axes, size_t n_axes,
                             vtalign_supervision supervision, unsigned threads,
                             const char* out_csv) {
  return guarded([&] {
    require_arg(datasets, "datasets");
    require_arg(axes, "axes");
    require_arg(out_csv, "out_csv");
    std::vector<vtalign::LoadedManifest> data;
    for (size_t n = 0; n < n_datasets; ++n) {
      require_arg(datasets[n], "dataset");
      data.push_back(datasets[n]->data);
    }
    std::vector<vtalign::GridAxis> grid;
    for (size_t a = 0; a < n_axes; ++a) {
      require_arg(axes[a], "axis");
      grid.push_back(vtalign::parse_grid_axis(axes[a]));
    }
    vtalign::AlignOptions options;
    options.supervision = to_mode(supervision);
    const auto rows = vtalign::run_sweep(data, grid, options, threads);
    vtalign::write_sweep_csv(out_csv, grid, rows);
  });
}

}  // extern "C"
