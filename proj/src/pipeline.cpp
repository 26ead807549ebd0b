// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "vtalign/error.hpp"
#include "vtalign/evaluation.hpp"
#include "vtalign/io.hpp"

namespace vtalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
auto with_stream(const std::string& id, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "stream '" + id + "': " + e.what());
  }
}

Eigen::VectorXd stream_mu(const Hyperparameters& h, int i_count, int j_count) {
  if (!h.mu && !h.mu_background) return {};
  const int sentences = (j_count - 1) / 2;
  Eigen::VectorXd mu(j_count);
  for (int j = 0; j < j_count; ++j) {
    const bool background = j % 2 == 0;
    if (background && h.mu_background) {
      mu(j) = *h.mu_background;
    } else if (h.mu) {
      mu(j) = *h.mu;
    } else {
      // Sentences share what the background targets leave over.
      mu(j) = (i_count - (sentences + 1) * *h.mu_background) / std::max(sentences, 1);
    }
  }
  require((mu.array() > 0.0).all(), ErrorKind::InvalidArgument,
          "target durations must be positive; mu_background is too large for " +
              std::to_string(i_count) + " intervals");
  return mu;
}

std::optional<double> mean_of(const std::vector<StreamOutcome>& streams,
                              std::optional<double> StreamOutcome::*field) {
  double total = 0.0;
  int n = 0;
  for (const auto& s : streams) {
    if (s.supervised || !(s.*field)) continue;
    total += *(s.*field);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return total / n;
}

json hyper_to_json(const Hyperparameters& h) {
  json j;
  j["lambda"] = h.lambda;
  j["sigma"] = h.sigma;
  j["mu"] = h.mu ? json(*h.mu) : json(nullptr);
  j["mu_background"] = h.mu_background ? json(*h.mu_background) : json(nullptr);
  j["alpha"] = h.alpha;
  j["beta"] = h.beta;
  j["kappa"] = h.kappa;
  j["rounding"] = rounding_name(h.rounding);
  j["gap_tol"] = h.gap_tol;
  j["max_iter"] = h.max_iter;
  j["seed"] = h.seed;
  j["affine"] = h.affine;
  return j;
}

void hyper_from_json(const json& j, Hyperparameters& h) {
  auto real = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  auto optional_real = [&](const char* key, std::optional<double>& field) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
      field.reset();
    } else {
      field = j.at(key).get<double>();
    }
  };
  real("lambda", h.lambda);
  real("sigma", h.sigma);
  optional_real("mu", h.mu);
  optional_real("mu_background", h.mu_background);
  real("alpha", h.alpha);
  real("beta", h.beta);
  real("kappa", h.kappa);
  real("gap_tol", h.gap_tol);
  if (j.contains("rounding")) h.rounding = parse_rounding(j.at("rounding").get<std::string>());
  if (j.contains("max_iter")) h.max_iter = j.at("max_iter").get<int>();
  if (j.contains("seed")) h.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("affine")) h.affine = j.at("affine").get<bool>();
}

}  // namespace

void Hyperparameters::set(const std::string& name, double value) {
  if (name == "lambda") {
    lambda = value;
  } else if (name == "sigma") {
    sigma = value;
  } else if (name == "mu") {
    mu = value;
  } else if (name == "mu_background") {
    mu_background = value;
  } else if (name == "alpha") {
    alpha = value;
  } else if (name == "beta") {
    beta = value;
  } else if (name == "kappa") {
    kappa = value;
  } else if (name == "gap_tol") {
    gap_tol = value;
  } else if (name == "max_iter") {
    require(value >= 0.0 && value == std::floor(value) && value <= 1e9,
            ErrorKind::InvalidArgument, "max_iter must be a non-negative integer");
    max_iter = static_cast<int>(value);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown hyperparameter '" + name + "'");
  }
}

void Hyperparameters::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::InvalidArgument,
          "lambda must be positive");
  require(!std::isnan(sigma) && sigma > 0.0, ErrorKind::InvalidArgument,
          "sigma must be positive");
  require(!mu || *mu > 0.0, ErrorKind::InvalidArgument, "mu must be positive");
  require(!mu_background || *mu_background > 0.0, ErrorKind::InvalidArgument,
          "mu_background must be positive");
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::InvalidArgument,
          "alpha must be non-negative");
  require(beta >= 0.0 && beta <= 1.0, ErrorKind::InvalidArgument, "beta must lie in [0, 1]");
  require(std::isfinite(kappa) && kappa >= 0.0, ErrorKind::InvalidArgument,
          "kappa must be non-negative");
  require(gap_tol >= 0.0, ErrorKind::InvalidArgument, "gap_tol must be non-negative");
  require(max_iter >= 0, ErrorKind::InvalidArgument, "max_iter must be non-negative");
}

const char* rounding_name(RoundingMethod method) {
  switch (method) {
    case RoundingMethod::Nearest: return "nearest";
    case RoundingMethod::Feature: return "feature";
    case RoundingMethod::Model: return "model";
  }
  return "model";
}

RoundingMethod parse_rounding(const std::string& name) {
  if (name == "nearest") return RoundingMethod::Nearest;
  if (name == "feature") return RoundingMethod::Feature;
  if (name == "model") return RoundingMethod::Model;
  fail(ErrorKind::InvalidArgument, "unknown rounding '" + name + "'");
}

const char* supervision_name(SupervisionMode mode) {
  switch (mode) {
    case SupervisionMode::None: return "none";
    case SupervisionMode::Soft: return "soft";
    case SupervisionMode::Hard: return "hard";
  }
  return "soft";
}

SupervisionMode parse_supervision(const std::string& name) {
  if (name == "none") return SupervisionMode::None;
  if (name == "soft") return SupervisionMode::Soft;
  if (name == "hard") return SupervisionMode::Hard;
  fail(ErrorKind::InvalidArgument, "unknown supervision mode '" + name + "'");
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open manifest " + path.string());
  Manifest m;
  m.base_dir = path.parent_path();
  try {
    const json doc = json::parse(in);
    for (const json& s : doc.at("streams")) {
      StreamRecord r;
      r.id = s.at("id").get<std::string>();
      r.phi = s.at("phi").get<std::string>();
      r.psi = s.at("psi").get<std::string>();
      if (s.contains("annotation") && !s.at("annotation").is_null()) {
        r.annotation = fs::path(s.at("annotation").get<std::string>());
      }
      if (s.contains("supervised")) r.supervised = s.at("supervised").get<bool>();
      m.streams.push_back(std::move(r));
    }
    if (doc.contains("hyperparameters")) hyper_from_json(doc.at("hyperparameters"), m.hyper);
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, "manifest " + path.string() + ": " + e.what());
  }
  require(!m.streams.empty(), ErrorKind::Parse, "manifest " + path.string() + " has no streams");
  m.hyper.validate();
  return m;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  json doc;
  doc["streams"] = json::array();
  for (const StreamRecord& r : manifest.streams) {
    json s;
    s["id"] = r.id;
    s["phi"] = r.phi.generic_string();
    s["psi"] = r.psi.generic_string();
    if (r.annotation) s["annotation"] = r.annotation->generic_string();
    s["supervised"] = r.supervised;
    doc["streams"].push_back(std::move(s));
  }
  doc["hyperparameters"] = hyper_to_json(manifest.hyper);
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

LoadedManifest load_manifest(const Manifest& manifest) {
  LoadedManifest out;
  out.hyper = manifest.hyper;
  std::set<std::string> ids;
  for (const StreamRecord& r : manifest.streams) {
    require(ids.insert(r.id).second, ErrorKind::InvalidArgument,
            "duplicate stream id '" + r.id + "'");
    auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : manifest.base_dir / p; };
    LoadedStream s;
    s.record = r;
    with_stream(r.id, [&] {
      s.phi_raw = read_matrix(resolve(r.phi));
      s.psi_raw = read_matrix(resolve(r.psi));
      const int j_count = 2 * static_cast<int>(s.psi_raw.cols()) + 1;
      if (r.annotation) {
        s.annotation = read_annotations(resolve(*r.annotation), j_count,
                                        static_cast<int>(s.phi_raw.cols()));
      }
      require(!r.supervised || s.annotation, ErrorKind::InvalidArgument,
              "supervised streams need an annotation");
      return 0;
    });
    out.streams.push_back(std::move(s));
  }
  return out;
}

std::optional<double> AlignOutcome::mean_jaccard() const {
  return mean_of(streams, &StreamOutcome::jaccard);
}
std::optional<double> AlignOutcome::mean_diagonal_jaccard() const {
  return mean_of(streams, &StreamOutcome::diagonal_jaccard);
}
std::optional<double> AlignOutcome::mean_random_jaccard() const {
  return mean_of(streams, &StreamOutcome::random_jaccard);
}

AlignOutcome run_align(const LoadedManifest& data, const AlignOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  AlignOutcome outcome;
  outcome.supervision = options.supervision;
  Hyperparameters h = data.hyper;
  for (const auto& [name, value] : options.overrides) h.set(name, value);
  if (options.rounding) h.rounding = *options.rounding;
  if (options.gap_tol) h.gap_tol = *options.gap_tol;
  if (options.max_iter) h.max_iter = *options.max_iter;
  if (options.seed) h.seed = *options.seed;
  h.validate();
  outcome.hyper = h;

  // Ingestion: interleave background text, augment video features.
  std::vector<StreamInput> unsupervised;
  std::vector<StreamInput> supervised;
  std::vector<std::size_t> order;  // manifest index of each assembled stream
  std::vector<std::size_t> sup_order;
  for (std::size_t n = 0; n < data.streams.size(); ++n) {
    const LoadedStream& s = data.streams[n];
    StreamInput in;
    in.id = s.record.id;
    in.phi = h.affine ? augment_affine(s.phi_raw) : s.phi_raw;
    in.psi = interleave_background(s.psi_raw).psi;
    with_stream(in.id, [&] {
      require(in.psi.cols() <= in.phi.cols(), ErrorKind::Infeasible,
              "no alignment path: " + std::to_string(in.psi.cols()) + " text elements for " +
                  std::to_string(in.phi.cols()) + " intervals");
      in.mu = stream_mu(h, static_cast<int>(in.phi.cols()), static_cast<int>(in.psi.cols()));
      return 0;
    });
    if (s.annotation) in.annotation = *s.annotation;
    if (s.record.supervised && options.supervision != SupervisionMode::None) {
      supervised.push_back(std::move(in));
      sup_order.push_back(n);
    } else {
      unsupervised.push_back(std::move(in));
      order.push_back(n);
    }
  }
  order.insert(order.end(), sup_order.begin(), sup_order.end());

  PriorConfig priors;
  priors.sigma = h.sigma;
  priors.alpha = h.alpha;
  priors.beta = h.beta;
  const ProblemInstance instance =
      assemble(unsupervised, supervised, h.kappa, options.supervision, h.lambda, priors);

  const auto solve_start = std::chrono::steady_clock::now();
  SolveOptions solve_options;
  solve_options.max_iter = h.max_iter;
  solve_options.gap_tol = h.gap_tol;
  outcome.solve = solve(instance, solve_options);
  outcome.solve_seconds = seconds_since(solve_start);

  outcome.streams.resize(data.streams.size());
  for (std::size_t k = 0; k < instance.streams.size(); ++k) {
    const std::size_t n = order[k];
    const LoadedStream& src = data.streams[n];
    const StreamData& block_data = instance.streams[k];
    const StreamBlock& b = instance.layout.blocks()[k];
    const StreamInput& in = k < unsupervised.size() ? unsupervised[k]
                                                    : supervised[k - unsupervised.size()];
    const CellMask* mask = block_data.mask ? &*block_data.mask : nullptr;
    StreamOutcome& so = outcome.streams[n];
    so.id = src.record.id;
    so.supervised = block_data.supervised;
    so.prediction = with_stream(so.id, [&] {
      const RelaxedAssignment y_block =
          outcome.solve.y_relaxed.block(b.j_offset, b.i_offset, b.j_count, b.i_count);
      switch (h.rounding) {
        case RoundingMethod::Nearest: return round_nearest(y_block, mask);
        case RoundingMethod::Feature: return round_feature(y_block, in.psi, mask);
        case RoundingMethod::Model: break;
      }
      return round_model(outcome.solve.w_star, in.psi, in.phi, mask);
    });
    if (src.annotation) {
      const auto background = background_rows(b.j_count);
      so.jaccard = jaccard_score(so.prediction, *src.annotation, background);
      so.diagonal_jaccard =
          jaccard_score(diagonal_path(b.i_count, b.j_count), *src.annotation, background);
      so.random_jaccard = jaccard_score(random_path(b.i_count, b.j_count, h.seed + n),
                                        *src.annotation, background);
    }
  }
  outcome.total_seconds = seconds_since(start);
  return outcome;
}

void write_align_outputs(const AlignOutcome& outcome, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  json streams = json::array();
  for (const StreamOutcome& s : outcome.streams) {
    const fs::path pred = out_dir / (s.id + ".pred.csv");
    write_predictions(pred, s.prediction);
    json j;
    j["id"] = s.id;
    j["predictions"] = pred.filename().string();
    j["supervised"] = s.supervised;
    j["durations"] = s.prediction.durations();
    if (s.jaccard) {
      j["jaccard"] = *s.jaccard;
      j["diagonal_jaccard"] = *s.diagonal_jaccard;
      j["random_jaccard"] = *s.random_jaccard;
    }
    streams.push_back(std::move(j));
  }

  {
    std::ofstream trace(out_dir / "trace.csv", std::ios::trunc);
    require(trace.good(), ErrorKind::Io, "cannot write trace.csv");
    trace << "iteration,objective,gap\n";
    for (std::size_t t = 0; t < outcome.solve.objective_trace.size(); ++t) {
      trace << t << ',' << format_real(outcome.solve.objective_trace[t]) << ','
            << format_real(outcome.solve.gap_trace[t]) << '\n';
    }
  }
  write_matrix(out_dir / "w_star.csv", outcome.solve.w_star);

  json report;
  report["hyperparameters"] = hyper_to_json(outcome.hyper);
  report["supervision"] = supervision_name(outcome.supervision);
  report["affine_augmented"] = outcome.hyper.affine;
  report["iterations"] = outcome.solve.iterations;
  report["converged"] = outcome.solve.converged;
  report["final_objective"] = outcome.solve.final_objective();
  report["final_gap"] = outcome.solve.final_gap();
  report["timings"] = {{"solve_seconds", outcome.solve_seconds},
                       {"total_seconds", outcome.total_seconds}};
  report["streams"] = std::move(streams);
  auto optional_json = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
  report["mean_jaccard"] = optional_json(outcome.mean_jaccard());
  report["mean_diagonal_jaccard"] = optional_json(outcome.mean_diagonal_jaccard());
  report["mean_random_jaccard"] = optional_json(outcome.mean_random_jaccard());
  report["trace"] = "trace.csv";
  report["w_star"] = "w_star.csv";
  std::ofstream out(out_dir / "report.json", std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot write report.json");
  out << report.dump(2) << '\n';
}

double evaluate_files(const fs::path& predictions, const fs::path& annotations) {
  const AlignmentPath pred = read_predictions(predictions);
  const Annotation gt = read_annotations(annotations, pred.j_count(), pred.i_count());
  return jaccard_score(pred, gt, background_rows(pred.j_count()));
}

GridAxis parse_grid_axis(const std::string& text) {
  const auto eq = text.find('=');
  require(eq != std::string::npos && eq > 0, ErrorKind::InvalidArgument,
          "grid axis must look like name=v1,v2,...: '" + text + "'");
  GridAxis axis;
  axis.name = text.substr(0, eq);
  Hyperparameters probe;
  probe.set(axis.name, 1.0);  // rejects unknown names
  std::stringstream values(text.substr(eq + 1));
  std::string token;
  while (std::getline(values, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == token.size() && !token.empty(), ErrorKind::InvalidArgument,
            "grid value is not a number: '" + token + "'");
    axis.values.push_back(v);
  }
  require(!axis.values.empty(), ErrorKind::InvalidArgument, "grid axis has no values");
  return axis;
}

std::vector<SweepRow> run_sweep(const std::vector<LoadedManifest>& datasets,
                                const std::vector<GridAxis>& grid, const AlignOptions& options,
                                unsigned threads) {
  require(!datasets.empty(), ErrorKind::InvalidArgument, "sweep needs at least one dataset");
  require(!grid.empty(), ErrorKind::InvalidArgument, "sweep needs a non-empty grid");
  std::size_t points = 1;
  for (const GridAxis& a : grid) {
    require(!a.values.empty(), ErrorKind::InvalidArgument, "grid axis '" + a.name + "' is empty");
    points *= a.values.size();
  }

  std::vector<SweepRow> rows(points);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    rows[p].values.resize(grid.size());
    for (std::size_t a = grid.size(); a-- > 0;) {
      rows[p].values[a] = grid[a].values[rest % grid[a].values.size()];
      rest /= grid[a].values.size();
    }
  }

  std::vector<std::exception_ptr> errors(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < points; p = next++) {
      try {
        AlignOptions point = options;
        for (std::size_t a = 0; a < grid.size(); ++a) {
          point.overrides[grid[a].name] = rows[p].values[a];
        }
        std::vector<double> scores;
        for (const LoadedManifest& data : datasets) {
          const auto score = run_align(data, point).mean_jaccard();
          require(score.has_value(), ErrorKind::InvalidArgument,
                  "sweep dataset has no annotated unsupervised stream");
          scores.push_back(*score);
        }
        const double n = static_cast<double>(scores.size());
        double mean = 0.0;
        for (double s : scores) mean += s;
        mean /= n;
        double ss = 0.0;
        for (double s : scores) ss += (s - mean) * (s - mean);
        rows[p].mean = mean;
        rows[p].standard_error = scores.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        rows[p].n_seeds = static_cast<int>(scores.size());
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(const fs::path& path, const std::vector<GridAxis>& grid,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  for (const GridAxis& a : grid) out << a.name << ',';
  out << "mean,stderr,n_seeds\n";
  for (const SweepRow& r : rows) {
    for (double v : r.values) out << format_real(v) << ',';
    out << format_real(r.mean) << ',' << format_real(r.standard_error) << ',' << r.n_seeds
        << '\n';
  }
}

Hyperparameters synth_default_hyperparameters() {
  // Synthetic streams have no background frames, so background rows target
  // a single interval; the duration prior then also keeps the relaxation
  // away from the flat, nearly uniform optimum.
  Hyperparameters h;
  h.sigma = 5.0;
  h.mu_background = 1.0;
  return h;
}

fs::path write_synth_suite(const SynthConfig& config, const Hyperparameters& hyper,
                           const fs::path& out_dir, int supervised_streams) {
  require(supervised_streams >= 0 && supervised_streams <= config.streams,
          ErrorKind::InvalidArgument, "supervised stream count outside [0, streams]");
  const auto streams = synthesize(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  Manifest m;
  m.hyper = hyper;
  m.hyper.seed = config.seed;
  for (std::size_t n = 0; n < streams.size(); ++n) {
    const SynthStream& s = streams[n];
    StreamRecord r;
    r.id = s.id;
    r.phi = s.id + ".phi.csv";
    r.psi = s.id + ".psi.csv";
    r.annotation = fs::path(s.id + ".ann.csv");
    r.supervised = static_cast<int>(n) >= config.streams - supervised_streams;
    write_matrix(out_dir / r.phi, s.phi);
    write_matrix(out_dir / r.psi, s.psi_raw);
    write_annotations(out_dir / *r.annotation, s.truth);
    m.streams.push_back(std::move(r));
  }
  const fs::path manifest = out_dir / "manifest.json";
  write_manifest(manifest, m);
  return manifest;
}

}  // namespace vtalign
