// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "vtalign/error.hpp"
#include "vtalign/io.hpp"
#include "vtalign/pipeline.hpp"

using namespace vtalign;
namespace fs = std::filesystem;

namespace {

SynthConfig small_config(std::uint64_t seed = 7) {
  SynthConfig c;
  c.sentences = 3;
  c.intervals = 30;
  c.streams = 2;
  c.seed = seed;
  return c;
}

LoadedManifest load(const fs::path& p) { return load_manifest(read_manifest(p)); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("names and hyperparameters") {
  for (auto m : {RoundingMethod::Nearest, RoundingMethod::Feature, RoundingMethod::Model}) {
    CHECK(parse_rounding(rounding_name(m)) == m);
  }
  for (auto m : {SupervisionMode::None, SupervisionMode::Soft, SupervisionMode::Hard}) {
    CHECK(parse_supervision(supervision_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_rounding("closest"), Error);
  CHECK_THROWS_AS(parse_supervision("weak"), Error);

  Hyperparameters h;
  h.set("sigma", 3.0);
  h.set("kappa", 0.5);
  h.set("max_iter", 10);
  CHECK(h.sigma == 3.0);
  CHECK(h.kappa == 0.5);
  CHECK(h.max_iter == 10);
  CHECK_THROWS_AS(h.set("gamma", 1.0), Error);
  CHECK_THROWS_AS(h.set("max_iter", 1.5), Error);
  h.set("lambda", -1.0);
  CHECK_THROWS_AS(h.validate(), Error);
}

TEST_CASE("manifest round trip") {
  const fs::path dir = oracle::scratch_dir("pipe_manifest");
  Manifest m;
  m.hyper.sigma = 12.5;
  m.hyper.mu_background = 1.0;
  m.hyper.alpha = 0.25;
  m.hyper.rounding = RoundingMethod::Feature;
  m.streams.push_back({"a", "a.phi.csv", "a.psi.csv", fs::path("a.ann.csv"), false});
  m.streams.push_back({"b", "b.phi.csv", "b.psi.csv", std::nullopt, true});
  write_manifest(dir / "m.json", m);
  const Manifest back = read_manifest(dir / "m.json");
  CHECK(back.streams.size() == 2);
  CHECK(back.streams[0].annotation.has_value());
  CHECK_FALSE(back.streams[1].annotation.has_value());
  CHECK(back.streams[1].supervised);
  CHECK(back.hyper.sigma == 12.5);
  CHECK(back.hyper.mu_background == 1.0);
  CHECK_FALSE(back.hyper.mu.has_value());
  CHECK(back.hyper.alpha == 0.25);
  CHECK(back.hyper.rounding == RoundingMethod::Feature);
  CHECK(back.base_dir == dir);

  std::ofstream(dir / "bad.json") << "{\"streams\": [";
  CHECK_THROWS_AS(read_manifest(dir / "bad.json"), Error);
  CHECK_THROWS_AS(load(dir / "m.json"), Error);  // referenced files are missing
}

TEST_CASE("align on a synthetic suite") {
  const fs::path dir = oracle::scratch_dir("pipe_align");
  const auto manifest = write_synth_suite(small_config(), synth_default_hyperparameters(), dir);
  const auto data = load(manifest);
  AlignOptions opt;
  const auto out = run_align(data, opt);
  CHECK(out.solve.converged);
  CHECK(out.solve.final_gap() <= 1e-6);
  REQUIRE(out.streams.size() == 2);
  for (const auto& s : out.streams) {
    CHECK(s.prediction.i_count() == 30);
    CHECK(s.prediction.j_count() == 7);
    REQUIRE(s.jaccard.has_value());
    CHECK(*s.jaccard >= 0.0);
    CHECK(*s.jaccard <= 1.0);
  }
  CHECK(out.mean_jaccard().has_value());

  const fs::path run1 = dir / "run1", run2 = dir / "run2";
  write_align_outputs(out, run1);
  write_align_outputs(run_align(data, opt), run2);
  for (const auto& s : out.streams) {
    const auto name = s.id + ".pred.csv";
    CHECK(slurp(run1 / name) == slurp(run2 / name));
    CHECK(read_predictions(run1 / name) == s.prediction);
    CHECK(evaluate_files(run1 / name, dir / (s.id + ".ann.csv")) == *s.jaccard);
  }
  CHECK(fs::exists(run1 / "report.json"));
  CHECK(fs::exists(run1 / "trace.csv"));
  CHECK(fs::exists(run1 / "w_star.csv"));

  // eval(gt, gt) = 1.
  const auto truth = read_annotations(dir / "s0.ann.csv");
  write_predictions(dir / "gt.pred.csv", annotation_to_path(truth, 7, 30));
  CHECK(evaluate_files(dir / "gt.pred.csv", dir / "s0.ann.csv") == 1.0);
}

TEST_CASE("align: a stream with more text than intervals is infeasible") {
  const fs::path dir = oracle::scratch_dir("pipe_infeasible");
  oracle::Rng rng(101);
  write_matrix(dir / "ok.phi.csv", rng.gaussian(3, 12));
  write_matrix(dir / "ok.psi.csv", rng.gaussian(3, 2));
  write_matrix(dir / "long.phi.csv", rng.gaussian(3, 6));
  write_matrix(dir / "long.psi.csv", rng.gaussian(3, 4));
  Manifest m;
  m.streams.push_back({"ok", "ok.phi.csv", "ok.psi.csv", std::nullopt, false});
  m.streams.push_back({"too-long", "long.phi.csv", "long.psi.csv", std::nullopt, false});
  write_manifest(dir / "m.json", m);
  try {
    run_align(load(dir / "m.json"), AlignOptions{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("too-long") != std::string::npos);
  }
}

TEST_CASE("align: hard supervision reproduces the annotation") {
  const fs::path dir = oracle::scratch_dir("pipe_hard");
  auto cfg = small_config(11);
  cfg.streams = 1;
  const auto data = load(write_synth_suite(cfg, synth_default_hyperparameters(), dir, 1));
  AlignOptions opt;
  opt.supervision = SupervisionMode::Hard;
  for (auto r : {RoundingMethod::Nearest, RoundingMethod::Feature, RoundingMethod::Model}) {
    opt.rounding = r;
    const auto out = run_align(data, opt);
    CHECK(out.streams[0].supervised);
    CHECK(out.streams[0].prediction == annotation_to_path(*data.streams[0].annotation, 7, 30));
  }
}

TEST_CASE("align without priors and supervision is the bare relaxed problem") {
  const fs::path dir = oracle::scratch_dir("pipe_bare");
  Hyperparameters h;  // sigma stays at its 1e9 default
  h.kappa = 0.0;
  h.gap_tol = 1e-8;
  const auto data = load(write_synth_suite(small_config(5), h, dir, 1));
  const auto out = run_align(data, AlignOptions{});

  std::vector<StreamData> streams;
  for (const auto& s : data.streams) {
    const double w = s.record.supervised ? 0.0 : 1.0;
    streams.push_back({s.record.id, w * augment_affine(s.phi_raw),
                       w * interleave_background(s.psi_raw).psi, std::nullopt, {}, false, false});
  }
  PriorConfig priors;
  priors.sigma = h.sigma;
  const auto inst = build_instance(streams, h.lambda, priors);
  SolveOptions so;
  so.gap_tol = 1e-8;
  const auto ref = solve(inst, so);
  // Both runs certify their value against the other.
  CHECK(out.solve.final_objective() - out.solve.final_gap() <= ref.final_objective() + 1e-12);
  CHECK(ref.final_objective() - ref.final_gap() <= out.solve.final_objective() + 1e-12);
}

TEST_CASE("sweep: one point equals one align") {
  const fs::path dir = oracle::scratch_dir("pipe_sweep1");
  std::vector<LoadedManifest> sets;
  std::vector<double> direct;
  for (std::uint64_t seed : {3u, 4u}) {
    sets.push_back(load(write_synth_suite(small_config(seed), synth_default_hyperparameters(),
                                          dir / std::to_string(seed))));
  }
  AlignOptions opt;
  opt.overrides["sigma"] = 4.0;
  for (const auto& d : sets) direct.push_back(*run_align(d, opt).mean_jaccard());

  const auto rows = run_sweep(sets, {GridAxis{"sigma", {4.0}}}, AlignOptions{}, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_seeds == 2);
  CHECK(rows[0].mean == doctest::Approx((direct[0] + direct[1]) / 2).epsilon(1e-15));
  const double sd = std::abs(direct[0] - direct[1]) / std::sqrt(2.0);
  CHECK(rows[0].standard_error == doctest::Approx(sd / std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(run_sweep(sets, {}, AlignOptions{}), Error);
  CHECK_THROWS_AS(run_sweep(sets, {GridAxis{"sigma", {}}}, AlignOptions{}), Error);
  CHECK_THROWS_AS(run_sweep({}, {GridAxis{"sigma", {1.0}}}, AlignOptions{}), Error);
  CHECK(parse_grid_axis("alpha=0.5,1").values == std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(parse_grid_axis("alpha"), Error);
  CHECK_THROWS_AS(parse_grid_axis("alpha=x"), Error);
}

TEST_CASE("sweep: sigma grid on the default suite writes one row per value") {
  const fs::path dir = oracle::scratch_dir("pipe_sweep_sigma");
  const auto data = load(write_synth_suite(SynthConfig{}, synth_default_hyperparameters(), dir));
  const double ratio = 60.0 / 11.0;
  const std::vector<GridAxis> grid{{"sigma", {0.5 * ratio, 2 * ratio, 8 * ratio, 1e9 * ratio}}};
  AlignOptions opt;
  opt.gap_tol = 1e-4;
  const auto rows = run_sweep({data}, grid, opt);
  write_sweep_csv(dir / "sweep.csv", grid, rows);
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "sigma,mean,stderr,n_seeds");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) CHECK(std::isfinite(std::stod(cell)));
  }
  CHECK(n == 4);
}
