// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "vtalign/error.hpp"
#include "vtalign/solver.hpp"

using namespace vtalign;

namespace {

struct Shape {
  int i, j, e, d;
};

ProblemInstance random_instance(oracle::Rng& rng, Shape s, double sigma, double alpha,
                                double beta = 0.3, double lambda = 0.1) {
  StreamData stream;
  stream.id = "s";
  stream.phi = rng.gaussian(s.d, s.i);
  stream.psi = rng.gaussian(s.e, s.j);
  Eigen::VectorXd mu(s.j);
  for (int t = 0; t < s.j; ++t) mu(t) = rng.uniform(0.5, 2.5);
  stream.mu = mu;
  PriorConfig priors;
  priors.sigma = sigma;
  priors.alpha = alpha;
  priors.beta = beta;
  return build_instance({stream}, lambda, priors);
}

double vertex_minimum(const ProblemInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : oracle::all_paths(inst.i_total(), inst.j_total())) {
    best = std::min(best, objective(inst, oracle::to_matrix(p, inst.j_total())));
  }
  return best;
}

void check_trace(const SolveResult& r) {
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
    CHECK(r.objective_trace[t] <= r.objective_trace[t - 1] + 1e-12);
  }
  for (double g : r.gap_trace) CHECK(g >= -1e-10);
  CHECK(r.y_relaxed.minCoeff() >= -1e-12);
  CHECK(r.y_relaxed.maxCoeff() <= 1.0 + 1e-12);
  CHECK((r.y_relaxed.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
}

}  // namespace

TEST_CASE("objective: zero features and no priors give zero") {
  oracle::Rng rng(41);
  StreamData s{"s", rng.gaussian(2, 6), Eigen::MatrixXd::Zero(3, 3), std::nullopt, {}, false,
               false};
  PriorConfig priors;
  priors.sigma = std::numeric_limits<double>::infinity();
  const auto inst = build_instance({s}, 0.5, priors);
  CHECK(objective(inst, rng.relaxed(6, 3)) == 0.0);
  CHECK(gradient(inst, rng.relaxed(6, 3)).isZero(0.0));
}

TEST_CASE("objective: sum of the three terms") {
  oracle::Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = random_instance(rng, {7, 3, 2, 3}, 1.3, 0.7);
    const Eigen::MatrixXd y = rng.relaxed(7, 3);
    const double sum = discriminative_cost(inst.psi, y, inst.kernel) +
                       duration_penalty(y, inst.priors) +
                       band_penalty(y, inst.y_c, inst.priors.alpha);
    CHECK(std::abs(objective(inst, y) - sum) <= 1e-12);
  }
}

TEST_CASE("objective at a vertex equals the ridge residual plus priors") {
  oracle::Rng rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = random_instance(rng, {6, 3, 2, 2}, 0.9, 0.4);
    const auto paths = oracle::all_paths(6, 3);
    const Eigen::MatrixXd y = oracle::to_matrix(
        paths[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(paths.size()) - 1))],
        3);
    const double lambda = inst.kernel.lambda;
    const double want =
        ridge_residual(inst.psi, y, inst.phi, fit_model(inst.psi, y, inst.phi, lambda), lambda) +
        duration_penalty(y, inst.priors) + band_penalty(y, inst.y_c, inst.priors.alpha);
    CHECK(oracle::relative_error(objective(inst, y), want) <= 1e-8);
  }
}

TEST_CASE("gradient: trivial cases") {
  oracle::Rng rng(44);
  const AlignmentPath p({0, 0, 1, 1, 2}, 3);
  StreamData s{"s", rng.gaussian(2, 5), Eigen::MatrixXd::Zero(2, 3), std::nullopt,
               Eigen::Vector3d(2, 2, 1), false, false};
  PriorConfig priors;
  priors.sigma = 0.8;
  auto inst = build_instance({s}, 0.1, priors);
  CHECK(gradient(inst, path_to_matrix(p)).isZero(0.0));

  priors.sigma = std::numeric_limits<double>::infinity();
  priors.alpha = 1.5;
  priors.beta = 0.2;
  inst = build_instance({s}, 0.1, priors);
  CHECK(gradient(inst, rng.relaxed(5, 3)) == 1.5 * inst.y_c);
}

TEST_CASE("gradient matches central finite differences") {
  oracle::Rng rng(45);
  for (int rep = 0; rep < 50; ++rep) {
    const int i = rng.uniform_int(3, 8), j = rng.uniform_int(2, std::min(i, 4));
    const auto inst = random_instance(rng, {i, j, rng.uniform_int(1, 4), rng.uniform_int(1, 4)},
                                      rng.uniform(0.5, 2.0), rng.uniform(0.1, 2.0), 0.2);
    const Eigen::MatrixXd y = rng.relaxed(i, j);
    const Eigen::MatrixXd g = gradient(inst, y);
    const double h = 1e-5;
    double worst = 0.0;
    for (int a = 0; a < j; ++a) {
      for (int b = 0; b < i; ++b) {
        Eigen::MatrixXd up = y, down = y;
        up(a, b) += h;
        down(a, b) -= h;
        const double fd = (objective(inst, up) - objective(inst, down)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g(a, b)) / std::max(1.0, std::abs(g(a, b))));
      }
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("exact_line_search: no descent means no step") {
  oracle::Rng rng(46);
  const auto inst = random_instance(rng, {6, 3, 2, 2}, 1.0, 0.5);
  const Eigen::MatrixXd y = rng.relaxed(6, 3);
  // Ascent direction: toward the LMO vertex of the negated gradient.
  const Eigen::MatrixXd g = gradient(inst, y);
  const Eigen::MatrixXd v = path_to_matrix(minimize_linear(-g).path);
  if (g.cwiseProduct(v - y).sum() >= 0.0) CHECK(exact_line_search(inst, y, v - y) == 0.0);
  CHECK(exact_line_search(inst, y, Eigen::MatrixXd::Zero(3, 6)) == 0.0);
}

TEST_CASE("exact_line_search: parabola fit and grid sampling") {
  oracle::Rng rng(47);
  int interior = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = random_instance(rng, {7, 3, 3, 2}, rng.uniform(0.5, 2.0), 0.3);
    const Eigen::MatrixXd y = rng.relaxed(7, 3);
    const Eigen::MatrixXd v = path_to_matrix(minimize_linear(gradient(inst, y)).path);
    const Eigen::MatrixXd dir = v - y;
    const double gamma = exact_line_search(inst, y, dir);
    CHECK(gamma >= 0.0);
    CHECK(gamma <= 1.0);

    // f(t) = a + b t + c t^2 from three samples.
    const double f0 = objective(inst, y), fh = objective(inst, y + 0.5 * dir),
                 f1 = objective(inst, y + dir);
    const double c = 2.0 * (f1 - 2.0 * fh + f0);
    const double b = f1 - f0 - c;
    if (c > 1e-9) {
      const double analytic = -b / (2.0 * c);
      if (analytic > 0.0 && analytic < 1.0) {
        ++interior;
        CHECK(std::abs(gamma - analytic) <= 1e-10 * std::max(1.0, 1.0 / c));
      }
    }
    const double best = objective(inst, y + gamma * dir);
    for (int k = 0; k <= 99; ++k) {
      const double t = k / 99.0;
      CHECK(best <= objective(inst, y + t * dir) + 1e-12);
    }
  }
  CHECK(interior > 0);
}

TEST_CASE("solve: a single feasible vertex converges immediately") {
  oracle::Rng rng(48);
  const auto inst = random_instance(rng, {4, 4, 2, 2}, 1.0, 0.5);
  const auto r = solve(inst);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.final_gap() == 0.0);
  CHECK(r.y_relaxed == Eigen::MatrixXd::Identity(4, 4));
}

TEST_CASE("solve: relaxation lower-bounds the vertex optimum on tiny instances") {
  oracle::Rng rng(49);
  for (int rep = 0; rep < 10; ++rep) {
    const auto inst = random_instance(rng, {6, 3, 2, 2}, rng.uniform(0.5, 2.0), 0.2);
    SolveOptions opt;
    opt.gap_tol = 1e-10;
    const auto r = solve(inst, opt);
    CHECK(r.converged);
    check_trace(r);
    const double best_vertex = vertex_minimum(inst);
    CHECK(r.final_objective() <= best_vertex + 1e-8);
    CHECK(r.final_objective() - r.final_gap() <= best_vertex);
  }
}

TEST_CASE("solve: every step rule reaches the same optimum") {
  oracle::Rng rng(50);
  const auto inst = random_instance(rng, {8, 3, 3, 3}, 0.7, 0.1);
  SolveOptions opt;
  opt.gap_tol = 1e-9;
  opt.step_rule = StepRule::Corrective;
  const auto corrective = solve(inst, opt);
  CHECK(corrective.converged);
  for (auto rule : {StepRule::Classic, StepRule::Pairwise}) {
    opt.step_rule = rule;
    opt.gap_tol = 1e-7;
    const auto r = solve(inst, opt);
    check_trace(r);
    // The gap certifies each run against the other.
    CHECK(r.final_objective() - r.final_gap() <= corrective.final_objective() + 1e-12);
    CHECK(corrective.final_objective() - corrective.final_gap() <= r.final_objective() + 1e-12);
  }
}

TEST_CASE("solve: orthonormal indicator text features without priors") {
  oracle::Rng rng(51);
  for (int rep = 0; rep < 10; ++rep) {
    StreamData s{"s", rng.gaussian(2, 7), Eigen::MatrixXd::Identity(3, 3), std::nullopt, {},
                 false, false};
    PriorConfig priors;
    priors.sigma = std::numeric_limits<double>::infinity();
    const auto inst = build_instance({s}, 0.05, priors);
    SolveOptions opt;
    opt.gap_tol = 1e-10;
    const auto r = solve(inst, opt);
    const double best_vertex = vertex_minimum(inst);
    CHECK(r.final_objective() <= best_vertex + 1e-10);
    CHECK(r.final_objective() >= best_vertex - r.final_gap() - (best_vertex - r.final_objective()));
  }
}

TEST_CASE("solve: iterates respect masks and W* is the fitted model") {
  oracle::Rng rng(52);
  StreamData s{"s", rng.gaussian(3, 8), rng.gaussian(2, 3), empty_mask(3, 8), {}, false, false};
  (*s.mask)(1, 0) = (*s.mask)(1, 1) = (*s.mask)(1, 6) = true;
  PriorConfig priors;
  priors.sigma = 2.0;
  const auto inst = build_instance({s}, 0.1, priors);
  const auto r = solve(inst);
  CHECK(r.converged);
  check_trace(r);
  CHECK(r.y_relaxed(1, 0) == 0.0);
  CHECK(r.y_relaxed(1, 1) == 0.0);
  CHECK(r.y_relaxed(1, 6) == 0.0);
  CHECK(r.w_star.isApprox(fit_model(inst.psi, r.y_relaxed, inst.phi, 0.1)));
}

TEST_CASE("solve: multiple streams are solved jointly") {
  oracle::Rng rng(53);
  std::vector<StreamData> streams;
  for (int n = 0; n < 3; ++n) {
    streams.push_back({"s" + std::to_string(n), rng.gaussian(3, 6 + n), rng.gaussian(2, 3),
                       std::nullopt, {}, false, false});
  }
  PriorConfig priors;
  priors.sigma = 1.5;
  const auto inst = build_instance(streams, 0.1, priors);
  CHECK(inst.i_total() == 6 + 7 + 8);
  CHECK(inst.j_total() == 9);
  CHECK(inst.kernel.i_total == 21);
  const auto r = solve(inst);
  CHECK(r.converged);
  check_trace(r);
  // No mass off the diagonal blocks.
  CHECK(r.y_relaxed.block(0, 6, 3, 15).isZero(0.0));
  CHECK(r.y_relaxed.block(3, 0, 3, 6).isZero(0.0));
}

TEST_CASE("build_instance: errors name the stream") {
  oracle::Rng rng(54);
  StreamData wide{"wide", rng.gaussian(2, 3), rng.gaussian(2, 5), std::nullopt, {}, false, false};
  try {
    build_instance({wide}, 0.1, PriorConfig{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("wide") != std::string::npos);
  }
  StreamData a{"a", rng.gaussian(2, 6), rng.gaussian(2, 3), std::nullopt, {}, false, false};
  StreamData b{"b", rng.gaussian(3, 6), rng.gaussian(2, 3), std::nullopt, {}, false, false};
  CHECK_THROWS_AS(build_instance({a, b}, 0.1, PriorConfig{}), Error);
}
