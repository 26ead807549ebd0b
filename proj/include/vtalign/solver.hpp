// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_SOLVER_HPP
#define VTALIGN_SOLVER_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vtalign/discriminative.hpp"
#include "vtalign/polytope.hpp"
#include "vtalign/priors.hpp"

namespace vtalign {

// One (video, text) pair as it enters the joint objective, with features
// prepared for the joint problem.
struct StreamData {
  std::string id;
  FeatureMatrix phi;  // D x I_n
  FeatureMatrix psi;  // E x J_n
  std::optional<CellMask> mask;
  Eigen::VectorXd mu;  // per-row target durations; empty means I_n / J_n
  bool supervised = false;
  bool fixed = false;  // block pinned to a single feasible path
};

struct ProblemInstance {
  std::vector<StreamData> streams;
  FeatureMatrix phi;  // D x I_total
  FeatureMatrix psi;  // E x J_total
  StreamLayout layout;
  CostKernel kernel;
  PriorConfig priors;   // mu has J_total entries
  Eigen::MatrixXd y_c;  // J_total x I_total band indicator, zero off-block
  double kappa = 1.0;

  std::vector<std::optional<CellMask>> masks() const;
  int i_total() const { return layout.i_total(); }
  int j_total() const { return layout.j_total(); }
};

/// Concatenates the streams into the block-diagonal joint problem and builds
/// the kernel on the full Phi. priors.mu is rebuilt from the per-stream
/// targets. Throws on inconsistent feature dimensions or
/// infeasible masks.
ProblemInstance build_instance(std::vector<StreamData> streams, double lambda,
                               PriorConfig priors, double kappa = 1.0);

// q(Y) + r(Y) + l(Y).
double objective(const ProblemInstance& instance, const RelaxedAssignment& y);

// (1/I) Psi^T Psi Y Q + (1/sigma^2)(Y1 - mu)1^T + alpha Y_c.
Eigen::MatrixXd gradient(const ProblemInstance& instance, const RelaxedAssignment& y);

/// Exact minimizer over [0, 1] of the objective along y + gamma * direction.
double exact_line_search(const ProblemInstance& instance, const RelaxedAssignment& y,
                         const Eigen::MatrixXd& direction);

enum class StepRule {
  // Move toward the LMO vertex: Y + gamma (V - Y).
  Classic,
  // Shift weight from the worst active vertex A to V: Y + gamma (V - A),
  // gamma capped by the weight of A.
  Pairwise,
  // Pairwise, then re-minimize exactly over the convex hull of the active
  // vertices.
  Corrective,
};

struct SolveOptions {
  StepRule step_rule = StepRule::Corrective;
  int max_iter = 2000;
  double gap_tol = 1e-6;
  // One path per stream; defaults to the diagonal path (or its nearest
  // mask-feasible vertex).
  std::vector<AlignmentPath> init;
};

struct SolveResult {
  RelaxedAssignment y_relaxed;
  FeatureMatrix w_star;
  std::vector<double> objective_trace;
  std::vector<double> gap_trace;
  int iterations = 0;
  bool converged = false;
  std::size_t active_vertices = 0;  // total support size over streams

  double final_objective() const { return objective_trace.back(); }
  double final_gap() const { return gap_trace.back(); }
};

/// Frank-Wolfe with exact line search over the alignment polytope. The
/// linear minimization step is the per-stream dynamic program; iteration
/// stops once the duality gap <grad, Y - V> drops to gap_tol. The iterate is
/// kept as an explicit convex combination of vertices.
SolveResult solve(const ProblemInstance& instance, const SolveOptions& options = {});

std::vector<AlignmentPath> default_init(const ProblemInstance& instance);

}  // namespace vtalign

#endif  // VTALIGN_SOLVER_HPP
