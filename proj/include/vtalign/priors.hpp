// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_PRIORS_HPP
#define VTALIGN_PRIORS_HPP

#include <Eigen/Dense>

#include "vtalign/discriminative.hpp"
#include "vtalign/polytope.hpp"

namespace vtalign {

struct PriorConfig {
  Eigen::VectorXd mu;  // target duration per row (interval units)
  double sigma = 1e9;  // +inf switches the duration prior off
  double alpha = 0.0;
  double beta = 1.0;

  // Throws InvalidArgument on sigma <= 0, alpha < 0, beta outside [0, 1] or
  // non-positive mu entries.
  void validate() const;
  // 1 / sigma^2, zero for infinite sigma.
  double duration_weight() const;
};

// Broadcasts a scalar target duration to `j_count` rows.
Eigen::VectorXd uniform_mu(int j_count, double mu);

/// (1 / 2 sigma^2) ||Y 1 - mu||^2.
double duration_penalty(const RelaxedAssignment& y, const PriorConfig& config);

// (1 / sigma^2) (Y 1 - mu) 1^T.
Eigen::MatrixXd duration_gradient(const RelaxedAssignment& y, const PriorConfig& config);

/// alpha Tr(Y_c^T Y): alpha times the assignment mass outside the band.
double band_penalty(const RelaxedAssignment& y, const Eigen::MatrixXd& y_c, double alpha);

// The band term is linear, its gradient is alpha Y_c.
Eigen::MatrixXd band_gradient(const Eigen::MatrixXd& y_c, double alpha);

}  // namespace vtalign

#endif  // VTALIGN_PRIORS_HPP
