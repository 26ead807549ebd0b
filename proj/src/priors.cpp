// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/priors.hpp"

#include <cmath>
#include <string>

#include "vtalign/error.hpp"

namespace vtalign {

void PriorConfig::validate() const {
  require(!std::isnan(sigma) && sigma > 0.0, ErrorKind::InvalidArgument,
          "sigma must be positive");
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::InvalidArgument,
          "alpha must be a non-negative real");
  require(beta >= 0.0 && beta <= 1.0, ErrorKind::InvalidArgument,
          "beta must lie in [0, 1]");
  require(mu.size() == 0 || (mu.array() > 0.0).all(), ErrorKind::InvalidArgument,
          "target durations mu must be positive");
  require(mu.allFinite(), ErrorKind::NonFinite, "mu contains non-finite entries");
}

double PriorConfig::duration_weight() const {
  if (std::isinf(sigma)) return 0.0;
  return 1.0 / (sigma * sigma);
}

Eigen::VectorXd uniform_mu(int j_count, double mu) {
  return Eigen::VectorXd::Constant(j_count, mu);
}

namespace {

void require_mu(const RelaxedAssignment& y, const PriorConfig& config) {
  require(config.mu.size() == y.rows(), ErrorKind::ShapeMismatch,
          "mu has " + std::to_string(config.mu.size()) + " entries for " +
              std::to_string(y.rows()) + " rows");
}

}  // namespace

double duration_penalty(const RelaxedAssignment& y, const PriorConfig& config) {
  require_mu(y, config);
  const Eigen::VectorXd excess = y.rowwise().sum() - config.mu;
  return 0.5 * config.duration_weight() * excess.squaredNorm();
}

Eigen::MatrixXd duration_gradient(const RelaxedAssignment& y, const PriorConfig& config) {
  require_mu(y, config);
  const Eigen::VectorXd excess = config.duration_weight() * (y.rowwise().sum() - config.mu);
  return excess * Eigen::RowVectorXd::Ones(y.cols());
}

double band_penalty(const RelaxedAssignment& y, const Eigen::MatrixXd& y_c, double alpha) {
  require(y.rows() == y_c.rows() && y.cols() == y_c.cols(), ErrorKind::ShapeMismatch,
          "band matrix does not match the assignment shape");
  if (alpha == 0.0) return 0.0;
  return alpha * y_c.cwiseProduct(y).sum();
}

Eigen::MatrixXd band_gradient(const Eigen::MatrixXd& y_c, double alpha) {
  return alpha * y_c;
}

}  // namespace vtalign
