// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/rounding.hpp"

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

// G(j, i) = (Psi^T Psi)(j, j) - 2 cross(j, i). Uses Tr(Y^T Psi^T Psi Y) =
// sum_i (Psi^T Psi)(j(i), j(i)) for binary Y.
Eigen::MatrixXd feature_cost(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& cross) {
  Eigen::MatrixXd cost = -2.0 * cross;
  cost.colwise() += gram.diagonal();
  return cost;
}

}  // namespace

AlignmentPath round_nearest(const RelaxedAssignment& y_star, const CellMask* mask) {
  require_finite(y_star, "relaxed assignment");
  return minimize_linear(-2.0 * y_star, mask).path;
}

AlignmentPath round_feature(const RelaxedAssignment& y_star, const FeatureMatrix& psi,
                            const CellMask* mask) {
  require(psi.cols() == y_star.rows(), ErrorKind::ShapeMismatch,
          "round_feature: psi columns must match the assignment rows");
  require_finite(y_star, "relaxed assignment");
  require_finite(psi, "psi");
  const Eigen::MatrixXd gram = psi.transpose() * psi;
  return minimize_linear(feature_cost(gram, gram * y_star), mask).path;
}

AlignmentPath round_model(const FeatureMatrix& w, const FeatureMatrix& psi,
                          const FeatureMatrix& phi, const CellMask* mask) {
  require(w.rows() == psi.rows() && w.cols() == phi.rows(), ErrorKind::ShapeMismatch,
          "round_model: model must map video features onto text features");
  require_finite(w, "model");
  require_finite(psi, "psi");
  require_finite(phi, "phi");
  const Eigen::MatrixXd gram = psi.transpose() * psi;
  const Eigen::MatrixXd cross = psi.transpose() * (w * phi);
  return minimize_linear(feature_cost(gram, cross), mask).path;
}

}  // namespace vtalign
