// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/discriminative.hpp"

#include <cmath>
#include <string>

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

void require_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::InvalidArgument,
          "lambda must be a positive finite real, got " + std::to_string(lambda));
}

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  require(llt.info() == Eigen::Success, ErrorKind::NonFinite,
          "regularized Gram matrix is not positive definite");
  return llt;
}

// Phi Phi^T + I lambda Id_D, factored.
Eigen::LLT<Eigen::MatrixXd> factor_primal_gram(const FeatureMatrix& phi,
                                               double lambda) {
  const double shift = static_cast<double>(phi.cols()) * lambda;
  Eigen::MatrixXd gram = phi * phi.transpose();
  gram.diagonal().array() += shift;
  return factor_spd(gram);
}

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  require(m.allFinite(), ErrorKind::NonFinite,
          std::string(what) + " contains non-finite entries");
}

CostKernel compute_q(const FeatureMatrix& phi, double lambda, KernelRoute route) {
  require_lambda(lambda);
  require(phi.rows() >= 1 && phi.cols() >= 1, ErrorKind::ShapeMismatch,
          "phi must have at least one row and one column");
  require_finite(phi, "phi");

  const auto d = phi.rows();
  const auto i = phi.cols();
  if (route == KernelRoute::Automatic) {
    route = d > i ? KernelRoute::Identity : KernelRoute::Primal;
  }

  CostKernel kernel;
  kernel.i_total = i;
  kernel.lambda = lambda;
  const double shift = static_cast<double>(i) * lambda;

  if (route == KernelRoute::Primal) {
    const auto llt = factor_primal_gram(phi, lambda);
    kernel.q_matrix = Eigen::MatrixXd::Identity(i, i) - phi.transpose() * llt.solve(phi);
  } else {
    Eigen::MatrixXd gram = phi.transpose() * phi;
    gram.diagonal().array() += shift;
    const auto llt = factor_spd(gram);
    kernel.q_matrix = shift * llt.solve(Eigen::MatrixXd::Identity(i, i));
  }
  Eigen::MatrixXd sym = 0.5 * (kernel.q_matrix + kernel.q_matrix.transpose());
  kernel.q_matrix = std::move(sym);
  return kernel;
}

FeatureMatrix fit_model(const FeatureMatrix& psi, const RelaxedAssignment& y,
                        const FeatureMatrix& phi, double lambda) {
  require_lambda(lambda);
  require(psi.cols() == y.rows() && y.cols() == phi.cols(), ErrorKind::ShapeMismatch,
          "fit_model: incompatible shapes psi " + shape(psi) + ", y " + shape(y) +
              ", phi " + shape(phi));
  require_finite(psi, "psi");
  require_finite(y, "y");
  require_finite(phi, "phi");

  const auto llt = factor_primal_gram(phi, lambda);
  const Eigen::MatrixXd target = psi * y;  // E x I
  // W^T = G^-1 Phi (Psi Y)^T with G symmetric.
  return llt.solve(phi * target.transpose()).transpose();
}

double discriminative_cost(const FeatureMatrix& psi, const RelaxedAssignment& y,
                           const CostKernel& kernel) {
  require(psi.cols() == y.rows() && y.cols() == kernel.q_matrix.rows(),
          ErrorKind::ShapeMismatch,
          "discriminative_cost: incompatible shapes psi " + shape(psi) + ", y " +
              shape(y) + ", Q " + shape(kernel.q_matrix));
  const Eigen::MatrixXd target = psi * y;
  const double trace = (target * kernel.q_matrix).cwiseProduct(target).sum();
  return trace / (2.0 * static_cast<double>(kernel.i_total));
}

double ridge_residual(const FeatureMatrix& psi, const RelaxedAssignment& y,
                      const FeatureMatrix& phi, const FeatureMatrix& w,
                      double lambda) {
  require(psi.cols() == y.rows() && y.cols() == phi.cols() &&
              w.rows() == psi.rows() && w.cols() == phi.rows(),
          ErrorKind::ShapeMismatch,
          "ridge_residual: incompatible shapes psi " + shape(psi) + ", y " +
              shape(y) + ", phi " + shape(phi) + ", w " + shape(w));
  const double i = static_cast<double>(phi.cols());
  const double fit = (psi * y - w * phi).squaredNorm();
  return fit / (2.0 * i) + 0.5 * lambda * w.squaredNorm();
}

FeatureMatrix augment_affine(const FeatureMatrix& phi) {
  FeatureMatrix out(phi.rows() + 1, phi.cols());
  out.topRows(phi.rows()) = phi;
  out.row(phi.rows()).setOnes();
  return out;
}

}  // namespace vtalign
