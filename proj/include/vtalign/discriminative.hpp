// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_DISCRIMINATIVE_HPP
#define VTALIGN_DISCRIMINATIVE_HPP

#include <Eigen/Dense>

namespace vtalign {

// Dense row-major-agnostic feature matrices. Video features are D x I (one
// column per temporal interval), text features E x J (one column per text
// element), the linear model E x D.
using FeatureMatrix = Eigen::MatrixXd;

// J x I matrix in the convex hull of ordered assignment matrices.
using RelaxedAssignment = Eigen::MatrixXd;

// Throws NonFinite if any entry of `m` is NaN or infinite.
void require_finite(const Eigen::MatrixXd& m, const char* what);

// Which algebraic route compute_q takes.
enum class KernelRoute {
  Automatic,  // primal when D <= I, identity form otherwise
  Primal,     // Id - Phi^T (Phi Phi^T + I lambda Id_D)^-1 Phi
  Identity,   // I lambda (Phi^T Phi + I lambda Id_I)^-1
};

struct CostKernel {
  Eigen::MatrixXd q_matrix;  // I x I, symmetric, spectrum in (0, 1]
  Eigen::Index i_total = 0;
  double lambda = 0.0;
};

/// Builds the data-dependent kernel of the reduced discriminative cost.
///
/// The returned matrix is explicitly symmetrized. Both routes are
/// algebraically equal by the matrix inversion lemma; the automatic choice
/// factors whichever Gram matrix is smaller.
CostKernel compute_q(const FeatureMatrix& phi, double lambda,
                     KernelRoute route = KernelRoute::Automatic);

/// Closed-form ridge model W* = Psi Y Phi^T (Phi Phi^T + I lambda Id)^-1.
FeatureMatrix fit_model(const FeatureMatrix& psi, const RelaxedAssignment& y,
                        const FeatureMatrix& phi, double lambda);

/// q(Y) = Tr(Psi Y Q Y^T Psi^T) / (2I).
double discriminative_cost(const FeatureMatrix& psi, const RelaxedAssignment& y,
                           const CostKernel& kernel);

/// The bracketed ridge objective before minimization over W:
/// ||Psi Y - W Phi||^2 / (2I) + lambda/2 ||W||^2.
double ridge_residual(const FeatureMatrix& psi, const RelaxedAssignment& y,
                      const FeatureMatrix& phi, const FeatureMatrix& w,
                      double lambda);

// Appends a constant row of ones so the learned map is affine.
FeatureMatrix augment_affine(const FeatureMatrix& phi);

}  // namespace vtalign

#endif  // VTALIGN_DISCRIMINATIVE_HPP
