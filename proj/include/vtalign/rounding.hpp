// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_ROUNDING_HPP
#define VTALIGN_ROUNDING_HPP

#include "vtalign/discriminative.hpp"
#include "vtalign/polytope.hpp"

namespace vtalign {

enum class RoundingMethod { Nearest, Feature, Model };

// Each rounding is exact: on binary Y the quadratic criterion reduces to a
// linear form, minimized by one call to minimize_linear.

/// argmin over paths of ||Y - Y*||_F^2.
AlignmentPath round_nearest(const RelaxedAssignment& y_star, const CellMask* mask = nullptr);

/// argmin over paths of ||Psi (Y - Y*)||_F^2.
AlignmentPath round_feature(const RelaxedAssignment& y_star, const FeatureMatrix& psi,
                            const CellMask* mask = nullptr);

/// argmin over paths of ||Psi Y - W Phi||_F^2. Does not look at Y*, so it
/// also aligns streams that took no part in training.
AlignmentPath round_model(const FeatureMatrix& w, const FeatureMatrix& psi,
                          const FeatureMatrix& phi, const CellMask* mask = nullptr);

}  // namespace vtalign

#endif  // VTALIGN_ROUNDING_HPP
