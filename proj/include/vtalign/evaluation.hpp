// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_EVALUATION_HPP
#define VTALIGN_EVALUATION_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "vtalign/polytope.hpp"
#include "vtalign/supervision.hpp"

namespace vtalign {

/// Mean over scorable rows of |pred_j ∩ gt_j| / |pred_j|. A row is scorable
/// when it is not background and has a non-empty ground-truth interval.
/// Throws InvalidArgument when no row is scorable.
double jaccard_score(const AlignmentPath& pred, const Annotation& gt,
                     const std::set<int>& background);

// Uniform split: interval i (1-based) goes to row ceil(i J / I).
AlignmentPath diagonal_path(int i_count, int j_count);

// Uniform sample over all C(I-1, J-1) vertices.
AlignmentPath random_path(int i_count, int j_count, std::uint64_t seed);

}  // namespace vtalign

#endif  // VTALIGN_EVALUATION_HPP
