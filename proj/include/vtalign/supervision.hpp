// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_SUPERVISION_HPP
#define VTALIGN_SUPERVISION_HPP

#include <set>
#include <string>
#include <vector>

#include "vtalign/polytope.hpp"
#include "vtalign/solver.hpp"

namespace vtalign {

// Row j covers intervals [start, end), 0-based.
struct AnnotatedInterval {
  int j = 0;
  int start = 0;
  int end = 0;

  friend bool operator==(const AnnotatedInterval&, const AnnotatedInterval&) = default;
};

struct Annotation {
  std::vector<AnnotatedInterval> intervals;

  // Ranges inside the frame, non-empty, ordered by j and non-overlapping.
  // Throws InvalidArgument naming the offending entry.
  void validate(int j_count, int i_count) const;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class SupervisionMode { None, Soft, Hard };

/// Forbids, for each annotated non-background row, every interval outside
/// its annotation. Throws Infeasible naming the first row whose constraint
/// leaves no alignment path.
CellMask build_interval_mask(const Annotation& ann, int j_count, int i_count,
                             const std::set<int>& background);

// Forbids every cell off the given path.
CellMask fix_assignment_mask(const AlignmentPath& y_s);

/// Expands an annotation of sentence rows into a full path. Intervals outside
/// every annotation go to the background row between their neighbours; an
/// empty background row takes the boundary interval of the adjacent
/// sentence (the first one for row 0, the preceding sentence's last one
/// otherwise).
AlignmentPath annotation_to_path(const Annotation& ann, int j_count, int i_count);

// Zero columns at 0, 2, ..., 2K for K sentences.
std::set<int> background_rows(int j_count);

struct StreamInput {
  std::string id;
  FeatureMatrix phi;  // affine-augmented video features
  FeatureMatrix psi;  // background-interleaved text features
  Annotation annotation;
  Eigen::VectorXd mu;
};

/// Builds the joint problem with unsupervised streams first and supervised
/// streams weighted by kappa. Supervised blocks are pinned to their
/// annotation expansion (Hard) or confined to annotated intervals (Soft).
ProblemInstance assemble(const std::vector<StreamInput>& unsupervised,
                         const std::vector<StreamInput>& supervised, double kappa,
                         SupervisionMode mode, double lambda, const PriorConfig& priors);

}  // namespace vtalign

#endif  // VTALIGN_SUPERVISION_HPP
