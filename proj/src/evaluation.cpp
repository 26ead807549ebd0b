// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/evaluation.hpp"

#include <random>
#include <string>

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

void require_path_sizes(int i_count, int j_count) {
  require(i_count >= 1 && j_count >= 1, ErrorKind::InvalidArgument,
          "path sizes must be positive");
  require(j_count <= i_count, ErrorKind::Infeasible,
          "no alignment path: " + std::to_string(j_count) + " text elements for " +
              std::to_string(i_count) + " intervals");
}

}  // namespace

double jaccard_score(const AlignmentPath& pred, const Annotation& gt,
                     const std::set<int>& background) {
  double total = 0.0;
  int rows = 0;
  for (const AnnotatedInterval& a : gt.intervals) {
    if (background.count(a.j) || a.end <= a.start) continue;
    int assigned = 0;
    int inside = 0;
    for (int i = 0; i < pred.i_count(); ++i) {
      if (pred[i] != a.j) continue;
      ++assigned;
      if (i >= a.start && i < a.end) ++inside;
    }
    total += assigned > 0 ? static_cast<double>(inside) / assigned : 0.0;
    ++rows;
  }
  require(rows > 0, ErrorKind::InvalidArgument, "no scorable rows in the ground truth");
  return total / rows;
}

AlignmentPath diagonal_path(int i_count, int j_count) {
  require_path_sizes(i_count, j_count);
  std::vector<int> assignment(static_cast<std::size_t>(i_count));
  // Row of 1-based interval i is floor((i - 1) J / I) + 1; earlier rows take
  // the longer durations.
  for (int i = 0; i < i_count; ++i) {
    assignment[static_cast<std::size_t>(i)] =
        static_cast<int>((static_cast<long long>(i) * j_count) / i_count);
  }
  return AlignmentPath(std::move(assignment), j_count);
}

AlignmentPath random_path(int i_count, int j_count, std::uint64_t seed) {
  require_path_sizes(i_count, j_count);
  std::mt19937_64 rng(seed);
  // Floyd's subset sampling: J-1 step positions among the I-1 gaps.
  const int gaps = i_count - 1;
  const int steps = j_count - 1;
  std::vector<bool> step_at(static_cast<std::size_t>(gaps), false);
  for (int r = gaps - steps; r < gaps; ++r) {
    std::uniform_int_distribution<int> pick(0, r);
    const int g = pick(rng);
    step_at[static_cast<std::size_t>(step_at[static_cast<std::size_t>(g)] ? r : g)] = true;
  }
  std::vector<int> assignment(static_cast<std::size_t>(i_count), 0);
  for (int i = 1; i < i_count; ++i) {
    assignment[static_cast<std::size_t>(i)] =
        assignment[static_cast<std::size_t>(i - 1)] + (step_at[static_cast<std::size_t>(i - 1)] ? 1 : 0);
  }
  return AlignmentPath(std::move(assignment), j_count);
}

}  // namespace vtalign
