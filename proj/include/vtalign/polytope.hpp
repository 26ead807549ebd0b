// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_POLYTOPE_HPP
#define VTALIGN_POLYTOPE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vtalign/discriminative.hpp"

namespace vtalign {

// A vertex of the alignment polytope: interval i is assigned to text element
// assignment[i] (0-based). Paths start on row 0, end on row J-1 and advance by
// at most one row per interval.
class AlignmentPath {
 public:
  AlignmentPath() = default;
  // Validates the monotone unit-step structure; throws InvalidArgument.
  AlignmentPath(std::vector<int> assignment, int j_count);

  int i_count() const noexcept { return static_cast<int>(assignment_.size()); }
  int j_count() const noexcept { return j_count_; }
  const std::vector<int>& assignment() const noexcept { return assignment_; }
  int operator[](int i) const { return assignment_[static_cast<std::size_t>(i)]; }

  // Number of intervals assigned to each row.
  std::vector<int> durations() const;

  friend bool operator==(const AlignmentPath&, const AlignmentPath&) = default;

 private:
  std::vector<int> assignment_;
  int j_count_ = 0;
};

// J x I; true marks a forbidden (row, interval) cell.
using CellMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

CellMask empty_mask(int j_count, int i_count);

struct BandMatrix {
  Eigen::MatrixXd y_c;  // 1 outside the band, 0 inside
  double beta = 1.0;
};

struct StreamBlock {
  int i_offset = 0;
  int j_offset = 0;
  int i_count = 0;
  int j_count = 0;
};

// Placement of each stream's diagonal block in the concatenated frame.
class StreamLayout {
 public:
  StreamLayout() = default;
  // Appends a block after the existing ones.
  void add_stream(int i_count, int j_count);

  const std::vector<StreamBlock>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  int i_total() const noexcept { return i_total_; }
  int j_total() const noexcept { return j_total_; }

 private:
  std::vector<StreamBlock> blocks_;
  int i_total_ = 0;
  int j_total_ = 0;
};

struct LinearMinimum {
  AlignmentPath path;
  double value = 0.0;
};

RelaxedAssignment path_to_matrix(const AlignmentPath& path);

// Inverse of path_to_matrix on vertices: argmax row of each column.
AlignmentPath matrix_to_path(const RelaxedAssignment& y);

/// Minimizes sum_{j,i} cost(j,i) Y(j,i) over all alignment paths by dynamic
/// programming in O(IJ). Forbidden cells act as infinite cost. Among optimal
/// paths the one that stays on the current row as long as possible wins.
///
/// Throws Infeasible when no path avoids the mask (this includes J > I) and
/// NonFinite for NaN or infinite costs.
LinearMinimum minimize_linear(const Eigen::MatrixXd& cost,
                              const CellMask* mask = nullptr);

// True if at least one path avoids every forbidden cell.
bool mask_feasible(const CellMask& mask);

// sum_i cost(path[i], i), accumulated left to right.
double path_cost(const Eigen::MatrixXd& cost, const AlignmentPath& path);

bool path_respects(const AlignmentPath& path, const CellMask& mask);

/// All vertices for small problems (i_count <= 14, j_count <= 7), in
/// lexicographic order of their assignment vectors. Throws SizeGuard beyond.
std::vector<AlignmentPath> enumerate_paths(int i_count, int j_count,
                                           const CellMask* mask = nullptr);

// y_c(j, i) = 0 iff |j/J - i/I| <= beta with 1-based j and i.
BandMatrix band_indicator(int j_count, int i_count, double beta);

struct BlockMinimum {
  std::vector<AlignmentPath> paths;
  double value = 0.0;
};

/// Runs minimize_linear on each diagonal block of `cost`. `masks` is either
/// empty or holds one optional mask per stream.
BlockMinimum lmo_blocks(const Eigen::MatrixXd& cost, const StreamLayout& layout,
                        const std::vector<std::optional<CellMask>>& masks = {});

// Block-diagonal J_total x I_total matrix of the given per-stream paths.
RelaxedAssignment paths_to_matrix(const std::vector<AlignmentPath>& paths,
                                  const StreamLayout& layout);

}  // namespace vtalign

#endif  // VTALIGN_POLYTOPE_HPP
