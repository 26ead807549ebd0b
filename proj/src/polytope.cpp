// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/polytope.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_mask_shape(const CellMask& mask, Eigen::Index rows, Eigen::Index cols) {
  require(mask.rows() == rows && mask.cols() == cols, ErrorKind::ShapeMismatch,
          "mask is " + std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) +
              ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

// Cost-to-go table: togo(j, i) is the cheapest completion from cell (j, i) to
// (J-1, I-1), including the cell itself. Infinite where no completion exists.
Eigen::MatrixXd cost_to_go(const Eigen::MatrixXd& cost, const CellMask* mask) {
  const Eigen::Index j_count = cost.rows();
  const Eigen::Index i_count = cost.cols();
  Eigen::MatrixXd togo = Eigen::MatrixXd::Constant(j_count, i_count, kInf);
  auto allowed = [&](Eigen::Index j, Eigen::Index i) {
    return mask == nullptr || !(*mask)(j, i);
  };

  const Eigen::Index last = i_count - 1;
  if (allowed(j_count - 1, last)) togo(j_count - 1, last) = cost(j_count - 1, last);
  for (Eigen::Index i = last - 1; i >= 0; --i) {
    // Rows that can still reach the last row: j >= J-1 - (I-1-i).
    const Eigen::Index j_min = std::max<Eigen::Index>(0, (j_count - 1) - (last - i));
    for (Eigen::Index j = j_min; j < j_count; ++j) {
      if (!allowed(j, i)) continue;
      double next = togo(j, i + 1);
      if (j + 1 < j_count) next = std::min(next, togo(j + 1, i + 1));
      if (next < kInf) togo(j, i) = cost(j, i) + next;
    }
  }
  return togo;
}

}  // namespace

AlignmentPath::AlignmentPath(std::vector<int> assignment, int j_count)
    : assignment_(std::move(assignment)), j_count_(j_count) {
  require(j_count_ >= 1, ErrorKind::InvalidArgument, "path needs at least one row");
  require(!assignment_.empty(), ErrorKind::InvalidArgument,
          "path needs at least one interval");
  require(assignment_.front() == 0, ErrorKind::InvalidArgument,
          "path must start on row 0");
  require(assignment_.back() == j_count_ - 1, ErrorKind::InvalidArgument,
          "path must end on row " + std::to_string(j_count_ - 1));
  for (std::size_t i = 1; i < assignment_.size(); ++i) {
    const int step = assignment_[i] - assignment_[i - 1];
    require(step == 0 || step == 1, ErrorKind::InvalidArgument,
            "path step at interval " + std::to_string(i) + " is " + std::to_string(step));
  }
}

std::vector<int> AlignmentPath::durations() const {
  std::vector<int> out(static_cast<std::size_t>(j_count_), 0);
  for (int j : assignment_) ++out[static_cast<std::size_t>(j)];
  return out;
}

CellMask empty_mask(int j_count, int i_count) {
  return CellMask::Constant(j_count, i_count, false);
}

void StreamLayout::add_stream(int i_count, int j_count) {
  require(i_count >= 1 && j_count >= 1, ErrorKind::InvalidArgument,
          "stream sizes must be positive");
  blocks_.push_back(StreamBlock{i_total_, j_total_, i_count, j_count});
  i_total_ += i_count;
  j_total_ += j_count;
}

RelaxedAssignment path_to_matrix(const AlignmentPath& path) {
  RelaxedAssignment y = RelaxedAssignment::Zero(path.j_count(), path.i_count());
  for (int i = 0; i < path.i_count(); ++i) y(path[i], i) = 1.0;
  return y;
}

AlignmentPath matrix_to_path(const RelaxedAssignment& y) {
  std::vector<int> assignment(static_cast<std::size_t>(y.cols()));
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    Eigen::Index row = 0;
    y.col(i).maxCoeff(&row);
    assignment[static_cast<std::size_t>(i)] = static_cast<int>(row);
  }
  return AlignmentPath(std::move(assignment), static_cast<int>(y.rows()));
}

double path_cost(const Eigen::MatrixXd& cost, const AlignmentPath& path) {
  double total = 0.0;
  for (int i = 0; i < path.i_count(); ++i) total += cost(path[i], i);
  return total;
}

bool path_respects(const AlignmentPath& path, const CellMask& mask) {
  for (int i = 0; i < path.i_count(); ++i) {
    if (mask(path[i], i)) return false;
  }
  return true;
}

LinearMinimum minimize_linear(const Eigen::MatrixXd& cost, const CellMask* mask) {
  require(cost.rows() >= 1 && cost.cols() >= 1, ErrorKind::ShapeMismatch,
          "cost matrix must be non-empty");
  require_finite(cost, "linear cost");
  if (mask != nullptr) require_mask_shape(*mask, cost.rows(), cost.cols());
  require(cost.rows() <= cost.cols(), ErrorKind::Infeasible,
          "no alignment path: " + std::to_string(cost.rows()) + " text elements for " +
              std::to_string(cost.cols()) + " intervals");

  const Eigen::MatrixXd togo = cost_to_go(cost, mask);
  require(togo(0, 0) < kInf, ErrorKind::Infeasible,
          "no alignment path avoids the forbidden cells");

  const Eigen::Index j_count = cost.rows();
  const Eigen::Index i_count = cost.cols();
  std::vector<int> assignment(static_cast<std::size_t>(i_count));
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i + 1 < i_count; ++i) {
    const double stay = togo(j, i + 1);
    const double advance = j + 1 < j_count ? togo(j + 1, i + 1) : kInf;
    if (advance < stay) ++j;
    assignment[static_cast<std::size_t>(i + 1)] = static_cast<int>(j);
  }
  LinearMinimum out{AlignmentPath(std::move(assignment), static_cast<int>(j_count)), 0.0};
  out.value = path_cost(cost, out.path);
  return out;
}

bool mask_feasible(const CellMask& mask) {
  if (mask.rows() < 1 || mask.cols() < 1 || mask.rows() > mask.cols()) return false;
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(mask.rows(), mask.cols());
  return cost_to_go(zero, &mask)(0, 0) < kInf;
}

std::vector<AlignmentPath> enumerate_paths(int i_count, int j_count, const CellMask* mask) {
  require(i_count >= 1 && j_count >= 1, ErrorKind::InvalidArgument,
          "enumerate_paths needs positive sizes");
  require(i_count <= 14 && j_count <= 7, ErrorKind::SizeGuard,
          "enumerate_paths is limited to 14 intervals and 7 text elements");
  if (mask != nullptr) require_mask_shape(*mask, j_count, i_count);

  std::vector<AlignmentPath> out;
  if (j_count > i_count) return out;
  std::vector<int> current(static_cast<std::size_t>(i_count), 0);
  auto allowed = [&](int j, int i) { return mask == nullptr || !(*mask)(j, i); };

  // Depth-first over intervals; staying is tried before advancing.
  auto recurse = [&](auto&& self, int i, int j) -> void {
    if (!allowed(j, i)) return;
    // Remaining intervals must be able to reach the last row.
    if ((j_count - 1 - j) > (i_count - 1 - i)) return;
    current[static_cast<std::size_t>(i)] = j;
    if (i == i_count - 1) {
      if (j == j_count - 1) out.emplace_back(current, j_count);
      return;
    }
    self(self, i + 1, j);
    if (j + 1 < j_count) self(self, i + 1, j + 1);
  };
  recurse(recurse, 0, 0);
  return out;
}

BandMatrix band_indicator(int j_count, int i_count, double beta) {
  require(j_count >= 1 && i_count >= 1, ErrorKind::InvalidArgument,
          "band_indicator needs positive sizes");
  require(beta >= 0.0 && beta <= 1.0, ErrorKind::InvalidArgument,
          "band width beta must lie in [0, 1]");
  BandMatrix band;
  band.beta = beta;
  band.y_c.resize(j_count, i_count);
  // |j/J - i/I| <= beta, cross-multiplied to stay exact on grid points.
  const double scale = static_cast<double>(j_count) * static_cast<double>(i_count);
  for (int j = 1; j <= j_count; ++j) {
    for (int i = 1; i <= i_count; ++i) {
      const double gap = std::abs(static_cast<double>(j) * i_count -
                                  static_cast<double>(i) * j_count);
      band.y_c(j - 1, i - 1) = gap <= beta * scale ? 0.0 : 1.0;
    }
  }
  return band;
}

BlockMinimum lmo_blocks(const Eigen::MatrixXd& cost, const StreamLayout& layout,
                        const std::vector<std::optional<CellMask>>& masks) {
  require(cost.rows() == layout.j_total() && cost.cols() == layout.i_total(),
          ErrorKind::ShapeMismatch, "block cost does not match the stream layout");
  require(masks.empty() || masks.size() == layout.size(), ErrorKind::ShapeMismatch,
          "one mask slot per stream is required");

  BlockMinimum out;
  out.paths.reserve(layout.size());
  for (std::size_t n = 0; n < layout.size(); ++n) {
    const StreamBlock& b = layout.blocks()[n];
    const Eigen::MatrixXd block = cost.block(b.j_offset, b.i_offset, b.j_count, b.i_count);
    const CellMask* mask = (!masks.empty() && masks[n]) ? &*masks[n] : nullptr;
    try {
      LinearMinimum m = minimize_linear(block, mask);
      out.value += m.value;
      out.paths.push_back(std::move(m.path));
    } catch (const Error& e) {
      throw Error(e.kind(), "stream " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

RelaxedAssignment paths_to_matrix(const std::vector<AlignmentPath>& paths,
                                  const StreamLayout& layout) {
  require(paths.size() == layout.size(), ErrorKind::ShapeMismatch,
          "one path per stream is required");
  RelaxedAssignment y = RelaxedAssignment::Zero(layout.j_total(), layout.i_total());
  for (std::size_t n = 0; n < paths.size(); ++n) {
    const StreamBlock& b = layout.blocks()[n];
    require(paths[n].i_count() == b.i_count && paths[n].j_count() == b.j_count,
            ErrorKind::ShapeMismatch, "path does not match its stream block");
    for (int i = 0; i < b.i_count; ++i) y(b.j_offset + paths[n][i], b.i_offset + i) = 1.0;
  }
  return y;
}

}  // namespace vtalign
