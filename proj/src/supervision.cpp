// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/supervision.hpp"

#include <cmath>
#include <string>

#include "vtalign/error.hpp"

namespace vtalign {

void Annotation::validate(int j_count, int i_count) const {
  for (std::size_t n = 0; n < intervals.size(); ++n) {
    const AnnotatedInterval& a = intervals[n];
    const std::string where = "annotation entry " + std::to_string(n) + " (row " +
                              std::to_string(a.j) + "): ";
    require(a.j >= 0 && a.j < j_count, ErrorKind::InvalidArgument,
            where + "row outside [0, " + std::to_string(j_count) + ")");
    require(a.start < a.end, ErrorKind::InvalidArgument, where + "empty interval");
    require(a.start >= 0 && a.end <= i_count, ErrorKind::InvalidArgument,
            where + "interval outside [0, " + std::to_string(i_count) + ")");
    if (n > 0) {
      const AnnotatedInterval& prev = intervals[n - 1];
      require(prev.j < a.j, ErrorKind::InvalidArgument, where + "rows must increase");
      require(prev.end <= a.start, ErrorKind::InvalidArgument,
              where + "overlaps or precedes the previous interval");
    }
  }
}

std::set<int> background_rows(int j_count) {
  std::set<int> out;
  for (int j = 0; j < j_count; j += 2) out.insert(j);
  return out;
}

CellMask build_interval_mask(const Annotation& ann, int j_count, int i_count,
                             const std::set<int>& background) {
  ann.validate(j_count, i_count);
  CellMask mask = empty_mask(j_count, i_count);
  for (const AnnotatedInterval& a : ann.intervals) {
    if (background.count(a.j)) continue;
    for (int i = 0; i < i_count; ++i) {
      if (i < a.start || i >= a.end) mask(a.j, i) = true;
    }
    require(mask_feasible(mask), ErrorKind::Infeasible,
            "annotation of row " + std::to_string(a.j) + " leaves no alignment path");
  }
  return mask;
}

CellMask fix_assignment_mask(const AlignmentPath& y_s) {
  require(y_s.i_count() >= 1 && y_s.j_count() >= 1, ErrorKind::InvalidArgument,
          "fixed assignment must be a valid path");
  CellMask mask = CellMask::Constant(y_s.j_count(), y_s.i_count(), true);
  for (int i = 0; i < y_s.i_count(); ++i) mask(y_s[i], i) = false;
  return mask;
}

AlignmentPath annotation_to_path(const Annotation& ann, int j_count, int i_count) {
  ann.validate(j_count, i_count);
  require(j_count % 2 == 1, ErrorKind::InvalidArgument,
          "annotation expansion needs interleaved background rows (odd row count)");
  const int sentences = (j_count - 1) / 2;

  std::vector<const AnnotatedInterval*> by_sentence;
  for (const AnnotatedInterval& a : ann.intervals) {
    if (a.j % 2 == 1) by_sentence.push_back(&a);
  }
  require(static_cast<int>(by_sentence.size()) == sentences, ErrorKind::InvalidArgument,
          "annotation expansion needs an interval for every sentence row");

  std::vector<int> rows(static_cast<std::size_t>(i_count), -1);
  for (const AnnotatedInterval* a : by_sentence) {
    for (int i = a->start; i < a->end; ++i) rows[static_cast<std::size_t>(i)] = a->j;
  }
  // Unannotated intervals belong to the background row after the last
  // sentence that ended at or before them.
  int finished = 0;
  for (int i = 0; i < i_count; ++i) {
    while (finished < sentences && by_sentence[static_cast<std::size_t>(finished)]->end <= i) {
      ++finished;
    }
    auto& r = rows[static_cast<std::size_t>(i)];
    if (r < 0) r = 2 * finished;
  }

  std::vector<int> count(static_cast<std::size_t>(j_count), 0);
  for (int r : rows) ++count[static_cast<std::size_t>(r)];
  for (int k = 0; k <= sentences; ++k) {
    if (count[static_cast<std::size_t>(2 * k)] > 0) continue;
    const int donor = k == 0 ? by_sentence.front()->start
                             : by_sentence[static_cast<std::size_t>(k - 1)]->end - 1;
    rows[static_cast<std::size_t>(donor)] = 2 * k;
  }
  try {
    return AlignmentPath(std::move(rows), j_count);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidArgument,
         std::string("annotation does not expand to an alignment path: ") + e.what());
  }
}

ProblemInstance assemble(const std::vector<StreamInput>& unsupervised,
                         const std::vector<StreamInput>& supervised, double kappa,
                         SupervisionMode mode, double lambda, const PriorConfig& priors) {
  require(std::isfinite(kappa) && kappa >= 0.0, ErrorKind::InvalidArgument,
          "kappa must be a non-negative real");
  std::vector<StreamData> streams;
  streams.reserve(unsupervised.size() + supervised.size());
  for (const StreamInput& s : unsupervised) {
    streams.push_back(StreamData{s.id, s.phi, s.psi, std::nullopt, s.mu, false, false});
  }
  for (const StreamInput& s : supervised) {
    StreamData d{s.id, kappa * s.phi, kappa * s.psi, std::nullopt, s.mu, true, false};
    const int j_count = static_cast<int>(s.psi.cols());
    const int i_count = static_cast<int>(s.phi.cols());
    try {
      if (mode == SupervisionMode::Soft) {
        d.mask = build_interval_mask(s.annotation, j_count, i_count, background_rows(j_count));
      } else if (mode == SupervisionMode::Hard) {
        d.mask = fix_assignment_mask(annotation_to_path(s.annotation, j_count, i_count));
        d.fixed = true;
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "stream '" + s.id + "': " + e.what());
    }
    streams.push_back(std::move(d));
  }
  return build_instance(std::move(streams), lambda, priors, kappa);
}

}  // namespace vtalign
