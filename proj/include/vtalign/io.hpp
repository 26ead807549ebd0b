// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_IO_HPP
#define VTALIGN_IO_HPP

#include <climits>
#include <filesystem>
#include <set>
#include <string>

#include "vtalign/discriminative.hpp"
#include "vtalign/polytope.hpp"
#include "vtalign/supervision.hpp"

namespace vtalign {

// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Matrix text format: a "rows,cols" header line followed by `rows` lines of
/// `cols` comma-separated reals. Parse errors carry the 1-based line number.
FeatureMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

inline constexpr const char* kAnnotationHeader = "# j,i_start,i_end (0-based, end-exclusive)";
inline constexpr const char* kPredictionHeader = "# i,j (0-based)";

// One "j,i_start,i_end" line per annotated row after the header line.
Annotation read_annotations(const std::filesystem::path& path, int j_count = INT_MAX,
                            int i_count = INT_MAX);
void write_annotations(const std::filesystem::path& path, const Annotation& ann);

// One "i,j" line per interval after the header line. A j_count of zero
// infers it from the last row.
AlignmentPath read_predictions(const std::filesystem::path& path, int j_count = 0);
void write_predictions(const std::filesystem::path& path, const AlignmentPath& pred);

struct InterleavedText {
  FeatureMatrix psi;  // E x (2K + 1)
  std::set<int> background;
};

// Sentence k moves to column 2k + 1; columns 0, 2, ..., 2K are zero.
InterleavedText interleave_background(const FeatureMatrix& psi_raw);

}  // namespace vtalign

#endif  // VTALIGN_IO_HPP
