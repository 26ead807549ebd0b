// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <vector>

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
    require(in_.good(), ErrorKind::Io, "cannot open " + path.string());
  }

  // Next line with trailing '\r' stripped; false at end of file.
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  int line_no() const { return line_no_; }

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorKind::Parse, path_.string() + ":" + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  int line_no_ = 0;
};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    out.push_back(line.substr(begin, comma == std::string_view::npos ? comma : comma - begin));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end && !token.empty();
}

std::vector<int> parse_ints(const LineReader& reader, std::string_view line,
                            std::size_t expected) {
  const auto tokens = split_commas(line);
  if (tokens.size() != expected) {
    reader.error("expected " + std::to_string(expected) + " comma-separated integers");
  }
  std::vector<int> out(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    if (!parse_number(tokens[k], out[k])) {
      reader.error("not an integer: '" + std::string(tokens[k]) + "'");
    }
  }
  return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

void skip_trailing_blank(LineReader& reader, std::string& line, const char* what) {
  while (reader.next(line)) {
    if (!blank(line)) reader.error(std::string("unexpected extra line after ") + what);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  require(out.good(), ErrorKind::Io, "write failed for " + path.string());
}

void expect_header(LineReader& reader, std::string& line, const char* what) {
  if (!reader.next(line)) reader.error(std::string("missing ") + what + " header line");
  if (line.empty() || line.front() != '#') {
    reader.error(std::string("expected a '#' ") + what + " header line");
  }
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  require(ec == std::errc(), ErrorKind::InvalidArgument, "cannot format real");
  return std::string(buf, ptr);
}

FeatureMatrix read_matrix(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) reader.error("malformed header: empty file");
  const auto header = split_commas(line);
  long rows = 0;
  long cols = 0;
  if (header.size() != 2 || !parse_number(header[0], rows) || !parse_number(header[1], cols) ||
      rows < 1 || cols < 1) {
    reader.error("malformed header: expected 'rows,cols' with positive counts");
  }

  FeatureMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!reader.next(line)) {
      reader.error("ragged input: expected " + std::to_string(rows) + " data lines, found " +
                   std::to_string(r));
    }
    const auto tokens = split_commas(line);
    if (static_cast<long>(tokens.size()) != cols) {
      reader.error("ragged input: expected " + std::to_string(cols) + " values, found " +
                   std::to_string(tokens.size()));
    }
    for (long c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_number(tokens[static_cast<std::size_t>(c)], v)) {
        reader.error("not a number: '" + std::string(tokens[static_cast<std::size_t>(c)]) + "'");
      }
      if (!std::isfinite(v)) reader.error("non-finite value");
      m(r, c) = v;
    }
  }
  while (reader.next(line)) {
    if (!blank(line)) reader.error("ragged input: more data lines than the header declares");
  }
  return m;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  require_finite(m, "matrix");
  auto out = open_out(path);
  out << m.rows() << ',' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_real(m(r, c));
    }
    out << '\n';
  }
  finish(out, path);
}

Annotation read_annotations(const std::filesystem::path& path, int j_count, int i_count) {
  LineReader reader(path);
  std::string line;
  expect_header(reader, line, "annotation");
  Annotation ann;
  while (reader.next(line)) {
    if (blank(line)) continue;
    const auto v = parse_ints(reader, line, 3);
    ann.intervals.push_back(AnnotatedInterval{v[0], v[1], v[2]});
    try {
      ann.validate(j_count, i_count);
    } catch (const Error& e) {
      reader.error(e.what());
    }
  }
  return ann;
}

void write_annotations(const std::filesystem::path& path, const Annotation& ann) {
  ann.validate(INT_MAX, INT_MAX);
  auto out = open_out(path);
  out << kAnnotationHeader << '\n';
  for (const AnnotatedInterval& a : ann.intervals) {
    out << a.j << ',' << a.start << ',' << a.end << '\n';
  }
  finish(out, path);
}

AlignmentPath read_predictions(const std::filesystem::path& path, int j_count) {
  LineReader reader(path);
  std::string line;
  expect_header(reader, line, "prediction");
  std::vector<int> rows;
  while (reader.next(line)) {
    if (blank(line)) {
      skip_trailing_blank(reader, line, "predictions");
      break;
    }
    const auto v = parse_ints(reader, line, 2);
    if (v[0] != static_cast<int>(rows.size())) {
      reader.error("expected interval " + std::to_string(rows.size()));
    }
    rows.push_back(v[1]);
  }
  if (rows.empty()) reader.error("no predictions");
  const int inferred = j_count > 0 ? j_count : rows.back() + 1;
  try {
    return AlignmentPath(std::move(rows), inferred);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_predictions(const std::filesystem::path& path, const AlignmentPath& pred) {
  auto out = open_out(path);
  out << kPredictionHeader << '\n';
  for (int i = 0; i < pred.i_count(); ++i) out << i << ',' << pred[i] << '\n';
  finish(out, path);
}

InterleavedText interleave_background(const FeatureMatrix& psi_raw) {
  require(psi_raw.cols() >= 1, ErrorKind::InvalidArgument,
          "text features need at least one sentence");
  const Eigen::Index k = psi_raw.cols();
  InterleavedText out;
  out.psi = FeatureMatrix::Zero(psi_raw.rows(), 2 * k + 1);
  for (Eigen::Index s = 0; s < k; ++s) out.psi.col(2 * s + 1) = psi_raw.col(s);
  for (Eigen::Index j = 0; j <= 2 * k; j += 2) out.background.insert(static_cast<int>(j));
  return out;
}

}  // namespace vtalign
