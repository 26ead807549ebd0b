// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "vtalign/error.hpp"
#include "vtalign/polytope.hpp"

using namespace vtalign;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

CellMask random_feasible_mask(oracle::Rng& rng, int i_count, int j_count) {
  const auto paths = oracle::all_paths(i_count, j_count);
  for (;;) {
    CellMask mask = empty_mask(j_count, i_count);
    for (int j = 0; j < j_count; ++j) {
      for (int i = 0; i < i_count; ++i) mask(j, i) = rng.uniform() < 0.3;
    }
    for (const auto& p : paths) {
      bool ok = true;
      for (int i = 0; i < i_count; ++i) ok = ok && !mask(p[static_cast<std::size_t>(i)], i);
      if (ok) return mask;
    }
  }
}

}  // namespace

TEST_CASE("AlignmentPath validates its invariants") {
  CHECK_NOTHROW(AlignmentPath({0, 0, 1}, 2));
  CHECK_THROWS_AS(AlignmentPath({1, 1, 1}, 2), Error);  // does not start on row 0
  CHECK_THROWS_AS(AlignmentPath({0, 0, 0}, 2), Error);  // does not end on the last row
  CHECK_THROWS_AS(AlignmentPath({0, 2, 2}, 3), Error);  // skips a row
  CHECK_THROWS_AS(AlignmentPath({0, 1, 0, 1}, 2), Error);
  CHECK(AlignmentPath({0, 0, 1, 1, 1}, 2).durations() == std::vector<int>{2, 3});
}

TEST_CASE("path_to_matrix examples") {
  CHECK(path_to_matrix(AlignmentPath({0, 1, 2}, 3)) == Eigen::MatrixXd::Identity(3, 3));
  CHECK(path_to_matrix(AlignmentPath({0, 0, 0}, 1)) == Eigen::MatrixXd::Ones(1, 3));
  Eigen::MatrixXd want(2, 3);
  want << 1, 1, 0, 0, 0, 1;
  CHECK(path_to_matrix(AlignmentPath({0, 0, 1}, 2)) == want);
}

TEST_CASE("matrix_to_path inverts path_to_matrix") {
  for (const auto& p : oracle::all_paths(7, 3)) {
    const AlignmentPath path(p, 3);
    CHECK(matrix_to_path(path_to_matrix(path)) == path);
  }
}

TEST_CASE("minimize_linear: two-vertex example") {
  Eigen::MatrixXd cost(2, 3);
  cost << 0, 0, 5, 9, 1, 0;
  const auto best = minimize_linear(cost);
  CHECK(best.path == AlignmentPath({0, 0, 1}, 2));
  CHECK(best.value == 0.0);
}

TEST_CASE("minimize_linear: square problems have a single vertex") {
  oracle::Rng rng(21);
  const Eigen::MatrixXd cost = rng.dyadic(5, 5);
  const auto best = minimize_linear(cost);
  CHECK(best.path == AlignmentPath({0, 1, 2, 3, 4}, 5));
  CHECK(best.value == cost.trace());
}

TEST_CASE("minimize_linear: ties prefer staying") {
  const auto best = minimize_linear(Eigen::MatrixXd::Zero(3, 6));
  CHECK(best.path == AlignmentPath({0, 0, 0, 0, 1, 2}, 3));
}

TEST_CASE("minimize_linear matches exhaustive enumeration") {
  oracle::Rng rng(22);
  for (int rep = 0; rep < 100; ++rep) {
    const int i = rng.uniform_int(1, 8), j = rng.uniform_int(1, std::min(i, 4));
    const Eigen::MatrixXd cost = rng.dyadic(j, i);
    const bool masked = rep % 2 == 1;
    const CellMask mask = masked ? random_feasible_mask(rng, i, j) : empty_mask(j, i);
    double want = std::numeric_limits<double>::infinity();
    for (const auto& p : oracle::all_paths(i, j)) {
      bool ok = true;
      for (int t = 0; t < i; ++t) ok = ok && !mask(p[static_cast<std::size_t>(t)], t);
      if (ok) want = std::min(want, oracle::linear_value(cost, p));
    }
    const auto best = minimize_linear(cost, masked ? &mask : nullptr);
    CHECK(best.value == want);
    CHECK(path_cost(cost, best.path) == best.value);
    CHECK(path_respects(best.path, mask));
  }
}

TEST_CASE("minimize_linear also solves the relaxed linear program") {
  oracle::Rng rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const int i = rng.uniform_int(2, 8), j = rng.uniform_int(1, std::min(i, 4));
    const Eigen::MatrixXd cost = rng.gaussian(j, i);
    const double best = minimize_linear(cost).value;
    const Eigen::MatrixXd y = rng.relaxed(i, j);
    CHECK(best <= cost.cwiseProduct(y).sum() + 1e-12);
  }
}

TEST_CASE("minimize_linear: errors") {
  CHECK(kind_of([] { minimize_linear(Eigen::MatrixXd::Zero(4, 3)); }) == ErrorKind::Infeasible);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(2, 3);
  cost(1, 1) = std::numeric_limits<double>::infinity();
  CHECK(kind_of([&] { minimize_linear(cost); }) == ErrorKind::NonFinite);
  CellMask mask = empty_mask(2, 3);
  mask(1, 2) = true;  // the last interval can never reach the last row
  CHECK_FALSE(mask_feasible(mask));
  CHECK(kind_of([&] { minimize_linear(Eigen::MatrixXd::Zero(2, 3), &mask); }) ==
        ErrorKind::Infeasible);
}

TEST_CASE("enumerate_paths: counts and contents") {
  CHECK(enumerate_paths(4, 2).size() == 3);
  CHECK(enumerate_paths(6, 6).size() == 1);
  CHECK(enumerate_paths(9, 1).size() == 1);
  for (int i = 1; i <= 14; ++i) {
    for (int j = 1; j <= std::min(i, 7); ++j) {
      const auto paths = enumerate_paths(i, j);
      CHECK(paths.size() == oracle::binomial(i - 1, j - 1));
    }
  }
  std::set<std::vector<int>> got;
  for (const auto& p : enumerate_paths(8, 4)) got.insert(p.assignment());
  const auto want = oracle::all_paths(8, 4);
  CHECK(got == std::set<std::vector<int>>(want.begin(), want.end()));
}

TEST_CASE("enumerate_paths: respects masks and the size guard") {
  oracle::Rng rng(24);
  const CellMask mask = random_feasible_mask(rng, 7, 3);
  for (const auto& p : enumerate_paths(7, 3, &mask)) CHECK(path_respects(p, mask));
  CHECK(kind_of([] { enumerate_paths(15, 3); }) == ErrorKind::SizeGuard);
  CHECK(kind_of([] { enumerate_paths(10, 8); }) == ErrorKind::SizeGuard);
}

TEST_CASE("band_indicator examples") {
  CHECK(band_indicator(3, 7, 1.0).y_c.isZero(0.0));
  const auto diag = band_indicator(5, 5, 0.0).y_c;
  CHECK(diag == Eigen::MatrixXd::Ones(5, 5) - Eigen::MatrixXd::Identity(5, 5));
  const auto band = band_indicator(2, 4, 0.25).y_c;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 4; ++i) {
      const bool inside = std::abs((j + 1) / 2.0 - (i + 1) / 4.0) <= 0.25;
      CHECK(band(j, i) == (inside ? 0.0 : 1.0));
    }
  }
  CHECK_THROWS_AS(band_indicator(2, 4, 1.5), Error);
}

TEST_CASE("lmo_blocks runs one oracle per block") {
  Eigen::MatrixXd block(2, 3);
  block << 0, 0, 5, 9, 1, 0;
  StreamLayout single;
  single.add_stream(3, 2);
  const auto one = lmo_blocks(block, single);
  CHECK(one.paths.size() == 1);
  CHECK(one.paths[0] == minimize_linear(block).path);

  StreamLayout two;
  two.add_stream(3, 2);
  two.add_stream(3, 2);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(4, 6);
  cost.topLeftCorner(2, 3) = block;
  cost.bottomRightCorner(2, 3) = block;
  const auto both = lmo_blocks(cost, two);
  CHECK(both.paths[0] == AlignmentPath({0, 0, 1}, 2));
  CHECK(both.paths[1] == AlignmentPath({0, 0, 1}, 2));
  CHECK(both.value == 0.0);

  oracle::Rng rng(25);
  cost.topRightCorner(2, 3) = rng.gaussian(2, 3) * 100.0;
  cost.bottomLeftCorner(2, 3) = rng.gaussian(2, 3) * 100.0;
  const auto perturbed = lmo_blocks(cost, two);
  CHECK(perturbed.paths == both.paths);
  CHECK(perturbed.value == both.value);

  const Eigen::MatrixXd y = paths_to_matrix(both.paths, two);
  CHECK(y.topRightCorner(2, 3).isZero(0.0));
  CHECK(y.topLeftCorner(2, 3) == path_to_matrix(both.paths[0]));
}
