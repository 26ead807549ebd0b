// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "vtalign/error.hpp"
#include "vtalign/evaluation.hpp"

using namespace vtalign;

TEST_CASE("jaccard_score examples") {
  const auto bg = background_rows(5);
  const Annotation gt{{{1, 1, 3}, {3, 4, 6}}};
  const AlignmentPath exact({0, 1, 1, 2, 3, 3, 4, 4}, 5);
  CHECK(jaccard_score(exact, gt, bg) == 1.0);

  // Row 1 lands on frame 3 only, row 3 on frame 6 only.
  CHECK(jaccard_score(AlignmentPath({0, 0, 0, 1, 2, 2, 3, 4}, 5), gt, bg) == 0.0);

  // One sentence row: four frames, two of them inside [2, 4).
  const AlignmentPath half({0, 1, 1, 1, 1, 2}, 3);
  CHECK(jaccard_score(half, Annotation{{{1, 2, 4}}}, background_rows(3)) == 0.5);
}

TEST_CASE("jaccard_score: direct formula on random paths") {
  const Annotation gt{{{1, 2, 5}, {3, 6, 9}, {5, 10, 11}}};
  const auto bg = background_rows(7);
  for (const auto& p : oracle::all_paths(12, 7)) {
    double total = 0.0;
    for (const auto& a : gt.intervals) {
      int assigned = 0, inside = 0;
      for (int i = 0; i < 12; ++i) {
        if (p[static_cast<std::size_t>(i)] != a.j) continue;
        ++assigned;
        inside += i >= a.start && i < a.end;
      }
      total += static_cast<double>(inside) / assigned;
    }
    const double s = jaccard_score(AlignmentPath(p, 7), gt, bg);
    CHECK(s == doctest::Approx(total / 3.0).epsilon(1e-15));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("jaccard_score: background-only truth has nothing to score") {
  CHECK_THROWS_AS(jaccard_score(AlignmentPath({0, 1, 2}, 3), Annotation{{{0, 0, 1}}},
                                background_rows(3)),
                  Error);
}

TEST_CASE("diagonal_path examples") {
  CHECK(diagonal_path(6, 3).durations() == std::vector<int>{2, 2, 2});
  CHECK(diagonal_path(5, 5).assignment() == std::vector<int>{0, 1, 2, 3, 4});
  const auto d = diagonal_path(7, 3).durations();
  CHECK(d == std::vector<int>{3, 2, 2});
  for (int i = 1; i <= 40; ++i) {
    for (int j = 1; j <= i; ++j) {
      const auto dur = diagonal_path(i, j).durations();
      CHECK(std::accumulate(dur.begin(), dur.end(), 0) == i);
      CHECK(*std::max_element(dur.begin(), dur.end()) - *std::min_element(dur.begin(), dur.end()) <= 1);
    }
  }
  CHECK_THROWS_AS(diagonal_path(3, 4), Error);
}

TEST_CASE("random_path is uniform over vertices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(random_path(4, 4, seed).assignment() == std::vector<int>{0, 1, 2, 3});
  }
  std::map<std::vector<int>, int> counts;
  const int samples = 30000;
  for (int s = 0; s < samples; ++s) {
    ++counts[random_path(4, 2, static_cast<std::uint64_t>(s)).assignment()];
  }
  CHECK(counts.size() == 3);
  for (const auto& p : oracle::all_paths(4, 2)) {
    CHECK(std::abs(counts[p] / static_cast<double>(samples) - 1.0 / 3.0) <= 0.01);
  }

  // Chi-square over a larger vertex set.
  std::map<std::vector<int>, int> wide;
  const auto all = oracle::all_paths(7, 3);
  const int n = 15000;
  for (int s = 0; s < n; ++s) ++wide[random_path(7, 3, 1000 + static_cast<std::uint64_t>(s)).assignment()];
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / static_cast<double>(all.size());
  for (const auto& p : all) chi2 += (wide[p] - expect) * (wide[p] - expect) / expect;
  // 14 degrees of freedom; the 0.999 quantile is 36.1.
  CHECK(all.size() == 15);
  CHECK(chi2 < 36.1);
}

TEST_CASE("random_path is deterministic and rejects J > I") {
  CHECK(random_path(30, 7, 99) == random_path(30, 7, 99));
  CHECK_THROWS_AS(random_path(3, 5, 1), Error);
}
