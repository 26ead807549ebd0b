// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "vtalign/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vtalign/error.hpp"

namespace vtalign {

namespace {

FeatureMatrix standard_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMatrix m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

// Largest-remainder rounding of Dirichlet proportions to integer durations.
std::vector<int> draw_durations(const SynthConfig& config, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(config.concentration, 1.0);
  const auto k = static_cast<std::size_t>(config.sentences);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> share(k);
    for (auto& s : share) s = gamma(rng);
    const double total = std::accumulate(share.begin(), share.end(), 0.0);
    if (!(total > 0.0)) continue;

    std::vector<int> out(k);
    std::vector<double> remainder(k);
    int assigned = 0;
    for (std::size_t n = 0; n < k; ++n) {
      const double exact = share[n] / total * config.intervals;
      out[n] = static_cast<int>(std::floor(exact));
      remainder[n] = exact - out[n];
      assigned += out[n];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (int n = 0; n < config.intervals - assigned; ++n) ++out[order[static_cast<std::size_t>(n)]];
    if (std::all_of(out.begin(), out.end(),
                    [&](int d) { return d >= config.min_duration; })) {
      return out;
    }
  }
  fail(ErrorKind::InvalidArgument, "synthesize: could not draw durations of at least " +
                                       std::to_string(config.min_duration) +
                                       " intervals in 100 attempts");
}

}  // namespace

void SynthConfig::validate() const {
  require(sentences >= 1 && intervals >= 1 && text_dim >= 1 && video_dim >= 1 && streams >= 1,
          ErrorKind::InvalidArgument, "synth sizes must be positive");
  require(sentences <= intervals, ErrorKind::InvalidArgument,
          "synth needs at least as many intervals as sentences");
  require(min_duration >= 1 && static_cast<long>(min_duration) * sentences <= intervals,
          ErrorKind::InvalidArgument, "synth min_duration must be >= 1 and fit K times in I");
  require(2 * sentences + 1 <= intervals, ErrorKind::InvalidArgument,
          "synth needs room for interleaved background rows (I >= 2K + 1)");
  require(std::isfinite(noise) && noise >= 0.0, ErrorKind::InvalidArgument,
          "synth noise must be non-negative");
  require(std::isfinite(concentration) && concentration > 0.0, ErrorKind::InvalidArgument,
          "synth concentration must be positive");
}

std::vector<SynthStream> synthesize(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const FeatureMatrix map =
      standard_normal(config.video_dim, config.text_dim, rng) / std::sqrt(config.text_dim);

  std::vector<SynthStream> out;
  out.reserve(static_cast<std::size_t>(config.streams));
  for (int n = 0; n < config.streams; ++n) {
    SynthStream s;
    s.id = "s" + std::to_string(n);
    s.psi_raw = standard_normal(config.text_dim, config.sentences, rng);
    s.durations = draw_durations(config, rng);
    const FeatureMatrix eps = standard_normal(config.video_dim, config.intervals, rng);

    s.phi.resize(config.video_dim, config.intervals);
    int start = 0;
    for (int k = 0; k < config.sentences; ++k) {
      const int end = start + s.durations[static_cast<std::size_t>(k)];
      const Eigen::VectorXd clean = map * s.psi_raw.col(k);
      for (int i = start; i < end; ++i) s.phi.col(i) = clean + config.noise * eps.col(i);
      s.truth.intervals.push_back(AnnotatedInterval{2 * k + 1, start, end});
      start = end;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vtalign
