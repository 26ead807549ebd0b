// SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
//
// SPDX-License-Identifier: Apache-2.0

#ifndef VTALIGN_SYNTH_HPP
#define VTALIGN_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vtalign/discriminative.hpp"
#include "vtalign/supervision.hpp"

namespace vtalign {

// Desk-scale generator: every stream shares one linear map from text to
// video features, so a single model explains all of them.
struct SynthConfig {
  int sentences = 5;  // K per stream
  int intervals = 60;  // I per stream
  int text_dim = 8;
  int video_dim = 8;
  double noise = 0.1;
  double concentration = 2.0;  // symmetric Dirichlet over sentence durations
  // Draws with a shorter sentence are rejected. Three intervals let every
  // sentence lend a frame to the background rows on both sides, which keeps
  // interval constraints feasible.
  int min_duration = 3;
  std::uint64_t seed = 7;
  int streams = 4;

  void validate() const;
};

struct SynthStream {
  std::string id;
  FeatureMatrix phi;      // D x I, raw
  FeatureMatrix psi_raw;  // E x K, without background columns
  Annotation truth;       // sentence k annotated on row 2k + 1
  std::vector<int> durations;
};

/// Draws sentence features from a standard normal, durations from a
/// symmetric Dirichlet rounded to sum to I (re-drawn while any duration is
/// below min_duration, at most 100 times) and video features
/// phi_i = A psi_k(i) + noise.
/// Fully determined by the config.
std::vector<SynthStream> synthesize(const SynthConfig& config);

}  // namespace vtalign

#endif  // VTALIGN_SYNTH_HPP
