// Copyright 2026  CEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CEC_METRICS_HPP_
#define CEC_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace cec {

// Confusion-matrix scores over samples, positive = flagged-as-noisy.
struct DetectionReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  bool none_flagged = false;  // set when the flagged set is empty
};

// flagged_ids must be a subset of [0, is_noise.size()); duplicates are
// treated as a set. Precision is defined as 0 (with none_flagged set)
// when nothing was flagged; recall is 1 when there is no noise to find.
DetectionReport detection_metrics(std::span<const int64_t> flagged_ids,
                                  std::span<const uint8_t> is_noise);

struct Trial {
  double score = 0.0;
  bool is_target = false;
};

// Equal Error Rate in [0, 1]: sweeps thresholds over the sorted unique
// scores and linearly interpolates between the adjacent operating points
// where FAR - FRR changes sign. Throws std::runtime_error when the trial
// set lacks a target or a non-target.
double eer(std::span<const Trial> trials);

// Verification trials from embeddings: every same-label pair is a target
// trial; an equal number of different-label pairs is drawn
// seed-deterministically. Scores are embedding cosines.
std::vector<Trial> make_embedding_trials(std::span<const double> embeddings,
                                         int emb_dim,
                                         std::span<const int32_t> labels,
                                         uint64_t seed);

}  // namespace cec

#endif  // CEC_METRICS_HPP_
