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

#ifndef CEC_TAXONOMY_HPP_
#define CEC_TAXONOMY_HPP_

#include <cstdint>
#include <span>

namespace cec {

// Per-epoch three-way sample taxonomy. Integer codes are part of the
// on-disk contract: easy = 0, hard = 1, inconsistent = 2.
enum class SampleClass : int {
  kEasy = 0,
  kHard = 1,
  kInconsistent = 2,
};

const char* to_string(SampleClass c);

// Model readout for one sample at one epoch: the labeled-class cosine
// (s_p), the best other-class cosine (s_n), and the cosine-argmax
// prediction.
struct EpochObservation {
  int64_t sample_id = 0;
  int epoch = 1;
  int true_label = 0;
  int predicted_label = 0;
  double s_p = 0.0;
  double s_n = 0.0;
};

struct ClassifierThresholds {
  double tau_p = 0.6;
  double tau_n = 0.4;
  void validate() const;  // both finite
};

// Builds an observation from a row of K cosines. predicted_label is the
// argmax with ties broken toward the lowest class index; s_p is the
// labeled entry; s_n the best non-labeled entry.
// Throws std::invalid_argument for K < 2, an out-of-range label, or a
// non-finite cosine.
EpochObservation derive_observation(std::span<const double> cosine_row,
                                    int true_label, int64_t sample_id,
                                    int epoch);

// Label mismatch -> inconsistent; else weak positive (s_p < tau_p) or
// strong negative (s_n > tau_n) -> hard; else easy. Both comparisons are
// strict, so threshold equality lands on easy.
SampleClass classify_sample(const EpochObservation& obs,
                            const ClassifierThresholds& thresholds);

}  // namespace cec

#endif  // CEC_TAXONOMY_HPP_
