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

#include "cec/taxonomy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cec {

const char* to_string(SampleClass c) {
  switch (c) {
    case SampleClass::kEasy:
      return "easy";
    case SampleClass::kHard:
      return "hard";
    case SampleClass::kInconsistent:
      return "inconsistent";
  }
  return "?";
}

void ClassifierThresholds::validate() const {
  if (!std::isfinite(tau_p) || !std::isfinite(tau_n))
    throw std::invalid_argument("classifier thresholds must be finite");
}

EpochObservation derive_observation(std::span<const double> cosine_row,
                                    int true_label, int64_t sample_id,
                                    int epoch) {
  const int k = static_cast<int>(cosine_row.size());
  if (k < 2)
    throw std::invalid_argument("cosine row needs at least 2 classes, got " +
                                std::to_string(k));
  if (true_label < 0 || true_label >= k)
    throw std::invalid_argument("true_label " + std::to_string(true_label) +
                                " out of range for " + std::to_string(k) +
                                " classes");

  int argmax = 0;
  double best = cosine_row[0];
  double s_n = -2.0;
  for (int j = 0; j < k; ++j) {
    const double c = cosine_row[j];
    if (!std::isfinite(c))
      throw std::invalid_argument("non-finite cosine at class " +
                                  std::to_string(j));
    if (c > best) {  // strict: ties keep the lowest index
      best = c;
      argmax = j;
    }
    if (j != true_label && c > s_n) s_n = c;
  }

  EpochObservation obs;
  obs.sample_id = sample_id;
  obs.epoch = epoch;
  obs.true_label = true_label;
  obs.predicted_label = argmax;
  obs.s_p = cosine_row[true_label];
  obs.s_n = s_n;
  return obs;
}

SampleClass classify_sample(const EpochObservation& obs,
                            const ClassifierThresholds& thresholds) {
  if (obs.true_label != obs.predicted_label) return SampleClass::kInconsistent;
  if (obs.s_p < thresholds.tau_p || obs.s_n > thresholds.tau_n)
    return SampleClass::kHard;
  return SampleClass::kEasy;
}

}  // namespace cec
