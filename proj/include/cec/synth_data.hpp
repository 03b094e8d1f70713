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

#ifndef CEC_SYNTH_DATA_HPP_
#define CEC_SYNTH_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cec {

// Recipe for a synthetic clustered dataset with open-set label noise.
// Noisy samples are drawn around extra (out-of-roster) centroids and
// assigned uniformly random clean-class labels; they are appended after
// the clean block, so the clean sample count is invariant under NCR
// sweeps at a fixed seed.
struct SyntheticSpec {
  int clean_classes = 20;
  int samples_per_class = 100;
  int dim = 16;
  double cluster_spread = 0.12;    // within-class per-coordinate stddev
  double class_separation = 0.8;   // min pairwise centroid angle, radians
  int extra_classes = 5;           // open-set noise source centroids
  double ncr = 0.0;                // noisy-to-clean ratio
  uint64_t seed = 1;

  void validate() const;
  int64_t clean_count() const {
    return static_cast<int64_t>(clean_classes) * samples_per_class;
  }
  int64_t noise_count() const;  // round(ncr * clean_count)
  int64_t total_count() const { return clean_count() + noise_count(); }
};

struct LabeledDataset {
  SyntheticSpec spec;
  int64_t num_samples = 0;
  int dim = 0;
  std::vector<float> features;         // num_samples x dim, row-major
  std::vector<int32_t> observed_labels;  // in [0, clean_classes)
  std::vector<uint8_t> is_noise;         // ground truth
  std::vector<int32_t> source_class;     // generating centroid index

  const float* row(int64_t i) const {
    return features.data() + i * static_cast<int64_t>(dim);
  }
};

// Deterministic generation: the dataset is a pure function of the spec.
// Centroids come from rejection sampling against the separation
// constraint; exhausted retries raise a std::runtime_error naming
// class_separation.
LabeledDataset generate(const SyntheticSpec& spec);

// Noise proportion p = ncr / (ncr + 1).
double ncr_to_p(double ncr);

// On-disk layout under `dir`: spec.json, features.f32 (little-endian
// float32, row-major), labels.csv (sample_id, observed_label, is_noise,
// source_class). Round-trips bit-exactly.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir);
LabeledDataset load_dataset(const std::filesystem::path& dir);

}  // namespace cec

#endif  // CEC_SYNTH_DATA_HPP_
