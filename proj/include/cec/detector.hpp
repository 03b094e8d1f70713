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

#ifndef CEC_DETECTOR_HPP_
#define CEC_DETECTOR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "cec/taxonomy.hpp"

namespace cec {

// CIC/TIC state for one sample. cic counts the current consecutive run of
// inconsistent classifications and resets to 0 on anything else; tic
// counts them cumulatively and never decreases.
struct SampleCounter {
  int cic = 0;
  int tic = 0;
  bool removed = false;
  int removal_epoch = -1;  // valid only when removed
};

struct DetectorConfig {
  int tau_cic = 25;
  int tau_tic = 95;
  void validate() const;  // positive, tau_cic < tau_tic
};

enum class RemovalTrigger { kCic, kTic, kBoth };

const char* to_string(RemovalTrigger t);

// One removal record, serialized to the run log and removals CSV.
struct RemovalEvent {
  int64_t sample_id = 0;
  int epoch = 0;
  RemovalTrigger trigger = RemovalTrigger::kCic;
  int cic = 0;
  int tic = 0;
};

// One counting step. Throws std::logic_error when the counter is already
// removed.
SampleCounter update_counter(SampleCounter counter, SampleClass cls);

// Noisy-label predicate: cic > tau_cic OR tic > tau_tic, strict.
bool is_noisy(const SampleCounter& counter, const DetectorConfig& config);

// Ablation-aware variant: disabled branches never fire.
bool is_noisy(const SampleCounter& counter, const DetectorConfig& config,
              bool enable_cic, bool enable_tic);

// Per-sample counters for a whole dataset, updated once per epoch.
// Sample ids index a dense [0, num_samples) range.
class CounterRegistry {
 public:
  explicit CounterRegistry(int64_t num_samples);

  // Applies one epoch of classifications, then flags and removes newly
  // noisy samples. Returns the removal events sorted by sample id, so the
  // result does not depend on the order of the (ids, classes) pairs.
  // Throws std::logic_error when a classification names a removed sample.
  std::vector<RemovalEvent> end_of_epoch(std::span<const int64_t> ids,
                                         std::span<const SampleClass> classes,
                                         const DetectorConfig& config,
                                         int epoch, bool enable_cic = true,
                                         bool enable_tic = true);

  const SampleCounter& counter(int64_t id) const { return counters_.at(id); }
  const std::vector<SampleCounter>& counters() const { return counters_; }
  bool removed(int64_t id) const { return counters_.at(id).removed; }
  int64_t live_count() const;

 private:
  std::vector<SampleCounter> counters_;
};

}  // namespace cec

#endif  // CEC_DETECTOR_HPP_
