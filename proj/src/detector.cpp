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

#include "cec/detector.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cec {

void DetectorConfig::validate() const {
  if (tau_cic <= 0 || tau_tic <= 0)
    throw std::invalid_argument("detector thresholds must be positive");
  if (!(tau_cic < tau_tic))
    throw std::invalid_argument("detector requires tau_cic < tau_tic, got " +
                                std::to_string(tau_cic) + " vs " +
                                std::to_string(tau_tic));
}

const char* to_string(RemovalTrigger t) {
  switch (t) {
    case RemovalTrigger::kCic:
      return "CIC";
    case RemovalTrigger::kTic:
      return "TIC";
    case RemovalTrigger::kBoth:
      return "both";
  }
  return "?";
}

SampleCounter update_counter(SampleCounter counter, SampleClass cls) {
  if (counter.removed)
    throw std::logic_error("update_counter on a removed sample");
  if (cls == SampleClass::kInconsistent) {
    counter.cic += 1;
    counter.tic += 1;
  } else {
    counter.cic = 0;
  }
  return counter;
}

bool is_noisy(const SampleCounter& counter, const DetectorConfig& config) {
  return counter.cic > config.tau_cic || counter.tic > config.tau_tic;
}

bool is_noisy(const SampleCounter& counter, const DetectorConfig& config,
              bool enable_cic, bool enable_tic) {
  return (enable_cic && counter.cic > config.tau_cic) ||
         (enable_tic && counter.tic > config.tau_tic);
}

CounterRegistry::CounterRegistry(int64_t num_samples)
    : counters_(static_cast<size_t>(num_samples)) {}

std::vector<RemovalEvent> CounterRegistry::end_of_epoch(
    std::span<const int64_t> ids, std::span<const SampleClass> classes,
    const DetectorConfig& config, int epoch, bool enable_cic,
    bool enable_tic) {
  if (ids.size() != classes.size())
    throw std::invalid_argument("ids/classes size mismatch");

  std::vector<RemovalEvent> events;
  for (size_t i = 0; i < ids.size(); ++i) {
    const int64_t id = ids[i];
    SampleCounter& c = counters_.at(static_cast<size_t>(id));
    if (c.removed)
      throw std::logic_error("classification for removed sample " +
                             std::to_string(id));
    c = update_counter(c, classes[i]);
    if (is_noisy(c, config, enable_cic, enable_tic)) {
      c.removed = true;
      c.removal_epoch = epoch;
      const bool cic_hit = enable_cic && c.cic > config.tau_cic;
      const bool tic_hit = enable_tic && c.tic > config.tau_tic;
      RemovalEvent ev;
      ev.sample_id = id;
      ev.epoch = epoch;
      ev.trigger = cic_hit && tic_hit ? RemovalTrigger::kBoth
                   : cic_hit          ? RemovalTrigger::kCic
                                      : RemovalTrigger::kTic;
      ev.cic = c.cic;
      ev.tic = c.tic;
      events.push_back(ev);
    }
  }
  std::sort(events.begin(), events.end(),
            [](const RemovalEvent& a, const RemovalEvent& b) {
              return a.sample_id < b.sample_id;
            });
  return events;
}

int64_t CounterRegistry::live_count() const {
  int64_t live = 0;
  for (const auto& c : counters_)
    if (!c.removed) ++live;
  return live;
}

}  // namespace cec
