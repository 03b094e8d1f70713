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

#ifndef CEC_TRAINER_HPP_
#define CEC_TRAINER_HPP_

#include <filesystem>
#include <functional>
#include <limits>

#include <json.hpp>

#include "cec/curriculum.hpp"
#include "cec/detector.hpp"
#include "cec/kernels.hpp"
#include "cec/metrics.hpp"
#include "cec/synth_data.hpp"

namespace cec {

struct AblationToggles {
  bool enable_cic = true;
  bool enable_tic = true;
  bool enable_curriculum = true;
};

struct TrainConfig {
  int epochs = 150;
  int batch_size = 64;
  double learning_rate = 0.1;
  double momentum = 0.3;
  double lr_decay = 0.99;  // per-epoch exponential factor
  ModelKind model_kind = ModelKind::kOneHidden;
  int hidden_dim = 64;
  uint64_t seed = 1;
  AblationToggles toggles;
  ClassifierThresholds thresholds;
  DetectorConfig detector;
  CurriculumSchedule schedule;
  LossConfig loss;
  // Clean samples held out of training per class, used for verification
  // trials; 0 disables EER scoring.
  int holdout_per_class = 5;
  // Classify from a dedicated forward pass at epoch end instead of the
  // training-time readouts; masks then use the previous epoch's classes.
  bool separate_eval_pass = false;
  // Update CIC/TIC during warm-up epochs (m <= e1).
  bool count_during_warmup = true;
  ExecMode exec = ExecMode::kParallel;
  // Keep per-sample observations/classes/masks in memory (tests only).
  bool record_trace = false;

  void validate() const;
};

struct EpochReport {
  int epoch = 0;
  int64_t live_at_start = 0;
  int64_t easy = 0, hard = 0, inconsistent = 0;
  double tau_m = 0.0;
  double mean_masked_loss = 0.0;  // over participating samples
  int64_t masked_count = 0;
  std::vector<RemovalEvent> removals;
};

struct TraceRow {
  EpochObservation obs;
  SampleClass cls = SampleClass::kEasy;
  bool masked = false;
};

struct RunLog {
  nlohmann::json config_snapshot;
  std::vector<EpochReport> epochs;
  std::vector<RemovalEvent> removals;  // all events, epoch order
  std::vector<SampleCounter> final_counters;
  DetectionReport detection;
  double eer = std::numeric_limits<double>::quiet_NaN();
  int64_t live_final = 0;
  Model final_model;
  std::vector<std::vector<TraceRow>> trace;  // per epoch, when recorded
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Full CEC training loop: per-batch forward -> classify -> mask ->
// masked update, then per-epoch counting and removal. Deterministic per
// (dataset, config). When out_dir is non-empty the run is persisted as
// run.jsonl (config line + one epoch line each, flushed incrementally),
// summary.json, removals.csv and weights.bin.
RunLog run(const LabeledDataset& ds, const TrainConfig& cfg,
           const std::filesystem::path& out_dir = {},
           const EpochCallback& on_epoch = {});

// Plain AAM-softmax loop with no CEC machinery, for baseline-equivalence
// checks. Consumes randomness exactly like run().
Model reference_train(const LabeledDataset& ds, const TrainConfig& cfg);

// Builds the resolved-config snapshot (every effective hyperparameter).
nlohmann::json config_snapshot(const TrainConfig& cfg,
                               const LabeledDataset& ds);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Loads summary.json from a persisted run directory.
nlohmann::json load_run_summary(const std::filesystem::path& run_dir);

}  // namespace cec

#endif  // CEC_TRAINER_HPP_
