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

#include "cec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "cec/serialize.hpp"

namespace cec {

namespace {

// Substream ids for Rng::derive; shared with reference_train so both
// loops consume randomness identically.
constexpr uint64_t kStreamModelInit = 0;
constexpr uint64_t kStreamShuffle = 1;
constexpr uint64_t kStreamTrials = 2;

std::vector<uint8_t> holdout_flags(const LabeledDataset& ds,
                                   int holdout_per_class) {
  std::vector<uint8_t> held(static_cast<size_t>(ds.num_samples), 0);
  const int n_per = ds.spec.samples_per_class;
  for (int k = 0; k < ds.spec.clean_classes; ++k)
    for (int t = n_per - holdout_per_class; t < n_per; ++t)
      held[static_cast<size_t>(k) * n_per + t] = 1;
  return held;
}

std::vector<int64_t> live_ids(const std::vector<uint8_t>& held) {
  std::vector<int64_t> live;
  live.reserve(held.size());
  for (size_t i = 0; i < held.size(); ++i)
    if (!held[i]) live.push_back(static_cast<int64_t>(i));
  return live;
}

Model make_model(const LabeledDataset& ds, const TrainConfig& cfg) {
  ModelConfig mc;
  mc.kind = cfg.model_kind;
  mc.input_dim = ds.dim;
  mc.hidden_dim = cfg.hidden_dim;
  mc.num_classes = ds.spec.clean_classes;
  return Model::init(mc, Rng::derive(cfg.seed, kStreamModelInit));
}

void save_weights(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const char magic[4] = {'C', 'E', 'C', 'W'};
  out.write(magic, 4);
  const int32_t header[4] = {
      m.cfg.kind == ModelKind::kOneHidden ? 1 : 0,
      static_cast<int32_t>(m.cfg.input_dim),
      m.cfg.kind == ModelKind::kOneHidden ? static_cast<int32_t>(m.cfg.hidden_dim)
                                          : 0,
      static_cast<int32_t>(m.cfg.num_classes)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  auto dump = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  dump(m.w1);
  dump(m.b1);
  dump(m.head.w);
  if (!out) throw std::runtime_error("short write to " + path.string());
}

nlohmann::json epoch_to_json(const EpochReport& r) {
  nlohmann::json removals = nlohmann::json::array();
  for (const auto& e : r.removals) {
    nlohmann::json je;
    to_json(je, e);
    removals.push_back(je);
  }
  return {{"type", "epoch"},
          {"epoch", r.epoch},
          {"live_start", r.live_at_start},
          {"easy", r.easy},
          {"hard", r.hard},
          {"inconsistent", r.inconsistent},
          {"tau_m", r.tau_m},
          {"mean_masked_loss", r.mean_masked_loss},
          {"masked_count", r.masked_count},
          {"removals", removals}};
}

// Forward-only embeddings for a list of rows, chunked through the batch
// kernel. Returns row-major (rows.size() x emb_dim) normalized vectors.
std::vector<double> embed_rows(const Model& model, const LabeledDataset& ds,
                               std::span<const int64_t> rows, int batch_size,
                               ExecMode exec) {
  const int emb = model.embedding_dim();
  std::vector<double> out(rows.size() * static_cast<size_t>(emb));
  BatchBuffers bufs;
  for (size_t start = 0; start < rows.size();
       start += static_cast<size_t>(batch_size)) {
    const size_t bsz =
        std::min(static_cast<size_t>(batch_size), rows.size() - start);
    batch_forward(model, ds.features.data(), rows.subspan(start, bsz), bufs,
                  exec);
    std::copy(bufs.e_hat.begin(),
              bufs.e_hat.begin() + static_cast<int64_t>(bsz) * emb,
              out.begin() + static_cast<int64_t>(start) * emb);
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("learning_rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw std::invalid_argument("momentum must be in [0, 1)");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0))
    throw std::invalid_argument("lr_decay must be in (0, 1]");
  if (holdout_per_class < 0)
    throw std::invalid_argument("holdout_per_class must be >= 0");
  thresholds.validate();
  detector.validate();
  schedule.validate();
  loss.validate();
}

nlohmann::json config_snapshot(const TrainConfig& cfg,
                               const LabeledDataset& ds) {
  nlohmann::json jt, jd, js, jl, jspec;
  to_json(jt, cfg.thresholds);
  to_json(jd, cfg.detector);
  to_json(js, cfg.schedule);
  to_json(jl, cfg.loss);
  to_json(jspec, ds.spec);
  return {{"type", "config"},
          {"epochs", cfg.epochs},
          {"batch_size", cfg.batch_size},
          {"learning_rate", cfg.learning_rate},
          {"momentum", cfg.momentum},
          {"lr_decay", cfg.lr_decay},
          {"model", to_string(cfg.model_kind)},
          {"hidden_dim", cfg.hidden_dim},
          {"seed", cfg.seed},
          {"enable_cic", cfg.toggles.enable_cic},
          {"enable_tic", cfg.toggles.enable_tic},
          {"enable_curriculum", cfg.toggles.enable_curriculum},
          {"thresholds", jt},
          {"detector", jd},
          {"schedule", js},
          {"loss", jl},
          {"holdout_per_class", cfg.holdout_per_class},
          {"separate_eval_pass", cfg.separate_eval_pass},
          {"count_during_warmup", cfg.count_during_warmup},
          {"exec", to_string(cfg.exec)},
          {"dataset", jspec}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  if (j.contains("epochs")) j.at("epochs").get_to(cfg.epochs);
  if (j.contains("batch_size")) j.at("batch_size").get_to(cfg.batch_size);
  if (j.contains("learning_rate"))
    j.at("learning_rate").get_to(cfg.learning_rate);
  if (j.contains("momentum")) j.at("momentum").get_to(cfg.momentum);
  if (j.contains("lr_decay")) j.at("lr_decay").get_to(cfg.lr_decay);
  if (j.contains("model"))
    cfg.model_kind = model_kind_from_string(j.at("model").get<std::string>());
  if (j.contains("hidden_dim")) j.at("hidden_dim").get_to(cfg.hidden_dim);
  if (j.contains("seed")) j.at("seed").get_to(cfg.seed);
  if (j.contains("enable_cic")) j.at("enable_cic").get_to(cfg.toggles.enable_cic);
  if (j.contains("enable_tic")) j.at("enable_tic").get_to(cfg.toggles.enable_tic);
  if (j.contains("enable_curriculum"))
    j.at("enable_curriculum").get_to(cfg.toggles.enable_curriculum);
  if (j.contains("thresholds")) from_json(j.at("thresholds"), cfg.thresholds);
  if (j.contains("detector")) from_json(j.at("detector"), cfg.detector);
  if (j.contains("schedule")) from_json(j.at("schedule"), cfg.schedule);
  if (j.contains("loss")) from_json(j.at("loss"), cfg.loss);
  if (j.contains("holdout_per_class"))
    j.at("holdout_per_class").get_to(cfg.holdout_per_class);
  if (j.contains("separate_eval_pass"))
    j.at("separate_eval_pass").get_to(cfg.separate_eval_pass);
  if (j.contains("count_during_warmup"))
    j.at("count_during_warmup").get_to(cfg.count_during_warmup);
  if (j.contains("exec"))
    cfg.exec = j.at("exec").get<std::string>() == "serial"
                   ? ExecMode::kSerial
                   : ExecMode::kParallel;
  return cfg;
}

RunLog run(const LabeledDataset& ds, const TrainConfig& cfg,
           const std::filesystem::path& out_dir, const EpochCallback& on_epoch) {
  cfg.validate();
  if (ds.num_samples <= 0) throw std::invalid_argument("empty dataset");
  if (cfg.holdout_per_class > ds.spec.samples_per_class)
    throw std::invalid_argument("holdout_per_class must be <= samples_per_class");

  const auto n_total = static_cast<size_t>(ds.num_samples);
  const int num_classes = ds.spec.clean_classes;

  Model model = make_model(ds, cfg);
  SgdMomentum opt(model, cfg.momentum);
  Rng shuffle_rng(Rng::derive(cfg.seed, kStreamShuffle));

  const std::vector<uint8_t> held = holdout_flags(ds, cfg.holdout_per_class);
  std::vector<int64_t> live = live_ids(held);

  CounterRegistry registry(ds.num_samples);
  RunLog log;
  log.config_snapshot = config_snapshot(cfg, ds);

  std::ofstream jsonl;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    jsonl.open(out_dir / "run.jsonl");
    if (!jsonl)
      throw std::runtime_error("cannot open " + (out_dir / "run.jsonl").string());
    jsonl << log.config_snapshot.dump() << "\n";
    jsonl.flush();
  }

  BatchBuffers bufs;
  ModelGrads grads = ModelGrads::like(model);
  std::vector<int32_t> batch_labels;
  std::vector<uint8_t> batch_mask;

  // Previous-epoch classification, used for masking in eval-pass mode.
  std::vector<SampleClass> prev_cls(n_total, SampleClass::kEasy);
  std::vector<double> prev_sp(n_total, 0.0);
  std::vector<uint8_t> have_prev(n_total, 0);

  std::vector<int64_t> cls_ids;
  std::vector<SampleClass> cls_vals;
  std::vector<uint8_t> mask_of(n_total, 0);

  for (int m = 1; m <= cfg.epochs; ++m) {
    if (live.empty())
      throw std::runtime_error("training halted: live set empty at epoch " +
                               std::to_string(m));

    EpochReport rep;
    rep.epoch = m;
    rep.live_at_start = static_cast<int64_t>(live.size());
    rep.tau_m = retention_threshold(m, cfg.schedule);
    const double lr = cfg.learning_rate * std::pow(cfg.lr_decay, m - 1);

    std::vector<int64_t> order = live;
    shuffle_rng.shuffle(order);

    cls_ids.clear();
    cls_vals.clear();
    std::vector<TraceRow> trace_epoch;

    double loss_sum = 0.0;
    int64_t masked_total = 0;

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      const size_t bsz =
          std::min(static_cast<size_t>(cfg.batch_size), order.size() - start);
      const std::span<const int64_t> rows(order.data() + start, bsz);
      batch_forward(model, ds.features.data(), rows, bufs, cfg.exec);

      batch_labels.resize(bsz);
      batch_mask.resize(bsz);
      for (size_t i = 0; i < bsz; ++i) {
        const int64_t id = rows[i];
        const int32_t y = ds.observed_labels[static_cast<size_t>(id)];
        batch_labels[i] = y;
        const EpochObservation obs = derive_observation(
            bufs.cosine_row(static_cast<int>(i), num_classes), y, id, m);
        const SampleClass cls = classify_sample(obs, cfg.thresholds);

        bool masked = true;
        if (cfg.toggles.enable_curriculum) {
          if (cfg.separate_eval_pass) {
            masked = have_prev[static_cast<size_t>(id)]
                         ? gradient_mask(prev_cls[static_cast<size_t>(id)],
                                         prev_sp[static_cast<size_t>(id)], m,
                                         cfg.schedule)
                         : true;
          } else {
            masked = gradient_mask(cls, obs.s_p, m, cfg.schedule);
          }
        }
        batch_mask[i] = masked ? 1 : 0;
        mask_of[static_cast<size_t>(id)] = batch_mask[i];

        if (!cfg.separate_eval_pass) {
          cls_ids.push_back(id);
          cls_vals.push_back(cls);
          if (cfg.record_trace) trace_epoch.push_back({obs, cls, masked});
        }
      }

      grads.zero();
      const double upstream = 1.0 / static_cast<double>(bsz);
      const BatchLossStats stats =
          batch_loss_grad(model, cfg.loss, batch_labels, batch_mask.data(),
                          upstream, bufs, cfg.exec);
      batch_accumulate_grads(model, batch_mask.data(), bufs, grads, cfg.exec);
      opt.step(model, grads, lr);

      loss_sum += stats.masked_loss_sum;
      masked_total += stats.masked_count;
    }

    if (cfg.separate_eval_pass) {
      // Classify from a dedicated pass over the post-update weights.
      for (size_t start = 0; start < live.size();
           start += static_cast<size_t>(cfg.batch_size)) {
        const size_t bsz =
            std::min(static_cast<size_t>(cfg.batch_size), live.size() - start);
        const std::span<const int64_t> rows(live.data() + start, bsz);
        batch_forward(model, ds.features.data(), rows, bufs, cfg.exec);
        for (size_t i = 0; i < bsz; ++i) {
          const int64_t id = rows[i];
          const int32_t y = ds.observed_labels[static_cast<size_t>(id)];
          const EpochObservation obs = derive_observation(
              bufs.cosine_row(static_cast<int>(i), num_classes), y, id, m);
          const SampleClass cls = classify_sample(obs, cfg.thresholds);
          cls_ids.push_back(id);
          cls_vals.push_back(cls);
          prev_cls[static_cast<size_t>(id)] = cls;
          prev_sp[static_cast<size_t>(id)] = obs.s_p;
          have_prev[static_cast<size_t>(id)] = 1;
          if (cfg.record_trace)
            trace_epoch.push_back(
                {obs, cls, mask_of[static_cast<size_t>(id)] != 0});
        }
      }
    }

    for (SampleClass c : cls_vals) {
      if (c == SampleClass::kEasy)
        ++rep.easy;
      else if (c == SampleClass::kHard)
        ++rep.hard;
      else
        ++rep.inconsistent;
    }
    rep.mean_masked_loss =
        masked_total > 0 ? loss_sum / static_cast<double>(masked_total) : 0.0;
    rep.masked_count = masked_total;

    if (cfg.count_during_warmup || m > cfg.schedule.e1) {
      rep.removals = registry.end_of_epoch(cls_ids, cls_vals, cfg.detector, m,
                                           cfg.toggles.enable_cic,
                                           cfg.toggles.enable_tic);
    }
    if (!rep.removals.empty()) {
      std::unordered_set<int64_t> gone;
      for (const auto& e : rep.removals) gone.insert(e.sample_id);
      live.erase(std::remove_if(live.begin(), live.end(),
                                [&](int64_t id) { return gone.count(id) > 0; }),
                 live.end());
      log.removals.insert(log.removals.end(), rep.removals.begin(),
                          rep.removals.end());
    }

    if (jsonl.is_open()) {
      jsonl << epoch_to_json(rep).dump() << "\n";
      jsonl.flush();
      if (!jsonl)
        throw std::runtime_error("run log write failed at epoch " +
                                 std::to_string(m));
    }
    if (cfg.record_trace) log.trace.push_back(std::move(trace_epoch));
    if (on_epoch) on_epoch(rep);
    log.epochs.push_back(std::move(rep));
  }

  log.live_final = static_cast<int64_t>(live.size());
  log.final_counters = registry.counters();

  std::vector<int64_t> flagged;
  flagged.reserve(log.removals.size());
  for (const auto& e : log.removals) flagged.push_back(e.sample_id);
  log.detection = detection_metrics(flagged, ds.is_noise);

  if (cfg.holdout_per_class >= 2 && num_classes >= 2) {
    std::vector<int64_t> hold;
    std::vector<int32_t> hold_labels;
    for (size_t i = 0; i < held.size(); ++i) {
      if (!held[i]) continue;
      hold.push_back(static_cast<int64_t>(i));
      hold_labels.push_back(ds.observed_labels[i]);
    }
    const std::vector<double> emb =
        embed_rows(model, ds, hold, cfg.batch_size, cfg.exec);
    const std::vector<Trial> trials =
        make_embedding_trials(emb, model.embedding_dim(), hold_labels,
                              Rng::derive(cfg.seed, kStreamTrials));
    log.eer = eer(trials);
  }

  log.final_model = model;

  if (!out_dir.empty()) {
    save_weights(model, out_dir / "weights.bin");

    std::ofstream csv(out_dir / "removals.csv");
    if (!csv)
      throw std::runtime_error("cannot write " +
                               (out_dir / "removals.csv").string());
    csv << "sample_id,epoch,trigger,cic,tic\n";
    for (const auto& e : log.removals)
      csv << e.sample_id << ',' << e.epoch << ',' << to_string(e.trigger) << ','
          << e.cic << ',' << e.tic << '\n';

    nlohmann::json jdet, jremovals = nlohmann::json::array();
    to_json(jdet, log.detection);
    for (const auto& e : log.removals) {
      nlohmann::json je;
      to_json(je, e);
      jremovals.push_back(je);
    }
    nlohmann::json summary = {{"config", log.config_snapshot},
                              {"epochs_run", cfg.epochs},
                              {"live_final", log.live_final},
                              {"removed_total", log.removals.size()},
                              {"detection", jdet},
                              {"eer", log.eer},
                              {"removals", jremovals},
                              {"weights_file", "weights.bin"}};
    std::ofstream sj(out_dir / "summary.json");
    if (!sj)
      throw std::runtime_error("cannot write " +
                               (out_dir / "summary.json").string());
    sj << summary.dump(2) << "\n";
  }
  return log;
}

Model reference_train(const LabeledDataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  if (ds.num_samples <= 0) throw std::invalid_argument("empty dataset");
  if (cfg.holdout_per_class > ds.spec.samples_per_class)
    throw std::invalid_argument("holdout_per_class must be <= samples_per_class");

  Model model = make_model(ds, cfg);
  SgdMomentum opt(model, cfg.momentum);
  Rng shuffle_rng(Rng::derive(cfg.seed, kStreamShuffle));

  const std::vector<uint8_t> held = holdout_flags(ds, cfg.holdout_per_class);
  const std::vector<int64_t> live = live_ids(held);

  BatchBuffers bufs;
  ModelGrads grads = ModelGrads::like(model);
  std::vector<int32_t> batch_labels;

  for (int m = 1; m <= cfg.epochs; ++m) {
    const double lr = cfg.learning_rate * std::pow(cfg.lr_decay, m - 1);
    std::vector<int64_t> order = live;
    shuffle_rng.shuffle(order);

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      const size_t bsz =
          std::min(static_cast<size_t>(cfg.batch_size), order.size() - start);
      const std::span<const int64_t> rows(order.data() + start, bsz);
      batch_forward(model, ds.features.data(), rows, bufs, cfg.exec);
      batch_labels.resize(bsz);
      for (size_t i = 0; i < bsz; ++i)
        batch_labels[i] = ds.observed_labels[static_cast<size_t>(rows[i])];

      grads.zero();
      const double upstream = 1.0 / static_cast<double>(bsz);
      batch_loss_grad(model, cfg.loss, batch_labels, nullptr, upstream, bufs,
                      cfg.exec);
      batch_accumulate_grads(model, nullptr, bufs, grads, cfg.exec);
      opt.step(model, grads, lr);
    }
  }
  return model;
}

nlohmann::json load_run_summary(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "summary.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace cec
