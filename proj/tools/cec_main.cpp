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
//
// cec: generate synthetic noisy-label datasets, train with cross-epoch
// counting detection, and report detection/verification metrics.
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cec/log.hpp"
#include "cec/serialize.hpp"
#include "cec/trainer.hpp"

namespace {

std::string fmt_num(double v) { return nlohmann::json(v).dump(); }

struct GenerateArgs {
  cec::SyntheticSpec spec;
  std::string out;
};

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::string config_file;
  std::vector<std::string> ablate;
  std::string model;
  std::string margin_form;
  bool eval_pass = false;
  bool no_warmup_count = false;
  bool serial = false;
  bool quiet = false;
};

struct ReportArgs {
  std::vector<std::string> runs;
  std::string out;
};

int do_generate(const GenerateArgs& a) {
  a.spec.validate();
  const cec::LabeledDataset ds = cec::generate(a.spec);
  cec::save_dataset(ds, a.out);
  std::printf(
      "dataset written to %s: N=%lld classes=%d per_class=%d dim=%d "
      "noise=%lld p=%.6g seed=%llu\n",
      a.out.c_str(), static_cast<long long>(ds.num_samples),
      a.spec.clean_classes, a.spec.samples_per_class, a.spec.dim,
      static_cast<long long>(a.spec.noise_count()),
      cec::ncr_to_p(a.spec.ncr),
      static_cast<unsigned long long>(a.spec.seed));
  return 0;
}

std::string resolved_echo(const nlohmann::json& snap, const std::string& dataset,
                          const std::string& out) {
  std::string s = "resolved config:";
  auto add = [&](const std::string& k, const nlohmann::json& v) {
    s += " " + k + "=" +
         (v.is_string() ? v.get<std::string>() : v.dump());
  };
  add("epochs", snap.at("epochs"));
  add("batch_size", snap.at("batch_size"));
  add("learning_rate", snap.at("learning_rate"));
  add("momentum", snap.at("momentum"));
  add("lr_decay", snap.at("lr_decay"));
  add("model", snap.at("model"));
  add("hidden_dim", snap.at("hidden_dim"));
  add("seed", snap.at("seed"));
  add("enable_cic", snap.at("enable_cic"));
  add("enable_tic", snap.at("enable_tic"));
  add("enable_curriculum", snap.at("enable_curriculum"));
  add("tau_p", snap.at("thresholds").at("tau_p"));
  add("tau_n", snap.at("thresholds").at("tau_n"));
  add("tau_cic", snap.at("detector").at("tau_cic"));
  add("tau_tic", snap.at("detector").at("tau_tic"));
  add("e1", snap.at("schedule").at("e1"));
  add("e2", snap.at("schedule").at("e2"));
  add("e3", snap.at("schedule").at("e3"));
  add("s1", snap.at("schedule").at("s1"));
  add("s2", snap.at("schedule").at("s2"));
  add("margin", snap.at("loss").at("margin"));
  add("scale", snap.at("loss").at("scale"));
  add("margin_form", snap.at("loss").at("margin_form"));
  add("holdout_per_class", snap.at("holdout_per_class"));
  add("separate_eval_pass", snap.at("separate_eval_pass"));
  add("count_during_warmup", snap.at("count_during_warmup"));
  add("exec", snap.at("exec"));
  s += " dataset=" + dataset + " out=" + out;
  return s;
}

int do_train(const TrainArgs& a, const CLI::App* cmd) {
  cec::TrainConfig cfg;
  if (!a.config_file.empty()) {
    std::ifstream in(a.config_file);
    if (!in)
      throw std::invalid_argument("cannot read config file " + a.config_file);
    cfg = cec::train_config_from_json(nlohmann::json::parse(in));
  }

  // Flags override the config file.
  auto flag_given = [&](const std::string& name) {
    return cmd->count(name) > 0;
  };
  if (flag_given("--epochs"))
    cfg.epochs = static_cast<int>(cmd->get_option("--epochs")->as<int>());
  if (flag_given("--batch-size"))
    cfg.batch_size = cmd->get_option("--batch-size")->as<int>();
  if (flag_given("--lr"))
    cfg.learning_rate = cmd->get_option("--lr")->as<double>();
  if (flag_given("--momentum"))
    cfg.momentum = cmd->get_option("--momentum")->as<double>();
  if (flag_given("--lr-decay"))
    cfg.lr_decay = cmd->get_option("--lr-decay")->as<double>();
  if (flag_given("--seed"))
    cfg.seed = cmd->get_option("--seed")->as<uint64_t>();
  if (flag_given("--hidden"))
    cfg.hidden_dim = cmd->get_option("--hidden")->as<int>();
  if (!a.model.empty()) cfg.model_kind = cec::model_kind_from_string(a.model);
  if (flag_given("--tau-p"))
    cfg.thresholds.tau_p = cmd->get_option("--tau-p")->as<double>();
  if (flag_given("--tau-n"))
    cfg.thresholds.tau_n = cmd->get_option("--tau-n")->as<double>();
  if (flag_given("--tau-cic"))
    cfg.detector.tau_cic = cmd->get_option("--tau-cic")->as<int>();
  if (flag_given("--tau-tic"))
    cfg.detector.tau_tic = cmd->get_option("--tau-tic")->as<int>();
  if (flag_given("--e1")) cfg.schedule.e1 = cmd->get_option("--e1")->as<int>();
  if (flag_given("--e2")) cfg.schedule.e2 = cmd->get_option("--e2")->as<int>();
  if (flag_given("--e3")) cfg.schedule.e3 = cmd->get_option("--e3")->as<int>();
  if (flag_given("--s1")) cfg.schedule.s1 = cmd->get_option("--s1")->as<double>();
  if (flag_given("--s2")) cfg.schedule.s2 = cmd->get_option("--s2")->as<double>();
  if (flag_given("--margin"))
    cfg.loss.margin = cmd->get_option("--margin")->as<double>();
  if (flag_given("--scale"))
    cfg.loss.scale = cmd->get_option("--scale")->as<double>();
  if (!a.margin_form.empty())
    cfg.loss.form = cec::margin_form_from_string(a.margin_form);
  if (flag_given("--holdout"))
    cfg.holdout_per_class = cmd->get_option("--holdout")->as<int>();
  if (a.eval_pass) cfg.separate_eval_pass = true;
  if (a.no_warmup_count) cfg.count_during_warmup = false;
  if (a.serial) cfg.exec = cec::ExecMode::kSerial;

  for (const std::string& t : a.ablate) {
    if (t == "cic")
      cfg.toggles.enable_cic = false;
    else if (t == "tic")
      cfg.toggles.enable_tic = false;
    else if (t == "curriculum")
      cfg.toggles.enable_curriculum = false;
    else
      throw std::invalid_argument("unknown ablation target: " + t +
                                  " (expected cic, tic or curriculum)");
  }

  // Reject invariant violations before any work happens.
  cfg.validate();

  const cec::LabeledDataset ds = cec::load_dataset(a.dataset);
  const nlohmann::json snapshot = cec::config_snapshot(cfg, ds);
  std::cout << resolved_echo(snapshot, a.dataset, a.out) << "\n";

  // Run manifest: paths plus the fully resolved configuration, written
  // before training so a crashed run can still be reconstructed.
  std::filesystem::create_directories(a.out);
  {
    nlohmann::json manifest = {{"dataset_path", a.dataset},
                               {"config_file", a.config_file},
                               {"output_dir", a.out},
                               {"config", snapshot}};
    std::ofstream mf(std::filesystem::path(a.out) / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest.json in " + a.out);
    mf << manifest.dump(2) << "\n";
  }

  int64_t removed_total = 0;
  cec::EpochCallback progress;
  if (!a.quiet) {
    progress = [&](const cec::EpochReport& r) {
      removed_total += static_cast<int64_t>(r.removals.size());
      std::printf(
          "epoch %d/%d live=%lld easy=%lld hard=%lld inconsistent=%lld "
          "tau=%.4f masked=%lld loss=%.4f removed=%zu total_removed=%lld\n",
          r.epoch, cfg.epochs, static_cast<long long>(r.live_at_start),
          static_cast<long long>(r.easy), static_cast<long long>(r.hard),
          static_cast<long long>(r.inconsistent), r.tau_m,
          static_cast<long long>(r.masked_count), r.mean_masked_loss,
          r.removals.size(), static_cast<long long>(removed_total));
    };
  }

  const cec::RunLog log = cec::run(ds, cfg, a.out, progress);
  std::printf(
      "done: removed=%zu live_final=%lld precision=%s recall=%s f1=%s "
      "accuracy=%s eer=%s\n",
      log.removals.size(), static_cast<long long>(log.live_final),
      fmt_num(log.detection.precision).c_str(),
      fmt_num(log.detection.recall).c_str(), fmt_num(log.detection.f1).c_str(),
      fmt_num(log.detection.accuracy).c_str(), fmt_num(log.eer).c_str());
  return 0;
}

int do_report(const ReportArgs& a) {
  struct Row {
    double ncr;
    uint64_t seed;
    nlohmann::json summary;
  };
  std::vector<Row> rows;
  for (const std::string& dir : a.runs) {
    try {
      nlohmann::json s = cec::load_run_summary(dir);
      Row r;
      r.ncr = s.at("config").at("dataset").at("ncr").get<double>();
      r.seed = s.at("config").at("seed").get<uint64_t>();
      r.summary = std::move(s);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      cec::log_msg(cec::LogLevel::kWarn,
                   "skipping run " + dir + ": " + e.what());
    }
  }
  if (rows.empty()) {
    cec::log_msg(cec::LogLevel::kError, "no readable run logs");
    return 1;
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    os = &file;
  }

  if (rows.size() == 1) {
    const nlohmann::json& s = rows[0].summary;
    const nlohmann::json& det = s.at("detection");
    // Removal timeline: removals per epoch.
    std::map<int, int> by_epoch;
    for (const auto& e : s.at("removals"))
      by_epoch[e.at("epoch").get<int>()] += 1;
    nlohmann::json timeline = nlohmann::json::array();
    for (const auto& [epoch, count] : by_epoch)
      timeline.push_back({{"epoch", epoch}, {"count", count}});
    nlohmann::json out = {{"precision", det.at("precision")},
                          {"recall", det.at("recall")},
                          {"f1", det.at("f1")},
                          {"accuracy", det.at("accuracy")},
                          {"eer", s.at("eer")},
                          {"removed_total", s.at("removed_total")},
                          {"live_final", s.at("live_final")},
                          {"removal_timeline", timeline}};
    *os << out.dump(2) << "\n";
    return 0;
  }

  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return x.ncr != y.ncr ? x.ncr < y.ncr : x.seed < y.seed;
  });
  *os << "ncr,seed,precision,recall,f1,accuracy,eer,removed,live_final\n";
  for (const Row& r : rows) {
    const nlohmann::json& det = r.summary.at("detection");
    *os << fmt_num(r.ncr) << ',' << r.seed << ','
        << det.at("precision").dump() << ',' << det.at("recall").dump() << ','
        << det.at("f1").dump() << ',' << det.at("accuracy").dump() << ','
        << r.summary.at("eer").dump() << ',' << r.summary.at("removed_total")
        << ',' << r.summary.at("live_final") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-epoch-counting noisy-label detection"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* cgen =
      app.add_subcommand("generate", "Generate a synthetic noisy dataset");
  cgen->add_option("--classes", gen.spec.clean_classes, "Clean classes");
  cgen->add_option("--per-class", gen.spec.samples_per_class,
                   "Samples per clean class");
  cgen->add_option("--dim", gen.spec.dim, "Feature dimension");
  cgen->add_option("--spread", gen.spec.cluster_spread,
                   "Within-class stddev per coordinate");
  cgen->add_option("--separation", gen.spec.class_separation,
                   "Min pairwise centroid angle (radians)");
  cgen->add_option("--extra-classes", gen.spec.extra_classes,
                   "Open-set noise source centroids");
  cgen->add_option("--ncr", gen.spec.ncr, "Noisy-to-clean ratio");
  cgen->add_option("--seed", gen.spec.seed, "Generation seed");
  cgen->add_option("-o,--out", gen.out, "Output directory")->required();

  TrainArgs tr;
  CLI::App* ctrain = app.add_subcommand("train", "Train with CEC detection");
  ctrain->add_option("dataset", tr.dataset, "Dataset directory")->required();
  ctrain->add_option("-o,--out", tr.out, "Run output directory")->required();
  ctrain->add_option("--config", tr.config_file, "JSON config file");
  ctrain->add_option("--epochs", "Total epochs");
  ctrain->add_option("--batch-size", "Batch size");
  ctrain->add_option("--lr", "Initial learning rate");
  ctrain->add_option("--momentum", "SGD momentum");
  ctrain->add_option("--lr-decay", "Per-epoch LR decay factor");
  ctrain->add_option("--model", tr.model, "Model kind: linear or hidden");
  ctrain->add_option("--hidden", "Hidden width");
  ctrain->add_option("--seed", "Training seed");
  ctrain->add_option("--tau-p", "Positive cosine threshold");
  ctrain->add_option("--tau-n", "Negative cosine threshold");
  ctrain->add_option("--tau-cic", "CIC removal threshold");
  ctrain->add_option("--tau-tic", "TIC removal threshold");
  ctrain->add_option("--e1", "Warm-up end epoch");
  ctrain->add_option("--e2", "First ramp end epoch");
  ctrain->add_option("--e3", "Second ramp end epoch");
  ctrain->add_option("--s1", "Retention threshold lower bound");
  ctrain->add_option("--s2", "Retention threshold upper bound");
  ctrain->add_option("--margin", "Loss margin");
  ctrain->add_option("--scale", "Loss scale");
  ctrain->add_option("--margin-form", tr.margin_form,
                     "Margin form: cos-sub or angle-add");
  ctrain->add_option("--holdout", "Held-out samples per class for EER");
  ctrain->add_option("--ablate", tr.ablate,
                     "Disable a component: cic, tic or curriculum");
  ctrain->add_flag("--eval-pass", tr.eval_pass,
                   "Classify from a dedicated end-of-epoch pass");
  ctrain->add_flag("--no-warmup-count", tr.no_warmup_count,
                   "Do not update counters during warm-up");
  ctrain->add_flag("--serial", tr.serial, "Use the serial reference kernels");
  ctrain->add_flag("-q,--quiet", tr.quiet, "Suppress per-epoch progress");

  ReportArgs rep;
  CLI::App* creport =
      app.add_subcommand("report", "Aggregate metrics from run logs");
  creport->add_option("runs", rep.runs, "Run directories")->required();
  creport->add_option("-o,--out", rep.out, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cgen->parsed()) return do_generate(gen);
    if (ctrain->parsed()) return do_train(tr, ctrain);
    if (creport->parsed()) return do_report(rep);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
