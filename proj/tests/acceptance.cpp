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
// Acceptance suite. Runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cec/trainer.hpp"

using cec::DetectorConfig;
using cec::LabeledDataset;
using cec::LossConfig;
using cec::MarginForm;
using cec::RunLog;
using cec::SampleClass;
using cec::SyntheticSpec;
using cec::TrainConfig;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

struct Check {
  bool ok = true;
  std::ostringstream notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " FAILED{" << what << "}";
    }
  }
  void note(const std::string& s) { notes << " " << s; }
};

void criterion(int number, const std::string& title,
               const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes << " exception{" << e.what() << "}";
  }
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s (%.2f s)%s\n", c.ok ? "PASS" : "FAIL",
              number, title.c_str(), secs, c.notes.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++g_failures;
}

// ---------------------------------------------------------------- 1

void equation_exactness(Check& c) {
  const auto t0 = Clock::now();
  const cec::ClassifierThresholds th;  // 0.6 / 0.4

  auto obs = [](int y, int pred, double sp, double sn) {
    cec::EpochObservation o;
    o.true_label = y;
    o.predicted_label = pred;
    o.s_p = sp;
    o.s_n = sn;
    return o;
  };
  c.expect(cec::classify_sample(obs(3, 7, 0.2, 0.8), th) ==
               SampleClass::kInconsistent,
           "classify inconsistent");
  c.expect(cec::classify_sample(obs(3, 3, 0.7, 0.3), th) == SampleClass::kEasy,
           "classify easy");
  c.expect(cec::classify_sample(obs(3, 3, 0.5, 0.3), th) == SampleClass::kHard,
           "classify hard via s_p");
  c.expect(cec::classify_sample(obs(3, 3, 0.7, 0.45), th) == SampleClass::kHard,
           "classify hard via s_n");
  c.expect(cec::classify_sample(obs(3, 3, 0.6, 0.4), th) == SampleClass::kEasy,
           "boundary equality -> easy");

  auto run_seq = [](std::initializer_list<SampleClass> seq) {
    cec::SampleCounter k;
    for (SampleClass s : seq) k = cec::update_counter(k, s);
    return k;
  };
  using S = SampleClass;
  auto c1 = run_seq({S::kInconsistent, S::kInconsistent});
  c.expect(c1.cic == 2 && c1.tic == 2, "counter [I,I]");
  auto c2 = run_seq({S::kInconsistent, S::kInconsistent, S::kHard,
                     S::kInconsistent});
  c.expect(c2.cic == 1 && c2.tic == 3, "counter reset on hard");
  auto c3 = run_seq({S::kEasy, S::kEasy, S::kEasy});
  c.expect(c3.cic == 0 && c3.tic == 0, "counter all easy");

  const DetectorConfig dc;  // 25 / 95
  auto counter = [](int cic, int tic) {
    cec::SampleCounter k;
    k.cic = cic;
    k.tic = tic;
    return k;
  };
  c.expect(cec::is_noisy(counter(26, 26), dc), "is_noisy CIC branch");
  c.expect(cec::is_noisy(counter(0, 96), dc), "is_noisy TIC branch");
  c.expect(!cec::is_noisy(counter(25, 95), dc), "is_noisy strict boundary");

  const cec::CurriculumSchedule sch;  // 6 / 10 / 100, 0.6 -> 1.0
  c.expect(cec::retention_threshold(6, sch) == 0.0, "tau warm-up");
  c.expect(std::abs(cec::retention_threshold(8, sch) - 0.3) <= 1e-12,
           "tau ramp 1");
  c.expect(std::abs(cec::retention_threshold(55, sch) - 0.8) <= 1e-12,
           "tau ramp 2");
  c.expect(cec::retention_threshold(150, sch) == 1.0, "tau saturation");

  c.expect(cec::difficulty(1.0) == 0.0, "difficulty 1.0");
  c.expect(std::abs(cec::difficulty(0.6) - 0.4) <= 1e-12, "difficulty 0.6");
  c.expect(cec::difficulty(-1.0) == 2.0, "difficulty -1.0");

  c.expect(cec::gradient_mask(S::kInconsistent, 0.9, 5, sch),
           "mask warm-up inconsistent");
  c.expect(!cec::gradient_mask(S::kInconsistent, 0.9, 7, sch),
           "mask post-warm-up inconsistent");
  c.expect(cec::gradient_mask(S::kHard, 0.5, 55, sch), "mask hard admitted");
  c.expect(!cec::gradient_mask(S::kHard, 0.2, 8, sch), "mask hard excluded");

  c.expect(cec::ncr_to_p(0.5) == 1.0 / 3.0, "ncr_to_p 0.5");
  c.expect(cec::ncr_to_p(0.0) == 0.0, "ncr_to_p 0");
  c.expect(cec::ncr_to_p(1.0) == 0.5, "ncr_to_p 1");

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.expect(secs < 1.0, "runtime < 1 s");
}

// ---------------------------------------------------------------- 2

// Independent oracle: rescans each sample's full class history per epoch.
std::vector<std::set<int64_t>> naive_replay(
    const std::vector<std::vector<SampleClass>>& history, int tau_cic,
    int tau_tic) {
  const size_t num_samples = history.size();
  const size_t epochs = num_samples ? history[0].size() : 0;
  std::vector<std::set<int64_t>> removed_at(epochs);
  for (size_t s = 0; s < num_samples; ++s) {
    for (size_t m = 0; m < epochs; ++m) {
      int tic = 0;
      for (size_t e = 0; e <= m; ++e)
        if (history[s][e] == SampleClass::kInconsistent) ++tic;
      int cic = 0;
      for (size_t e = m + 1; e-- > 0;) {
        if (history[s][e] != SampleClass::kInconsistent) break;
        ++cic;
      }
      if (cic > tau_cic || tic > tau_tic) {
        removed_at[m].insert(static_cast<int64_t>(s));
        break;
      }
    }
  }
  return removed_at;
}

void counter_replay_oracle(Check& c) {
  const auto t0 = Clock::now();
  const int num_samples = 1000;
  const int epochs = 150;
  cec::Rng rng(777);

  std::vector<DetectorConfig> configs;
  configs.push_back(DetectorConfig{25, 95});  // published thresholds
  while (configs.size() < 20) {
    DetectorConfig dc;
    dc.tau_cic = 1 + static_cast<int>(rng.below(40));
    dc.tau_tic = dc.tau_cic + 1 + static_cast<int>(rng.below(120));
    configs.push_back(dc);
  }

  std::vector<std::vector<SampleClass>> history(num_samples);
  for (auto& h : history) {
    h.resize(epochs);
    for (int m = 0; m < epochs; ++m)
      h[m] = static_cast<SampleClass>(rng.below(3));
  }

  for (const DetectorConfig& dc : configs) {
    const auto oracle = naive_replay(history, dc.tau_cic, dc.tau_tic);
    cec::CounterRegistry reg(num_samples);
    for (int m = 1; m <= epochs; ++m) {
      std::vector<int64_t> ids;
      std::vector<SampleClass> classes;
      for (int s = 0; s < num_samples; ++s) {
        if (reg.removed(s)) continue;
        ids.push_back(s);
        classes.push_back(history[s][m - 1]);
      }
      const auto events = reg.end_of_epoch(ids, classes, dc, m);
      std::set<int64_t> got;
      for (const auto& e : events) got.insert(e.sample_id);
      if (got != oracle[m - 1]) {
        c.expect(false, "mismatch at tau=(" + std::to_string(dc.tau_cic) +
                            "," + std::to_string(dc.tau_tic) + ") epoch " +
                            std::to_string(m));
        return;
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.note("20 configs exact");
  c.expect(secs < 10.0, "runtime < 10 s");
}

// ---------------------------------------------------------------- 3

void gradient_correctness(Check& c) {
  const auto t0 = Clock::now();
  cec::Rng rng(20202);
  const double h = 1e-5;
  int instances = 0;
  double worst = 0.0;

  for (MarginForm form : {MarginForm::kSubtractCosine, MarginForm::kAddAngle}) {
    LossConfig cfg;
    cfg.form = form;
    for (int trial = 0; trial < 1000; ++trial) {
      const int k = 2 + static_cast<int>(rng.below(15));   // K <= 16
      const int d = 2 + static_cast<int>(rng.below(31));   // D <= 32
      cec::HeadWeights w = cec::HeadWeights::random(k, d, rng);
      std::vector<double> e(d);
      for (auto& v : e) v = rng.normal();
      const int y = static_cast<int>(rng.below(k));

      auto loss_of = [&](const std::vector<double>& emb,
                         const cec::HeadWeights& head) {
        return cec::aam_forward(cec::cosine_logits(emb, head), y, cfg).loss;
      };

      // Analytic gradients chained through the normalization Jacobian.
      const auto cos = cec::cosine_logits(e, w);
      if (std::abs(cos[y]) > 0.999) continue;  // angular form derivative blows up
      const auto gcos = cec::aam_backward(cos, y, cfg, 1.0);

      double norm_sq = 0.0;
      for (double v : e) norm_sq += v * v;
      const double inv_norm = 1.0 / std::sqrt(norm_sq);
      std::vector<double> e_hat(d);
      for (int i = 0; i < d; ++i) e_hat[i] = e[i] * inv_norm;

      std::vector<double> ge(d, 0.0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < k; ++j) ge[i] += gcos[j] * w.row(j)[i];
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += e_hat[i] * ge[i];
      std::vector<double> grad_e(d);
      for (int i = 0; i < d; ++i)
        grad_e[i] = (ge[i] - e_hat[i] * dot) * inv_norm;

      std::vector<double> grad_w(static_cast<size_t>(k) * d);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < d; ++i)
          grad_w[static_cast<size_t>(j) * d + i] = gcos[j] * e_hat[i];

      double num = 0.0, den = 0.0;
      for (int i = 0; i < d; ++i) {
        std::vector<double> up = e, dn = e;
        up[i] += h;
        dn[i] -= h;
        const double fd = (loss_of(up, w) - loss_of(dn, w)) / (2.0 * h);
        num += (grad_e[i] - fd) * (grad_e[i] - fd);
        den += std::max(std::abs(grad_e[i]), std::abs(fd)) *
               std::max(std::abs(grad_e[i]), std::abs(fd));
      }
      for (int j = 0; j < k; ++j) {
        for (int i = 0; i < d; ++i) {
          cec::HeadWeights up = w, dn = w;
          up.row(j)[i] += h;
          dn.row(j)[i] -= h;
          const double fd = (loss_of(e, up) - loss_of(e, dn)) / (2.0 * h);
          const double a = grad_w[static_cast<size_t>(j) * d + i];
          num += (a - fd) * (a - fd);
          den += std::max(std::abs(a), std::abs(fd)) *
                 std::max(std::abs(a), std::abs(fd));
        }
      }
      ++instances;
      if (den > 1e-16) {
        const double rel = std::sqrt(num / den);
        worst = std::max(worst, rel);
        if (rel > 1e-4) {
          c.expect(false, "relative error " + std::to_string(rel) + " at " +
                              std::string(cec::to_string(form)));
          return;
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.note(std::to_string(instances) + " instances, worst rel err " +
         std::to_string(worst));
  c.expect(instances >= 1000, ">= 1000 instances");
  c.expect(secs < 30.0, "runtime < 30 s");
}

// ---------------------------------------------------------------- 4

double naive_softmax_ce(const std::vector<double>& cosines, int y, double s) {
  double mx = -1e300;
  for (double v : cosines) mx = std::max(mx, s * v);
  double z = 0.0;
  for (double v : cosines) z += std::exp(s * v - mx);
  return -(s * cosines[y] - mx - std::log(z));
}

void margin_zero_equivalence(Check& c) {
  cec::Rng rng(33);
  LossConfig cfg;
  cfg.margin = 0.0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(15));
    std::vector<double> row(k);
    for (auto& v : row) v = 2.0 * rng.uniform01() - 1.0;
    const int y = static_cast<int>(rng.below(k));
    const double got = cec::aam_forward(row, y, cfg).loss;
    const double want = naive_softmax_ce(row, y, cfg.scale);
    worst = std::max(worst, std::abs(got - want));
  }
  c.note("worst abs diff " + std::to_string(worst));
  c.expect(worst <= 1e-10, "margin-zero equivalence <= 1e-10");
}

// ---------------------------------------------------------------- 5

void schedule_golden_values(Check& c) {
  const cec::CurriculumSchedule sch;
  const int ms[] = {1, 6, 7, 8, 10, 55, 100, 150};
  const double want[] = {0.0, 0.0, 0.15, 0.3, 0.6, 0.8, 1.0, 1.0};
  for (int i = 0; i < 8; ++i) {
    const double got = cec::retention_threshold(ms[i], sch);
    if (got != want[i])
      c.expect(false, "tau(" + std::to_string(ms[i]) + ") = " +
                          std::to_string(got));
  }
}

// ---------------------------------------------------------------- 6 / 7 / 8

SyntheticSpec desk_spec(double ncr, uint64_t seed) {
  SyntheticSpec s;
  s.clean_classes = 20;
  s.samples_per_class = 100;
  s.dim = 16;
  s.ncr = ncr;
  s.seed = seed;
  return s;
}

TrainConfig desk_config(uint64_t seed) {
  TrainConfig cfg;
  cfg.seed = seed;
  cfg.model_kind = cec::ModelKind::kOneHidden;
  cfg.hidden_dim = 64;
  return cfg;
}

double run_recall(const LabeledDataset& ds, const TrainConfig& cfg,
                  double* out_secs = nullptr) {
  const auto t0 = Clock::now();
  const RunLog log = cec::run(ds, cfg);
  if (out_secs)
    *out_secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return log.detection.recall;
}

void desk_scale_detection(Check& c) {
  const std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  double sum_full = 0.0, sum_wo_tic = 0.0, sum_wo_cic = 0.0;
  double max_secs = 0.0;
  std::ostringstream table;
  for (uint64_t seed : seeds) {
    const LabeledDataset ds = cec::generate(desk_spec(0.05, seed));
    double secs = 0.0;

    TrainConfig full = desk_config(seed);
    const double r_full = run_recall(ds, full, &secs);
    max_secs = std::max(max_secs, secs);

    TrainConfig wo_tic = desk_config(seed);
    wo_tic.toggles.enable_tic = false;
    const double r_wo_tic = run_recall(ds, wo_tic, &secs);
    max_secs = std::max(max_secs, secs);

    TrainConfig wo_cic = desk_config(seed);
    wo_cic.toggles.enable_cic = false;
    const double r_wo_cic = run_recall(ds, wo_cic, &secs);
    max_secs = std::max(max_secs, secs);

    table << " seed" << seed << "{" << r_full << "/" << r_wo_tic << "/"
          << r_wo_cic << "}";
    sum_full += r_full;
    sum_wo_tic += r_wo_tic;
    sum_wo_cic += r_wo_cic;
    if (r_full < 0.90)
      c.expect(false, "CEC recall " + std::to_string(r_full) + " < 0.90 on seed " +
                          std::to_string(seed));
  }
  const double n = static_cast<double>(seeds.size());
  const double m_full = sum_full / n;
  const double m_wo_tic = sum_wo_tic / n;
  const double m_wo_cic = sum_wo_cic / n;
  c.note("recall means CEC/w-o-TIC/w-o-CIC{" + std::to_string(m_full) + "/" +
         std::to_string(m_wo_tic) + "/" + std::to_string(m_wo_cic) + "}" +
         table.str());
  c.expect(m_full >= m_wo_tic, "mean ordering CEC >= w/o TIC");
  c.expect(m_wo_tic >= m_wo_cic, "mean ordering w/o TIC >= w/o CIC");
  c.expect(max_secs < 300.0, "runtime < 5 min per run");
}

void robustness_trend(Check& c) {
  const uint64_t seed = 1;
  double cec_eer_at_half = 0.0;
  for (double ncr : {0.0, 0.1, 0.3, 0.5}) {
    const LabeledDataset ds = cec::generate(desk_spec(ncr, seed));
    TrainConfig cfg = desk_config(seed);
    const RunLog log = cec::run(ds, cfg);

    if (ncr > 0.0) {
      int64_t live_noisy = 0;
      for (int64_t i = 0; i < ds.num_samples; ++i)
        if (!log.final_counters[i].removed && ds.is_noise[i]) ++live_noisy;
      const double residual =
          static_cast<double>(live_noisy) / static_cast<double>(log.live_final);
      const double p0 = cec::ncr_to_p(ncr);
      c.note("ncr=" + std::to_string(ncr) + " residual=" +
             std::to_string(residual) + " p0=" + std::to_string(p0));
      c.expect(residual <= 0.5 * p0,
               "residual noise at ncr " + std::to_string(ncr));
    }
    if (ncr == 0.5) cec_eer_at_half = log.eer;
  }

  const LabeledDataset ds = cec::generate(desk_spec(0.5, seed));
  TrainConfig base = desk_config(seed);
  base.toggles = {false, false, false};
  const RunLog blog = cec::run(ds, base);
  c.note("eer CEC=" + std::to_string(cec_eer_at_half) + " baseline=" +
         std::to_string(blog.eer));
  c.expect(cec_eer_at_half <= blog.eer,
           "EER(CEC) <= EER(baseline) at NCR=0.5");
}

void baseline_equivalence(Check& c) {
  const LabeledDataset ds = cec::generate(desk_spec(0.05, 1));
  TrainConfig cfg = desk_config(1);
  cfg.toggles = {false, false, false};
  const RunLog log = cec::run(ds, cfg);
  const cec::Model ref = cec::reference_train(ds, cfg);
  const bool same =
      log.final_model.head.w.size() == ref.head.w.size() &&
      std::memcmp(log.final_model.head.w.data(), ref.head.w.data(),
                  ref.head.w.size() * sizeof(double)) == 0 &&
      std::memcmp(log.final_model.w1.data(), ref.w1.data(),
                  ref.w1.size() * sizeof(double)) == 0 &&
      std::memcmp(log.final_model.b1.data(), ref.b1.data(),
                  ref.b1.size() * sizeof(double)) == 0;
  c.expect(same, "final weights bit-exact");
}

}  // namespace

int main() {
  criterion(1, "equation-exactness suite", equation_exactness);
  criterion(2, "counter replay oracle (1000 x 150, 20 configs)",
            counter_replay_oracle);
  criterion(3, "gradient correctness vs central finite differences",
            gradient_correctness);
  criterion(4, "margin-zero equals softmax cross entropy",
            margin_zero_equivalence);
  criterion(5, "schedule golden values (exact)", schedule_golden_values);
  criterion(6, "desk-scale detection experiment (ablation ordering)",
            desk_scale_detection);
  criterion(7, "robustness trend across NCR sweep", robustness_trend);
  criterion(8, "baseline equivalence with all toggles off",
            baseline_equivalence);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
