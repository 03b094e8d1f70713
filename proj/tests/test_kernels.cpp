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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "cec/kernels.hpp"
#include "cec/rng.hpp"

using cec::BatchBuffers;
using cec::LossConfig;
using cec::Model;
using cec::ModelConfig;
using cec::ModelGrads;
using cec::ModelKind;

namespace {

struct Instance {
  Model model;
  std::vector<float> features;
  std::vector<int64_t> rows;
  std::vector<int32_t> labels;
  std::vector<uint8_t> mask;
};

Instance random_instance(cec::Rng& rng, ModelKind kind, int batch, int in_dim,
                         int hidden, int classes) {
  Instance ins;
  ModelConfig mc;
  mc.kind = kind;
  mc.input_dim = in_dim;
  mc.hidden_dim = hidden;
  mc.num_classes = classes;
  ins.model = Model::init(mc, rng.next_u64());
  ins.features.resize(static_cast<size_t>(batch) * in_dim);
  for (auto& f : ins.features) f = static_cast<float>(rng.normal());
  ins.rows.resize(batch);
  for (int i = 0; i < batch; ++i) ins.rows[i] = i;
  ins.labels.resize(batch);
  for (auto& l : ins.labels) l = static_cast<int32_t>(rng.below(classes));
  ins.mask.resize(batch);
  for (auto& m : ins.mask) m = rng.below(4) != 0 ? 1 : 0;
  return ins;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

// Total masked batch loss as a plain function of the model parameters,
// used as the finite-difference target.
double total_loss(const Model& m, const LossConfig& cfg, const Instance& ins,
                  const uint8_t* mask, double upstream) {
  BatchBuffers b;
  cec::refimpl::batch_forward(m, ins.features.data(), ins.rows, b);
  const auto stats =
      cec::refimpl::batch_loss_grad(m, cfg, ins.labels, mask, upstream, b);
  return stats.masked_loss_sum * upstream;
}

}  // namespace

TEST_CASE("serial reference and OpenMP kernels agree bit for bit") {
  cec::Rng rng(4242);
  const LossConfig cfg;
  for (int trial = 0; trial < 12; ++trial) {
    const ModelKind kind =
        trial % 2 ? ModelKind::kLinearHead : ModelKind::kOneHidden;
    const int batch = 1 + static_cast<int>(rng.below(97));
    const auto ins = random_instance(rng, kind, batch, 9, 17, 7);
    const uint8_t* mask = trial % 3 == 0 ? nullptr : ins.mask.data();
    const double upstream = 1.0 / batch;

    BatchBuffers bs, bp;
    cec::refimpl::batch_forward(ins.model, ins.features.data(), ins.rows, bs);
    cec::kernels::batch_forward(ins.model, ins.features.data(), ins.rows, bp);
    CHECK(bits_equal(bs.e_hat, bp.e_hat));
    CHECK(bits_equal(bs.cosines, bp.cosines));

    const auto ss = cec::refimpl::batch_loss_grad(ins.model, cfg, ins.labels,
                                                  mask, upstream, bs);
    const auto sp = cec::kernels::batch_loss_grad(ins.model, cfg, ins.labels,
                                                  mask, upstream, bp);
    CHECK(ss.masked_loss_sum == sp.masked_loss_sum);
    CHECK(ss.masked_count == sp.masked_count);
    CHECK(bits_equal(bs.loss, bp.loss));
    CHECK(bits_equal(bs.gcos, bp.gcos));
    CHECK(bits_equal(bs.ge, bp.ge));

    ModelGrads gs = ModelGrads::like(ins.model);
    ModelGrads gp = ModelGrads::like(ins.model);
    cec::refimpl::batch_accumulate_grads(ins.model, mask, bs, gs);
    cec::kernels::batch_accumulate_grads(ins.model, mask, bp, gp);
    CHECK(bits_equal(gs.head, gp.head));
    CHECK(bits_equal(gs.w1, gp.w1));
    CHECK(bits_equal(gs.b1, gp.b1));
  }
}

TEST_CASE("kernels are deterministic across repeated calls") {
  cec::Rng rng(7);
  const LossConfig cfg;
  const auto ins = random_instance(rng, ModelKind::kOneHidden, 33, 6, 10, 5);
  ModelGrads g1 = ModelGrads::like(ins.model);
  ModelGrads g2 = ModelGrads::like(ins.model);
  for (ModelGrads* g : {&g1, &g2}) {
    BatchBuffers b;
    cec::kernels::batch_forward(ins.model, ins.features.data(), ins.rows, b);
    cec::kernels::batch_loss_grad(ins.model, cfg, ins.labels, ins.mask.data(),
                                  1.0 / 33, b);
    cec::kernels::batch_accumulate_grads(ins.model, ins.mask.data(), b, *g);
  }
  CHECK(bits_equal(g1.head, g2.head));
  CHECK(bits_equal(g1.w1, g2.w1));
  CHECK(bits_equal(g1.b1, g2.b1));
}

TEST_CASE("masked-out samples contribute exactly zero gradient") {
  cec::Rng rng(99);
  const LossConfig cfg;
  const int batch = 24;
  auto ins = random_instance(rng, ModelKind::kOneHidden, batch, 8, 12, 6);
  for (int i = 0; i < batch; ++i) ins.mask[i] = (i % 3) != 0;
  const double upstream = 1.0 / batch;

  BatchBuffers b;
  cec::refimpl::batch_forward(ins.model, ins.features.data(), ins.rows, b);
  cec::refimpl::batch_loss_grad(ins.model, cfg, ins.labels, ins.mask.data(),
                                upstream, b);
  ModelGrads masked = ModelGrads::like(ins.model);
  cec::refimpl::batch_accumulate_grads(ins.model, ins.mask.data(), b, masked);

  // Same batch with the masked-out samples physically absent but the
  // same per-sample upstream weight.
  Instance sub = ins;
  sub.rows.clear();
  sub.labels.clear();
  for (int i = 0; i < batch; ++i) {
    if (!ins.mask[i]) continue;
    sub.rows.push_back(ins.rows[i]);
    sub.labels.push_back(ins.labels[i]);
  }
  BatchBuffers b2;
  cec::refimpl::batch_forward(sub.model, sub.features.data(), sub.rows, b2);
  cec::refimpl::batch_loss_grad(sub.model, cfg, sub.labels, nullptr, upstream,
                                b2);
  ModelGrads absent = ModelGrads::like(sub.model);
  cec::refimpl::batch_accumulate_grads(sub.model, nullptr, b2, absent);

  CHECK(bits_equal(masked.head, absent.head));
  CHECK(bits_equal(masked.w1, absent.w1));
  CHECK(bits_equal(masked.b1, absent.b1));
}

TEST_CASE("batch gradients match finite differences through the full chain") {
  cec::Rng rng(31337);
  for (cec::MarginForm form :
       {cec::MarginForm::kSubtractCosine, cec::MarginForm::kAddAngle}) {
    LossConfig cfg;
    cfg.form = form;
    cfg.scale = 8.0;  // keep the landscape smooth enough for h = 1e-5
    for (ModelKind kind : {ModelKind::kOneHidden, ModelKind::kLinearHead}) {
      const int batch = 6;
      auto ins = random_instance(rng, kind, batch, 5, 7, 4);
      const double upstream = 1.0 / batch;

      BatchBuffers b;
      cec::refimpl::batch_forward(ins.model, ins.features.data(), ins.rows, b);
      cec::refimpl::batch_loss_grad(ins.model, cfg, ins.labels,
                                    ins.mask.data(), upstream, b);
      ModelGrads g = ModelGrads::like(ins.model);
      cec::refimpl::batch_accumulate_grads(ins.model, ins.mask.data(), b, g);

      const double h = 1e-5;
      auto fd_check = [&](std::vector<double>& param,
                          const std::vector<double>& analytic) {
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < param.size(); ++i) {
          const double keep = param[i];
          param[i] = keep + h;
          const double up =
              total_loss(ins.model, cfg, ins, ins.mask.data(), upstream);
          param[i] = keep - h;
          const double dn =
              total_loss(ins.model, cfg, ins, ins.mask.data(), upstream);
          param[i] = keep;
          const double fd = (up - dn) / (2.0 * h);
          num += (analytic[i] - fd) * (analytic[i] - fd);
          den += std::max(std::abs(analytic[i]), std::abs(fd)) *
                 std::max(std::abs(analytic[i]), std::abs(fd));
        }
        if (den > 1e-16) CHECK(std::sqrt(num / den) < 1e-4);
      };

      fd_check(ins.model.head.w, g.head);
      if (kind == ModelKind::kOneHidden) {
        fd_check(ins.model.w1, g.w1);
        fd_check(ins.model.b1, g.b1);
      }
    }
  }
}

TEST_CASE("zero feature row is rejected by the linear path") {
  cec::Rng rng(5);
  auto ins = random_instance(rng, ModelKind::kLinearHead, 4, 5, 0, 3);
  for (int d = 0; d < 5; ++d) ins.features[2 * 5 + d] = 0.0f;
  BatchBuffers b;
  CHECK_THROWS_AS(
      cec::refimpl::batch_forward(ins.model, ins.features.data(), ins.rows, b),
      std::invalid_argument);
  CHECK_THROWS_AS(
      cec::kernels::batch_forward(ins.model, ins.features.data(), ins.rows, b),
      std::invalid_argument);
}
