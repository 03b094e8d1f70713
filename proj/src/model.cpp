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

#include "cec/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cec {

const char* to_string(ModelKind k) {
  return k == ModelKind::kLinearHead ? "linear" : "hidden";
}

void ModelConfig::validate() const {
  if (input_dim < 2) throw std::invalid_argument("model input_dim must be >= 2");
  if (num_classes < 2)
    throw std::invalid_argument("model num_classes must be >= 2");
  if (kind == ModelKind::kOneHidden && hidden_dim < 2)
    throw std::invalid_argument("model hidden_dim must be >= 2");
}

Model Model::init(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Model m;
  m.cfg = cfg;
  Rng rng(seed);
  if (cfg.kind == ModelKind::kOneHidden) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.input_dim));
    m.w1.resize(static_cast<size_t>(cfg.hidden_dim) * cfg.input_dim);
    for (auto& v : m.w1) v = scale * rng.normal();
    m.b1.assign(static_cast<size_t>(cfg.hidden_dim), 0.0);
  }
  m.head = HeadWeights::random(cfg.num_classes, m.embedding_dim(), rng);
  return m;
}

void ModelGrads::zero() {
  std::fill(w1.begin(), w1.end(), 0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  std::fill(head.begin(), head.end(), 0.0);
}

ModelGrads ModelGrads::like(const Model& m) {
  ModelGrads g;
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.head.assign(m.head.w.size(), 0.0);
  return g;
}

SgdMomentum::SgdMomentum(const Model& m, double momentum)
    : momentum_(momentum),
      v_w1_(m.w1.size(), 0.0),
      v_b1_(m.b1.size(), 0.0),
      v_head_(m.head.w.size(), 0.0) {}

void SgdMomentum::step(Model& m, const ModelGrads& g, double lr) {
  if (g.w1.size() != v_w1_.size() || g.head.size() != v_head_.size())
    throw std::invalid_argument("gradient shape mismatch");
  for (size_t i = 0; i < v_w1_.size(); ++i) {
    v_w1_[i] = momentum_ * v_w1_[i] + g.w1[i];
    m.w1[i] -= lr * v_w1_[i];
  }
  for (size_t i = 0; i < v_b1_.size(); ++i) {
    v_b1_[i] = momentum_ * v_b1_[i] + g.b1[i];
    m.b1[i] -= lr * v_b1_[i];
  }
  for (size_t i = 0; i < v_head_.size(); ++i) {
    v_head_[i] = momentum_ * v_head_[i] + g.head[i];
    m.head.w[i] -= lr * v_head_[i];
  }
  m.head.renormalize_rows();
}

}  // namespace cec
