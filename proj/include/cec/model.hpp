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

#ifndef CEC_MODEL_HPP_
#define CEC_MODEL_HPP_

#include <cstdint>
#include <vector>

#include "cec/aam_loss.hpp"

namespace cec {

enum class ModelKind {
  kLinearHead,  // features feed the cosine head directly
  kOneHidden,   // one tanh hidden layer in front of the head
};

const char* to_string(ModelKind k);

struct ModelConfig {
  ModelKind kind = ModelKind::kOneHidden;
  int input_dim = 0;
  int hidden_dim = 64;
  int num_classes = 0;
  void validate() const;
};

struct Model {
  ModelConfig cfg;
  std::vector<double> w1;  // hidden_dim x input_dim, row-major
  std::vector<double> b1;  // hidden_dim
  HeadWeights head;        // num_classes x embedding_dim, unit rows

  int embedding_dim() const {
    return cfg.kind == ModelKind::kOneHidden ? cfg.hidden_dim : cfg.input_dim;
  }

  // Deterministic random init: w1 ~ N(0, 1/input_dim), b1 = 0, head rows
  // uniform on the sphere.
  static Model init(const ModelConfig& cfg, uint64_t seed);
};

struct ModelGrads {
  std::vector<double> w1, b1, head;
  void zero();
  static ModelGrads like(const Model& m);
};

// Classical momentum SGD. Head rows are renormalized after every step so
// the cosine-head invariant holds continuously.
class SgdMomentum {
 public:
  SgdMomentum(const Model& m, double momentum);
  void step(Model& m, const ModelGrads& g, double lr);

 private:
  double momentum_;
  std::vector<double> v_w1_, v_b1_, v_head_;
};

}  // namespace cec

#endif  // CEC_MODEL_HPP_
