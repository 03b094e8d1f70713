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

#ifndef CEC_AAM_LOSS_HPP_
#define CEC_AAM_LOSS_HPP_

#include <span>
#include <vector>

#include "cec/rng.hpp"

namespace cec {

// Two margin conventions exist for this family of losses. The default
// subtracts the margin from the cosine of the true class (additive-cosine
// form); the alternative adds the margin to the angle (arcface form).
enum class MarginForm {
  kSubtractCosine,  // cos(theta_y) - d
  kAddAngle,        // cos(theta_y + d)
};

const char* to_string(MarginForm f);

struct LossConfig {
  double scale = 32.0;
  double margin = 0.2;
  MarginForm form = MarginForm::kSubtractCosine;
  void validate() const;  // scale > 0, margin in [0, pi/2)
};

// K unit-norm class weight rows of embedding dimension `dim`.
struct HeadWeights {
  int num_classes = 0;
  int dim = 0;
  std::vector<double> w;  // row-major, num_classes x dim

  double* row(int j) { return w.data() + static_cast<size_t>(j) * dim; }
  const double* row(int j) const {
    return w.data() + static_cast<size_t>(j) * dim;
  }
  // Rescales every row to unit Euclidean norm. Call after optimizer steps.
  void renormalize_rows();
  // Random rows on the unit sphere, deterministic per rng state.
  static HeadWeights random(int num_classes, int dim, Rng& rng);
};

struct LossOutput {
  double loss = 0.0;
  double s_p = 0.0;  // margin-free cosine to the labeled class
  double s_n = 0.0;  // margin-free best cosine among other classes
  std::vector<double> cosine_row;
  std::vector<double> grad_cosines;  // dloss/dcos at upstream = 1
};

// cos(embedding, W_j) for every class. The embedding is normalized here,
// so callers may pass raw feature or hidden vectors. Entries are clamped
// to [-1, 1]. Throws std::invalid_argument on a zero embedding.
std::vector<double> cosine_logits(std::span<const double> embedding,
                                  const HeadWeights& weights);

// Margin-scaled softmax cross entropy over one cosine row, stabilized in
// log-sum-exp form. s_p/s_n are the margin-free cosines.
LossOutput aam_forward(std::span<const double> cosine_row, int true_label,
                       const LossConfig& config);

// d(loss)/d(cos_j) for every j, chained with `upstream`.
std::vector<double> aam_backward(std::span<const double> cosine_row,
                                 int true_label, const LossConfig& config,
                                 double upstream);

// Allocation-free fused forward+backward used by the batch kernels.
// Writes the upstream-scaled gradient into grad_out and returns the loss.
double aam_loss_grad(std::span<const double> cosine_row, int true_label,
                     const LossConfig& config, double upstream,
                     std::span<double> grad_out);

}  // namespace cec

#endif  // CEC_AAM_LOSS_HPP_
