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

#include "cec/aam_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cec {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// Margin-adjusted logit for the true class, before scaling.
double margin_adjust(double c, const LossConfig& cfg) {
  if (cfg.form == MarginForm::kSubtractCosine) return c - cfg.margin;
  // cos(theta + d) = cos(theta) cos(d) - sin(theta) sin(d)
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - c * c));
  return c * std::cos(cfg.margin) - sin_theta * std::sin(cfg.margin);
}

// d(margin_adjust)/dc. For the angular form the true derivative diverges
// as |c| -> 1; the denominator is floored for numerical safety.
double margin_adjust_deriv(double c, const LossConfig& cfg) {
  if (cfg.form == MarginForm::kSubtractCosine) return 1.0;
  const double sin_theta =
      std::max(std::sqrt(std::max(0.0, 1.0 - c * c)), 1e-12);
  return std::cos(cfg.margin) + c * std::sin(cfg.margin) / sin_theta;
}

void check_row(std::span<const double> cosine_row, int true_label) {
  const int k = static_cast<int>(cosine_row.size());
  if (k < 2) throw std::invalid_argument("cosine row needs at least 2 classes");
  if (true_label < 0 || true_label >= k)
    throw std::invalid_argument("true_label out of range");
  for (double c : cosine_row)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite cosine");
}

// Shared forward/backward core. grad_out may be empty (forward only).
double loss_core(std::span<const double> cosine_row, int true_label,
                 const LossConfig& cfg, double upstream,
                 std::span<double> grad_out) {
  const int k = static_cast<int>(cosine_row.size());
  const double s = cfg.scale;

  const double adj_y = margin_adjust(cosine_row[true_label], cfg);
  double max_logit = s * adj_y;
  for (int j = 0; j < k; ++j) {
    if (j == true_label) continue;
    max_logit = std::max(max_logit, s * cosine_row[j]);
  }

  // S collects the non-true terms so that the loss survives when the true
  // class dominates (loss = log1p(S) instead of log(1 + S)).
  double other_sum = 0.0;
  for (int j = 0; j < k; ++j) {
    if (j == true_label) continue;
    other_sum += std::exp(s * cosine_row[j] - max_logit);
  }
  const double a_y = s * adj_y - max_logit;
  const double e_y = std::exp(a_y);
  const double denom = e_y + other_sum;

  double loss;
  if (a_y == 0.0) {
    loss = std::log1p(other_sum);
  } else {
    loss = std::log(denom) - a_y;
  }

  if (!grad_out.empty()) {
    // p_y - 1 == -other_sum / denom, computed without cancellation.
    const double gy = -s * (other_sum / denom) *
                      margin_adjust_deriv(cosine_row[true_label], cfg);
    for (int j = 0; j < k; ++j) {
      if (j == true_label) {
        grad_out[j] = gy * upstream;
      } else {
        const double p_j = std::exp(s * cosine_row[j] - max_logit) / denom;
        grad_out[j] = s * p_j * upstream;
      }
    }
  }
  return loss;
}

}  // namespace

const char* to_string(MarginForm f) {
  return f == MarginForm::kSubtractCosine ? "cos-sub" : "angle-add";
}

void LossConfig::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("loss scale must be positive");
  if (!(margin >= 0.0) || margin >= kHalfPi)
    throw std::invalid_argument("loss margin must be in [0, pi/2)");
}

void HeadWeights::renormalize_rows() {
  for (int j = 0; j < num_classes; ++j) {
    double* r = row(j);
    double norm_sq = 0.0;
    for (int d = 0; d < dim; ++d) norm_sq += r[d] * r[d];
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) throw std::runtime_error("zero head weight row");
    const double inv = 1.0 / norm;
    for (int d = 0; d < dim; ++d) r[d] *= inv;
  }
}

HeadWeights HeadWeights::random(int num_classes, int dim, Rng& rng) {
  HeadWeights h;
  h.num_classes = num_classes;
  h.dim = dim;
  h.w.resize(static_cast<size_t>(num_classes) * dim);
  for (auto& v : h.w) v = rng.normal();
  h.renormalize_rows();
  return h;
}

std::vector<double> cosine_logits(std::span<const double> embedding,
                                  const HeadWeights& weights) {
  const int dim = weights.dim;
  if (static_cast<int>(embedding.size()) != dim)
    throw std::invalid_argument("embedding dimension mismatch: " +
                                std::to_string(embedding.size()) + " vs " +
                                std::to_string(dim));
  double norm_sq = 0.0;
  for (double v : embedding) norm_sq += v * v;
  if (norm_sq == 0.0) throw std::invalid_argument("zero embedding");
  const double inv_norm = 1.0 / std::sqrt(norm_sq);

  std::vector<double> cosines(weights.num_classes);
  for (int j = 0; j < weights.num_classes; ++j) {
    const double* r = weights.row(j);
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) dot += embedding[d] * inv_norm * r[d];
    cosines[j] = std::clamp(dot, -1.0, 1.0);
  }
  return cosines;
}

LossOutput aam_forward(std::span<const double> cosine_row, int true_label,
                       const LossConfig& config) {
  check_row(cosine_row, true_label);
  LossOutput out;
  out.cosine_row.assign(cosine_row.begin(), cosine_row.end());
  out.grad_cosines.resize(cosine_row.size());
  out.loss = loss_core(cosine_row, true_label, config, 1.0, out.grad_cosines);
  out.s_p = cosine_row[true_label];
  double s_n = -2.0;
  for (int j = 0; j < static_cast<int>(cosine_row.size()); ++j)
    if (j != true_label && cosine_row[j] > s_n) s_n = cosine_row[j];
  out.s_n = s_n;
  return out;
}

std::vector<double> aam_backward(std::span<const double> cosine_row,
                                 int true_label, const LossConfig& config,
                                 double upstream) {
  check_row(cosine_row, true_label);
  std::vector<double> grad(cosine_row.size());
  loss_core(cosine_row, true_label, config, upstream, grad);
  return grad;
}

double aam_loss_grad(std::span<const double> cosine_row, int true_label,
                     const LossConfig& config, double upstream,
                     std::span<double> grad_out) {
  return loss_core(cosine_row, true_label, config, upstream, grad_out);
}

}  // namespace cec
