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
// Serial reference implementation of the batch kernels. Plain loops, no
// OpenMP. The accumulation order per element (ascending batch index)
// matches the parallel kernels, so both paths must agree bit for bit;
// tests enforce that.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cec/kernels.hpp"

namespace cec {
namespace refimpl {

void batch_forward(const Model& m, const float* features,
                   std::span<const int64_t> rows, BatchBuffers& b) {
  const int n = static_cast<int>(rows.size());
  b.resize(m, n);
  const int in_dim = m.cfg.input_dim;
  const int emb = m.embedding_dim();
  const int classes = m.cfg.num_classes;
  const bool hidden = m.cfg.kind == ModelKind::kOneHidden;
  const int hid = hidden ? m.cfg.hidden_dim : 0;

  for (int i = 0; i < n; ++i) {
    const float* src = features + rows[i] * static_cast<int64_t>(in_dim);
    double* xi = b.x.data() + static_cast<size_t>(i) * in_dim;
    for (int d = 0; d < in_dim; ++d) xi[d] = static_cast<double>(src[d]);

    const double* e = xi;
    if (hidden) {
      double* hp = b.hpre.data() + static_cast<size_t>(i) * hid;
      double* hh = b.h.data() + static_cast<size_t>(i) * hid;
      for (int u = 0; u < hid; ++u) {
        const double* wrow = m.w1.data() + static_cast<size_t>(u) * in_dim;
        double acc = m.b1[u];
        for (int d = 0; d < in_dim; ++d) acc += wrow[d] * xi[d];
        hp[u] = acc;
        hh[u] = std::tanh(acc);
      }
      e = hh;
    }

    double norm_sq = 0.0;
    for (int d = 0; d < emb; ++d) norm_sq += e[d] * e[d];
    if (norm_sq == 0.0)
      throw std::invalid_argument("zero embedding in batch row " +
                                  std::to_string(rows[i]));
    const double inv = 1.0 / std::sqrt(norm_sq);
    b.inv_norm[i] = inv;
    double* eh = b.e_hat.data() + static_cast<size_t>(i) * emb;
    for (int d = 0; d < emb; ++d) eh[d] = e[d] * inv;

    double* cr = b.cosines.data() + static_cast<size_t>(i) * classes;
    for (int j = 0; j < classes; ++j) {
      const double* wj = m.head.row(j);
      double dot = 0.0;
      for (int d = 0; d < emb; ++d) dot += eh[d] * wj[d];
      cr[j] = std::clamp(dot, -1.0, 1.0);
    }
  }
}

BatchLossStats batch_loss_grad(const Model& m, const LossConfig& cfg,
                               std::span<const int32_t> labels,
                               const uint8_t* mask, double upstream_scale,
                               BatchBuffers& b) {
  const int n = b.batch;
  const int emb = m.embedding_dim();
  const int classes = m.cfg.num_classes;
  const bool hidden = m.cfg.kind == ModelKind::kOneHidden;
  const int hid = hidden ? m.cfg.hidden_dim : 0;

  BatchLossStats stats;
  for (int i = 0; i < n; ++i) {
    double* gc = b.gcos.data() + static_cast<size_t>(i) * classes;
    double* gei = b.ge.data() + static_cast<size_t>(i) * emb;
    if (mask && !mask[i]) {
      b.loss[i] = 0.0;
      std::fill(gc, gc + classes, 0.0);
      std::fill(gei, gei + emb, 0.0);
      if (hidden) {
        double* gp = b.gpre.data() + static_cast<size_t>(i) * hid;
        std::fill(gp, gp + hid, 0.0);
      }
      continue;
    }
    b.loss[i] =
        aam_loss_grad(b.cosine_row(i, classes), labels[i], cfg, upstream_scale,
                      {gc, static_cast<size_t>(classes)});

    for (int d = 0; d < emb; ++d) {
      double acc = 0.0;
      for (int j = 0; j < classes; ++j) acc += gc[j] * m.head.row(j)[d];
      gei[d] = acc;
    }
    const double* eh = b.e_hat.data() + static_cast<size_t>(i) * emb;
    double dot = 0.0;
    for (int d = 0; d < emb; ++d) dot += eh[d] * gei[d];
    const double inv = b.inv_norm[i];
    for (int d = 0; d < emb; ++d) gei[d] = (gei[d] - eh[d] * dot) * inv;

    if (hidden) {
      double* gp = b.gpre.data() + static_cast<size_t>(i) * hid;
      const double* hh = b.h.data() + static_cast<size_t>(i) * hid;
      for (int u = 0; u < hid; ++u) gp[u] = gei[u] * (1.0 - hh[u] * hh[u]);
    }

    stats.masked_loss_sum += b.loss[i];
    stats.masked_count += 1;
  }
  return stats;
}

void batch_accumulate_grads(const Model& m, const uint8_t* mask,
                            const BatchBuffers& b, ModelGrads& grads) {
  const int n = b.batch;
  const int in_dim = m.cfg.input_dim;
  const int emb = m.embedding_dim();
  const int classes = m.cfg.num_classes;
  const bool hidden = m.cfg.kind == ModelKind::kOneHidden;
  const int hid = hidden ? m.cfg.hidden_dim : 0;

  for (int j = 0; j < classes; ++j) {
    double* grow = grads.head.data() + static_cast<size_t>(j) * emb;
    for (int i = 0; i < n; ++i) {
      if (mask && !mask[i]) continue;
      const double g = b.gcos[static_cast<size_t>(i) * classes + j];
      const double* eh = b.e_hat.data() + static_cast<size_t>(i) * emb;
      for (int d = 0; d < emb; ++d) grow[d] += g * eh[d];
    }
  }

  if (hidden) {
    for (int u = 0; u < hid; ++u) {
      double* wrow = grads.w1.data() + static_cast<size_t>(u) * in_dim;
      for (int i = 0; i < n; ++i) {
        if (mask && !mask[i]) continue;
        const double g = b.gpre[static_cast<size_t>(i) * hid + u];
        const double* xi = b.x.data() + static_cast<size_t>(i) * in_dim;
        for (int d = 0; d < in_dim; ++d) wrow[d] += g * xi[d];
        grads.b1[u] += g;
      }
    }
  }
}

}  // namespace refimpl
}  // namespace cec
