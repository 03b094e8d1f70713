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

#ifndef CEC_KERNELS_HPP_
#define CEC_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "cec/model.hpp"

namespace cec {

enum class ExecMode { kSerial, kParallel };

const char* to_string(ExecMode e);

// Scratch space for one batch. Laid out sample-major so both kernel
// variants accumulate every parameter-gradient element in ascending batch
// order; results are then bit-identical regardless of thread count.
struct BatchBuffers {
  int batch = 0;
  std::vector<double> x;         // batch x input_dim
  std::vector<double> hpre;      // batch x hidden_dim (hidden model only)
  std::vector<double> h;         // batch x hidden_dim
  std::vector<double> e_hat;     // batch x emb_dim, normalized embedding
  std::vector<double> inv_norm;  // batch
  std::vector<double> cosines;   // batch x num_classes
  std::vector<double> gcos;      // batch x num_classes
  std::vector<double> ge;        // batch x emb_dim
  std::vector<double> gpre;      // batch x hidden_dim
  std::vector<double> loss;      // batch

  void resize(const Model& m, int batch_size);
  std::span<const double> cosine_row(int i, int num_classes) const {
    return {cosines.data() + static_cast<size_t>(i) * num_classes,
            static_cast<size_t>(num_classes)};
  }
};

struct BatchLossStats {
  double masked_loss_sum = 0.0;
  int64_t masked_count = 0;
};

// The three batch kernels. `features` is the dataset feature block
// (row-major float32); `rows` selects the samples of this batch.
// `mask` selects gradient participation per batch slot; nullptr means
// everyone participates. upstream_scale is the shared loss weight
// (1 / batch size). Gradients accumulate into `grads`.

// OpenMP implementations.
namespace kernels {
void batch_forward(const Model& m, const float* features,
                   std::span<const int64_t> rows, BatchBuffers& b);
BatchLossStats batch_loss_grad(const Model& m, const LossConfig& cfg,
                               std::span<const int32_t> labels,
                               const uint8_t* mask, double upstream_scale,
                               BatchBuffers& b);
void batch_accumulate_grads(const Model& m, const uint8_t* mask,
                            const BatchBuffers& b, ModelGrads& grads);
}  // namespace kernels

// Plain serial reference, kept for testing; must match the OpenMP
// kernels bit for bit.
namespace refimpl {
void batch_forward(const Model& m, const float* features,
                   std::span<const int64_t> rows, BatchBuffers& b);
BatchLossStats batch_loss_grad(const Model& m, const LossConfig& cfg,
                               std::span<const int32_t> labels,
                               const uint8_t* mask, double upstream_scale,
                               BatchBuffers& b);
void batch_accumulate_grads(const Model& m, const uint8_t* mask,
                            const BatchBuffers& b, ModelGrads& grads);
}  // namespace refimpl

// ExecMode dispatchers used by the trainer.
void batch_forward(const Model& m, const float* features,
                   std::span<const int64_t> rows, BatchBuffers& b,
                   ExecMode exec);
BatchLossStats batch_loss_grad(const Model& m, const LossConfig& cfg,
                               std::span<const int32_t> labels,
                               const uint8_t* mask, double upstream_scale,
                               BatchBuffers& b, ExecMode exec);
void batch_accumulate_grads(const Model& m, const uint8_t* mask,
                            const BatchBuffers& b, ModelGrads& grads,
                            ExecMode exec);

}  // namespace cec

#endif  // CEC_KERNELS_HPP_
