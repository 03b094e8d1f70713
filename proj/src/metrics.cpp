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

#include "cec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cec/rng.hpp"

namespace cec {

DetectionReport detection_metrics(std::span<const int64_t> flagged_ids,
                                  std::span<const uint8_t> is_noise) {
  const int64_t n = static_cast<int64_t>(is_noise.size());
  std::vector<uint8_t> flagged(is_noise.size(), 0);
  for (int64_t id : flagged_ids) {
    if (id < 0 || id >= n)
      throw std::invalid_argument("flagged id " + std::to_string(id) +
                                  " outside dataset of " + std::to_string(n));
    flagged[static_cast<size_t>(id)] = 1;
  }

  DetectionReport r;
  for (int64_t i = 0; i < n; ++i) {
    const bool f = flagged[static_cast<size_t>(i)];
    const bool noisy = is_noise[static_cast<size_t>(i)];
    if (f && noisy)
      ++r.tp;
    else if (f && !noisy)
      ++r.fp;
    else if (!f && noisy)
      ++r.fn;
    else
      ++r.tn;
  }
  r.none_flagged = (r.tp + r.fp) == 0;
  r.precision = r.none_flagged
                    ? 0.0
                    : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  r.recall = (r.tp + r.fn) == 0
                 ? 1.0
                 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.accuracy =
      n > 0 ? static_cast<double>(r.tp + r.tn) / static_cast<double>(n) : 0.0;
  return r;
}

double eer(std::span<const Trial> trials) {
  std::vector<double> targets, nontargets;
  for (const Trial& t : trials) {
    if (!std::isfinite(t.score))
      throw std::invalid_argument("non-finite trial score");
    (t.is_target ? targets : nontargets).push_back(t.score);
  }
  if (targets.empty() || nontargets.empty())
    throw std::runtime_error(
        "EER undefined: need at least one target and one non-target trial");

  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + nontargets.size());
  thresholds.insert(thresholds.end(), targets.begin(), targets.end());
  thresholds.insert(thresholds.end(), nontargets.begin(), nontargets.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double nt = static_cast<double>(targets.size());
  const double nn = static_cast<double>(nontargets.size());

  // Accept when score >= threshold. At the lowest threshold FAR = 1 and
  // FRR = 0, so FAR - FRR starts positive; a sentinel above the top score
  // gives FAR = 0, FRR = 1, so a sign change always exists.
  double prev_far = 1.0, prev_frr = 0.0;
  const size_t stops = thresholds.size() + 1;
  for (size_t k = 0; k < stops; ++k) {
    double far, frr;
    if (k < thresholds.size()) {
      const double t = thresholds[k];
      const auto non_below =
          std::lower_bound(nontargets.begin(), nontargets.end(), t) -
          nontargets.begin();
      const auto tar_below =
          std::lower_bound(targets.begin(), targets.end(), t) - targets.begin();
      far = (nn - static_cast<double>(non_below)) / nn;
      frr = static_cast<double>(tar_below) / nt;
    } else {
      far = 0.0;
      frr = 1.0;
    }
    const double diff = far - frr;
    if (diff <= 0.0) {
      const double prev_diff = prev_far - prev_frr;
      if (prev_diff <= 0.0) return prev_far;  // crossed exactly at previous stop
      const double alpha = prev_diff / (prev_diff - diff);
      return prev_far + alpha * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return 0.0;  // unreachable: sentinel always crosses
}

std::vector<Trial> make_embedding_trials(std::span<const double> embeddings,
                                         int emb_dim,
                                         std::span<const int32_t> labels,
                                         uint64_t seed) {
  const int64_t m = static_cast<int64_t>(labels.size());
  if (emb_dim <= 0 || static_cast<int64_t>(embeddings.size()) != m * emb_dim)
    throw std::invalid_argument("embedding block shape mismatch");

  auto cosine = [&](int64_t a, int64_t b) {
    const double* ea = embeddings.data() + a * emb_dim;
    const double* eb = embeddings.data() + b * emb_dim;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int d = 0; d < emb_dim; ++d) {
      dot += ea[d] * eb[d];
      na += ea[d] * ea[d];
      nb += eb[d] * eb[d];
    }
    const double denom = std::sqrt(na) * std::sqrt(nb);
    return denom > 0.0 ? dot / denom : 0.0;
  };

  std::vector<Trial> trials;
  for (int64_t a = 0; a < m; ++a)
    for (int64_t b = a + 1; b < m; ++b)
      if (labels[a] == labels[b]) trials.push_back({cosine(a, b), true});

  const size_t num_targets = trials.size();
  if (num_targets == 0)
    throw std::runtime_error("no same-label pairs for target trials");
  if (std::adjacent_find(labels.begin(), labels.end(),
                         std::not_equal_to<>()) == labels.end())
    throw std::runtime_error("single-label trial pool has no non-targets");

  Rng rng(seed);
  size_t drawn = 0;
  while (drawn < num_targets) {
    const auto a = static_cast<int64_t>(rng.below(static_cast<uint64_t>(m)));
    const auto b = static_cast<int64_t>(rng.below(static_cast<uint64_t>(m)));
    if (a == b || labels[a] == labels[b]) continue;
    trials.push_back({cosine(a, b), false});
    ++drawn;
  }
  return trials;
}

}  // namespace cec
