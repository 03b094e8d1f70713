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

#include "cec/synth_data.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cec/rng.hpp"
#include "cec/serialize.hpp"

static_assert(std::endian::native == std::endian::little,
              "features.f32 is written as raw little-endian float32");

namespace cec {

namespace {

constexpr int kMaxCentroidTries = 10000;

// Unit-norm centroids with pairwise angle >= separation.
std::vector<double> draw_centroids(int count, int dim, double separation,
                                   Rng& rng) {
  const double max_dot = std::cos(separation);
  std::vector<double> centroids(static_cast<size_t>(count) * dim);
  std::vector<double> v(dim);
  for (int c = 0; c < count; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxCentroidTries && !placed; ++attempt) {
      double norm_sq = 0.0;
      for (int d = 0; d < dim; ++d) {
        v[d] = rng.normal();
        norm_sq += v[d] * v[d];
      }
      if (norm_sq == 0.0) continue;
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (int d = 0; d < dim; ++d) v[d] *= inv;

      bool ok = true;
      for (int p = 0; p < c && ok; ++p) {
        double dot = 0.0;
        for (int d = 0; d < dim; ++d) dot += v[d] * centroids[p * dim + d];
        if (dot > max_dot) ok = false;
      }
      if (ok) {
        std::copy(v.begin(), v.end(), centroids.begin() + c * dim);
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error(
          "centroid placement failed: class_separation = " +
          std::to_string(separation) + " rad infeasible for " +
          std::to_string(count) + " centroids in dim " + std::to_string(dim));
  }
  return centroids;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (clean_classes < 2) throw std::invalid_argument("clean_classes must be >= 2");
  if (samples_per_class < 1)
    throw std::invalid_argument("samples_per_class must be >= 1");
  if (dim < 2) throw std::invalid_argument("dim must be >= 2");
  if (!(ncr >= 0.0) || !std::isfinite(ncr))
    throw std::invalid_argument("ncr must be >= 0");
  if (ncr > 0.0 && extra_classes < 1)
    throw std::invalid_argument("ncr > 0 requires extra_classes >= 1");
  if (extra_classes < 0) throw std::invalid_argument("extra_classes must be >= 0");
  if (!(cluster_spread >= 0.0))
    throw std::invalid_argument("cluster_spread must be >= 0");
  if (!(class_separation >= 0.0))
    throw std::invalid_argument("class_separation must be >= 0");
}

int64_t SyntheticSpec::noise_count() const {
  return std::llround(ncr * static_cast<double>(clean_count()));
}

LabeledDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const int k = spec.clean_classes;
  const int dim = spec.dim;
  // Extra centroids are drawn even when unused so the clean block is
  // identical across NCR values at a fixed seed.
  const int total_centroids = k + spec.extra_classes;
  const std::vector<double> centroids =
      draw_centroids(total_centroids, dim, spec.class_separation, rng);

  LabeledDataset ds;
  ds.spec = spec;
  ds.dim = dim;
  ds.num_samples = spec.total_count();
  ds.features.resize(static_cast<size_t>(ds.num_samples) * dim);
  ds.observed_labels.resize(static_cast<size_t>(ds.num_samples));
  ds.is_noise.resize(static_cast<size_t>(ds.num_samples));
  ds.source_class.resize(static_cast<size_t>(ds.num_samples));

  int64_t idx = 0;
  for (int c = 0; c < k; ++c) {
    for (int t = 0; t < spec.samples_per_class; ++t, ++idx) {
      float* row = ds.features.data() + idx * dim;
      const double* mu = centroids.data() + static_cast<size_t>(c) * dim;
      for (int d = 0; d < dim; ++d)
        row[d] =
            static_cast<float>(mu[d] + spec.cluster_spread * rng.normal());
      ds.observed_labels[idx] = c;
      ds.is_noise[idx] = 0;
      ds.source_class[idx] = c;
    }
  }

  const int64_t noisy = spec.noise_count();
  for (int64_t t = 0; t < noisy; ++t, ++idx) {
    const int src = k + static_cast<int>(rng.below(spec.extra_classes));
    const int label = static_cast<int>(rng.below(k));
    float* row = ds.features.data() + idx * dim;
    const double* mu = centroids.data() + static_cast<size_t>(src) * dim;
    for (int d = 0; d < dim; ++d)
      row[d] = static_cast<float>(mu[d] + spec.cluster_spread * rng.normal());
    ds.observed_labels[idx] = label;
    ds.is_noise[idx] = 1;
    ds.source_class[idx] = src;
  }
  return ds;
}

double ncr_to_p(double ncr) {
  if (!(ncr >= 0.0)) throw std::invalid_argument("ncr must be >= 0");
  return ncr / (ncr + 1.0);
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    nlohmann::json j;
    to_json(j, ds.spec);
    j["num_samples"] = ds.num_samples;
    j["clean_count"] = ds.spec.clean_count();
    j["noise_count"] = ds.spec.noise_count();
    std::ofstream out(dir / "spec.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "spec.json").string());
    out << j.dump(2) << "\n";
  }
  {
    std::ofstream out(dir / "features.f32", std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + (dir / "features.f32").string());
    out.write(reinterpret_cast<const char*>(ds.features.data()),
              static_cast<std::streamsize>(ds.features.size() * sizeof(float)));
  }
  {
    std::ofstream out(dir / "labels.csv");
    if (!out)
      throw std::runtime_error("cannot write " + (dir / "labels.csv").string());
    out << "sample_id,observed_label,is_noise,source_class\n";
    for (int64_t i = 0; i < ds.num_samples; ++i)
      out << i << ',' << ds.observed_labels[i] << ','
          << static_cast<int>(ds.is_noise[i]) << ',' << ds.source_class[i]
          << '\n';
  }
}

LabeledDataset load_dataset(const std::filesystem::path& dir) {
  LabeledDataset ds;
  int64_t expected = 0;
  {
    std::ifstream in(dir / "spec.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "spec.json").string());
    nlohmann::json j = nlohmann::json::parse(in);
    from_json(j, ds.spec);
    expected = j.at("num_samples").get<int64_t>();
  }
  ds.spec.validate();
  ds.dim = ds.spec.dim;
  ds.num_samples = expected;
  if (expected != ds.spec.total_count())
    throw std::runtime_error("spec.json num_samples inconsistent with spec");

  {
    std::ifstream in(dir / "features.f32", std::ios::binary);
    if (!in)
      throw std::runtime_error("cannot read " + (dir / "features.f32").string());
    ds.features.resize(static_cast<size_t>(expected) * ds.dim);
    in.read(reinterpret_cast<char*>(ds.features.data()),
            static_cast<std::streamsize>(ds.features.size() * sizeof(float)));
    if (in.gcount() !=
        static_cast<std::streamsize>(ds.features.size() * sizeof(float)))
      throw std::runtime_error("features.f32 truncated");
  }
  {
    std::ifstream in(dir / "labels.csv");
    if (!in)
      throw std::runtime_error("cannot read " + (dir / "labels.csv").string());
    std::string line;
    std::getline(in, line);  // header
    ds.observed_labels.reserve(static_cast<size_t>(expected));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      long long id;
      int label, noise, src;
      if (std::sscanf(line.c_str(), "%lld,%d,%d,%d", &id, &label, &noise,
                      &src) != 4)
        throw std::runtime_error("labels.csv: bad row: " + line);
      ds.observed_labels.push_back(label);
      ds.is_noise.push_back(static_cast<uint8_t>(noise));
      ds.source_class.push_back(src);
    }
    if (static_cast<int64_t>(ds.observed_labels.size()) != expected)
      throw std::runtime_error("labels.csv row count mismatch");
  }
  return ds;
}

}  // namespace cec
