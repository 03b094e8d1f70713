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

#ifndef CEC_SERIALIZE_HPP_
#define CEC_SERIALIZE_HPP_

#include <json.hpp>

#include "cec/aam_loss.hpp"
#include "cec/curriculum.hpp"
#include "cec/detector.hpp"
#include "cec/metrics.hpp"
#include "cec/model.hpp"
#include "cec/synth_data.hpp"
#include "cec/taxonomy.hpp"

namespace cec {

// JSON conversions for every config and report record that crosses a
// file boundary. Enum fields serialize as strings.

void to_json(nlohmann::json& j, const ClassifierThresholds& t);
void from_json(const nlohmann::json& j, ClassifierThresholds& t);

void to_json(nlohmann::json& j, const DetectorConfig& c);
void from_json(const nlohmann::json& j, DetectorConfig& c);

void to_json(nlohmann::json& j, const CurriculumSchedule& s);
void from_json(const nlohmann::json& j, CurriculumSchedule& s);

void to_json(nlohmann::json& j, const LossConfig& c);
void from_json(const nlohmann::json& j, LossConfig& c);

void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

void to_json(nlohmann::json& j, const RemovalEvent& e);
void from_json(const nlohmann::json& j, RemovalEvent& e);

void to_json(nlohmann::json& j, const DetectionReport& r);
void from_json(const nlohmann::json& j, DetectionReport& r);

MarginForm margin_form_from_string(const std::string& s);
ModelKind model_kind_from_string(const std::string& s);

}  // namespace cec

#endif  // CEC_SERIALIZE_HPP_
