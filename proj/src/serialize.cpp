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

#include "cec/serialize.hpp"

#include <stdexcept>

namespace cec {

void to_json(nlohmann::json& j, const ClassifierThresholds& t) {
  j = {{"tau_p", t.tau_p}, {"tau_n", t.tau_n}};
}
void from_json(const nlohmann::json& j, ClassifierThresholds& t) {
  j.at("tau_p").get_to(t.tau_p);
  j.at("tau_n").get_to(t.tau_n);
}

void to_json(nlohmann::json& j, const DetectorConfig& c) {
  j = {{"tau_cic", c.tau_cic}, {"tau_tic", c.tau_tic}};
}
void from_json(const nlohmann::json& j, DetectorConfig& c) {
  j.at("tau_cic").get_to(c.tau_cic);
  j.at("tau_tic").get_to(c.tau_tic);
}

void to_json(nlohmann::json& j, const CurriculumSchedule& s) {
  j = {{"e1", s.e1}, {"e2", s.e2}, {"e3", s.e3}, {"s1", s.s1}, {"s2", s.s2}};
}
void from_json(const nlohmann::json& j, CurriculumSchedule& s) {
  j.at("e1").get_to(s.e1);
  j.at("e2").get_to(s.e2);
  j.at("e3").get_to(s.e3);
  j.at("s1").get_to(s.s1);
  j.at("s2").get_to(s.s2);
}

void to_json(nlohmann::json& j, const LossConfig& c) {
  j = {{"scale", c.scale},
       {"margin", c.margin},
       {"margin_form", to_string(c.form)}};
}
void from_json(const nlohmann::json& j, LossConfig& c) {
  j.at("scale").get_to(c.scale);
  j.at("margin").get_to(c.margin);
  if (j.contains("margin_form"))
    c.form = margin_form_from_string(j.at("margin_form").get<std::string>());
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = {{"clean_classes", s.clean_classes},
       {"samples_per_class", s.samples_per_class},
       {"dim", s.dim},
       {"cluster_spread", s.cluster_spread},
       {"class_separation", s.class_separation},
       {"extra_classes", s.extra_classes},
       {"ncr", s.ncr},
       {"seed", s.seed}};
}
void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  j.at("clean_classes").get_to(s.clean_classes);
  j.at("samples_per_class").get_to(s.samples_per_class);
  j.at("dim").get_to(s.dim);
  j.at("cluster_spread").get_to(s.cluster_spread);
  j.at("class_separation").get_to(s.class_separation);
  j.at("extra_classes").get_to(s.extra_classes);
  j.at("ncr").get_to(s.ncr);
  j.at("seed").get_to(s.seed);
}

void to_json(nlohmann::json& j, const RemovalEvent& e) {
  j = {{"sample_id", e.sample_id},
       {"epoch", e.epoch},
       {"trigger", to_string(e.trigger)},
       {"cic", e.cic},
       {"tic", e.tic}};
}
void from_json(const nlohmann::json& j, RemovalEvent& e) {
  j.at("sample_id").get_to(e.sample_id);
  j.at("epoch").get_to(e.epoch);
  j.at("cic").get_to(e.cic);
  j.at("tic").get_to(e.tic);
  const std::string t = j.at("trigger").get<std::string>();
  if (t == "CIC")
    e.trigger = RemovalTrigger::kCic;
  else if (t == "TIC")
    e.trigger = RemovalTrigger::kTic;
  else if (t == "both")
    e.trigger = RemovalTrigger::kBoth;
  else
    throw std::invalid_argument("unknown removal trigger: " + t);
}

void to_json(nlohmann::json& j, const DetectionReport& r) {
  j = {{"precision", r.precision},
       {"recall", r.recall},
       {"f1", r.f1},
       {"accuracy", r.accuracy},
       {"tp", r.tp},
       {"fp", r.fp},
       {"tn", r.tn},
       {"fn", r.fn},
       {"none_flagged", r.none_flagged}};
}
void from_json(const nlohmann::json& j, DetectionReport& r) {
  j.at("precision").get_to(r.precision);
  j.at("recall").get_to(r.recall);
  j.at("f1").get_to(r.f1);
  j.at("accuracy").get_to(r.accuracy);
  j.at("tp").get_to(r.tp);
  j.at("fp").get_to(r.fp);
  j.at("tn").get_to(r.tn);
  j.at("fn").get_to(r.fn);
  j.at("none_flagged").get_to(r.none_flagged);
}

MarginForm margin_form_from_string(const std::string& s) {
  if (s == "cos-sub") return MarginForm::kSubtractCosine;
  if (s == "angle-add") return MarginForm::kAddAngle;
  throw std::invalid_argument("unknown margin form: " + s +
                              " (expected cos-sub or angle-add)");
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "linear") return ModelKind::kLinearHead;
  if (s == "hidden") return ModelKind::kOneHidden;
  throw std::invalid_argument("unknown model kind: " + s +
                              " (expected linear or hidden)");
}

}  // namespace cec
