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

#include "cec/curriculum.hpp"

#include <cmath>
#include <stdexcept>

namespace cec {

void CurriculumSchedule::validate() const {
  if (!(e1 < e2 && e2 < e3))
    throw std::invalid_argument("curriculum requires e1 < e2 < e3");
  if (!(s1 >= 0.0 && s1 <= s2) || !std::isfinite(s1) || !std::isfinite(s2))
    throw std::invalid_argument("curriculum requires 0 <= s1 <= s2");
}

double retention_threshold(int m, const CurriculumSchedule& schedule) {
  if (m <= schedule.e1) return 0.0;
  if (m <= schedule.e2) {
    const double frac = static_cast<double>(m - schedule.e1) /
                        static_cast<double>(schedule.e2 - schedule.e1);
    return schedule.s1 * frac;
  }
  if (m >= schedule.e3) return schedule.s2;
  const double frac = static_cast<double>(m - schedule.e2) /
                      static_cast<double>(schedule.e3 - schedule.e2);
  return schedule.s1 + (schedule.s2 - schedule.s1) * frac;
}

double difficulty(double s_p) { return 1.0 - s_p; }

bool gradient_mask(SampleClass cls, double s_p, int m,
                   const CurriculumSchedule& schedule) {
  if (m <= schedule.e1) return true;  // warm-up: everything trains
  switch (cls) {
    case SampleClass::kEasy:
      return true;
    case SampleClass::kInconsistent:
      return false;
    case SampleClass::kHard:
      return difficulty(s_p) < retention_threshold(m, schedule);
  }
  return false;
}

}  // namespace cec
