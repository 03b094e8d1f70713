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

#ifndef CEC_CURRICULUM_HPP_
#define CEC_CURRICULUM_HPP_

#include "cec/taxonomy.hpp"

namespace cec {

// Piecewise-linear retention-threshold ramp: 0 through warm-up, then
// 0 -> s1 over (e1, e2], then s1 -> s2 over (e2, e3], then flat at s2.
struct CurriculumSchedule {
  int e1 = 6;
  int e2 = 10;
  int e3 = 100;
  double s1 = 0.6;
  double s2 = 1.0;
  void validate() const;  // e1 < e2 < e3 and 0 <= s1 <= s2
};

// tau_m for epoch m >= 1. Breakpoint values are exact: m == e2 yields s1
// (the ratio (m-e1)/(e2-e1) is computed first and equals 1.0 there) and
// m >= e3 returns s2 directly.
double retention_threshold(int m, const CurriculumSchedule& schedule);

// Sample difficulty 1 - s_p, in [0, 2].
double difficulty(double s_p);

// Whether a sample participates in backpropagation at epoch m.
// Warm-up (m <= e1) admits everything; afterwards easy samples always
// participate, inconsistent ones never do, and hard ones require
// difficulty strictly below tau_m.
bool gradient_mask(SampleClass cls, double s_p, int m,
                   const CurriculumSchedule& schedule);

}  // namespace cec

#endif  // CEC_CURRICULUM_HPP_
