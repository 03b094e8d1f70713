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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cec/curriculum.hpp"
#include "cec/rng.hpp"

using cec::CurriculumSchedule;
using cec::SampleClass;

TEST_CASE("retention threshold golden values") {
  const CurriculumSchedule s;  // 6 / 10 / 100, 0.6 -> 1.0
  CHECK(cec::retention_threshold(1, s) == 0.0);
  CHECK(cec::retention_threshold(6, s) == 0.0);
  CHECK(cec::retention_threshold(7, s) == 0.15);
  CHECK(cec::retention_threshold(8, s) == 0.3);
  CHECK(cec::retention_threshold(10, s) == 0.6);
  CHECK(cec::retention_threshold(55, s) == 0.8);
  CHECK(cec::retention_threshold(100, s) == 1.0);
  CHECK(cec::retention_threshold(150, s) == 1.0);
}

TEST_CASE("schedule invariants") {
  CurriculumSchedule bad;
  bad.e1 = 10;
  bad.e2 = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = CurriculumSchedule{};
  bad.s1 = 1.2;
  bad.s2 = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(CurriculumSchedule{}.validate());
}

TEST_CASE("ramp is non-decreasing and exact at the breakpoints") {
  cec::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    CurriculumSchedule s;
    s.e1 = 1 + static_cast<int>(rng.below(10));
    s.e2 = s.e1 + 1 + static_cast<int>(rng.below(10));
    s.e3 = s.e2 + 1 + static_cast<int>(rng.below(100));
    s.s1 = rng.uniform01();
    s.s2 = s.s1 + rng.uniform01();
    s.validate();

    double prev = 0.0;
    for (int m = 1; m <= s.e3 + 10; ++m) {
      const double tau = cec::retention_threshold(m, s);
      CHECK(tau >= prev);
      prev = tau;
    }
    CHECK(cec::retention_threshold(s.e1, s) == 0.0);
    CHECK(cec::retention_threshold(s.e2, s) == s.s1);
    CHECK(cec::retention_threshold(s.e3, s) == s.s2);
    CHECK(cec::retention_threshold(s.e3 + 7, s) == s.s2);
  }
}

TEST_CASE("difficulty is 1 - s_p") {
  CHECK(cec::difficulty(1.0) == 0.0);
  CHECK(cec::difficulty(0.6) == 0.4);
  CHECK(cec::difficulty(-1.0) == 2.0);
}

TEST_CASE("gradient mask rules") {
  const CurriculumSchedule s;
  // Warm-up admits everything, even inconsistent samples.
  CHECK(cec::gradient_mask(SampleClass::kInconsistent, 0.9, 5, s));
  CHECK(cec::gradient_mask(SampleClass::kInconsistent, 0.9, 7, s) == false);
  CHECK(cec::gradient_mask(SampleClass::kHard, 0.5, 55, s));
  CHECK(cec::gradient_mask(SampleClass::kHard, 0.2, 8, s) == false);
  // Strict inequality: difficulty == tau excludes.
  CHECK(cec::gradient_mask(SampleClass::kHard, 1.0 - 0.3, 8, s) == false);
}

TEST_CASE("mask properties across epochs") {
  const CurriculumSchedule s;
  cec::Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(160));
    const double sp = 2.0 * rng.uniform01() - 1.0;
    CHECK(cec::gradient_mask(SampleClass::kEasy, sp, m, s));
    CHECK(cec::gradient_mask(SampleClass::kInconsistent, sp, m, s) ==
          (m <= s.e1));
  }
  // Hard participation is monotone in m for fixed s_p.
  for (int trial = 0; trial < 100; ++trial) {
    const double sp = 2.0 * rng.uniform01() - 1.0;
    bool seen = false;
    for (int m = 1; m <= 160; ++m) {
      const bool in = cec::gradient_mask(SampleClass::kHard, sp, m, s);
      if (m <= s.e1) {
        CHECK(in);
        continue;  // warm-up override, not part of the ramp
      }
      if (seen) CHECK(in);
      if (in) seen = true;
    }
  }
}
