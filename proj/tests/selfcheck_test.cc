/*
 * Copyright 2026 The ABC Bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "abc_bench/selfcheck.h"

#include "gtest/gtest.h"

namespace abc_bench {
namespace {

TEST(SelfCheck, AllIdentitiesPass) {
  SelfCheckOptions options;
  options.models = 10;
  for (const IdentityCheck& check : RunSelfCheck(options)) {
    EXPECT_TRUE(check.passed) << check.name << ": " << check.detail;
  }
}

TEST(SelfCheck, CounterexampleDetailNamesBothOrders) {
  const IdentityCheck check = CheckShapleyCounterexample({});
  EXPECT_TRUE(check.passed);
  EXPECT_NE(check.detail.find("phi order (1,2,3)"), std::string::npos) << check.detail;
  EXPECT_NE(check.detail.find("best AUC order (1,3,2)"), std::string::npos) << check.detail;
}

TEST(SelfCheck, ExpectedCeilingCoversSevenFeatures) {
  const IdentityCheck check = CheckExpectedCeiling({});
  EXPECT_TRUE(check.passed);
  EXPECT_NE(check.detail.find("1..7"), std::string::npos);
}

}  // namespace
}  // namespace abc_bench
