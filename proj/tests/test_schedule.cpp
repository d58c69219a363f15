// Copyright 2026 The tunnelbench Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "tunnelbench/instance_io.hpp"
#include "tunnelbench/schedule.hpp"

namespace tb = tunnelbench;

TEST(Schedule, LinearEndpoints) {
  auto s = tb::AnnealSchedule::linear();
  EXPECT_EQ(s.A(0.0), 1.0);
  EXPECT_EQ(s.B(0.0), 0.0);
  EXPECT_EQ(s.A(1.0), 0.0);
  EXPECT_EQ(s.B(1.0), 1.0);
  EXPECT_THROW(s.eval(1.5), tb::InputError);
}

TEST(Schedule, ShippedCsvMatchesClosedForm) {
  auto csv = tb::read_schedule_csv(tb::data_path("schedules/dw2x-approx.csv"));
  auto f = tb::dw2x_approx_formula();
  for (double s = 0.0; s <= 1.0; s += 0.01) {
    EXPECT_NEAR(csv.A(s), f.A(s), 2e-3 * f.A(0.0));
    EXPECT_NEAR(csv.B(s), f.B(s), 2e-3 * f.B(1.0));
  }
  EXPECT_EQ(csv.metadata().at("approximate"), "true");
  auto lin = tb::read_schedule_csv(tb::data_path("schedules/linear.csv"));
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    EXPECT_NEAR(lin.A(s), 1.0 - s, 1e-9);
    EXPECT_NEAR(lin.B(s), s, 1e-9);
  }
  EXPECT_EQ(tb::load_schedule("dw2x-approx").name(), "dw2x-approx");
}

TEST(Schedule, CsvRoundTripAndValidation) {
  auto f = tb::dw2x_approx_formula();
  auto back = tb::parse_schedule_csv(tb::schedule_to_csv(f));
  EXPECT_NEAR(back.A(0.62), f.A(0.62), 1e-3);
  EXPECT_THROW(tb::parse_schedule_csv("s,A,B\n0.0,1,0\n0.5,x,1\n"), tb::InputError);
  EXPECT_THROW(tb::parse_schedule_csv("s,A,B\n0.2,1,0\n1.0,0,1\n"), tb::InputError);
  EXPECT_THROW(tb::parse_schedule_csv("s,A,B\n0.0,1,0\n0.6,1,0\n0.5,1,0\n1.0,0,1\n"), tb::InputError);
  EXPECT_THROW(tb::parse_schedule_csv("s,A,B\n0.0,-1,0\n1.0,0,1\n"), tb::InputError);
  EXPECT_THROW(tb::load_schedule("/nonexistent/schedule.csv"), tb::InputError);
}
