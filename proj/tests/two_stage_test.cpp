// Copyright 2026 The Authors.
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

#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mcs/oracle.hpp"
#include "mcs/two_stage.hpp"
#include "test_fixtures.hpp"

namespace mcs {
namespace {

using testing::MakeW1;
using testing::MakeW2;

TEST(ComputeBudget, Fixtures) {
  const Campaign w1 = MakeW1();
  EXPECT_EQ(w1.total_value(), 9.0);
  EXPECT_EQ(compute_budget(w1, run_primary(w1)), 0.0);
  const Campaign w2 = MakeW2();
  EXPECT_EQ(w2.total_value(), 12.0);
  EXPECT_EQ(compute_budget(w2, run_primary(w2)), 3.0);
}

TEST(ComputeBudget, NoWinnersLeavesTheWholeValue) {
  const std::vector<double> values{2.0, 1.0};
  const Campaign c(make_tasks(values), {make_participant(0, {0, 1}, 9.0, {1, 1})},
                   Mode::kReputationUnaware);
  EXPECT_EQ(compute_budget(c, run_primary(c)), 3.0);
}

TEST(RunTwoStage, W2BuysTheLastTask) {
  const TwoStageOutcome o = run_two_stage(MakeW2());
  EXPECT_EQ(o.primary.winners, (std::vector<ParticipantId>{0, 2}));
  EXPECT_EQ(o.secondary_winners, std::vector<ParticipantId>{3});
  ASSERT_EQ(o.secondary_assignments.size(), 1u);
  EXPECT_EQ(o.secondary_assignments.at(3), std::vector<TaskId>{3});
  EXPECT_EQ(o.secondary_payments.at(3), 2.0);
  EXPECT_EQ(o.budget_trace, (std::vector<double>{3.0, 1.0}));
  EXPECT_EQ(o.covered_final, (std::vector<TaskId>{0, 1, 2, 3}));
}

TEST(RunTwoStage, W1HasNoSecondStage) {
  const TwoStageOutcome o = run_two_stage(MakeW1());
  EXPECT_TRUE(o.secondary_winners.empty());
  EXPECT_EQ(o.budget_trace, std::vector<double>{0.0});
  EXPECT_EQ(o.covered_final, (std::vector<TaskId>{0, 1, 2}));
}

TEST(RunTwoStage, FullCoverageSkipsTheSecondStage) {
  // Stage one covers everything with budget to spare; p1 would be a cheap
  // secondary candidate but is never considered.
  const std::vector<double> values{5.0, 5.0};
  const Campaign c(make_tasks(values),
                   {make_participant(0, {0, 1}, 1.0, {1, 1}), make_participant(1, {1}, 4.0, {0.5})},
                   Mode::kReputationUnaware);
  const TwoStageOutcome o = run_two_stage(c);
  EXPECT_EQ(o.covered_final.size(), 2u);
  // p0 is paid 9 against p1, leaving a budget of 1.
  EXPECT_DOUBLE_EQ(o.budget_trace[0], 1.0);
  EXPECT_TRUE(o.secondary_winners.empty());
}

TEST(RunTwoStage, ReputationAwareBudgetUpdate) {
  // Stage one admits nobody, so the budget is 6. Secondary scores:
  // p0 = 0.5*3 - 1/0.5 = -0.5, p1 = 0.8*3 - 2/0.8 = -0.1. p1 goes first:
  // 6*0.8 - 2/0.8 = 2.3. Then p0 would leave 2.3*0.5 - 2 < 0 and the stage ends.
  const std::vector<double> values{3.0, 3.0};
  const Campaign c(make_tasks(values),
                   {make_participant(0, {0}, 9.0, {1.0}, 0.5),
                    make_participant(1, {1}, 9.0, {2.0}, 0.8)},
                   Mode::kReputationAware);
  const TwoStageOutcome o = run_two_stage(c);
  EXPECT_TRUE(o.primary.winners.empty());
  EXPECT_EQ(o.secondary_winners, std::vector<ParticipantId>{1});
  ASSERT_EQ(o.budget_trace.size(), 2u);
  EXPECT_EQ(o.budget_trace[0], 6.0);
  EXPECT_NEAR(o.budget_trace[1], 2.3, 1e-12);
  EXPECT_EQ(o.secondary_payments.at(1), 2.0);
  EXPECT_EQ(o.covered_final, std::vector<TaskId>{1});
}

void CheckStructure(const Campaign& c, const TwoStageOutcome& o) {
  const std::set<ParticipantId> primary(o.primary.winners.begin(), o.primary.winners.end());
  std::set<TaskId> seen(o.primary.covered.begin(), o.primary.covered.end());
  TaskMask covered = o.primary.covered_mask;
  double budget = o.budget_trace.front();
  ASSERT_EQ(o.budget_trace.size(), o.secondary_winners.size() + 1);
  for (std::size_t k = 0; k < o.secondary_winners.size(); ++k) {
    const ParticipantId w = o.secondary_winners[k];
    EXPECT_EQ(primary.count(w), 0u) << "secondary winner was a primary winner";
    const Participant& p = c.participant(w);
    const auto& tasks = o.secondary_assignments.at(w);
    ASSERT_FALSE(tasks.empty());
    EXPECT_EQ(tasks, live_tasks(p, covered));
    for (TaskId t : tasks) {
      EXPECT_TRUE(seen.insert(t).second) << "task " << t << " assigned twice";
      covered[static_cast<std::size_t>(t)] = 1;
    }
    const double r = effective_reputation(p, c.reputation_aware());
    const double bid = sum_descriptive_bids(p, tasks);
    EXPECT_EQ(o.secondary_payments.at(w), bid);
    budget = budget * r - bid / r;
    EXPECT_DOUBLE_EQ(o.budget_trace[k + 1], budget);
    if (!c.reputation_aware()) {
      EXPECT_DOUBLE_EQ(o.budget_trace[k + 1], o.budget_trace[k] - bid);
    }
  }
  if (o.budget_trace.front() >= 0.0) {
    for (double b : o.budget_trace) EXPECT_GE(b, 0.0);
  }
  EXPECT_EQ(covered, o.covered_final_mask);
  EXPECT_GE(o.covered_final.size(), o.primary.covered.size());
  for (TaskId t : o.primary.covered) {
    EXPECT_TRUE(std::binary_search(o.covered_final.begin(), o.covered_final.end(), t));
  }
}

TEST(TwoStageProperties, RandomSmallCampaigns) {
  Rng rng(31);
  for (int k = 0; k < 600; ++k) {
    const Mode mode = k % 2 ? Mode::kReputationAware : Mode::kReputationUnaware;
    const Campaign c = oracle::random_small_campaign(rng, 12, 12, mode);
    CheckStructure(c, run_two_stage(c));
  }
}

TEST(TwoStageProperties, SpatialCampaigns) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    for (Mode mode : {Mode::kReputationAware, Mode::kReputationUnaware}) {
      const Campaign c = generate_campaign(testing::SmallSpatialConfig(seed, mode));
      CheckStructure(c, run_two_stage(c));
    }
  }
}

TEST(ReputationHook, IdentityLeavesReputationsAlone) {
  GenConfig cfg;
  cfg.seed = 4;
  const Campaign c = generate_campaign(cfg);
  const TwoStageOutcome o = run_two_stage(c);
  const auto reps = apply_reputation_hook(c, o, identity_reputation_policy());
  for (const Participant& p : c.participants()) {
    EXPECT_EQ(reps[static_cast<std::size_t>(p.id)], p.reputation);
  }
}

TEST(ReputationHook, ConstantPolicyHitsOnlyWinners) {
  const Campaign c = MakeW2();
  const TwoStageOutcome o = run_two_stage(c);
  const auto reps = apply_reputation_hook(
      c, o, [](ParticipantId, double, const TwoStageOutcome&) { return 0.7; });
  EXPECT_EQ(reps, (std::vector<double>{0.7, 1.0, 0.7, 0.7}));
}

TEST(ReputationHook, SelectivePolicy) {
  // Halve winners that received no descriptive-bid assignment.
  const Campaign c = MakeW2();
  const TwoStageOutcome o = run_two_stage(c);
  const auto reps = apply_reputation_hook(
      c, o, [](ParticipantId id, double r, const TwoStageOutcome& out) {
        return out.secondary_assignments.count(id) ? r : r / 2;
      });
  EXPECT_EQ(reps, (std::vector<double>{0.5, 1.0, 0.5, 1.0}));
}

TEST(ReputationHook, RejectsOutOfRangeReputations) {
  const Campaign c = MakeW2();
  const TwoStageOutcome o = run_two_stage(c);
  EXPECT_THROW(apply_reputation_hook(
                   c, o, [](ParticipantId, double, const TwoStageOutcome&) { return 0.0; }),
               std::invalid_argument);
  EXPECT_THROW(apply_reputation_hook(
                   c, o, [](ParticipantId, double, const TwoStageOutcome&) { return 1.5; }),
               std::invalid_argument);
}

}  // namespace
}  // namespace mcs
