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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mcs/domain.hpp"
#include "mcs/rng.hpp"
#include "test_fixtures.hpp"

namespace mcs {
namespace {

using testing::MakeW1;
using testing::MakeW2;

TEST(GenerateCampaign, DefaultsProduceBiddersWithBoundedBids) {
  GenConfig cfg;
  cfg.seed = 7;
  const Campaign c = generate_campaign(cfg);
  EXPECT_EQ(c.num_tasks(), 100);
  EXPECT_LE(c.num_participants(), 100);
  EXPECT_GT(c.num_participants(), 0);
  for (const Participant& p : c.participants()) {
    ASSERT_FALSE(p.interested_tasks.empty());
    for (std::size_t k = 0; k < p.interested_tasks.size(); ++k) {
      const double v = c.task(p.interested_tasks[k]).value;
      const double b = p.descriptive_bids[k];
      EXPECT_GT(b, 0.0);
      EXPECT_LE(b, v + 2.0);
      EXPECT_GE(b, std::max(kMinDescriptiveBid, v - 2.0));
    }
    EXPECT_GE(p.collective_bid, 1.0);
    EXPECT_LT(p.collective_bid, 10.0);
    EXPECT_GE(p.reputation, 0.6);
    EXPECT_LT(p.reputation, 0.9);
    EXPECT_EQ(p.private_cost, p.collective_bid);
  }
  for (const Task& t : c.tasks()) {
    EXPECT_GE(t.value, 1.0);
    EXPECT_LT(t.value, 5.0);
  }
}

TEST(GenerateCampaign, RelocationKeepsParticipantCountExact) {
  GenConfig cfg;
  cfg.seed = 7;
  cfg.empty_interest = EmptyInterestPolicy::kRelocate;
  const Campaign c = generate_campaign(cfg);
  EXPECT_EQ(c.num_participants(), 100);
}

TEST(GenerateCampaign, RadiusCoveringTheAreaForcesInterest) {
  GenConfig cfg;
  cfg.n_tasks = 1;
  cfg.n_participants = 1;
  cfg.interest_radius = 2000.0;
  const Campaign c = generate_campaign(cfg);
  ASSERT_EQ(c.num_participants(), 1);
  EXPECT_EQ(c.participant(0).interested_tasks, std::vector<TaskId>{0});
}

TEST(GenerateCampaign, SameSeedSameCampaign) {
  GenConfig cfg;
  cfg.seed = 42;
  const Campaign a = generate_campaign(cfg);
  const Campaign b = generate_campaign(cfg);
  ASSERT_EQ(a.num_tasks(), b.num_tasks());
  ASSERT_EQ(a.num_participants(), b.num_participants());
  for (int j = 0; j < a.num_tasks(); ++j) {
    EXPECT_EQ(a.task(j).value, b.task(j).value);
    EXPECT_EQ(a.task(j).location.x, b.task(j).location.x);
    EXPECT_EQ(a.task(j).location.y, b.task(j).location.y);
  }
  for (int i = 0; i < a.num_participants(); ++i) {
    const Participant& p = a.participant(i);
    const Participant& q = b.participant(i);
    EXPECT_EQ(p.location.x, q.location.x);
    EXPECT_EQ(p.location.y, q.location.y);
    EXPECT_EQ(p.interested_tasks, q.interested_tasks);
    EXPECT_EQ(p.descriptive_bids, q.descriptive_bids);
    EXPECT_EQ(p.collective_bid, q.collective_bid);
    EXPECT_EQ(p.reputation, q.reputation);
  }
}

TEST(GenerateCampaign, InterestSetsMatchDistances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (auto policy : {EmptyInterestPolicy::kDrop, EmptyInterestPolicy::kRelocate}) {
      GenConfig cfg;
      cfg.n_tasks = 80;
      cfg.n_participants = 60;
      cfg.area_side = 400.0;
      cfg.seed = seed;
      cfg.empty_interest = policy;
      const Campaign c = generate_campaign(cfg);
      for (const Participant& p : c.participants()) {
        for (const Task& t : c.tasks()) {
          const bool near = std::sqrt(squared_distance(p.location, t.location)) <=
                            cfg.interest_radius;
          EXPECT_EQ(p.interested_in(t.id), near);
        }
      }
    }
  }
}

TEST(GenerateCampaign, ReputationModesShareGeometryAndBids) {
  GenConfig cfg;
  cfg.seed = 9;
  cfg.mode = Mode::kReputationAware;
  const Campaign ra = generate_campaign(cfg);
  cfg.mode = Mode::kReputationUnaware;
  const Campaign ru = generate_campaign(cfg);
  ASSERT_EQ(ra.num_participants(), ru.num_participants());
  for (int i = 0; i < ra.num_participants(); ++i) {
    EXPECT_EQ(ra.participant(i).interested_tasks, ru.participant(i).interested_tasks);
    EXPECT_EQ(ra.participant(i).collective_bid, ru.participant(i).collective_bid);
    EXPECT_EQ(ru.participant(i).reputation, 1.0);
    EXPECT_LT(ra.participant(i).reputation, 1.0);
  }
}

TEST(GenerateCampaign, RejectsInvalidConfigs) {
  GenConfig cfg;
  cfg.interest_radius = 0.0;
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.value_range = {0.0, 5.0};
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.collective_bid_range = {5.0, 1.0};
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.n_tasks = 0;
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.alpha = -1.0;
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
  cfg = GenConfig{};
  cfg.reputation_range = {0.5, 1.5};
  EXPECT_THROW(generate_campaign(cfg), std::invalid_argument);
}

TEST(Campaign, RejectsBrokenInvariants) {
  const std::vector<double> values{3.0};
  EXPECT_THROW(Campaign(make_tasks(values), {make_participant(0, {}, 1.0, {})},
                        Mode::kReputationUnaware),
               std::invalid_argument);
  EXPECT_THROW(Campaign(make_tasks(values), {make_participant(0, {1}, 1.0, {1.0})},
                        Mode::kReputationUnaware),
               std::invalid_argument);
  EXPECT_THROW(Campaign(make_tasks(values), {make_participant(0, {0}, 1.0, {1.0}, 0.7)},
                        Mode::kReputationUnaware),
               std::invalid_argument);
  EXPECT_THROW(Campaign(make_tasks(values), {make_participant(0, {0}, 1.0, {})},
                        Mode::kReputationAware),
               std::invalid_argument);
  const std::vector<double> bad{0.0};
  EXPECT_THROW(Campaign(make_tasks(bad), {}, Mode::kReputationAware), std::invalid_argument);
}

TEST(SumDescriptiveBids, Basics) {
  const Participant p = make_participant(0, {0, 1}, 4.0, {2.0, 3.5});
  const std::vector<TaskId> both{0, 1};
  EXPECT_DOUBLE_EQ(sum_descriptive_bids(p, both), 5.5);
  EXPECT_EQ(sum_descriptive_bids(p, {}), 0.0);
  const std::vector<TaskId> foreign{2};
  EXPECT_THROW(sum_descriptive_bids(p, foreign), std::invalid_argument);

  const Campaign w2 = MakeW2();
  const std::vector<TaskId> t4{3};
  EXPECT_EQ(sum_descriptive_bids(w2.participant(3), t4), 2.0);
}

TEST(SumDescriptiveBids, FullSetEqualsIndicatorSum) {
  GenConfig cfg;
  cfg.seed = 3;
  const Campaign c = generate_campaign(cfg);
  for (const Participant& p : c.participants()) {
    double indicator_sum = 0.0;
    for (const Task& t : c.tasks()) {
      const double x = p.interested_in(t.id) ? 1.0 : 0.0;
      if (x != 0.0) indicator_sum += x * p.descriptive_bid(t.id);
    }
    EXPECT_DOUBLE_EQ(sum_descriptive_bids(p, p.interested_tasks), indicator_sum);
  }
}

TEST(MarginalValue, Examples) {
  const Campaign w1 = MakeW1();
  EXPECT_EQ(marginal_value(w1.participant(0), w1.empty_mask(), w1.tasks(), false), 6.0);

  TaskMask all(3, 1);
  for (const Participant& p : w1.participants()) {
    EXPECT_EQ(marginal_value(p, all, w1.tasks(), false), 0.0);
  }

  const std::vector<double> values{5.0, 3.0};
  const Campaign half(make_tasks(values), {make_participant(0, {0, 1}, 1.0, {1, 1}, 0.5)},
                      Mode::kReputationAware);
  EXPECT_EQ(marginal_value(half.participant(0), half.empty_mask(), half.tasks(), true), 4.0);
  EXPECT_EQ(marginal_value(half.participant(0), half.empty_mask(), half.tasks(), false), 8.0);
}

TEST(MarginalValue, MonotoneInCoverageAndLinearInReputation) {
  Rng rng(5);
  GenConfig cfg;
  cfg.seed = 11;
  const Campaign c = generate_campaign(cfg);
  for (const Participant& p : c.participants()) {
    TaskMask covered = c.empty_mask();
    double prev = marginal_value(p, covered, c.tasks(), true);
    for (TaskId t : p.interested_tasks) {
      if (rng.bernoulli(0.5)) continue;
      covered[static_cast<std::size_t>(t)] = 1;
      const double next = marginal_value(p, covered, c.tasks(), true);
      EXPECT_LE(next, prev);
      prev = next;
    }
    Participant doubled = p;
    doubled.reputation = p.reputation / 2;
    EXPECT_NEAR(marginal_value(doubled, covered, c.tasks(), true),
                marginal_value(p, covered, c.tasks(), true) / 2, 1e-12);
  }
}

TEST(Rng, StreamIsStableAcrossBuilds) {
  // MT19937-64 reference: the 10000th output for the default seed is fixed by
  // the standard.
  std::mt19937_64 e;
  e.discard(9999);
  EXPECT_EQ(e(), 9981545732273789042ULL);
  Rng a(123), b(123);
  for (int k = 0; k < 100; ++k) {
    const double u = a.unit();
    EXPECT_EQ(u, b.unit());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(child_seed(1, 0, 0), child_seed(1, 0, 1));
  EXPECT_NE(child_seed(1, 0, 0), child_seed(1, 1, 0));
  EXPECT_NE(child_seed(1, 0, 0), child_seed(2, 0, 0));
}

}  // namespace
}  // namespace mcs
