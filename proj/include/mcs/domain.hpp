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

#pragma once

// Campaign data model, spatial campaign generation and bid arithmetic shared
// by every mechanism.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcs/rng.hpp"

namespace mcs {

using TaskId = int;
using ParticipantId = int;

// One byte per task, nonzero when the task is covered.
using TaskMask = std::vector<std::uint8_t>;

enum class Mode { kReputationAware, kReputationUnaware };

inline bool is_reputation_aware(Mode mode) {
  return mode == Mode::kReputationAware;
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Task {
  TaskId id = 0;
  Point location;
  double value = 0.0;
};

struct Participant {
  ParticipantId id = 0;
  Point location;
  double radius = 0.0;
  // Ascending task ids.
  std::vector<TaskId> interested_tasks;
  double collective_bid = 0.0;
  // descriptive_bids[k] is the bid for interested_tasks[k].
  std::vector<double> descriptive_bids;
  double reputation = 1.0;
  double private_cost = 0.0;

  bool interested_in(TaskId task) const {
    return std::binary_search(interested_tasks.begin(), interested_tasks.end(),
                              task);
  }

  double descriptive_bid(TaskId task) const {
    const auto it = std::lower_bound(interested_tasks.begin(),
                                     interested_tasks.end(), task);
    if (it == interested_tasks.end() || *it != task) {
      throw std::invalid_argument("participant " + std::to_string(id) +
                                  " did not bid on task " +
                                  std::to_string(task));
    }
    return descriptive_bids[static_cast<std::size_t>(
        it - interested_tasks.begin())];
  }
};

// One auction instance. Immutable once constructed; the constructor enforces
// the data-model invariants.
class Campaign {
 public:
  Campaign(std::vector<Task> tasks, std::vector<Participant> participants,
           Mode mode)
      : tasks_(std::move(tasks)),
        participants_(std::move(participants)),
        mode_(mode) {
    Validate();
    for (const Task& t : tasks_) total_value_ += t.value;
  }

  std::span<const Task> tasks() const { return tasks_; }
  std::span<const Participant> participants() const { return participants_; }
  const Task& task(TaskId id) const {
    return tasks_[static_cast<std::size_t>(id)];
  }
  const Participant& participant(ParticipantId id) const {
    return participants_[static_cast<std::size_t>(id)];
  }
  Mode mode() const { return mode_; }
  bool reputation_aware() const { return is_reputation_aware(mode_); }
  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  int num_participants() const { return static_cast<int>(participants_.size()); }

  // Sum of all task values.
  double total_value() const { return total_value_; }

  TaskMask empty_mask() const { return TaskMask(tasks_.size(), 0); }

 private:
  void Validate() const {
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (tasks_[j].id != static_cast<TaskId>(j)) {
        throw std::invalid_argument("task ids must be contiguous from 0");
      }
      if (!(tasks_[j].value > 0.0)) {
        throw std::invalid_argument("task value must be positive");
      }
    }
    for (std::size_t i = 0; i < participants_.size(); ++i) {
      const Participant& p = participants_[i];
      if (p.id != static_cast<ParticipantId>(i)) {
        throw std::invalid_argument("participant ids must be contiguous from 0");
      }
      if (p.interested_tasks.empty()) {
        throw std::invalid_argument("participant " + std::to_string(p.id) +
                                    " bids on no task");
      }
      if (p.descriptive_bids.size() != p.interested_tasks.size()) {
        throw std::invalid_argument("descriptive bids must match interest set");
      }
      if (!std::is_sorted(p.interested_tasks.begin(), p.interested_tasks.end()) ||
          std::adjacent_find(p.interested_tasks.begin(),
                             p.interested_tasks.end()) !=
              p.interested_tasks.end()) {
        throw std::invalid_argument("interest set must be strictly ascending");
      }
      for (TaskId t : p.interested_tasks) {
        if (t < 0 || t >= static_cast<TaskId>(tasks_.size())) {
          throw std::invalid_argument("participant references unknown task");
        }
      }
      for (double b : p.descriptive_bids) {
        if (!(b > 0.0)) throw std::invalid_argument("descriptive bid must be positive");
      }
      if (!(p.collective_bid > 0.0)) {
        throw std::invalid_argument("collective bid must be positive");
      }
      if (!(p.private_cost > 0.0)) {
        throw std::invalid_argument("private cost must be positive");
      }
      if (!(p.reputation > 0.0 && p.reputation <= 1.0)) {
        throw std::invalid_argument("reputation must lie in (0, 1]");
      }
      if (mode_ == Mode::kReputationUnaware && p.reputation != 1.0) {
        throw std::invalid_argument(
            "reputation-unaware campaigns require unit reputations");
      }
    }
  }

  std::vector<Task> tasks_;
  std::vector<Participant> participants_;
  Mode mode_;
  double total_value_ = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// What to do with a placed device whose interest disk holds no task.
enum class EmptyInterestPolicy {
  kDrop,      // the device does not bid and is left out of the campaign
  kRelocate,  // redraw its location until the disk holds a task
};

struct GenConfig {
  int n_tasks = 100;
  int n_participants = 100;
  double area_side = 1000.0;
  double interest_radius = 30.0;
  Range value_range{1.0, 5.0};
  Range collective_bid_range{1.0, 10.0};
  double alpha = 2.0;
  Range reputation_range{0.6, 0.9};
  std::uint64_t seed = 0;
  Mode mode = Mode::kReputationAware;
  EmptyInterestPolicy empty_interest = EmptyInterestPolicy::kDrop;
};

// Floor for the per-task bid interval [V_j - alpha, V_j + alpha].
inline constexpr double kMinDescriptiveBid = 0.01;

inline void validate(const GenConfig& cfg) {
  auto check_range = [](Range r, const char* name) {
    if (!(r.lo > 0.0 && r.lo <= r.hi)) {
      throw std::invalid_argument(std::string(name) +
                                  " must satisfy 0 < lo <= hi");
    }
  };
  if (cfg.n_tasks < 1) throw std::invalid_argument("n_tasks must be >= 1");
  if (cfg.n_participants < 1) {
    throw std::invalid_argument("n_participants must be >= 1");
  }
  if (!(cfg.area_side > 0.0)) throw std::invalid_argument("area_side must be positive");
  if (!(cfg.interest_radius > 0.0)) {
    throw std::invalid_argument("interest_radius must be positive");
  }
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  check_range(cfg.value_range, "value_range");
  check_range(cfg.collective_bid_range, "collective_bid_range");
  check_range(cfg.reputation_range, "reputation_range");
  if (cfg.reputation_range.hi > 1.0) {
    throw std::invalid_argument("reputation_range must lie in (0, 1]");
  }
}

// Draw order: every task (x, y, value), then every device (x, y, redrawn on
// relocation; reputation; collective bid; per-task bids by ascending task id).
// Reputations are drawn in both modes so that RA and RU campaigns built from
// one seed share geometry and bids.
inline Campaign generate_campaign(const GenConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);

  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(cfg.n_tasks));
  for (int j = 0; j < cfg.n_tasks; ++j) {
    Task t;
    t.id = j;
    t.location.x = rng.uniform(0.0, cfg.area_side);
    t.location.y = rng.uniform(0.0, cfg.area_side);
    t.value = rng.uniform(cfg.value_range.lo, cfg.value_range.hi);
    tasks.push_back(t);
  }

  const double r2 = cfg.interest_radius * cfg.interest_radius;
  auto tasks_near = [&](Point at) {
    std::vector<TaskId> near;
    for (const Task& t : tasks) {
      if (squared_distance(at, t.location) <= r2) near.push_back(t.id);
    }
    return near;
  };

  constexpr long kMaxRelocations = 10'000'000;
  std::vector<Participant> participants;
  for (int i = 0; i < cfg.n_participants; ++i) {
    Participant p;
    p.radius = cfg.interest_radius;
    long attempts = 0;
    do {
      if (++attempts > kMaxRelocations) {
        throw std::runtime_error("relocation did not find a task in reach");
      }
      p.location.x = rng.uniform(0.0, cfg.area_side);
      p.location.y = rng.uniform(0.0, cfg.area_side);
      p.interested_tasks = tasks_near(p.location);
    } while (p.interested_tasks.empty() &&
             cfg.empty_interest == EmptyInterestPolicy::kRelocate);

    const double reputation =
        rng.uniform(cfg.reputation_range.lo, cfg.reputation_range.hi);
    p.collective_bid =
        rng.uniform(cfg.collective_bid_range.lo, cfg.collective_bid_range.hi);
    p.descriptive_bids.reserve(p.interested_tasks.size());
    for (TaskId j : p.interested_tasks) {
      const double v = tasks[static_cast<std::size_t>(j)].value;
      p.descriptive_bids.push_back(
          rng.uniform(std::max(kMinDescriptiveBid, v - cfg.alpha), v + cfg.alpha));
    }
    if (p.interested_tasks.empty()) continue;

    p.id = static_cast<ParticipantId>(participants.size());
    p.reputation = is_reputation_aware(cfg.mode) ? reputation : 1.0;
    p.private_cost = p.collective_bid;
    participants.push_back(std::move(p));
  }
  return Campaign(std::move(tasks), std::move(participants), cfg.mode);
}

// Sum of the participant's per-task bids over `subset`. Throws if `subset`
// names a task the participant did not bid on.
inline double sum_descriptive_bids(const Participant& p,
                                   std::span<const TaskId> subset) {
  double sum = 0.0;
  for (TaskId t : subset) sum += p.descriptive_bid(t);
  return sum;
}

// Per-task bids summed over the participant's tasks that are not yet covered.
inline double live_descriptive_sum(const Participant& p, const TaskMask& covered) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.interested_tasks.size(); ++k) {
    if (!covered[static_cast<std::size_t>(p.interested_tasks[k])]) {
      sum += p.descriptive_bids[k];
    }
  }
  return sum;
}

inline bool has_live_task(const Participant& p, const TaskMask& covered) {
  return std::any_of(p.interested_tasks.begin(), p.interested_tasks.end(),
                     [&](TaskId t) { return !covered[static_cast<std::size_t>(t)]; });
}

inline double effective_reputation(const Participant& p, bool reputation_aware) {
  return reputation_aware ? p.reputation : 1.0;
}

// Reputational marginal value: R_p times the value of the participant's tasks
// that `covered` does not already contain (R_p = 1 when reputation-unaware).
// This is the single definition every mechanism uses.
inline double marginal_value(const Participant& p, const TaskMask& covered,
                             std::span<const Task> tasks, bool reputation_aware) {
  double sum = 0.0;
  for (TaskId t : p.interested_tasks) {
    if (!covered[static_cast<std::size_t>(t)]) {
      sum += tasks[static_cast<std::size_t>(t)].value;
    }
  }
  return effective_reputation(p, reputation_aware) * sum;
}

inline void cover(TaskMask& covered, const Participant& p) {
  for (TaskId t : p.interested_tasks) covered[static_cast<std::size_t>(t)] = 1;
}

inline std::vector<TaskId> live_tasks(const Participant& p, const TaskMask& covered) {
  std::vector<TaskId> live;
  for (TaskId t : p.interested_tasks) {
    if (!covered[static_cast<std::size_t>(t)]) live.push_back(t);
  }
  return live;
}

inline std::vector<TaskId> mask_to_ids(const TaskMask& mask) {
  std::vector<TaskId> ids;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (mask[j]) ids.push_back(static_cast<TaskId>(j));
  }
  return ids;
}

inline int count_covered(const TaskMask& mask) {
  return static_cast<int>(std::count_if(mask.begin(), mask.end(),
                                        [](std::uint8_t c) { return c != 0; }));
}

// Convenience builder for hand-written campaigns: location and radius unused.
inline Participant make_participant(ParticipantId id, std::vector<TaskId> tasks,
                                    double collective_bid,
                                    std::vector<double> descriptive_bids,
                                    double reputation = 1.0) {
  Participant p;
  p.id = id;
  p.interested_tasks = std::move(tasks);
  p.collective_bid = collective_bid;
  p.descriptive_bids = std::move(descriptive_bids);
  p.reputation = reputation;
  p.private_cost = collective_bid;
  return p;
}

inline std::vector<Task> make_tasks(std::span<const double> values) {
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < values.size(); ++j) {
    tasks.push_back(Task{static_cast<TaskId>(j), Point{}, values[j]});
  }
  return tasks;
}

}  // namespace mcs
