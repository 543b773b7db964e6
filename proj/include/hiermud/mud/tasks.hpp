#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hiermud::mud {

enum class Difficulty { kEasy, kHard };

// One diagnostic task. Easy tasks are served by the task-shared features;
// hard tasks get a task-specific extractor on top (when the hierarchy is
// enabled).
struct TaskSpec {
  std::string name;
  int n_classes = 2;
  Difficulty difficulty = Difficulty::kEasy;
  double source_accuracy = 0.0;  // p_m, when known (used by the split utility)

  bool easy() const { return difficulty == Difficulty::kEasy; }
};

// Difficulty split from measured source accuracies against a threshold p_t:
// tasks with p_m >= p_t are easy-to-learn, the rest hard-to-learn.
inline std::vector<Difficulty> split_by_threshold(const std::vector<double>& accuracies,
                                                  double p_t) {
  std::vector<Difficulty> out;
  out.reserve(accuracies.size());
  for (double p : accuracies)
    out.push_back(p >= p_t ? Difficulty::kEasy : Difficulty::kHard);
  return out;
}

// The drive-by monitoring instantiation: damage detection is folded into
// class 0 of the location head, so the tasks are a 4-class location head
// (easy) and a 5-class severity head (hard).
inline std::vector<TaskSpec> bhm_tasks() {
  return {
      {"location", 4, Difficulty::kEasy, 0.0},
      {"severity", 5, Difficulty::kHard, 0.0},
  };
}

// Task lists keep easy tasks first; returns (M1, M2).
inline std::pair<int, int> count_split(const std::vector<TaskSpec>& tasks) {
  int m1 = 0, m2 = 0;
  bool seen_hard = false;
  for (const auto& t : tasks) {
    if (t.easy()) {
      if (seen_hard) throw std::invalid_argument("easy tasks must precede hard tasks");
      ++m1;
    } else {
      seen_hard = true;
      ++m2;
    }
  }
  return {m1, m2};
}

}  // namespace hiermud::mud
