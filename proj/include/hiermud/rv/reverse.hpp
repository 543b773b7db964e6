#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hiermud/core/rng.hpp"
#include "hiermud/mud/method.hpp"
#include "hiermud/rep/metrics.hpp"

namespace hiermud::rv {

// Unsupervised model selection by reverse validation. Per fold: train the
// forward model on 90% of the source (labeled) and 90% of the target
// (unlabeled), pseudo-label the target training split with it, train a
// reverse classifier on the pseudo-labeled target data, and score the
// reverse classifier on the held-out source fold. Target labels are never
// touched: the target dataset handle carries no label accessor.
struct ReverseValidationResult {
  double score = 0.0;       // mean fold score; 0 when training diverged
  int folds_used = 0;
  int folds_skipped = 0;
  bool diverged = false;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, int folds,
                                                            std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  core::Rng rng(core::derive_seed(seed, "folds"));
  rng.shuffle(order.data(), order.size());
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < n; ++i)
    out[i % static_cast<std::size_t>(folds)].push_back(order[i]);
  return out;
}

inline mud::LabeledSet subset(const mud::LabeledSet& set, const std::vector<std::size_t>& idx,
                              bool invert, std::size_t n) {
  std::vector<bool> in_fold(n, false);
  for (std::size_t i : idx) in_fold[i] = true;
  mud::LabeledSet out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool take = invert ? !in_fold[i] : in_fold[i];
    if (take) out.items.push_back(set.items[i]);
  }
  return out;
}

}  // namespace detail

// Scores one candidate configuration. The reverse classifier reuses the same
// architecture trained supervised on the pseudo-labels with half the forward
// epoch budget. A fold whose source validation split misses a class is
// skipped and reported. A divergent candidate maps to score 0.
inline ReverseValidationResult reverse_validate(const mud::LabeledSet& source,
                                                const mud::UnlabeledSet& target,
                                                const std::vector<mud::TaskSpec>& tasks,
                                                const mud::TrainConfig& candidate,
                                                int folds = 10) {
  if (folds < 2) throw std::invalid_argument("reverse validation needs >= 2 folds");
  ReverseValidationResult result;
  const auto src_folds = detail::fold_partition(source.size(), folds, candidate.seed);
  const auto tgt_folds =
      detail::fold_partition(target.size(), folds, core::derive_seed(candidate.seed, "target"));

  std::vector<double> fold_scores;
  for (int f = 0; f < folds; ++f) {
    const mud::LabeledSet src_train =
        detail::subset(source, src_folds[static_cast<std::size_t>(f)], true, source.size());
    const mud::LabeledSet src_val =
        detail::subset(source, src_folds[static_cast<std::size_t>(f)], false, source.size());
    if (src_val.items.empty() || src_train.items.empty()) {
      ++result.folds_skipped;
      continue;
    }
    // Skip folds whose validation split lacks one of a task's classes.
    bool class_missing = false;
    for (const auto& task : tasks) {
      std::vector<int> seen(static_cast<std::size_t>(task.n_classes), 0);
      for (std::size_t i = 0; i < src_val.items.size(); ++i)
        seen[static_cast<std::size_t>(src_val.label_for(task, i))] = 1;
      if (std::accumulate(seen.begin(), seen.end(), 0) < task.n_classes) class_missing = true;
    }
    if (class_missing) {
      ++result.folds_skipped;
      continue;
    }

    // Target training split, still unlabeled.
    std::vector<prep::InputTensor> tgt_rows;
    {
      std::vector<bool> in_fold(target.size(), false);
      for (std::size_t i : tgt_folds[static_cast<std::size_t>(f)]) in_fold[i] = true;
      for (std::size_t i = 0; i < target.size(); ++i) {
        if (in_fold[i]) continue;
        prep::InputTensor t;
        t.data = target.row(i);
        tgt_rows.push_back(std::move(t));
      }
    }
    const mud::UnlabeledSet tgt_train = mud::UnlabeledSet::from_tensors(tgt_rows);

    try {
      const mud::TrainedMethod forward =
          mud::train_method(tasks, src_train, tgt_train, candidate);
      // Pseudo-label the target training split with the forward model.
      const auto pseudo = mud::predict_method(forward, tgt_rows);
      mud::LabeledSet pseudo_set;
      pseudo_set.items = tgt_rows;
      for (std::size_t i = 0; i < pseudo.size(); ++i) {
        pseudo_set.items[i].location_class = pseudo[i].location_class;
        pseudo_set.items[i].severity_class = pseudo[i].severity_class;
      }
      // Reverse classifier: same architecture, supervised on pseudo-labels,
      // half the epoch budget.
      mud::TrainConfig reverse_cfg = candidate;
      reverse_cfg.objective = mud::Objective::kNoAdaptation;
      reverse_cfg.mode = mud::Mode::kMultiTask;
      reverse_cfg.epochs = std::max(1, candidate.epochs / 2);
      reverse_cfg.seed = core::derive_seed(candidate.seed, "reverse", static_cast<std::uint64_t>(f));
      const mud::TrainedMethod reverse =
          mud::train_method(tasks, pseudo_set, mud::UnlabeledSet{}, reverse_cfg);

      const auto preds = mud::predict_method(reverse, src_val.items);
      double acc_sum = 0.0;
      for (const auto& task : tasks) {
        std::vector<int> p, y;
        for (std::size_t i = 0; i < preds.size(); ++i) {
          p.push_back(task.name == "severity" ? preds[i].severity_class
                                              : preds[i].location_class);
          y.push_back(src_val.label_for(task, i));
        }
        acc_sum += rep::accuracy(p, y);
      }
      fold_scores.push_back(acc_sum / static_cast<double>(tasks.size()));
      ++result.folds_used;
    } catch (const mud::DivergenceError&) {
      result.diverged = true;
      result.score = 0.0;
      return result;
    }
  }
  if (!fold_scores.empty()) result.score = rep::mean_of(fold_scores);
  return result;
}

// One grid point of the hyper-parameter search.
struct Candidate {
  std::string id;
  mud::TrainConfig cfg;
};

struct SweepEntry {
  std::string id;
  ReverseValidationResult result;
  double wall_seconds = 0.0;
};

// Deterministic argmax over candidates: highest reverse score, ties broken
// by smaller lambda_d0, then smaller learning rate, then candidate order.
inline std::size_t select_best(const std::vector<Candidate>& candidates,
                               const std::vector<SweepEntry>& entries) {
  if (candidates.empty() || entries.size() != candidates.size())
    throw std::invalid_argument("select_best: bad inputs");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double si = entries[i].result.score, sb = entries[best].result.score;
    if (si > sb) {
      best = i;
      continue;
    }
    if (si == sb) {
      const auto& ci = candidates[i].cfg;
      const auto& cb = candidates[best].cfg;
      if (ci.lambda_d0 < cb.lambda_d0 ||
          (ci.lambda_d0 == cb.lambda_d0 && ci.learning_rate < cb.learning_rate))
        best = i;
    }
  }
  return best;
}

}  // namespace hiermud::rv
