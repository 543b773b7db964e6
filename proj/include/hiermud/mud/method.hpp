#pragma once

#include <memory>
#include <vector>

#include "hiermud/mud/trainer.hpp"

namespace hiermud::mud {

// A trained method: one model for multi-task mode, one per task for the
// independent baseline, and a location stage plus a conditioned severity
// stage for the sequential baseline.
struct TrainedMethod {
  TrainConfig cfg;
  std::vector<TaskSpec> tasks;
  std::vector<std::unique_ptr<HierModel>> models;
  std::vector<std::vector<HistoryRow>> histories;

  const HierModel& primary() const { return *models.front(); }
};

inline nn::Tensor tensors_to_batch(const std::vector<prep::InputTensor>& items) {
  nn::Tensor t({items.size(), prep::kTensorChannels, prep::kTensorWidth, prep::kTensorHeight});
  for (std::size_t i = 0; i < items.size(); ++i)
    std::copy(items[i].data.begin(), items[i].data.end(),
              t.data.begin() + static_cast<std::ptrdiff_t>(i * prep::InputTensor::size()));
  return t;
}

// One-hot location predictions of a frozen model, used to condition the
// sequential baseline's severity stage.
inline ConditioningFn location_onehot_conditioning(const HierModel& location_model) {
  return [&location_model](const nn::Tensor& batch) {
    const auto preds = predict_batch(location_model, batch);
    nn::Tensor out({batch.dim(0), 4});
    for (std::size_t i = 0; i < preds.size(); ++i)
      out.data[i * 4 + static_cast<std::size_t>(preds[i].location_class)] = 1.0;
    return out;
  };
}

// Trains a method according to its mode. Independent mode trains one
// single-task model per task; with a single task it is exactly the
// multi-task path (same seed, same draws). Sequential mode trains the
// location stage first, then the severity stage conditioned on the frozen
// location predictions.
inline TrainedMethod train_method(const std::vector<TaskSpec>& tasks, const LabeledSet& source,
                                  const UnlabeledSet& target, const TrainConfig& cfg,
                                  const LabeledSet* target_eval = nullptr) {
  TrainedMethod out;
  out.cfg = cfg;
  out.tasks = tasks;
  switch (cfg.mode) {
    case Mode::kMultiTask: {
      TrainResult r = train_single(tasks, source, target, cfg, cfg.seed, nullptr, target_eval);
      out.models.push_back(std::move(r.model));
      out.histories.push_back(std::move(r.history));
      return out;
    }
    case Mode::kIndependent: {
      for (std::size_t m = 0; m < tasks.size(); ++m) {
        const std::uint64_t seed =
            tasks.size() == 1 ? cfg.seed : core::derive_seed(cfg.seed, "independent", m);
        TrainConfig sub = cfg;
        sub.hierarchy = false;
        TrainResult r = train_single({tasks[m]}, source, target, sub, seed);
        out.models.push_back(std::move(r.model));
        out.histories.push_back(std::move(r.history));
      }
      return out;
    }
    case Mode::kSequential: {
      if (tasks.size() != 2) throw std::invalid_argument("sequential mode expects two tasks");
      TrainConfig sub = cfg;
      sub.hierarchy = false;
      TrainResult loc = train_single({tasks[0]}, source, target, sub,
                                     core::derive_seed(cfg.seed, "stage", 0));
      ConditioningFn cond = location_onehot_conditioning(*loc.model);
      TrainResult sev = train_single({tasks[1]}, source, target, sub,
                                     core::derive_seed(cfg.seed, "stage", 1), &cond);
      out.models.push_back(std::move(loc.model));
      out.histories.push_back(std::move(loc.history));
      out.models.push_back(std::move(sev.model));
      out.histories.push_back(std::move(sev.history));
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

// Target-domain prediction for any mode. The location head is authoritative
// for detection; location class 0 forces severity 0.
inline std::vector<Prediction> predict_method(const TrainedMethod& method,
                                              const std::vector<prep::InputTensor>& items) {
  const nn::Tensor batch = tensors_to_batch(items);
  switch (method.cfg.mode) {
    case Mode::kMultiTask:
      return predict_batch(*method.models[0], batch);
    case Mode::kIndependent: {
      std::vector<Prediction> out(items.size());
      for (std::size_t m = 0; m < method.tasks.size(); ++m) {
        const auto preds = predict_batch(*method.models[m], batch);
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (method.tasks[m].name == "location") out[i].location_class = preds[i].location_class;
          if (method.tasks[m].name == "severity") out[i].severity_class = preds[i].severity_class;
        }
      }
      for (auto& p : out) {
        p.detection = p.location_class != 0;
        if (p.location_class == 0) p.severity_class = 0;
      }
      return out;
    }
    case Mode::kSequential: {
      const auto loc = predict_batch(*method.models[0], batch);
      ConditioningFn cond = location_onehot_conditioning(*method.models[0]);
      const auto sev = predict_batch(*method.models[1], batch, &cond);
      std::vector<Prediction> out(items.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].location_class = loc[i].location_class;
        out[i].severity_class = sev[i].severity_class;
        out[i].detection = out[i].location_class != 0;
        if (out[i].location_class == 0) out[i].severity_class = 0;
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace hiermud::mud
