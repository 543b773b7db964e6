#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiermud::mud {

using json = nlohmann::ordered_json;

enum class Objective { kHardMax, kAverage, kSoftMax, kNoAdaptation };
enum class Mode { kMultiTask, kIndependent, kSequential };

inline Objective objective_from_string(const std::string& s) {
  if (s == "hard_max") return Objective::kHardMax;
  if (s == "average") return Objective::kAverage;
  if (s == "soft_max") return Objective::kSoftMax;
  if (s == "no_adaptation") return Objective::kNoAdaptation;
  throw std::invalid_argument("unknown objective: " + s);
}

inline std::string to_string(Objective o) {
  switch (o) {
    case Objective::kHardMax: return "hard_max";
    case Objective::kAverage: return "average";
    case Objective::kSoftMax: return "soft_max";
    case Objective::kNoAdaptation: return "no_adaptation";
  }
  return "?";
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "multi_task") return Mode::kMultiTask;
  if (s == "independent") return Mode::kIndependent;
  if (s == "sequential") return Mode::kSequential;
  throw std::invalid_argument("unknown mode: " + s);
}

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::kMultiTask: return "multi_task";
    case Mode::kIndependent: return "independent";
    case Mode::kSequential: return "sequential";
  }
  return "?";
}

struct TrainConfig {
  Objective objective = Objective::kSoftMax;
  Mode mode = Mode::kMultiTask;
  bool hierarchy = true;
  std::vector<double> lambda_task;   // per task; defaults to 1.0 each
  double lambda_d0 = 0.1;
  double lambda_dm = 0.1;            // applied to every task-specific domain classifier
  double learning_rate = 1e-3;       // mu
  int batch_size = 32;               // K
  int epochs = 300;                  // P, training iterations of Algorithm-style loop
  std::uint64_t seed = 1;
  int metrics_every = 0;             // 0: no in-training target metrics
  std::string method = "hiermud";    // label carried into reports

  bool adversarial() const { return objective != Objective::kNoAdaptation; }

  double lambda_for_task(std::size_t m) const {
    return m < lambda_task.size() ? lambda_task[m] : 1.0;
  }

  void validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (lambda_d0 < 0.0 || lambda_dm < 0.0)
      throw std::invalid_argument("domain trade-offs must be >= 0");
  }
};

// Method presets: which combination of multi-task mode, adaptation objective
// and hierarchy each named method uses.
//
//   MCNN      multi-task, no adaptation, no hierarchy
//   iUD       independent single-task UDA models
//   sUD       sequential single-task UDA models (severity conditioned on the
//             predicted location)
//   MUD       multi-task UDA, single shared domain classifier, average
//             objective, no hierarchy
//   HierMUD-a multi-task UDA with hierarchy, average objective
//   HierMUD   multi-task UDA with hierarchy, soft-max objective
inline TrainConfig baseline_config(const std::string& method) {
  TrainConfig cfg;
  cfg.method = method;
  if (method == "mcnn") {
    cfg.objective = Objective::kNoAdaptation;
    cfg.mode = Mode::kMultiTask;
    cfg.hierarchy = false;
  } else if (method == "iud") {
    cfg.objective = Objective::kSoftMax;
    cfg.mode = Mode::kIndependent;
    cfg.hierarchy = false;
  } else if (method == "sud") {
    cfg.objective = Objective::kSoftMax;
    cfg.mode = Mode::kSequential;
    cfg.hierarchy = false;
  } else if (method == "mud") {
    cfg.objective = Objective::kAverage;
    cfg.mode = Mode::kMultiTask;
    cfg.hierarchy = false;
  } else if (method == "hiermud_a") {
    cfg.objective = Objective::kAverage;
    cfg.mode = Mode::kMultiTask;
    cfg.hierarchy = true;
  } else if (method == "hiermud") {
    cfg.objective = Objective::kSoftMax;
    cfg.mode = Mode::kMultiTask;
    cfg.hierarchy = true;
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  return cfg;
}

inline TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  if (j.contains("method")) cfg = baseline_config(j["method"].get<std::string>());
  if (j.contains("objective")) cfg.objective = objective_from_string(j["objective"].get<std::string>());
  if (j.contains("mode")) cfg.mode = mode_from_string(j["mode"].get<std::string>());
  if (j.contains("hierarchy")) cfg.hierarchy = j["hierarchy"].get<bool>();
  if (j.contains("lambda_task")) cfg.lambda_task = j["lambda_task"].get<std::vector<double>>();
  if (j.contains("lambda_d0")) cfg.lambda_d0 = j["lambda_d0"].get<double>();
  if (j.contains("lambda_dm")) cfg.lambda_dm = j["lambda_dm"].get<double>();
  if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
  if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("metrics_every")) cfg.metrics_every = j["metrics_every"].get<int>();
  cfg.validate();
  return cfg;
}

inline json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["method"] = cfg.method;
  j["objective"] = to_string(cfg.objective);
  j["mode"] = to_string(cfg.mode);
  j["hierarchy"] = cfg.hierarchy;
  j["lambda_task"] = cfg.lambda_task;
  j["lambda_d0"] = cfg.lambda_d0;
  j["lambda_dm"] = cfg.lambda_dm;
  j["learning_rate"] = cfg.learning_rate;
  j["batch_size"] = cfg.batch_size;
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["metrics_every"] = cfg.metrics_every;
  return j;
}

}  // namespace hiermud::mud
