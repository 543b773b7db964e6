#pragma once

#include <string>
#include <vector>

#include "hiermud/mud/method.hpp"
#include "hiermud/rep/metrics.hpp"
#include "hiermud/rep/table.hpp"

namespace hiermud::rep {

struct EvalScores {
  double detection_f1 = 0.0;
  double localization_acc = 0.0;
  double quantification_acc = 0.0;
};

// Task metrics of a trained method on labeled tensors: detection F1 from the
// location head's class-0 encoding against ground truth q > 0, plus the two
// classification accuracies.
inline EvalScores evaluate_method(const mud::TrainedMethod& method,
                                  const mud::LabeledSet& eval_set) {
  const auto preds = mud::predict_method(method, eval_set.items);
  std::vector<bool> det_pred, det_true;
  std::vector<int> loc_pred, loc_true, sev_pred, sev_true;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    det_pred.push_back(preds[i].detection);
    det_true.push_back(eval_set.items[i].severity_class != 0);
    loc_pred.push_back(preds[i].location_class);
    loc_true.push_back(eval_set.items[i].location_class);
    sev_pred.push_back(preds[i].severity_class);
    sev_true.push_back(eval_set.items[i].severity_class);
  }
  EvalScores s;
  s.detection_f1 = f1_binary(det_pred, det_true);
  s.localization_acc = accuracy(loc_pred, loc_true);
  s.quantification_acc = accuracy(sev_pred, sev_true);
  return s;
}

inline std::vector<MetricsRow> scores_to_rows(const EvalScores& s, const std::string& method,
                                              const std::string& direction,
                                              const std::string& vehicle, std::uint64_t seed) {
  std::vector<MetricsRow> rows;
  rows.push_back({"detection", method, direction, vehicle, seed, s.detection_f1});
  rows.push_back({"localization", method, direction, vehicle, seed, s.localization_acc});
  rows.push_back({"quantification", method, direction, vehicle, seed, s.quantification_acc});
  return rows;
}

}  // namespace hiermud::rep
