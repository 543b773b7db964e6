#pragma once

#include <stdexcept>
#include <vector>

#include "hiermud/mud/tasks.hpp"
#include "hiermud/nn/tensor.hpp"
#include "hiermud/prep/tensorize.hpp"

namespace hiermud::mud {

// Labeled tensors (source domain, or target held out for evaluation only).
struct LabeledSet {
  std::vector<prep::InputTensor> items;

  std::size_t size() const { return items.size(); }

  int label_for(const TaskSpec& task, std::size_t i) const {
    return task.name == "severity" ? items[i].severity_class : items[i].location_class;
  }
};

// Target-domain tensors as the trainer sees them: the type carries no label
// accessor, so nothing downstream of it can touch target labels.
class UnlabeledSet {
 public:
  UnlabeledSet() = default;

  static UnlabeledSet from_tensors(const std::vector<prep::InputTensor>& tensors) {
    UnlabeledSet s;
    s.rows_.reserve(tensors.size());
    for (const auto& t : tensors) s.rows_.push_back(t.data);
    return s;
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }

 private:
  std::vector<std::vector<double>> rows_;
};

inline nn::Tensor batch_from(const LabeledSet& set, const std::vector<std::size_t>& idx) {
  nn::Tensor t({idx.size(), prep::kTensorChannels, prep::kTensorWidth, prep::kTensorHeight});
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy(set.items[idx[i]].data.begin(), set.items[idx[i]].data.end(),
              t.data.begin() + static_cast<std::ptrdiff_t>(i * prep::InputTensor::size()));
  return t;
}

inline nn::Tensor batch_from(const UnlabeledSet& set, const std::vector<std::size_t>& idx) {
  nn::Tensor t({idx.size(), prep::kTensorChannels, prep::kTensorWidth, prep::kTensorHeight});
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy(set.row(idx[i]).begin(), set.row(idx[i]).end(),
              t.data.begin() + static_cast<std::ptrdiff_t>(i * prep::InputTensor::size()));
  return t;
}

inline std::vector<int> labels_from(const LabeledSet& set, const TaskSpec& task,
                                    const std::vector<std::size_t>& idx) {
  std::vector<int> y(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) y[i] = set.label_for(task, idx[i]);
  return y;
}

}  // namespace hiermud::mud
