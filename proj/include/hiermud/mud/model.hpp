#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiermud/mud/config.hpp"
#include "hiermud/mud/tasks.hpp"
#include "hiermud/nn/param_store.hpp"
#include "hiermud/prep/tensorize.hpp"

namespace hiermud::mud {

inline constexpr std::size_t kFeatureDim = 1250;  // 50 x 5 x 5 flatten

// Task-shared extractor: three conv/pool/LeakyReLU blocks taking the
// 4x64x64 input through 64x60x60 -> 64x30x30 -> 50x26x26 -> 50x13x13 ->
// 50x11x11 -> 50x5x5, then flatten to 1250.
inline nn::Stack make_shared_extractor() {
  nn::Stack s;
  s.layers.emplace_back(nn::Conv2d(4, 64, 5, 5));
  s.layers.emplace_back(nn::MaxPool2d{});
  s.layers.emplace_back(nn::LeakyReLU{});
  s.layers.emplace_back(nn::Conv2d(64, 50, 5, 5));
  s.layers.emplace_back(nn::MaxPool2d{});
  s.layers.emplace_back(nn::LeakyReLU{});
  s.layers.emplace_back(nn::Conv2d(50, 50, 3, 3));
  s.layers.emplace_back(nn::MaxPool2d{});
  s.layers.emplace_back(nn::LeakyReLU{});
  s.layers.emplace_back(nn::Flatten{});
  return s;
}

// Task-specific extractor: one 1250 -> 1250 fully connected layer with ReLU.
inline nn::Stack make_task_extractor() {
  nn::Stack s;
  s.layers.emplace_back(nn::Dense(kFeatureDim, kFeatureDim));
  s.layers.emplace_back(nn::ReLU{});
  return s;
}

// Task predictor: 1250 -> 100 -> C with ReLU and softmax.
inline nn::Stack make_predictor(std::size_t in_dim, int n_classes) {
  nn::Stack s;
  s.layers.emplace_back(nn::Dense(in_dim, 100));
  s.layers.emplace_back(nn::ReLU{});
  s.layers.emplace_back(nn::Dense(100, static_cast<std::size_t>(n_classes)));
  s.layers.emplace_back(nn::Softmax{});
  return s;
}

// Domain classifier: GRL then one 1250 -> 2 layer with softmax; deliberately
// simpler than the task predictors.
inline nn::Stack make_domain_classifier(double grl_lambda) {
  nn::Stack s;
  s.layers.emplace_back(nn::Grl{grl_lambda});
  s.layers.emplace_back(nn::Dense(kFeatureDim, 2));
  s.layers.emplace_back(nn::Softmax{});
  return s;
}

// The assembled model. Easy-task predictors consume the shared features;
// hard-task predictors consume the task-specific features when the hierarchy
// is enabled, otherwise the shared features. D0 watches the shared features,
// each D_m its task's specific features.
struct HierModel {
  std::vector<TaskSpec> tasks;  // easy first
  bool hierarchy = true;
  int m1 = 0, m2 = 0;
  std::size_t predictor_extra_inputs = 0;  // extra inputs concatenated ahead of predictors

  nn::Stack shared_extractor;
  std::vector<nn::Stack> task_extractors;   // size m2 when hierarchy, else 0
  std::vector<nn::Stack> predictors;        // size M
  nn::Stack shared_domain;
  std::vector<nn::Stack> task_domains;      // size m2 when hierarchy+adversarial, else 0
  nn::ParamStore store;

  HierModel() = default;
  HierModel(const HierModel&) = delete;
  HierModel& operator=(const HierModel&) = delete;

  const nn::Stack& predictor(std::size_t m) const { return predictors[m]; }
};

// Builds the model and registers parameters in a fixed order, then applies
// Glorot-uniform initialization from the seed. extra_predictor_inputs widens
// the predictor input (used by the sequential baseline's label conditioning).
inline std::unique_ptr<HierModel> build_model(const std::vector<TaskSpec>& tasks,
                                              const TrainConfig& cfg, std::uint64_t seed,
                                              std::size_t extra_predictor_inputs = 0) {
  auto model = std::make_unique<HierModel>();
  model->tasks = tasks;
  model->hierarchy = cfg.hierarchy;
  model->predictor_extra_inputs = extra_predictor_inputs;
  const auto [m1, m2] = count_split(tasks);
  model->m1 = m1;
  model->m2 = m2;

  model->shared_extractor = make_shared_extractor();
  if (cfg.hierarchy)
    for (int j = 0; j < m2; ++j) model->task_extractors.push_back(make_task_extractor());
  for (const auto& t : tasks)
    model->predictors.push_back(make_predictor(kFeatureDim + extra_predictor_inputs, t.n_classes));
  model->shared_domain = make_domain_classifier(1.0);
  if (cfg.hierarchy && cfg.adversarial())
    for (int j = 0; j < m2; ++j) model->task_domains.push_back(make_domain_classifier(1.0));

  auto& st = model->store;
  st.register_stack("w0", nn::ParamGroup::kSharedExtractor, model->shared_extractor);
  for (std::size_t j = 0; j < model->task_extractors.size(); ++j)
    st.register_stack("w" + std::to_string(j + 1), nn::ParamGroup::kTaskExtractor,
                      model->task_extractors[j]);
  for (std::size_t m = 0; m < model->predictors.size(); ++m)
    st.register_stack("f" + std::to_string(m + 1) + "_" + tasks[m].name,
                      nn::ParamGroup::kPredictor, model->predictors[m]);
  st.register_stack("d0", nn::ParamGroup::kSharedDomain, model->shared_domain);
  for (std::size_t j = 0; j < model->task_domains.size(); ++j)
    st.register_stack("d" + std::to_string(j + 1), nn::ParamGroup::kTaskDomain,
                      model->task_domains[j]);

  st.initialize(seed);

  // Table-layout guard: the conv arithmetic must land on the declared
  // flatten size.
  nn::Tensor probe({1, prep::kTensorChannels, prep::kTensorWidth, prep::kTensorHeight});
  nn::Stack::Pass pass;
  const nn::Tensor feat = model->shared_extractor.forward(probe, pass);
  if (feat.shape != std::vector<std::size_t>{1, kFeatureDim})
    throw std::logic_error("shared extractor does not produce the declared 1250 features");
  return model;
}

}  // namespace hiermud::mud
