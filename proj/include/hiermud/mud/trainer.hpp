#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiermud/core/rng.hpp"
#include "hiermud/mud/data.hpp"
#include "hiermud/mud/model.hpp"
#include "hiermud/mud/objective.hpp"
#include "hiermud/nn/loss.hpp"

namespace hiermud::mud {

// Raised when a loss or gradient becomes non-finite during training.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct HistoryRow {
  int epoch = 0;
  std::vector<double> task_loss;  // per task
  std::vector<double> d0_loss;    // per task (empty without adaptation)
  std::vector<double> dm_loss;    // per hard task (hierarchy only)
  std::vector<double> weight;     // per task
  double adversarial_term = 0.0;  // lambda-weighted domain losses
  double target_loc_acc = -1.0, target_sev_acc = -1.0;  // when evaluation labels given
};

// Extra predictor inputs computed from the raw batch (sequential baseline
// conditions the severity head on the predicted location's one-hot).
using ConditioningFn = std::function<nn::Tensor(const nn::Tensor&)>;

struct TrainResult {
  std::unique_ptr<HierModel> model;
  std::vector<HistoryRow> history;
};

namespace detail {

inline void scale(nn::Tensor& t, double c) {
  for (double& v : t.data) v *= c;
}

inline void add_to(nn::Tensor& dst, const nn::Tensor& src) {
  if (dst.data.empty()) {
    dst = src;
    return;
  }
  for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += src.data[i];
}

inline nn::Tensor concat_cols(const nn::Tensor& a, const nn::Tensor& b) {
  const std::size_t n = a.dim(0), ca = a.dim(1), cb = b.dim(1);
  nn::Tensor out({n, ca + cb});
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(a.data.begin() + static_cast<std::ptrdiff_t>(i * ca),
              a.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * ca),
              out.data.begin() + static_cast<std::ptrdiff_t>(i * (ca + cb)));
    std::copy(b.data.begin() + static_cast<std::ptrdiff_t>(i * cb),
              b.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cb),
              out.data.begin() + static_cast<std::ptrdiff_t>(i * (ca + cb) + ca));
  }
  return out;
}

inline nn::Tensor first_cols(const nn::Tensor& g, std::size_t keep) {
  const std::size_t n = g.dim(0), c = g.dim(1);
  nn::Tensor out({n, keep});
  for (std::size_t i = 0; i < n; ++i)
    std::copy(g.data.begin() + static_cast<std::ptrdiff_t>(i * c),
              g.data.begin() + static_cast<std::ptrdiff_t>(i * c + keep),
              out.data.begin() + static_cast<std::ptrdiff_t>(i * keep));
  return out;
}

}  // namespace detail

struct Prediction {
  int location_class = 0;
  int severity_class = 0;
  bool detection = false;
};

inline std::size_t conditioning_width(const ConditioningFn* fn) {
  // Probe with a dummy batch; keeps the extra width tied to what the
  // function actually produces instead of a config field that could drift.
  nn::Tensor probe({1, prep::kTensorChannels, prep::kTensorWidth, prep::kTensorHeight});
  return (*fn)(probe).dim(1);
}

// Forward-only inference through one model. For hard tasks the features go
// through the task-specific extractor when the hierarchy is on. Class 0 of
// the location head encodes "undamaged"; if the location head says
// undamaged, the severity output is forced to 0 as well.
inline std::vector<Prediction> predict_batch(const HierModel& m, const nn::Tensor& inputs,
                                             const ConditioningFn* conditioning = nullptr) {
  nn::Stack::Pass pass;
  const nn::Tensor feat = m.shared_extractor.forward(inputs, pass);
  const std::size_t n = inputs.dim(0);

  nn::Tensor extra;
  if (m.predictor_extra_inputs > 0) {
    if (conditioning == nullptr)
      throw std::invalid_argument("model expects conditioning features");
    extra = (*conditioning)(inputs);
  }

  std::vector<std::vector<int>> argmaxes(m.tasks.size());
  for (std::size_t t = 0; t < m.tasks.size(); ++t) {
    nn::Tensor in_feat = feat;
    if (!m.tasks[t].easy() && m.hierarchy) {
      nn::Stack::Pass wpass;
      const std::size_t j = static_cast<std::size_t>(static_cast<int>(t) - m.m1);
      in_feat = m.task_extractors[j].forward(feat, wpass);
    }
    if (m.predictor_extra_inputs > 0) in_feat = detail::concat_cols(in_feat, extra);
    nn::Stack::Pass ppass;
    const nn::Tensor probs = m.predictors[t].forward(in_feat, ppass);
    const std::size_t c = probs.dim(1);
    argmaxes[t].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < c; ++k)
        if (probs.data[i * c + k] > probs.data[i * c + best]) best = k;
      argmaxes[t][i] = static_cast<int>(best);
    }
  }

  std::vector<Prediction> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Prediction p;
    for (std::size_t t = 0; t < m.tasks.size(); ++t) {
      if (m.tasks[t].name == "location") p.location_class = argmaxes[t][i];
      if (m.tasks[t].name == "severity") p.severity_class = argmaxes[t][i];
    }
    p.detection = p.location_class != 0;
    if (m.tasks.size() > 1 && p.location_class == 0) p.severity_class = 0;
    out[i] = p;
  }
  return out;
}

// One training run of the hierarchical multi-task adversarial loop.
//
// Every iteration samples, per task, a labeled source batch and (when
// adaptation is on) an unlabeled target batch, computes the task losses on
// the shared/hierarchical features, the shared domain-classifier loss per
// task and the task-specific domain losses, then takes one SGD step whose
// per-group coefficients realize the saddle-point updates: the GRL inside
// each domain stack subtracts the domain gradients from the extractors while
// the classifiers themselves descend on their own losses. The soft-max
// objective weighs the shared-domain terms by the adaptive weights; the
// average and hard-max variants replace those weights.
inline TrainResult train_single(const std::vector<TaskSpec>& tasks, const LabeledSet& source,
                                const UnlabeledSet& target, const TrainConfig& cfg,
                                std::uint64_t seed, const ConditioningFn* conditioning = nullptr,
                                const LabeledSet* target_eval = nullptr) {
  cfg.validate();
  if (source.size() == 0) throw std::invalid_argument("empty source dataset");
  const bool adv = cfg.adversarial();
  if (adv && target.size() == 0)
    throw std::invalid_argument("adaptation requires target-domain data");

  TrainResult result;
  result.model = build_model(tasks, cfg, seed,
                             conditioning != nullptr ? conditioning_width(conditioning) : 0);
  HierModel& model = *result.model;
  const std::size_t m_total = tasks.size();
  const std::size_t k = static_cast<std::size_t>(cfg.batch_size);
  core::Rng rng(core::derive_seed(seed, "train"));

  const std::vector<int> src_domain_labels(k, 1);
  const std::vector<int> tgt_domain_labels(k, 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    // Fixed draw order: per task source indices, then per task target indices.
    std::vector<std::vector<std::size_t>> src_idx(m_total), tgt_idx(m_total);
    for (std::size_t m = 0; m < m_total; ++m) {
      src_idx[m].resize(k);
      for (auto& ix : src_idx[m]) ix = rng.uniform_index(source.size());
    }
    if (adv)
      for (std::size_t m = 0; m < m_total; ++m) {
        tgt_idx[m].resize(k);
        for (auto& ix : tgt_idx[m]) ix = rng.uniform_index(target.size());
      }

    // Shared-extractor forward per batch.
    std::vector<nn::Tensor> xs(m_total), zs(m_total), xt(m_total), zt(m_total);
    std::vector<nn::Stack::Pass> w0_s(m_total), w0_t(m_total);
    for (std::size_t m = 0; m < m_total; ++m) {
      xs[m] = batch_from(source, src_idx[m]);
      zs[m] = model.shared_extractor.forward(xs[m], w0_s[m]);
      if (adv) {
        xt[m] = batch_from(target, tgt_idx[m]);
        zt[m] = model.shared_extractor.forward(xt[m], w0_t[m]);
      }
    }

    // Task-specific features for hard tasks.
    const std::size_t n_hard = static_cast<std::size_t>(model.m2);
    std::vector<nn::Tensor> hs(n_hard), ht(n_hard);
    std::vector<nn::Stack::Pass> ws_s(n_hard), ws_t(n_hard);
    if (model.hierarchy)
      for (std::size_t j = 0; j < n_hard; ++j) {
        const std::size_t m = static_cast<std::size_t>(model.m1) + j;
        hs[j] = model.task_extractors[j].forward(zs[m], ws_s[j]);
        if (adv && !model.task_domains.empty())
          ht[j] = model.task_extractors[j].forward(zt[m], ws_t[j]);
      }

    // Task predictors and losses on the source batches.
    HistoryRow row;
    row.epoch = epoch;
    row.task_loss.resize(m_total);
    row.weight.assign(m_total, 0.0);
    std::vector<nn::Stack::Pass> pred_pass(m_total);
    std::vector<nn::Tensor> pred_probs(m_total);
    std::vector<std::vector<int>> pred_labels(m_total);
    std::vector<nn::Tensor> cond_extra(m_total);
    for (std::size_t m = 0; m < m_total; ++m) {
      nn::Tensor in_feat;
      if (tasks[m].easy() || !model.hierarchy)
        in_feat = zs[m];
      else
        in_feat = hs[static_cast<std::size_t>(static_cast<int>(m) - model.m1)];
      if (model.predictor_extra_inputs > 0) {
        cond_extra[m] = (*conditioning)(xs[m]);
        in_feat = detail::concat_cols(in_feat, cond_extra[m]);
      }
      pred_probs[m] = model.predictors[m].forward(in_feat, pred_pass[m]);
      pred_labels[m] = labels_from(source, tasks[m], src_idx[m]);
      row.task_loss[m] = nn::cross_entropy(pred_probs[m], pred_labels[m]);
    }

    // Domain classifiers: source labeled 1, target labeled 0.
    std::vector<nn::Stack::Pass> d0_s(m_total), d0_t(m_total);
    std::vector<nn::Tensor> d0_probs_s(m_total), d0_probs_t(m_total);
    std::vector<nn::Stack::Pass> dm_s(n_hard), dm_t(n_hard);
    std::vector<nn::Tensor> dm_probs_s(n_hard), dm_probs_t(n_hard);
    if (adv) {
      row.d0_loss.resize(m_total);
      for (std::size_t m = 0; m < m_total; ++m) {
        d0_probs_s[m] = model.shared_domain.forward(zs[m], d0_s[m]);
        d0_probs_t[m] = model.shared_domain.forward(zt[m], d0_t[m]);
        row.d0_loss[m] = nn::cross_entropy(d0_probs_s[m], src_domain_labels) +
                         nn::cross_entropy(d0_probs_t[m], tgt_domain_labels);
      }
      if (!model.task_domains.empty()) {
        row.dm_loss.resize(n_hard);
        for (std::size_t j = 0; j < n_hard; ++j) {
          dm_probs_s[j] = model.task_domains[j].forward(hs[j], dm_s[j]);
          dm_probs_t[j] = model.task_domains[j].forward(ht[j], dm_t[j]);
          row.dm_loss[j] = nn::cross_entropy(dm_probs_s[j], src_domain_labels) +
                           nn::cross_entropy(dm_probs_t[j], tgt_domain_labels);
        }
      }
      row.weight = objective_weights(cfg.objective, row.d0_loss);
      for (std::size_t m = 0; m < m_total; ++m)
        row.adversarial_term += cfg.lambda_d0 * row.weight[m] * row.d0_loss[m];
      for (std::size_t j = 0; j < row.dm_loss.size(); ++j)
        row.adversarial_term += cfg.lambda_dm * row.dm_loss[j];
    }

    for (double l : row.task_loss)
      if (!std::isfinite(l)) throw DivergenceError("task loss diverged");
    for (double l : row.d0_loss)
      if (!std::isfinite(l)) throw DivergenceError("domain loss diverged");
    for (double l : row.dm_loss)
      if (!std::isfinite(l)) throw DivergenceError("task domain loss diverged");

    // Backward. Coefficients fold the update-rule normalizations into one
    // SGD step: easy tasks lambda_m / M1, hard tasks lambda_m / M2, shared
    // domain lambda_d0 * w_m, task domains lambda_dm.
    model.store.zero_grad();
    std::vector<nn::Tensor> dzs(m_total), dzt(m_total), dhs(n_hard), dht(n_hard);
    for (std::size_t m = 0; m < m_total; ++m) {
      const double norm =
          tasks[m].easy() ? static_cast<double>(model.m1) : static_cast<double>(model.m2);
      const double coef = cfg.lambda_for_task(m) / norm;
      nn::Tensor g = nn::cross_entropy_backward(pred_probs[m], pred_labels[m]);
      detail::scale(g, coef);
      nn::Tensor gin = model.predictors[m].backward(pred_pass[m], g);
      if (model.predictor_extra_inputs > 0) gin = detail::first_cols(gin, kFeatureDim);
      if (tasks[m].easy() || !model.hierarchy)
        detail::add_to(dzs[m], gin);
      else
        detail::add_to(dhs[static_cast<std::size_t>(static_cast<int>(m) - model.m1)], gin);
    }
    if (adv) {
      for (std::size_t m = 0; m < m_total; ++m) {
        const double coef = cfg.lambda_d0 * row.weight[m];
        if (coef != 0.0) {
          nn::Tensor g = nn::cross_entropy_backward(d0_probs_s[m], src_domain_labels);
          detail::scale(g, coef);
          detail::add_to(dzs[m], model.shared_domain.backward(d0_s[m], g));
          g = nn::cross_entropy_backward(d0_probs_t[m], tgt_domain_labels);
          detail::scale(g, coef);
          detail::add_to(dzt[m], model.shared_domain.backward(d0_t[m], g));
        }
      }
      for (std::size_t j = 0; j < n_hard && !model.task_domains.empty(); ++j) {
        nn::Tensor g = nn::cross_entropy_backward(dm_probs_s[j], src_domain_labels);
        detail::scale(g, cfg.lambda_dm);
        detail::add_to(dhs[j], model.task_domains[j].backward(dm_s[j], g));
        g = nn::cross_entropy_backward(dm_probs_t[j], tgt_domain_labels);
        detail::scale(g, cfg.lambda_dm);
        detail::add_to(dht[j], model.task_domains[j].backward(dm_t[j], g));
      }
    }
    if (model.hierarchy)
      for (std::size_t j = 0; j < n_hard; ++j) {
        const std::size_t m = static_cast<std::size_t>(model.m1) + j;
        if (!dhs[j].data.empty())
          detail::add_to(dzs[m], model.task_extractors[j].backward(ws_s[j], dhs[j]));
        if (!dht[j].data.empty())
          detail::add_to(dzt[m], model.task_extractors[j].backward(ws_t[j], dht[j]));
      }
    for (std::size_t m = 0; m < m_total; ++m) {
      if (!dzs[m].data.empty()) model.shared_extractor.backward(w0_s[m], dzs[m]);
      if (adv && !dzt[m].data.empty()) model.shared_extractor.backward(w0_t[m], dzt[m]);
    }

    if (!model.store.gradients_finite()) throw DivergenceError("non-finite gradient");
    model.store.sgd_step(cfg.learning_rate);

    if (target_eval != nullptr && cfg.metrics_every > 0 && epoch % cfg.metrics_every == 0) {
      nn::Tensor all({target_eval->size(), prep::kTensorChannels, prep::kTensorWidth,
                      prep::kTensorHeight});
      for (std::size_t i = 0; i < target_eval->size(); ++i)
        std::copy(target_eval->items[i].data.begin(), target_eval->items[i].data.end(),
                  all.data.begin() + static_cast<std::ptrdiff_t>(i * prep::InputTensor::size()));
      const auto preds = predict_batch(model, all, conditioning);
      double loc_ok = 0.0, sev_ok = 0.0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        loc_ok += preds[i].location_class == target_eval->items[i].location_class;
        sev_ok += preds[i].severity_class == target_eval->items[i].severity_class;
      }
      row.target_loc_acc = loc_ok / static_cast<double>(preds.size());
      row.target_sev_acc = sev_ok / static_cast<double>(preds.size());
    }
    result.history.push_back(std::move(row));
  }
  return result;
}

}  // namespace hiermud::mud
