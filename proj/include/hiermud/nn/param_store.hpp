#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiermud/core/bytes.hpp"
#include "hiermud/core/rng.hpp"
#include "hiermud/nn/layers.hpp"
#include "hiermud/nn/tensor.hpp"

namespace hiermud::nn {

// Parameter update groups; which gradient-update coefficients apply to a
// tensor is decided by the group its stack belongs to.
enum class ParamGroup {
  kSharedExtractor,   // theta_W0
  kTaskExtractor,     // theta_W1..M2
  kPredictor,         // theta_F1..M
  kSharedDomain,      // theta_D0
  kTaskDomain,        // theta_D1..M2
};

struct ParamRef {
  std::string name;
  ParamGroup group;
  Tensor* tensor;
};

// Named registry over the parameter tensors owned by a model's layers.
// Registration order is fixed by construction, which pins initialization
// and checkpoint layout.
class ParamStore {
 public:
  void register_stack(const std::string& prefix, ParamGroup group, Stack& stack) {
    int index = 0;
    for (Layer& layer : stack.layers) {
      std::visit(
          [&](auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Dense> || std::is_same_v<T, Conv2d>) {
              const std::string base = prefix + "/" + std::to_string(index);
              refs_.push_back({base + "/weight", group, &l.weight});
              refs_.push_back({base + "/bias", group, &l.bias});
            }
          },
          layer);
      ++index;
    }
  }

  const std::vector<ParamRef>& refs() const { return refs_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& r : refs_) n += r.tensor->data.size();
    return n;
  }

  void zero_grad() {
    for (auto& r : refs_) r.tensor->zero_grad();
  }

  // Plain SGD: theta <- theta - mu * grad. No momentum, no weight decay.
  void sgd_step(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    for (auto& r : refs_) {
      Tensor& t = *r.tensor;
      for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] -= mu * t.grad[i];
    }
  }

  bool gradients_finite() const {
    for (const auto& r : refs_)
      for (double g : r.tensor->grad)
        if (!std::isfinite(g)) return false;
    return true;
  }

  // Glorot-uniform init on weights (bound sqrt(6/(fan_in+fan_out))), zero
  // biases; draw order follows registration order.
  void initialize(std::uint64_t seed) {
    core::Rng rng(core::derive_seed(seed, "init"));
    for (auto& r : refs_) {
      Tensor& t = *r.tensor;
      if (t.shape.size() == 1) {
        std::fill(t.data.begin(), t.data.end(), 0.0);
        continue;
      }
      // Dense: (out, in). Conv weights are stored as (Cout, Cin*kh*kw); the
      // receptive-field product is already folded into the second dim.
      const double fan_out = static_cast<double>(t.dim(0));
      const double fan_in = static_cast<double>(t.dim(1));
      const double bound = std::sqrt(6.0 / (fan_in + fan_out));
      for (double& v : t.data) v = rng.uniform(-bound, bound);
    }
  }

  // Checkpoint: magic "PRM1", u32 version, u32 tensor count, then per tensor
  // u32 name length, name bytes, u32 ndim, u32 dims..., float64 LE values.
  std::string serialize() const {
    std::string out = "PRM1";
    core::put_u32(out, 1);
    core::put_u32(out, static_cast<std::uint32_t>(refs_.size()));
    for (const auto& r : refs_) {
      core::put_u32(out, static_cast<std::uint32_t>(r.name.size()));
      out += r.name;
      core::put_u32(out, static_cast<std::uint32_t>(r.tensor->shape.size()));
      for (std::size_t d : r.tensor->shape) core::put_u32(out, static_cast<std::uint32_t>(d));
      for (double v : r.tensor->data) core::put_f64(out, v);
    }
    return out;
  }

  void deserialize(const std::string& bytes) {
    core::ByteReader r(bytes);
    if (r.raw(4) != "PRM1") throw std::runtime_error("bad checkpoint magic");
    if (r.u32() != 1) throw std::runtime_error("unsupported checkpoint version");
    const std::uint32_t count = r.u32();
    if (count != refs_.size()) throw std::runtime_error("checkpoint tensor count mismatch");
    for (auto& ref : refs_) {
      const std::string name = r.raw(r.u32());
      if (name != ref.name) throw std::runtime_error("checkpoint name mismatch: " + name);
      const std::uint32_t ndim = r.u32();
      std::vector<std::size_t> shape(ndim);
      for (auto& d : shape) d = r.u32();
      if (shape != ref.tensor->shape) throw std::runtime_error("checkpoint shape mismatch: " + name);
      for (double& v : ref.tensor->data) v = r.f64();
    }
  }

 private:
  std::vector<ParamRef> refs_;
};

}  // namespace hiermud::nn
