#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hiermud/nn/tensor.hpp"

namespace hiermud::nn {

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using CMapRM = Eigen::Map<const MatrixRM>;

// Layers carry their parameters and expose pure forward/backward functions.
// Every forward call fills a per-call cache so that the same layer object can
// serve several concurrent passes (source/target batches) before backward.
// Backward accumulates into the parameter gradients and returns the input
// gradient scaled by the caller's coefficient.

// ---------------------------------------------------------------------------

struct DenseCache {
  Tensor input;  // (N, in)
};

// Fully connected layer: y = x W^T + b.
struct Dense {
  Tensor weight;  // (out, in)
  Tensor bias;    // (out)

  Dense(std::size_t in, std::size_t out) : weight({out, in}), bias({out}) {
    weight.ensure_grad();
    bias.ensure_grad();
  }

  std::size_t in_features() const { return weight.dim(1); }
  std::size_t out_features() const { return weight.dim(0); }

  Tensor forward(const Tensor& x, DenseCache& cache) const {
    if (x.shape.size() != 2 || x.dim(1) != in_features())
      throw std::invalid_argument("dense: bad input shape " + x.shape_str());
    const std::size_t n = x.dim(0);
    Tensor y({n, out_features()});
    CMapRM xm(x.data.data(), static_cast<Eigen::Index>(n),
              static_cast<Eigen::Index>(in_features()));
    CMapRM wm(weight.data.data(), static_cast<Eigen::Index>(out_features()),
              static_cast<Eigen::Index>(in_features()));
    MapRM ym(y.data.data(), static_cast<Eigen::Index>(n),
             static_cast<Eigen::Index>(out_features()));
    ym.noalias() = xm * wm.transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < out_features(); ++j) y.data[i * out_features() + j] += bias.data[j];
    cache.input = x;
    return y;
  }

  Tensor backward(const DenseCache& cache, const Tensor& grad_out) {
    const std::size_t n = cache.input.dim(0);
    CMapRM xm(cache.input.data.data(), static_cast<Eigen::Index>(n),
              static_cast<Eigen::Index>(in_features()));
    CMapRM gm(grad_out.data.data(), static_cast<Eigen::Index>(n),
              static_cast<Eigen::Index>(out_features()));
    MapRM gw(weight.grad.data(), static_cast<Eigen::Index>(out_features()),
             static_cast<Eigen::Index>(in_features()));
    gw.noalias() += gm.transpose() * xm;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < out_features(); ++j)
        bias.grad[j] += grad_out.data[i * out_features() + j];
    Tensor grad_in({n, in_features()});
    CMapRM wm(weight.data.data(), static_cast<Eigen::Index>(out_features()),
              static_cast<Eigen::Index>(in_features()));
    MapRM gi(grad_in.data.data(), static_cast<Eigen::Index>(n),
             static_cast<Eigen::Index>(in_features()));
    gi.noalias() = gm * wm;
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

struct Conv2dCache {
  Tensor input;  // (N, Cin, H, W)
};

// Valid (no padding) 2-D cross-correlation with stride 1, im2col + GEMM.
struct Conv2d {
  Tensor weight;  // (Cout, Cin*kh*kw)
  Tensor bias;    // (Cout)
  std::size_t in_channels, out_channels, kernel_h, kernel_w;

  Conv2d(std::size_t cin, std::size_t cout, std::size_t kh, std::size_t kw)
      : weight({cout, cin * kh * kw}),
        bias({cout}),
        in_channels(cin),
        out_channels(cout),
        kernel_h(kh),
        kernel_w(kw) {
    weight.ensure_grad();
    bias.ensure_grad();
  }

  static void im2col(const double* img, std::size_t cin, std::size_t h, std::size_t w,
                     std::size_t kh, std::size_t kw, double* col) {
    // col is (cin*kh*kw) x (oh*ow), row-major.
    const std::size_t oh = h - kh + 1, ow = w - kw + 1;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cin; ++c)
      for (std::size_t dy = 0; dy < kh; ++dy)
        for (std::size_t dx = 0; dx < kw; ++dx, ++row) {
          double* dst = col + row * oh * ow;
          const double* src = img + (c * h + dy) * w + dx;
          for (std::size_t y = 0; y < oh; ++y) {
            const double* s = src + y * w;
            for (std::size_t x = 0; x < ow; ++x) dst[y * ow + x] = s[x];
          }
        }
  }

  Tensor forward(const Tensor& x, Conv2dCache& cache) const {
    if (x.shape.size() != 4 || x.dim(1) != in_channels)
      throw std::invalid_argument("conv2d: bad input shape " + x.shape_str());
    const std::size_t n = x.dim(0), h = x.dim(2), w = x.dim(3);
    if (h < kernel_h || w < kernel_w)
      throw std::invalid_argument("conv2d: input smaller than the kernel");
    const std::size_t oh = h - kernel_h + 1, ow = w - kernel_w + 1;
    const std::size_t k = in_channels * kernel_h * kernel_w;
    Tensor y({n, out_channels, oh, ow});
    std::vector<double> col(k * oh * ow);
    CMapRM wm(weight.data.data(), static_cast<Eigen::Index>(out_channels),
              static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
      im2col(x.data.data() + i * in_channels * h * w, in_channels, h, w, kernel_h, kernel_w,
             col.data());
      CMapRM cm(col.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(oh * ow));
      MapRM ym(y.data.data() + i * out_channels * oh * ow,
               static_cast<Eigen::Index>(out_channels), static_cast<Eigen::Index>(oh * ow));
      ym.noalias() = wm * cm;
      for (std::size_t c = 0; c < out_channels; ++c)
        ym.row(static_cast<Eigen::Index>(c)).array() += bias.data[c];
    }
    cache.input = x;
    return y;
  }

  Tensor backward(const Conv2dCache& cache, const Tensor& grad_out) {
    const Tensor& x = cache.input;
    const std::size_t n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const std::size_t oh = h - kernel_h + 1, ow = w - kernel_w + 1;
    const std::size_t k = in_channels * kernel_h * kernel_w;
    Tensor grad_in(x.shape);
    std::vector<double> col(k * oh * ow);
    std::vector<double> dcol(k * oh * ow);
    CMapRM wm(weight.data.data(), static_cast<Eigen::Index>(out_channels),
              static_cast<Eigen::Index>(k));
    MapRM gw(weight.grad.data(), static_cast<Eigen::Index>(out_channels),
             static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
      im2col(x.data.data() + i * in_channels * h * w, in_channels, h, w, kernel_h, kernel_w,
             col.data());
      CMapRM cm(col.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(oh * ow));
      CMapRM gm(grad_out.data.data() + i * out_channels * oh * ow,
                static_cast<Eigen::Index>(out_channels), static_cast<Eigen::Index>(oh * ow));
      gw.noalias() += gm * cm.transpose();
      for (std::size_t c = 0; c < out_channels; ++c)
        bias.grad[c] += gm.row(static_cast<Eigen::Index>(c)).sum();
      MapRM dm(dcol.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(oh * ow));
      dm.noalias() = wm.transpose() * gm;
      // col2im scatter-add.
      double* gx = grad_in.data.data() + i * in_channels * h * w;
      std::size_t row = 0;
      for (std::size_t c = 0; c < in_channels; ++c)
        for (std::size_t dy = 0; dy < kernel_h; ++dy)
          for (std::size_t dx = 0; dx < kernel_w; ++dx, ++row) {
            const double* src = dcol.data() + row * oh * ow;
            double* dst = gx + (c * h + dy) * w + dx;
            for (std::size_t y = 0; y < oh; ++y) {
              double* dp = dst + y * w;
              for (std::size_t xx = 0; xx < ow; ++xx) dp[xx] += src[y * ow + xx];
            }
          }
    }
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

struct MaxPool2dCache {
  std::vector<std::size_t> argmax;  // flat input index per output element
  std::vector<std::size_t> in_shape;
};

// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
// Ties go to the first maximal element in row-major order.
struct MaxPool2d {
  Tensor forward(const Tensor& x, MaxPool2dCache& cache) const {
    if (x.shape.size() != 4) throw std::invalid_argument("maxpool: expects N,C,H,W");
    const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    if (h < 2 || w < 2) throw std::invalid_argument("maxpool: input smaller than the window");
    const std::size_t oh = h / 2, ow = w / 2;
    Tensor y({n, c, oh, ow});
    cache.argmax.resize(y.element_count());
    cache.in_shape = x.shape;
    std::size_t out = 0;
    for (std::size_t i = 0; i < n * c; ++i) {
      const double* plane = x.data.data() + i * h * w;
      for (std::size_t py = 0; py < oh; ++py)
        for (std::size_t px = 0; px < ow; ++px, ++out) {
          std::size_t best = (2 * py) * w + 2 * px;
          double best_v = plane[best];
          const std::size_t cand[3] = {(2 * py) * w + 2 * px + 1, (2 * py + 1) * w + 2 * px,
                                       (2 * py + 1) * w + 2 * px + 1};
          for (std::size_t idx : cand)
            if (plane[idx] > best_v) {
              best_v = plane[idx];
              best = idx;
            }
          y.data[out] = best_v;
          cache.argmax[out] = i * h * w + best;
        }
    }
    return y;
  }

  Tensor backward(const MaxPool2dCache& cache, const Tensor& grad_out) const {
    Tensor grad_in(cache.in_shape);
    for (std::size_t o = 0; o < grad_out.data.size(); ++o)
      grad_in.data[cache.argmax[o]] += grad_out.data[o];
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

struct EltwiseCache {
  Tensor input;
};

struct LeakyReLU {
  double slope = 0.01;

  Tensor forward(const Tensor& x, EltwiseCache& cache) const {
    Tensor y = x;
    for (double& v : y.data) v = v >= 0.0 ? v : slope * v;
    cache.input = x;
    return y;
  }

  Tensor backward(const EltwiseCache& cache, const Tensor& grad_out) const {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.data.size(); ++i)
      if (cache.input.data[i] < 0.0) grad_in.data[i] *= slope;
    return grad_in;
  }
};

struct ReLU {
  Tensor forward(const Tensor& x, EltwiseCache& cache) const {
    Tensor y = x;
    for (double& v : y.data) v = v > 0.0 ? v : 0.0;
    cache.input = x;
    return y;
  }

  Tensor backward(const EltwiseCache& cache, const Tensor& grad_out) const {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.data.size(); ++i)
      if (cache.input.data[i] <= 0.0) grad_in.data[i] = 0.0;
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

struct SoftmaxCache {
  Tensor probs;
};

// Row-wise softmax over the last dimension of an (N, C) tensor.
struct Softmax {
  Tensor forward(const Tensor& x, SoftmaxCache& cache) const {
    if (x.shape.size() != 2) throw std::invalid_argument("softmax: expects N,C");
    const std::size_t n = x.dim(0), c = x.dim(1);
    Tensor y({n, c});
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = x.data.data() + i * c;
      double mx = row[0];
      for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
      double sum = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        const double e = std::exp(row[j] - mx);
        y.data[i * c + j] = e;
        sum += e;
      }
      for (std::size_t j = 0; j < c; ++j) y.data[i * c + j] /= sum;
    }
    cache.probs = y;
    return y;
  }

  Tensor backward(const SoftmaxCache& cache, const Tensor& grad_out) const {
    const std::size_t n = cache.probs.dim(0), c = cache.probs.dim(1);
    Tensor grad_in({n, c});
    for (std::size_t i = 0; i < n; ++i) {
      const double* p = cache.probs.data.data() + i * c;
      const double* g = grad_out.data.data() + i * c;
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += p[j] * g[j];
      for (std::size_t j = 0; j < c; ++j) grad_in.data[i * c + j] = p[j] * (g[j] - dot);
    }
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

// Gradient reversal: identity forward, backward multiplies the upstream
// gradient by -lambda exactly.
struct Grl {
  double lambda = 1.0;

  Tensor forward(const Tensor& x) const { return x; }

  Tensor backward(const Tensor& grad_out) const {
    Tensor grad_in = grad_out;
    for (double& v : grad_in.data) v = -lambda * v;
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

struct FlattenCache {
  std::vector<std::size_t> in_shape;
};

struct Flatten {
  Tensor forward(const Tensor& x, FlattenCache& cache) const {
    cache.in_shape = x.shape;
    Tensor y = x;
    const std::size_t n = x.dim(0);
    y.shape = {n, x.element_count() / n};
    return y;
  }

  Tensor backward(const FlattenCache& cache, const Tensor& grad_out) const {
    Tensor grad_in = grad_out;
    grad_in.shape = cache.in_shape;
    return grad_in;
  }
};

// ---------------------------------------------------------------------------

using Layer = std::variant<Dense, Conv2d, MaxPool2d, LeakyReLU, ReLU, Softmax, Grl, Flatten>;
using LayerCache =
    std::variant<DenseCache, Conv2dCache, MaxPool2dCache, EltwiseCache, SoftmaxCache,
                 FlattenCache, std::monostate>;

// An ordered stack of layers; caches are per forward call, so one stack can
// run several passes (e.g. source and target batches) before backward.
struct Stack {
  std::vector<Layer> layers;

  struct Pass {
    std::vector<LayerCache> caches;
  };

  Tensor forward(const Tensor& x, Pass& pass) const {
    pass.caches.clear();
    pass.caches.reserve(layers.size());
    Tensor cur = x;
    for (const Layer& layer : layers) {
      cur = std::visit(
          [&](const auto& l) -> Tensor {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Dense>) {
              DenseCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else if constexpr (std::is_same_v<T, Conv2d>) {
              Conv2dCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else if constexpr (std::is_same_v<T, MaxPool2d>) {
              MaxPool2dCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else if constexpr (std::is_same_v<T, LeakyReLU> || std::is_same_v<T, ReLU>) {
              EltwiseCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else if constexpr (std::is_same_v<T, Softmax>) {
              SoftmaxCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else if constexpr (std::is_same_v<T, Flatten>) {
              FlattenCache c;
              Tensor y = l.forward(cur, c);
              pass.caches.emplace_back(std::move(c));
              return y;
            } else {  // Grl
              pass.caches.emplace_back(std::monostate{});
              return l.forward(cur);
            }
          },
          layer);
    }
    return cur;
  }

  // Backward through the whole stack; accumulates parameter gradients and
  // returns the gradient with respect to the stack input.
  Tensor backward(Pass& pass, const Tensor& grad_out) {
    Tensor cur = grad_out;
    for (std::size_t i = layers.size(); i-- > 0;) {
      cur = std::visit(
          [&](auto& l) -> Tensor {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, Dense>)
              return l.backward(std::get<DenseCache>(pass.caches[i]), cur);
            else if constexpr (std::is_same_v<T, Conv2d>)
              return l.backward(std::get<Conv2dCache>(pass.caches[i]), cur);
            else if constexpr (std::is_same_v<T, MaxPool2d>)
              return l.backward(std::get<MaxPool2dCache>(pass.caches[i]), cur);
            else if constexpr (std::is_same_v<T, LeakyReLU> || std::is_same_v<T, ReLU>)
              return l.backward(std::get<EltwiseCache>(pass.caches[i]), cur);
            else if constexpr (std::is_same_v<T, Softmax>)
              return l.backward(std::get<SoftmaxCache>(pass.caches[i]), cur);
            else if constexpr (std::is_same_v<T, Flatten>)
              return l.backward(std::get<FlattenCache>(pass.caches[i]), cur);
            else  // Grl
              return l.backward(cur);
          },
          layers[i]);
    }
    return cur;
  }
};

}  // namespace hiermud::nn
