// Copyright 2026 The LIC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lic/tape.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "conv_kernels.h"

namespace lic {

using internal::Col2Im;
using internal::ConstMapMat;
using internal::ConvGeometry;
using internal::Im2Col;
using internal::MapMat;

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

int64_t ShapeElementCount(const Shape& shape) {
  int64_t n = 1;
  for (int64_t e : shape) n *= e;
  return n;
}

void RequireSameShape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    throw InvalidInputError(std::string(what) + ": shape mismatch " +
                            ShapeToString(a) + " vs " + ShapeToString(b));
  }
}

int64_t Conv2dOutputExtent(int64_t in, int64_t kernel, int stride,
                           PadSpec pad) {
  if (stride < 1) throw InvalidInputError("conv2d: stride must be >= 1");
  const int64_t span = in + pad.begin + pad.end - kernel;
  if (span < 0) return 0;
  return span / stride + 1;
}

int64_t Conv2dTransposeOutputExtent(int64_t in, int64_t kernel, int stride,
                                    PadSpec pad) {
  if (stride < 1) {
    throw InvalidInputError("conv2d_transpose: stride must be >= 1");
  }
  return stride * (in - 1) + kernel - pad.begin - pad.end;
}

namespace {

template <typename T>
T LogisticCdf(T t) {
  if (t >= 0) return T(1) / (T(1) + std::exp(-t));
  const T e = std::exp(t);
  return e / (T(1) + e);
}

template <typename T>
T LogisticPdf(T t) {
  const T e = std::exp(-std::abs(t));
  return e / ((T(1) + e) * (T(1) + e));
}

void RequireOrder4(const Shape& s, const char* what) {
  if (s.size() != 4) {
    throw InvalidInputError(std::string(what) + ": expected NCHW tensor, got " +
                            ShapeToString(s));
  }
}

}  // namespace

template <typename T>
const BasicTensor<T>& Gradients<T>::operator[](Var v) const {
  if (!Has(v)) {
    throw InvalidInputError("no gradient recorded for tape-id " +
                            std::to_string(v.id));
  }
  return *by_id_[static_cast<size_t>(v.id)];
}

template <typename T>
bool Gradients<T>::Has(Var v) const {
  return v.id >= 0 && static_cast<size_t>(v.id) < by_id_.size() &&
         by_id_[static_cast<size_t>(v.id)].has_value();
}

template <typename T>
Var Tape<T>::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

template <typename T>
const typename Tape<T>::Node& Tape<T>::node(Var v) const {
  if (v.id < 0 || static_cast<size_t>(v.id) >= nodes_.size()) {
    throw InvalidInputError("unknown tape-id " + std::to_string(v.id));
  }
  return nodes_[static_cast<size_t>(v.id)];
}

template <typename T>
const BasicTensor<T>& Tape<T>::value(Var v) const {
  return node(v).value;
}

template <typename T>
bool Tape<T>::requires_grad(Var v) const {
  return node(v).requires_grad;
}

template <typename T>
const std::string& Tape<T>::op_name(Var v) const {
  return node(v).op;
}

template <typename T>
int64_t Tape<T>::FlooredCount(Var v) const {
  return node(v).aux;
}

template <typename T>
void Tape<T>::Accumulate(Var v, const BasicTensor<T>& g) {
  std::optional<BasicTensor<T>>& dst = grads_[static_cast<size_t>(v.id)];
  if (!dst) {
    dst = g;
    return;
  }
  auto d = dst->data();
  auto s = g.data();
  for (size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

template <typename T>
Var Tape<T>::Leaf(BasicTensor<T> value, bool requires_grad) {
  Node n;
  n.op = "leaf";
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.is_leaf = true;
  return Push(std::move(n));
}

template <typename T>
Var Tape<T>::Conv2d(Var input, Var kernel, int stride, PadSpec pad) {
  const BasicTensor<T>& x = value(input);
  const BasicTensor<T>& w = value(kernel);
  RequireOrder4(x.shape(), "conv2d input");
  RequireOrder4(w.shape(), "conv2d kernel");
  if (w.dim(1) != x.dim(1) || w.dim(2) != w.dim(3)) {
    throw InvalidInputError("conv2d: kernel " + ShapeToString(w.shape()) +
                            " incompatible with input " +
                            ShapeToString(x.shape()));
  }
  const int64_t n_batch = x.dim(0), cin = x.dim(1), h = x.dim(2),
                wd = x.dim(3), cout = w.dim(0), k = w.dim(2);
  const int64_t oh = Conv2dOutputExtent(h, k, stride, pad);
  const int64_t ow = Conv2dOutputExtent(wd, k, stride, pad);
  if (oh < 1 || ow < 1) {
    throw InvalidInputError("conv2d: kernel " + ShapeToString(w.shape()) +
                            " larger than padded input " +
                            ShapeToString(x.shape()));
  }
  const ConvGeometry g{cin, h, wd, k, stride, pad.begin, oh, ow};
  BasicTensor<T> out(Shape{n_batch, cout, oh, ow});
  std::vector<T> cols(static_cast<size_t>(g.rows() * g.cols()));
  ConstMapMat<T> wm(w.data().data(), cout, g.rows());
  for (int64_t n = 0; n < n_batch; ++n) {
    Im2Col(x.data().data() + n * cin * h * wd, g, cols.data());
    MapMat<T>(out.data().data() + n * cout * g.cols(), cout, g.cols())
        .noalias() = wm * ConstMapMat<T>(cols.data(), g.rows(), g.cols());
  }

  Node node;
  node.op = "conv2d";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(input) || NeedsGrad(kernel);
  node.backward = [this, input, kernel, g, n_batch,
                   cout](const BasicTensor<T>& gy) {
    const BasicTensor<T>& xv = value(input);
    const BasicTensor<T>& wv = value(kernel);
    ConstMapMat<T> wm(wv.data().data(), cout, g.rows());
    std::vector<T> cols(static_cast<size_t>(g.rows() * g.cols()));
    const int64_t in_plane = g.channels * g.height * g.width;
    if (NeedsGrad(input)) {
      BasicTensor<T> gx(xv.shape());
      for (int64_t n = 0; n < n_batch; ++n) {
        MapMat<T>(cols.data(), g.rows(), g.cols()).noalias() =
            wm.transpose() *
            ConstMapMat<T>(gy.data().data() + n * cout * g.cols(), cout,
                           g.cols());
        Col2Im(cols.data(), g, gx.data().data() + n * in_plane);
      }
      Accumulate(input, gx);
    }
    if (NeedsGrad(kernel)) {
      BasicTensor<T> gw(wv.shape());
      MapMat<T> gwm(gw.data().data(), cout, g.rows());
      for (int64_t n = 0; n < n_batch; ++n) {
        Im2Col(xv.data().data() + n * in_plane, g, cols.data());
        gwm.noalias() +=
            ConstMapMat<T>(gy.data().data() + n * cout * g.cols(), cout,
                           g.cols()) *
            ConstMapMat<T>(cols.data(), g.rows(), g.cols()).transpose();
      }
      Accumulate(kernel, gw);
    }
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Conv2dTranspose(Var input, Var kernel, int stride, PadSpec pad) {
  const BasicTensor<T>& x = value(input);
  const BasicTensor<T>& w = value(kernel);
  RequireOrder4(x.shape(), "conv2d_transpose input");
  RequireOrder4(w.shape(), "conv2d_transpose kernel");
  if (w.dim(0) != x.dim(1) || w.dim(2) != w.dim(3)) {
    throw InvalidInputError("conv2d_transpose: kernel " +
                            ShapeToString(w.shape()) +
                            " incompatible with input " +
                            ShapeToString(x.shape()));
  }
  const int64_t n_batch = x.dim(0), cin = x.dim(1), h = x.dim(2),
                wd = x.dim(3), cout = w.dim(1), k = w.dim(2);
  const int64_t oh = Conv2dTransposeOutputExtent(h, k, stride, pad);
  const int64_t ow = Conv2dTransposeOutputExtent(wd, k, stride, pad);
  if (oh < 1 || ow < 1) {
    throw InvalidInputError("conv2d_transpose: empty output for input " +
                            ShapeToString(x.shape()));
  }
  // The output image is the "source" of the equivalent correlation and the
  // input positions are its window positions.
  const ConvGeometry g{cout, oh, ow, k, stride, pad.begin, h, wd};
  BasicTensor<T> out(Shape{n_batch, cout, oh, ow});
  std::vector<T> cols(static_cast<size_t>(g.rows() * g.cols()));
  ConstMapMat<T> wm(w.data().data(), cin, g.rows());
  const int64_t out_plane = cout * oh * ow;
  for (int64_t n = 0; n < n_batch; ++n) {
    MapMat<T>(cols.data(), g.rows(), g.cols()).noalias() =
        wm.transpose() *
        ConstMapMat<T>(x.data().data() + n * cin * g.cols(), cin, g.cols());
    Col2Im(cols.data(), g, out.data().data() + n * out_plane);
  }

  Node node;
  node.op = "conv2d_transpose";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(input) || NeedsGrad(kernel);
  node.backward = [this, input, kernel, g, n_batch, cin,
                   out_plane](const BasicTensor<T>& gy) {
    const BasicTensor<T>& xv = value(input);
    const BasicTensor<T>& wv = value(kernel);
    ConstMapMat<T> wm(wv.data().data(), cin, g.rows());
    std::vector<T> cols(static_cast<size_t>(g.rows() * g.cols()));
    BasicTensor<T> gx;
    BasicTensor<T> gw;
    const bool want_x = NeedsGrad(input);
    const bool want_w = NeedsGrad(kernel);
    if (want_x) gx = BasicTensor<T>(xv.shape());
    if (want_w) gw = BasicTensor<T>(wv.shape());
    for (int64_t n = 0; n < n_batch; ++n) {
      Im2Col(gy.data().data() + n * out_plane, g, cols.data());
      ConstMapMat<T> cm(cols.data(), g.rows(), g.cols());
      if (want_x) {
        MapMat<T>(gx.data().data() + n * cin * g.cols(), cin, g.cols())
            .noalias() = wm * cm;
      }
      if (want_w) {
        MapMat<T>(gw.data().data(), cin, g.rows()).noalias() +=
            ConstMapMat<T>(xv.data().data() + n * cin * g.cols(), cin,
                           g.cols()) *
            cm.transpose();
      }
    }
    if (want_x) Accumulate(input, gx);
    if (want_w) Accumulate(kernel, gw);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::AddChannelBias(Var input, Var bias) {
  const BasicTensor<T>& x = value(input);
  const BasicTensor<T>& b = value(bias);
  RequireOrder4(x.shape(), "add_channel_bias input");
  if (b.shape() != Shape{x.dim(1)}) {
    throw InvalidInputError("add_channel_bias: bias " +
                            ShapeToString(b.shape()) +
                            " does not match channels of " +
                            ShapeToString(x.shape()));
  }
  const int64_t n_batch = x.dim(0), c = x.dim(1),
                plane = x.dim(2) * x.dim(3);
  BasicTensor<T> out = x;
  auto o = out.data();
  for (int64_t n = 0; n < n_batch; ++n) {
    for (int64_t ch = 0; ch < c; ++ch) {
      const T bv = b[static_cast<size_t>(ch)];
      T* p = o.data() + (n * c + ch) * plane;
      for (int64_t i = 0; i < plane; ++i) p[i] += bv;
    }
  }
  Node node;
  node.op = "add_channel_bias";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(input) || NeedsGrad(bias);
  node.backward = [this, input, bias, n_batch, c,
                   plane](const BasicTensor<T>& gy) {
    if (NeedsGrad(input)) Accumulate(input, gy);
    if (NeedsGrad(bias)) {
      BasicTensor<T> gb(Shape{c});
      for (int64_t ch = 0; ch < c; ++ch) {
        double acc = 0;
        for (int64_t n = 0; n < n_batch; ++n) {
          const T* p = gy.data().data() + (n * c + ch) * plane;
          for (int64_t i = 0; i < plane; ++i) acc += p[i];
        }
        gb[static_cast<size_t>(ch)] = static_cast<T>(acc);
      }
      Accumulate(bias, gb);
    }
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::LeakyRelu(Var input, T slope) {
  if (!(slope > T(0) && slope <= T(1))) {
    throw InvalidInputError("leaky_relu: slope must lie in (0, 1]");
  }
  BasicTensor<T> out = value(input);
  for (T& v : out.data()) v = v > T(0) ? v : slope * v;
  Node node;
  node.op = "leaky_relu";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(input);
  node.backward = [this, input, slope](const BasicTensor<T>& gy) {
    const auto x = value(input).data();
    BasicTensor<T> gx = gy;
    auto g = gx.data();
    for (size_t i = 0; i < g.size(); ++i) {
      if (!(x[i] > T(0))) g[i] *= slope;
    }
    Accumulate(input, gx);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Add(Var a, Var b) {
  RequireSameShape(value(a).shape(), value(b).shape(), "add");
  BasicTensor<T> out = value(a);
  auto o = out.data();
  auto bv = value(b).data();
  for (size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
  Node node;
  node.op = "add";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(a) || NeedsGrad(b);
  node.backward = [this, a, b](const BasicTensor<T>& gy) {
    if (NeedsGrad(a)) Accumulate(a, gy);
    if (NeedsGrad(b)) Accumulate(b, gy);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Sub(Var a, Var b) {
  RequireSameShape(value(a).shape(), value(b).shape(), "sub");
  BasicTensor<T> out = value(a);
  auto o = out.data();
  auto bv = value(b).data();
  for (size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  Node node;
  node.op = "sub";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(a) || NeedsGrad(b);
  node.backward = [this, a, b](const BasicTensor<T>& gy) {
    if (NeedsGrad(a)) Accumulate(a, gy);
    if (NeedsGrad(b)) {
      BasicTensor<T> neg = gy;
      for (T& v : neg.data()) v = -v;
      Accumulate(b, neg);
    }
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Scale(Var a, T factor) {
  BasicTensor<T> out = value(a);
  for (T& v : out.data()) v *= factor;
  Node node;
  node.op = "scale";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(a);
  node.backward = [this, a, factor](const BasicTensor<T>& gy) {
    BasicTensor<T> g = gy;
    for (T& v : g.data()) v *= factor;
    Accumulate(a, g);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Sum(Var a) {
  double acc = 0;
  for (T v : value(a).data()) acc += v;
  Node node;
  node.op = "sum";
  node.value = BasicTensor<T>::Scalar(static_cast<T>(acc));
  node.requires_grad = NeedsGrad(a);
  node.backward = [this, a](const BasicTensor<T>& gy) {
    Accumulate(a, BasicTensor<T>(value(a).shape(), gy.item()));
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Mse(Var a, Var b) {
  RequireSameShape(value(a).shape(), value(b).shape(), "mse");
  const auto av = value(a).data();
  const auto bv = value(b).data();
  if (av.empty()) throw InvalidInputError("mse: empty tensors");
  double acc = 0;
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = static_cast<double>(av[i]) - static_cast<double>(bv[i]);
    acc += d * d;
  }
  Node node;
  node.op = "mse";
  node.value =
      BasicTensor<T>::Scalar(static_cast<T>(acc / static_cast<double>(av.size())));
  node.requires_grad = NeedsGrad(a) || NeedsGrad(b);
  node.backward = [this, a, b](const BasicTensor<T>& gy) {
    const auto x = value(a).data();
    const auto y = value(b).data();
    const T k = gy.item() * T(2) / static_cast<T>(x.size());
    BasicTensor<T> ga(value(a).shape());
    auto g = ga.data();
    for (size_t i = 0; i < g.size(); ++i) g[i] = k * (x[i] - y[i]);
    if (NeedsGrad(b)) {
      BasicTensor<T> gb = ga;
      for (T& v : gb.data()) v = -v;
      Accumulate(b, gb);
    }
    if (NeedsGrad(a)) Accumulate(a, ga);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::Crop(Var input, int64_t top, int64_t left, int64_t height,
                  int64_t width) {
  const BasicTensor<T>& x = value(input);
  RequireOrder4(x.shape(), "crop");
  if (top < 0 || left < 0 || height < 1 || width < 1 ||
      top + height > x.dim(2) || left + width > x.dim(3)) {
    throw InvalidInputError("crop window outside " + ShapeToString(x.shape()));
  }
  const int64_t nc = x.dim(0) * x.dim(1), h = x.dim(2), w = x.dim(3);
  BasicTensor<T> out(Shape{x.dim(0), x.dim(1), height, width});
  for (int64_t p = 0; p < nc; ++p) {
    for (int64_t r = 0; r < height; ++r) {
      const T* src = x.data().data() + (p * h + top + r) * w + left;
      std::copy(src, src + width,
                out.data().data() + (p * height + r) * width);
    }
  }
  Node node;
  node.op = "crop";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(input);
  node.backward = [this, input, top, left, height, width, nc, h,
                   w](const BasicTensor<T>& gy) {
    BasicTensor<T> gx(value(input).shape());
    for (int64_t p = 0; p < nc; ++p) {
      for (int64_t r = 0; r < height; ++r) {
        const T* src = gy.data().data() + (p * height + r) * width;
        std::copy(src, src + width,
                  gx.data().data() + (p * h + top + r) * w + left);
      }
    }
    Accumulate(input, gx);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::RelaxedLikelihood(Var y, Var loc, Var log_scale) {
  const BasicTensor<T>& yv = value(y);
  RequireOrder4(yv.shape(), "relaxed_likelihood");
  const int64_t n_batch = yv.dim(0), c = yv.dim(1),
                plane = yv.dim(2) * yv.dim(3);
  if (value(loc).shape() != Shape{c} || value(log_scale).shape() != Shape{c}) {
    throw InvalidInputError("relaxed_likelihood: prior parameters must be [" +
                            std::to_string(c) + "]");
  }
  BasicTensor<T> out(yv.shape());
  for (int64_t n = 0; n < n_batch; ++n) {
    for (int64_t ch = 0; ch < c; ++ch) {
      const T mu = value(loc)[static_cast<size_t>(ch)];
      const T inv_s = std::exp(-value(log_scale)[static_cast<size_t>(ch)]);
      const size_t base = static_cast<size_t>((n * c + ch) * plane);
      for (int64_t i = 0; i < plane; ++i) {
        const T d = yv[base + i] - mu;
        const T upper = (d + T(0.5)) * inv_s;
        const T lower = (d - T(0.5)) * inv_s;
        // Evaluate on the side of the mode closest to zero so the CDF
        // difference does not cancel in the upper tail.
        const T sign = (upper + lower > T(0)) ? T(-1) : T(1);
        out[base + i] = std::abs(LogisticCdf(sign * upper) -
                                 LogisticCdf(sign * lower));
      }
    }
  }
  Node node;
  node.op = "relaxed_likelihood";
  node.value = std::move(out);
  node.requires_grad = NeedsGrad(y) || NeedsGrad(loc) || NeedsGrad(log_scale);
  node.backward = [this, y, loc, log_scale, n_batch, c,
                   plane](const BasicTensor<T>& gy) {
    const BasicTensor<T>& yv = value(y);
    const bool want_y = NeedsGrad(y);
    const bool want_prior = NeedsGrad(loc) || NeedsGrad(log_scale);
    BasicTensor<T> g_y;
    if (want_y) g_y = BasicTensor<T>(yv.shape());
    BasicTensor<T> g_loc(Shape{c});
    BasicTensor<T> g_ls(Shape{c});
    for (int64_t ch = 0; ch < c; ++ch) {
      const T mu = value(loc)[static_cast<size_t>(ch)];
      const T inv_s = std::exp(-value(log_scale)[static_cast<size_t>(ch)]);
      double acc_loc = 0;
      double acc_ls = 0;
      for (int64_t n = 0; n < n_batch; ++n) {
        const size_t base = static_cast<size_t>((n * c + ch) * plane);
        for (int64_t i = 0; i < plane; ++i) {
          const T d = yv[base + i] - mu;
          const T upper = (d + T(0.5)) * inv_s;
          const T lower = (d - T(0.5)) * inv_s;
          const T pu = LogisticPdf(upper);
          const T pl = LogisticPdf(lower);
          const T g = gy[base + i];
          const T dp_dy = (pu - pl) * inv_s;
          if (want_y) g_y[base + i] = g * dp_dy;
          if (want_prior) {
            acc_loc -= static_cast<double>(g * dp_dy);
            acc_ls -= static_cast<double>(g * (pu * upper - pl * lower));
          }
        }
      }
      g_loc[static_cast<size_t>(ch)] = static_cast<T>(acc_loc);
      g_ls[static_cast<size_t>(ch)] = static_cast<T>(acc_ls);
    }
    if (want_y) Accumulate(y, g_y);
    if (NeedsGrad(loc)) Accumulate(loc, g_loc);
    if (NeedsGrad(log_scale)) Accumulate(log_scale, g_ls);
  };
  return Push(std::move(node));
}

template <typename T>
Var Tape<T>::NegLog2Sum(Var p, T floor) {
  const auto pv = value(p).data();
  double acc = 0;
  int64_t floored = 0;
  for (T v : pv) {
    if (v < floor) {
      ++floored;
      acc -= std::log2(static_cast<double>(floor));
    } else {
      acc -= std::log2(static_cast<double>(v));
    }
  }
  Node node;
  node.op = "neg_log2_sum";
  node.value = BasicTensor<T>::Scalar(static_cast<T>(acc));
  node.requires_grad = NeedsGrad(p);
  node.aux = floored;
  node.backward = [this, p, floor](const BasicTensor<T>& gy) {
    const auto pv = value(p).data();
    const T k = -gy.item() / static_cast<T>(std::numbers::ln2);
    BasicTensor<T> gp(value(p).shape());
    auto g = gp.data();
    for (size_t i = 0; i < g.size(); ++i) {
      g[i] = pv[i] < floor ? T(0) : k / pv[i];
    }
    Accumulate(p, gp);
  };
  return Push(std::move(node));
}

template <typename T>
Gradients<T> Tape<T>::Backward(Var root) {
  const Node& r = node(root);
  if (r.value.size() != 1) {
    throw InvalidInputError("backward: root must be scalar, got " +
                            ShapeToString(r.value.shape()));
  }
  grads_.assign(nodes_.size(), std::nullopt);
  grads_[static_cast<size_t>(root.id)] = BasicTensor<T>(r.value.shape(), T(1));
  for (int i = root.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    std::optional<BasicTensor<T>>& g = grads_[static_cast<size_t>(i)];
    if (!n.requires_grad || !g) continue;
    if (!g->AllFinite()) {
      grads_.clear();
      throw DivergenceError("non-finite gradient at node #" +
                            std::to_string(i) + " (" + n.op + ")");
    }
    if (n.backward) n.backward(*g);
    if (!n.is_leaf) g.reset();
  }
  std::vector<std::optional<BasicTensor<T>>> out(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!n.is_leaf || !n.requires_grad) continue;
    out[i] = grads_[i] ? std::move(*grads_[i]) : BasicTensor<T>(n.value.shape());
  }
  grads_.clear();
  return Gradients<T>(std::move(out));
}

template class Tape<float>;
template class Tape<double>;
template class Gradients<float>;
template class Gradients<double>;

}  // namespace lic
