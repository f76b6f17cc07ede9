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

#include "lic/network.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "byte_io.h"
#include "lic/hash.h"
#include "lic/rng.h"

namespace lic {

using internal::ByteReader;
using internal::ByteWriter;

int ArchitectureConfig::downsampling() const {
  int d = 1;
  for (int s : strides) d *= s;
  return d;
}

PadSpec ArchitectureConfig::encoder_pad() const {
  return PadSpec::Symmetric(kernel_size / 2);
}

PadSpec ArchitectureConfig::decoder_pad(int stride) const {
  // stride * (in - 1) + k - begin - end == stride * in.
  const int begin = kernel_size / 2;
  return PadSpec{begin, kernel_size - stride - begin};
}

void ArchitectureConfig::Validate() const {
  if (channels.empty() || channels.size() != strides.size()) {
    throw ConfigError("architecture needs one stride per layer");
  }
  if (channels.size() > 255) throw ConfigError("too many layers");
  if (kernel_size < 1 || kernel_size % 2 == 0 || kernel_size > 255) {
    throw ConfigError("kernel size must be odd and positive");
  }
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] < 1 || channels[i] > 65535) {
      throw ConfigError("channel width out of range");
    }
    // The decoder's end margin, kernel - stride - kernel/2, must not be
    // negative.
    if (strides[i] < 1 || strides[i] > kernel_size - kernel_size / 2) {
      throw ConfigError("stride must lie in [1, kernel_size - kernel_size/2]");
    }
  }
  if (!(leaky_slope > 0.0f && leaky_slope <= 1.0f)) {
    throw ConfigError("leaky slope must lie in (0, 1]");
  }
}

namespace {

void HashTensor(Fnv1a64& h, const Tensor& t) {
  ByteWriter w;
  for (float v : t.data()) w.F32(v);
  h.Update(std::as_bytes(std::span<const uint8_t>(w.bytes())));
}

template <typename F>
void ForEachParam(const ModelParams& p, F&& f) {
  for (const Tensor& t : p.encoder) f(t);
  for (const Tensor& t : p.decoder) f(t);
  f(p.prior.loc);
  f(p.prior.log_scale);
}

// Expected parameter shapes in group order.
std::vector<Shape> ExpectedShapes(const ArchitectureConfig& a, bool encoder) {
  std::vector<Shape> shapes;
  const int k = a.kernel_size;
  const int n = a.layers();
  for (int i = 0; i < n; ++i) {
    if (encoder) {
      const int in = i == 0 ? 3 : a.channels[static_cast<size_t>(i - 1)];
      const int out = a.channels[static_cast<size_t>(i)];
      shapes.push_back(Shape{out, in, k, k});
      shapes.push_back(Shape{out});
    } else {
      const int in = a.channels[static_cast<size_t>(n - 1 - i)];
      const int out = i == n - 1 ? 3 : a.channels[static_cast<size_t>(n - 2 - i)];
      shapes.push_back(Shape{in, out, k, k});
      shapes.push_back(Shape{out});
    }
  }
  return shapes;
}

}  // namespace

uint64_t ModelParams::ModelId() const {
  Fnv1a64 h;
  ForEachParam(*this, [&](const Tensor& t) { HashTensor(h, t); });
  return h.digest();
}

bool ModelParams::AllFinite() const {
  bool ok = true;
  ForEachParam(*this, [&](const Tensor& t) { ok = ok && t.AllFinite(); });
  return ok;
}

ModelParams InitializeModel(const ArchitectureConfig& arch, double lambda,
                            uint64_t seed) {
  arch.Validate();
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  ModelParams p;
  p.arch = arch;
  p.lambda = lambda;
  p.init_seed = seed;
  const double slope = arch.leaky_slope;
  const double k2 = static_cast<double>(arch.kernel_size) * arch.kernel_size;
  const int n = arch.layers();
  uint64_t stream = 0;
  auto init_group = [&](bool encoder) {
    std::vector<Tensor> group;
    const std::vector<Shape> shapes = ExpectedShapes(arch, encoder);
    for (int i = 0; i < n; ++i) {
      const Shape& ks = shapes[static_cast<size_t>(2 * i)];
      const int stride = encoder ? arch.strides[static_cast<size_t>(i)]
                                 : arch.strides[static_cast<size_t>(n - 1 - i)];
      // Fan-in of one output sample; a transposed layer sees k^2/s^2 taps
      // per input channel on average.
      double fan_in = encoder ? static_cast<double>(ks[1]) * k2
                              : static_cast<double>(ks[0]) * k2 /
                                    (static_cast<double>(stride) * stride);
      const bool activated = i + 1 < n;
      const double gain = activated ? 2.0 / (1.0 + slope * slope) : 1.0;
      const double bound = std::sqrt(3.0 * gain / fan_in);
      CounterRng rng(seed, encoder ? 1 : 2, stream++);
      Tensor w(ks);
      for (float& v : w.data()) {
        v = static_cast<float>((2.0 * rng.NextUniform() - 1.0) * bound);
      }
      group.push_back(std::move(w));
      group.emplace_back(shapes[static_cast<size_t>(2 * i + 1)]);
    }
    return group;
  };
  p.encoder = init_group(true);
  p.decoder = init_group(false);
  p.prior = FactorizedPrior::Create(arch.latent_channels());
  return p;
}

template <typename T>
NetworkVars RegisterParams(Tape<T>& tape, const ModelParams& params,
                           GroupMask trainable) {
  NetworkVars v;
  for (const Tensor& t : params.encoder) {
    v.encoder.push_back(tape.Leaf(t.Cast<T>(), trainable.encoder));
  }
  for (const Tensor& t : params.decoder) {
    v.decoder.push_back(tape.Leaf(t.Cast<T>(), trainable.decoder));
  }
  v.prior_loc = tape.Leaf(params.prior.loc.Cast<T>(), trainable.prior);
  v.prior_log_scale =
      tape.Leaf(params.prior.log_scale.Cast<T>(), trainable.prior);
  return v;
}

template <typename T>
Var EncodeGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                std::span<const Var> encoder, Var x) {
  const int n = arch.layers();
  if (static_cast<int>(encoder.size()) != 2 * n) {
    throw InvalidInputError("encoder parameter count does not match layers");
  }
  Var h = x;
  for (int i = 0; i < n; ++i) {
    h = tape.Conv2d(h, encoder[static_cast<size_t>(2 * i)],
                    arch.strides[static_cast<size_t>(i)], arch.encoder_pad());
    h = tape.AddChannelBias(h, encoder[static_cast<size_t>(2 * i + 1)]);
    if (i + 1 < n) h = tape.LeakyRelu(h, static_cast<T>(arch.leaky_slope));
  }
  return h;
}

template <typename T>
Var DecodeGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                std::span<const Var> decoder, Var y) {
  const int n = arch.layers();
  if (static_cast<int>(decoder.size()) != 2 * n) {
    throw InvalidInputError("decoder parameter count does not match layers");
  }
  Var h = y;
  for (int i = 0; i < n; ++i) {
    const int stride = arch.strides[static_cast<size_t>(n - 1 - i)];
    h = tape.Conv2dTranspose(h, decoder[static_cast<size_t>(2 * i)], stride,
                             arch.decoder_pad(stride));
    h = tape.AddChannelBias(h, decoder[static_cast<size_t>(2 * i + 1)]);
    if (i + 1 < n) h = tape.LeakyRelu(h, static_cast<T>(arch.leaky_slope));
  }
  return h;
}

template <typename T>
BasicTensor<T> EncodeForward(const ModelParams& params,
                             const BasicTensor<T>& x) {
  const int d = params.arch.downsampling();
  if (x.order() != 4 || x.dim(1) != 3) {
    throw InvalidInputError("encoder expects [N, 3, H, W], got " +
                            ShapeToString(x.shape()));
  }
  if (x.dim(2) % d != 0 || x.dim(3) % d != 0) {
    throw InvalidInputError("image extents " + ShapeToString(x.shape()) +
                            " must be multiples of " + std::to_string(d) +
                            "; pad the input first");
  }
  Tape<T> tape;
  NetworkVars v;
  for (const Tensor& t : params.encoder) v.encoder.push_back(tape.Leaf(t.Cast<T>()));
  const Var in = tape.Leaf(x);
  return tape.value(EncodeGraph(tape, params.arch, v.encoder, in));
}

template <typename T>
BasicTensor<T> DecodeForward(const ModelParams& params,
                             const BasicTensor<T>& y, DecoderOutput output,
                             size_t* op_count) {
  if (y.order() != 4 || y.dim(1) != params.arch.latent_channels()) {
    throw InvalidInputError("decoder expects [N, " +
                            std::to_string(params.arch.latent_channels()) +
                            ", h, w], got " + ShapeToString(y.shape()));
  }
  Tape<T> tape;
  NetworkVars v;
  for (const Tensor& t : params.decoder) v.decoder.push_back(tape.Leaf(t.Cast<T>()));
  const Var in = tape.Leaf(y);
  BasicTensor<T> out = tape.value(DecodeGraph(tape, params.arch, v.decoder, in));
  if (output == DecoderOutput::kClamped) {
    for (T& e : out.data()) e = std::clamp(e, T(0), T(1));
  }
  if (op_count) *op_count = tape.size();
  return out;
}

template NetworkVars RegisterParams(Tape<float>&, const ModelParams&, GroupMask);
template NetworkVars RegisterParams(Tape<double>&, const ModelParams&, GroupMask);
template Var EncodeGraph(Tape<float>&, const ArchitectureConfig&,
                         std::span<const Var>, Var);
template Var EncodeGraph(Tape<double>&, const ArchitectureConfig&,
                         std::span<const Var>, Var);
template Var DecodeGraph(Tape<float>&, const ArchitectureConfig&,
                         std::span<const Var>, Var);
template Var DecodeGraph(Tape<double>&, const ArchitectureConfig&,
                         std::span<const Var>, Var);
template Tensor EncodeForward(const ModelParams&, const Tensor&);
template Tensor64 EncodeForward(const ModelParams&, const Tensor64&);
template Tensor DecodeForward(const ModelParams&, const Tensor&, DecoderOutput,
                              size_t*);
template Tensor64 DecodeForward(const ModelParams&, const Tensor64&,
                                DecoderOutput, size_t*);

// Model file layout, little-endian:
//   "LPMD", u8 version,
//   u8 layers, u8 kernel, f32 leaky slope, per layer {u16 channels, u8 stride},
//   i16 support min, i16 support max, u8 CDF precision,
//   f64 lambda, u64 init seed,
//   per parameter tensor in group order {u32 count, f32[count]},
//   u64 model-id.
std::vector<uint8_t> SerializeModel(const ModelParams& params) {
  params.arch.Validate();
  ByteWriter w;
  w.Tag("LPMD");
  w.U8(kModelFormatVersion);
  const ArchitectureConfig& a = params.arch;
  w.U8(static_cast<uint8_t>(a.layers()));
  w.U8(static_cast<uint8_t>(a.kernel_size));
  w.F32(a.leaky_slope);
  for (int i = 0; i < a.layers(); ++i) {
    w.U16(static_cast<uint16_t>(a.channels[static_cast<size_t>(i)]));
    w.U8(static_cast<uint8_t>(a.strides[static_cast<size_t>(i)]));
  }
  w.I16(static_cast<int16_t>(params.prior.support_min));
  w.I16(static_cast<int16_t>(params.prior.support_max));
  w.U8(static_cast<uint8_t>(params.prior.precision));
  w.F64(params.lambda);
  w.U64(params.init_seed);
  ForEachParam(params, [&](const Tensor& t) {
    w.U32(static_cast<uint32_t>(t.size()));
    for (float v : t.data()) w.F32(v);
  });
  w.U64(params.ModelId());
  return std::move(w.bytes());
}

ModelParams DeserializeModel(std::span<const uint8_t> bytes) {
  if (bytes.size() < 5 || bytes[0] != 'L' || bytes[1] != 'P' ||
      bytes[2] != 'M' || bytes[3] != 'D') {
    throw CorruptModelError("not a model file (missing LPMD magic)");
  }
  if (bytes[4] != kModelFormatVersion) {
    throw UnsupportedVersionError("unsupported model format version " +
                                  std::to_string(bytes[4]));
  }
  ByteReader<CorruptModelError> r(bytes.subspan(5));
  ModelParams p;
  ArchitectureConfig& a = p.arch;
  const int layers = r.U8("layer count");
  a.kernel_size = r.U8("kernel size");
  a.leaky_slope = r.F32("leaky slope");
  a.channels.clear();
  a.strides.clear();
  for (int i = 0; i < layers; ++i) {
    a.channels.push_back(r.U16("channels"));
    a.strides.push_back(r.U8("stride"));
  }
  try {
    a.Validate();
  } catch (const ConfigError& e) {
    throw CorruptModelError(std::string("bad architecture block: ") + e.what());
  }
  p.prior.support_min = r.I16("support min");
  p.prior.support_max = r.I16("support max");
  p.prior.precision = r.U8("precision");
  p.lambda = r.F64("lambda");
  p.init_seed = r.U64("init seed");

  auto read_tensor = [&](const Shape& shape) {
    const uint32_t count = r.U32("tensor length");
    if (count != ShapeElementCount(shape)) {
      throw CorruptModelError("parameter blob of " + std::to_string(count) +
                              " values where " + ShapeToString(shape) +
                              " was expected");
    }
    std::vector<float> data(count);
    for (float& v : data) v = r.F32("parameter data");
    return Tensor(shape, std::move(data));
  };
  for (const Shape& s : ExpectedShapes(a, true)) p.encoder.push_back(read_tensor(s));
  for (const Shape& s : ExpectedShapes(a, false)) p.decoder.push_back(read_tensor(s));
  p.prior.loc = read_tensor(Shape{a.latent_channels()});
  p.prior.log_scale = read_tensor(Shape{a.latent_channels()});
  const uint64_t stored_id = r.U64("model-id");
  if (r.remaining() != 0) throw CorruptModelError("trailing bytes after model");
  if (stored_id != p.ModelId()) {
    throw CorruptModelError("model-id hash mismatch");
  }
  try {
    p.prior.Validate();
  } catch (const ConfigError& e) {
    throw CorruptModelError(std::string("bad prior: ") + e.what());
  }
  return p;
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void SaveModel(const ModelParams& params, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeModel(params));
}

ModelParams LoadModel(const std::filesystem::path& path) {
  return DeserializeModel(ReadFileBytes(path));
}

}  // namespace lic
