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

#include "lic/corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lic/hash.h"
#include "lic/network.h"
#include "lic/rng.h"

namespace lic {

std::string_view CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kGradients:
      return "gradients";
    case CorpusKind::kTextures:
      return "textures";
    case CorpusKind::kShapes:
      return "shapes";
    case CorpusKind::kMixed:
      return "mixed";
  }
  return "unknown";
}

std::optional<CorpusKind> ParseCorpusKind(std::string_view name) {
  for (CorpusKind k : {CorpusKind::kGradients, CorpusKind::kTextures,
                       CorpusKind::kShapes, CorpusKind::kMixed}) {
    if (CorpusKindName(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

using Rgb = std::array<double, 3>;

Rgb RandomColor(CounterRng& rng) {
  return {rng.NextUniform(), rng.NextUniform(), rng.NextUniform()};
}

uint8_t ToByte(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void FillGradients(Image& img, CounterRng& rng) {
  const Rgb a = RandomColor(rng);
  const Rgb b = RandomColor(rng);
  const bool radial = rng.NextUniform() < 0.4;
  const double angle = rng.NextUniform() * 2 * M_PI;
  const double cx = rng.NextUniform(), cy = rng.NextUniform();
  const double dx = std::cos(angle), dy = std::sin(angle);
  for (uint32_t y = 0; y < img.height; ++y) {
    for (uint32_t x = 0; x < img.width; ++x) {
      const double u = (x + 0.5) / img.width, v = (y + 0.5) / img.height;
      double t = radial ? std::hypot(u - cx, v - cy) * 1.4
                        : 0.5 + ((u - 0.5) * dx + (v - 0.5) * dy);
      t = std::clamp(t, 0.0, 1.0);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = ToByte(a[c] + t * (b[c] - a[c]));
    }
  }
}

// Multi-octave value noise on a random colour ramp.
void FillTextures(Image& img, CounterRng& rng) {
  const Rgb a = RandomColor(rng);
  const Rgb b = RandomColor(rng);
  const int octaves = 3 + static_cast<int>(rng.NextBelow(3));
  const double base_cells = 2.0 + 6.0 * rng.NextUniform();
  const CounterRng lattice(rng.NextBits(), 1);
  auto lattice_value = [&](int o, int64_t i, int64_t j) {
    const uint64_t key = (static_cast<uint64_t>(o) << 48) ^
                         (static_cast<uint64_t>(i & 0xffffff) << 24) ^
                         static_cast<uint64_t>(j & 0xffffff);
    return lattice.Uniform(key);
  };
  for (uint32_t y = 0; y < img.height; ++y) {
    for (uint32_t x = 0; x < img.width; ++x) {
      double sum = 0, norm = 0, amp = 1;
      for (int o = 0; o < octaves; ++o) {
        const double cells = base_cells * std::pow(2.0, o);
        const double fx = (x + 0.5) / img.width * cells;
        const double fy = (y + 0.5) / img.height * cells;
        const int64_t ix = static_cast<int64_t>(std::floor(fx));
        const int64_t iy = static_cast<int64_t>(std::floor(fy));
        double tx = fx - ix, ty = fy - iy;
        tx = tx * tx * (3 - 2 * tx);
        ty = ty * ty * (3 - 2 * ty);
        const double v00 = lattice_value(o, ix, iy);
        const double v10 = lattice_value(o, ix + 1, iy);
        const double v01 = lattice_value(o, ix, iy + 1);
        const double v11 = lattice_value(o, ix + 1, iy + 1);
        const double v = (v00 * (1 - tx) + v10 * tx) * (1 - ty) +
                         (v01 * (1 - tx) + v11 * tx) * ty;
        sum += amp * v;
        norm += amp;
        amp *= 0.55;
      }
      const double t = sum / norm;
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = ToByte(a[c] + t * (b[c] - a[c]));
    }
  }
}

void FillShapes(Image& img, CounterRng& rng) {
  const Rgb bg = RandomColor(rng);
  for (uint32_t y = 0; y < img.height; ++y) {
    for (uint32_t x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = ToByte(bg[c]);
    }
  }
  const int count = 3 + static_cast<int>(rng.NextBelow(6));
  for (int s = 0; s < count; ++s) {
    const Rgb col = RandomColor(rng);
    const int kind = static_cast<int>(rng.NextBelow(3));
    const double cx = rng.NextUniform(), cy = rng.NextUniform();
    const double r = 0.08 + 0.25 * rng.NextUniform();
    const double rw = 0.05 + 0.3 * rng.NextUniform();
    const double rh = 0.05 + 0.3 * rng.NextUniform();
    for (uint32_t y = 0; y < img.height; ++y) {
      for (uint32_t x = 0; x < img.width; ++x) {
        const double u = (x + 0.5) / img.width - cx;
        const double v = (y + 0.5) / img.height - cy;
        bool inside = false;
        if (kind == 0) {
          inside = u * u + v * v <= r * r;
        } else if (kind == 1) {
          inside = std::abs(u) <= rw && std::abs(v) <= rh;
        } else {
          // Upward triangle with apex at (0, -r).
          inside = v <= r && v >= -r && std::abs(u) <= (v + r) * 0.6;
        }
        if (inside) {
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = ToByte(col[c]);
        }
      }
    }
  }
}

bool IsImageFile(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png" || ext == ".ppm";
}

}  // namespace

Image SyntheticImage(CorpusKind kind, uint32_t width, uint32_t height,
                     uint64_t seed, uint64_t index) {
  if (width == 0 || height == 0) {
    throw InvalidInputError("synthetic image extents must be positive");
  }
  CounterRng rng(seed, static_cast<uint64_t>(kind) + 0xc0, index);
  if (kind == CorpusKind::kMixed) {
    kind = static_cast<CorpusKind>(rng.NextBelow(3));
  }
  Image img(width, height);
  switch (kind) {
    case CorpusKind::kGradients:
      FillGradients(img, rng);
      break;
    case CorpusKind::kTextures:
      FillTextures(img, rng);
      break;
    case CorpusKind::kShapes:
    case CorpusKind::kMixed:
      FillShapes(img, rng);
      break;
  }
  return img;
}

CorpusManifest::CorpusManifest(std::filesystem::path base,
                               std::vector<ManifestEntry> entries)
    : base_(std::move(base)), entries_(std::move(entries)) {}

CorpusManifest CorpusManifest::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string role, file;
    if (!(fields >> role)) continue;
    if (!(fields >> file) || (role != "train" && role != "test")) {
      throw InvalidInputError(path.string() + ":" + std::to_string(lineno) +
                              ": expected '<train|test> <path>'");
    }
    ManifestEntry e;
    e.path = file;
    e.id = e.path.stem().string();
    e.role = role == "train" ? Role::kTrain : Role::kTest;
    entries.push_back(std::move(e));
  }
  CorpusManifest m(path.parent_path(), std::move(entries));
  m.Validate();
  return m;
}

void CorpusManifest::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << "# role path\n";
  for (const ManifestEntry& e : entries_) {
    out << (e.role == Role::kTrain ? "train " : "test ")
        << e.path.generic_string() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

CorpusManifest CorpusManifest::FromFolder(const std::filesystem::path& dir,
                                          size_t test_count) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::directory_iterator(dir)) {
    if (de.is_regular_file() && IsImageFile(de.path())) {
      files.push_back(de.path().filename());
    }
  }
  std::sort(files.begin(), files.end());
  if (test_count > files.size()) {
    throw InvalidInputError("folder has " + std::to_string(files.size()) +
                            " images, fewer than the requested test count");
  }
  std::vector<ManifestEntry> entries;
  for (size_t i = 0; i < files.size(); ++i) {
    entries.push_back({files[i].stem().string(), files[i],
                       i + test_count >= files.size() ? Role::kTest
                                                      : Role::kTrain});
  }
  CorpusManifest m(dir, std::move(entries));
  m.Validate();
  return m;
}

std::vector<ManifestEntry> CorpusManifest::WithRole(Role role) const {
  std::vector<ManifestEntry> out;
  for (const ManifestEntry& e : entries_) {
    if (e.role == role) out.push_back(e);
  }
  return out;
}

std::filesystem::path CorpusManifest::Resolve(const ManifestEntry& e) const {
  return e.path.is_absolute() ? e.path : base_ / e.path;
}

void CorpusManifest::Validate() const {
  std::set<std::string> ids;
  std::map<std::string, Role> paths;
  for (const ManifestEntry& e : entries_) {
    if (!ids.insert(e.id).second) {
      throw InvalidInputError("duplicate image id in manifest: " + e.id);
    }
    const std::string key = Resolve(e).lexically_normal().generic_string();
    auto [it, fresh] = paths.emplace(key, e.role);
    if (!fresh && it->second != e.role) {
      throw InvalidInputError("image listed as both train and test: " + key);
    }
  }
  // Identical content under different names also counts as overlap.
  std::map<uint64_t, Role> contents;
  for (const ManifestEntry& e : entries_) {
    const std::filesystem::path p = Resolve(e);
    if (!std::filesystem::exists(p)) continue;
    const std::vector<uint8_t> bytes = ReadFileBytes(p);
    const uint64_t h = HashBytes(std::as_bytes(std::span(bytes)));
    auto [it, fresh] = contents.emplace(h, e.role);
    if (!fresh && it->second != e.role) {
      throw InvalidInputError("train and test sets share the content of " +
                              p.string());
    }
  }
}

uint64_t CorpusManifest::ContentHash() const {
  Fnv1a64 h;
  for (const ManifestEntry& e : entries_) {
    h.Update(e.role == Role::kTrain ? std::string_view("train")
                                    : std::string_view("test"));
    h.Update(e.id);
    const std::vector<uint8_t> bytes = ReadFileBytes(Resolve(e));
    h.Update(std::as_bytes(std::span(bytes)));
  }
  return h.digest();
}

CorpusManifest GenerateCorpus(const std::filesystem::path& dir,
                              const CorpusSpec& spec) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  const std::string stem(CorpusKindName(spec.kind));
  const size_t total = spec.train_count + spec.test_count;
  for (size_t i = 0; i < total; ++i) {
    const bool test = i >= spec.train_count;
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%s_%03zu", stem.c_str(),
                  test ? "test" : "train",
                  test ? i - spec.train_count : i);
    const std::filesystem::path file = std::string(name) + ".png";
    WriteImage(dir / file,
               SyntheticImage(spec.kind, spec.width, spec.height, spec.seed, i));
    entries.push_back({name, file, test ? Role::kTest : Role::kTrain});
  }
  CorpusManifest m(dir, std::move(entries));
  m.Validate();
  m.Save(dir / "manifest.txt");
  return m;
}

std::vector<Tensor> LoadRole(const CorpusManifest& manifest, Role role) {
  std::vector<Tensor> out;
  for (const ManifestEntry& e : manifest.WithRole(role)) {
    out.push_back(ImageToTensor(ReadImage(manifest.Resolve(e))));
  }
  return out;
}

}  // namespace lic
