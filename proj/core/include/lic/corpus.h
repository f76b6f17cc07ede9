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

// Synthetic desk-scale corpora and the manifest that fixes which images are
// used for training and which for testing.

#ifndef LIC_CORPUS_H_
#define LIC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lic/image.h"
#include "lic/tensor.h"

namespace lic {

enum class CorpusKind { kGradients, kTextures, kShapes, kMixed };

std::string_view CorpusKindName(CorpusKind kind);
std::optional<CorpusKind> ParseCorpusKind(std::string_view name);

// Deterministic in (kind, seed, index).
Image SyntheticImage(CorpusKind kind, uint32_t width, uint32_t height,
                     uint64_t seed, uint64_t index);

enum class Role { kTrain, kTest };

struct ManifestEntry {
  std::string id;              // file stem, used as image_id in CSVs
  std::filesystem::path path;  // absolute, or relative to the manifest
  Role role = Role::kTrain;
};

class CorpusManifest {
 public:
  CorpusManifest() = default;
  CorpusManifest(std::filesystem::path base, std::vector<ManifestEntry> entries);

  // Text format: one "<train|test> <relative path>" per line; '#' starts a
  // comment. Entries keep file order. Throws IoError / InvalidInputError.
  static CorpusManifest Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  // Every PNG/PPM under `dir`, sorted by name; the last `test_count`
  // become test images.
  static CorpusManifest FromFolder(const std::filesystem::path& dir,
                                   size_t test_count);

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  std::vector<ManifestEntry> WithRole(Role role) const;
  std::filesystem::path Resolve(const ManifestEntry& e) const;

  // Throws InvalidInputError if a path (or identical image content) is
  // listed under both roles, or an id repeats.
  void Validate() const;

  // FNV-1a over roles, ids and file bytes in manifest order.
  uint64_t ContentHash() const;

 private:
  std::filesystem::path base_;
  std::vector<ManifestEntry> entries_;
};

struct CorpusSpec {
  CorpusKind kind = CorpusKind::kMixed;
  size_t train_count = 32;
  size_t test_count = 10;
  uint32_t width = 64;
  uint32_t height = 64;
  uint64_t seed = 1;
};

// Writes PNGs and manifest.txt into `dir` (created if missing).
CorpusManifest GenerateCorpus(const std::filesystem::path& dir,
                              const CorpusSpec& spec);

// Loads the images of one role as [1, 3, H, W] tensors in manifest order.
std::vector<Tensor> LoadRole(const CorpusManifest& manifest, Role role);

}  // namespace lic

#endif  // LIC_CORPUS_H_
