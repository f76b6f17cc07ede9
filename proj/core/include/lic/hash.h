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

#ifndef LIC_HASH_H_
#define LIC_HASH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace lic {

// 64-bit FNV-1a. Used for model identity and corpus content hashes, where
// sensitivity to any byte change matters and adversarial collisions do not.
class Fnv1a64 {
 public:
  void Update(std::span<const std::byte> bytes);
  void Update(std::string_view s);
  template <typename T>
  void UpdateValues(std::span<const T> values) {
    Update(std::as_bytes(values));
  }
  uint64_t digest() const { return state_; }

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

uint64_t HashBytes(std::span<const std::byte> bytes);

}  // namespace lic

#endif  // LIC_HASH_H_
