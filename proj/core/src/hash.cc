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

#include "lic/hash.h"

namespace lic {

void Fnv1a64::Update(std::span<const std::byte> bytes) {
  for (std::byte b : bytes) {
    state_ ^= static_cast<uint64_t>(b);
    state_ *= 0x100000001b3ULL;
  }
}

void Fnv1a64::Update(std::string_view s) {
  Update(std::as_bytes(std::span<const char>(s.data(), s.size())));
}

uint64_t HashBytes(std::span<const std::byte> bytes) {
  Fnv1a64 h;
  h.Update(bytes);
  return h.digest();
}

}  // namespace lic
