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

#ifndef LIC_RNG_H_
#define LIC_RNG_H_

#include <cstdint>

namespace lic {

inline uint64_t SplitMix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the i-th draw is a pure function of
// (seed, stream, substream, i), so noise for (image, step) can be
// regenerated without carrying state around.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream = 0, uint64_t substream = 0)
      : key_(SplitMix64(seed ^ SplitMix64(stream ^ SplitMix64(substream ^
                                                      0x5bd1e995ULL)))) {}

  uint64_t Bits(uint64_t counter) const {
    return SplitMix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform(uint64_t counter) const {
    return static_cast<double>(Bits(counter) >> 11) * 0x1.0p-53;
  }

  uint64_t NextBits() { return Bits(counter_++); }
  double NextUniform() { return Uniform(counter_++); }
  // Uniform integer in [0, n).
  uint64_t NextBelow(uint64_t n) {
    return static_cast<uint64_t>(NextUniform() * static_cast<double>(n)) % n;
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace lic

#endif  // LIC_RNG_H_
