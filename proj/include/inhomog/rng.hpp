// Copyright 2026 The inhomog Authors
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

#pragma once

#include <cstdint>
#include <string>

namespace inhomog {

// Counter-based generator built on the SplitMix64 finalizer.  Output i of
// stream s under seed k is mix(base(k, s) + i * GAMMA), so any position can
// be addressed directly.  This makes parallel runs bit-reproducible: workers
// draw from disjoint streams (or disjoint counter offsets) of the same seed
// without sharing state, and std::uniform_* distributions (which are not
// specified bit-exactly across standard libraries) are never used.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t offset = 0)
      : base_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))), counter_(offset) {}

  std::uint64_t next_u64() { return mix(base_ + (counter_++) * kGamma); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection-sampled so it is exactly unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Random decimal string "0.d1 d2 ... dn" (used for literal inputs).
  std::string next_decimal_literal(int digits) {
    std::string s = "0.";
    for (int i = 0; i < digits; ++i) s.push_back(static_cast<char>('0' + next_below(10)));
    return s;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace inhomog
