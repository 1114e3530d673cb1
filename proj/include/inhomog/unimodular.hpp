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
#include <tuple>

namespace inhomog {

// Integer 2x2 matrix (a b; c d) with determinant 1.  |.| is the sup norm of
// the entries.
struct UnimodMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  bool is_unimodular() const { return det() == 1; }

  std::int64_t norm() const {
    auto m = [](std::int64_t v) { return v < 0 ? -v : v; };
    std::int64_t n = m(a);
    if (m(b) > n) n = m(b);
    if (m(c) > n) n = m(c);
    if (m(d) > n) n = m(d);
    return n;
  }

  UnimodMatrix inverse() const { return {d, -b, -c, a}; }

  friend UnimodMatrix operator*(const UnimodMatrix& x, const UnimodMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }

  friend bool operator==(const UnimodMatrix& x, const UnimodMatrix& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }

  friend bool operator<(const UnimodMatrix& x, const UnimodMatrix& y) {
    return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
  }
};

}  // namespace inhomog
