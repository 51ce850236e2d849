/*
 * Copyright 2026 The CHOCO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Independent reference computations used only by tests. Nothing here calls
// into the library's arithmetic fast paths.

#ifndef CHOCO_TESTS_TESTING_ORACLES_H_
#define CHOCO_TESTS_TESTING_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace choco::testing {

using u128 = unsigned __int128;

inline uint64_t MulMod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % p);
}

inline uint64_t PowModSlow(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = MulMod(r, a, p);
    a = MulMod(a, a, p);
    e >>= 1;
  }
  return r;
}

// a * b mod (X^N + 1, p), O(N^2).
inline std::vector<uint64_t> NegacyclicSchoolbook(std::span<const uint64_t> a,
                                                  std::span<const uint64_t> b, uint64_t p) {
  const std::size_t n = a.size();
  std::vector<uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const uint64_t prod = MulMod(a[i], b[j], p);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = (out[k] + prod) % p;
      } else {
        out[k - n] = (out[k - n] + p - prod) % p;
      }
    }
  }
  return out;
}

// Horner evaluation of a polynomial at x mod p.
inline uint64_t Evaluate(std::span<const uint64_t> coeffs, uint64_t x, uint64_t p) {
  uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = (MulMod(acc, x, p) + coeffs[i]) % p;
  return acc;
}

inline bool IsPrimeTrialDivision(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Negacyclic convolution of small signed integer polynomials.
inline std::vector<int64_t> NegacyclicSigned(std::span<const int64_t> a,
                                             std::span<const int64_t> b) {
  const std::size_t n = a.size();
  std::vector<int64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i + j;
      if (k < n) {
        out[k] += a[i] * b[j];
      } else {
        out[k - n] -= a[i] * b[j];
      }
    }
  }
  return out;
}

// Batched-slot rotation: each half-row of `values` rotated left by `step`.
inline std::vector<uint64_t> RotateRowsLeft(const std::vector<uint64_t>& values, int64_t step) {
  const std::size_t row = values.size() / 2;
  const int64_t r = static_cast<int64_t>(row);
  const std::size_t s = static_cast<std::size_t>(((step % r) + r) % r);
  std::vector<uint64_t> out(values.size());
  for (std::size_t half = 0; half < 2; ++half) {
    for (std::size_t i = 0; i < row; ++i) out[half * row + i] = values[half * row + (i + s) % row];
  }
  return out;
}

}  // namespace choco::testing

#endif  // CHOCO_TESTS_TESTING_ORACLES_H_
