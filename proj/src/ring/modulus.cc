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

#include "choco/ring/modulus.h"

#include <bit>

#include "choco/common/error.h"

namespace choco::ring {

Modulus::Modulus(uint64_t value) : value_(value) {
  if (value < 2 || value >= (uint64_t{1} << kMaxModulusBits)) {
    throw InvalidArgument("modulus out of range");
  }
  const u128 ratio = ~static_cast<u128>(0) / value;
  ratio_hi_ = static_cast<uint64_t>(ratio >> 64);
  ratio_lo_ = static_cast<uint64_t>(ratio);
  bit_count_ = std::bit_width(value);
}

uint64_t Modulus::Pow(uint64_t base, uint64_t exponent) const {
  uint64_t result = 1 % value_;
  base = Reduce(base);
  while (exponent != 0) {
    if (exponent & 1) result = Mul(result, base);
    base = Mul(base, base);
    exponent >>= 1;
  }
  return result;
}

uint64_t Modulus::Inverse(uint64_t a) const {
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1;
  __int128 r = value_, new_r = Reduce(a);
  while (new_r != 0) {
    const __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw InvalidArgument("value not invertible");
  if (t < 0) t += value_;
  return static_cast<uint64_t>(t);
}

namespace {

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t mod) {
  u128 result = 1, b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<uint64_t>(result);
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  static constexpr uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : kBases) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<uint64_t>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t FindNttPrime(int bit_length, uint64_t n, const std::set<uint64_t>& exclude) {
  if (bit_length < 2 || bit_length > kMaxModulusBits) {
    throw InvalidArgument("bit length out of range");
  }
  if (n == 0 || !std::has_single_bit(n)) throw InvalidArgument("N must be a power of two");
  const uint64_t two_n = 2 * n;
  const uint64_t lower = uint64_t{1} << (bit_length - 1);
  const uint64_t upper = (uint64_t{1} << bit_length) - 1;
  uint64_t candidate = ((upper - 1) / two_n) * two_n + 1;
  while (candidate >= lower) {
    if (IsPrime(candidate) && !exclude.contains(candidate)) return candidate;
    if (candidate < two_n) break;
    candidate -= two_n;
  }
  throw Error("no NTT prime");
}

uint64_t MinimalPrimitiveRoot(uint64_t two_n, const Modulus& modulus) {
  const uint64_t p = modulus.value();
  if ((p - 1) % two_n != 0) throw InvalidArgument("modulus not NTT friendly");
  const uint64_t cofactor = (p - 1) / two_n;
  uint64_t root = 0;
  for (uint64_t x = 2; x < p; ++x) {
    const uint64_t g = modulus.Pow(x, cofactor);
    if (modulus.Pow(g, two_n / 2) == p - 1) {
      root = g;
      break;
    }
  }
  if (root == 0) throw Error("no primitive root");
  const uint64_t square = modulus.Mul(root, root);
  uint64_t best = root;
  uint64_t current = root;
  for (uint64_t i = 1; i < two_n / 2; ++i) {
    current = modulus.Mul(current, square);
    if (current < best) best = current;
  }
  return best;
}

}  // namespace choco::ring
