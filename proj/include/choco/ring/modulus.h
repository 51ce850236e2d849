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

#ifndef CHOCO_RING_MODULUS_H_
#define CHOCO_RING_MODULUS_H_

#include <cstdint>
#include <set>

namespace choco::ring {

using u128 = unsigned __int128;

// Residues are capped at 62 bits so that the product of two residues, plus a
// few additions, stays inside a 128-bit intermediate.
inline constexpr int kMaxModulusBits = 62;

// A word-sized modulus with precomputed Barrett constants.
class Modulus {
 public:
  // Throws InvalidArgument unless 2 <= value < 2^62.
  explicit Modulus(uint64_t value);

  uint64_t value() const { return value_; }
  int bit_count() const { return bit_count_; }

  uint64_t Add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  uint64_t Sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + value_ - b;
  }
  uint64_t Neg(uint64_t a) const { return a == 0 ? 0 : value_ - a; }

  // Barrett reduction of x < value * 2^64.
  uint64_t Reduce(u128 x) const {
    const uint64_t x0 = static_cast<uint64_t>(x);
    const uint64_t x1 = static_cast<uint64_t>(x >> 64);
    const u128 t1 = static_cast<u128>(x0) * ratio_hi_ +
                    static_cast<uint64_t>((static_cast<u128>(x0) * ratio_lo_) >> 64);
    const u128 t2 = static_cast<u128>(x1) * ratio_lo_ + static_cast<uint64_t>(t1);
    const uint64_t q = x1 * ratio_hi_ + static_cast<uint64_t>(t1 >> 64) +
                       static_cast<uint64_t>(t2 >> 64);
    uint64_t r = x0 - q * value_;
    while (r >= value_) r -= value_;
    return r;
  }
  uint64_t Reduce(uint64_t x) const { return x >= value_ ? x % value_ : x; }

  // Maps a signed integer to its representative in [0, value).
  uint64_t FromSigned(int64_t x) const {
    if (x >= 0) return Reduce(static_cast<uint64_t>(x));
    const uint64_t m = Reduce(static_cast<uint64_t>(-(x + 1)) + 1);
    return Neg(m);
  }
  // Centered representative in (-value/2, value/2].
  int64_t ToSigned(uint64_t a) const {
    return a > value_ / 2 ? static_cast<int64_t>(a) - static_cast<int64_t>(value_)
                          : static_cast<int64_t>(a);
  }

  uint64_t Mul(uint64_t a, uint64_t b) const {
    return Reduce(static_cast<u128>(a) * b);
  }

  // Shoup multiplication by a fixed operand w with companion
  // w' = floor(w * 2^64 / value).
  uint64_t ShoupPrecompute(uint64_t w) const {
    return static_cast<uint64_t>((static_cast<u128>(w) << 64) / value_);
  }
  uint64_t MulShoup(uint64_t a, uint64_t w, uint64_t w_shoup) const {
    const uint64_t q = static_cast<uint64_t>((static_cast<u128>(a) * w_shoup) >> 64);
    uint64_t r = a * w - q * value_;
    return r >= value_ ? r - value_ : r;
  }

  uint64_t Pow(uint64_t base, uint64_t exponent) const;
  // Throws InvalidArgument if a is not invertible.
  uint64_t Inverse(uint64_t a) const;

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.value_ == b.value_;
  }

 private:
  uint64_t value_;
  uint64_t ratio_hi_;
  uint64_t ratio_lo_;
  int bit_count_;
};

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool IsPrime(uint64_t n);

// Largest prime p with exactly `bit_length` bits, p = 1 (mod 2N), p not in
// `exclude`. Throws Error("no NTT prime") when the bit range has none.
uint64_t FindNttPrime(int bit_length, uint64_t n, const std::set<uint64_t>& exclude = {});

// A generator of the order-2N subgroup of Z_p^*; the smallest such value is
// returned so that tables are reproducible across runs.
uint64_t MinimalPrimitiveRoot(uint64_t two_n, const Modulus& modulus);

}  // namespace choco::ring

#endif  // CHOCO_RING_MODULUS_H_
