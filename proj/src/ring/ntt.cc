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

#include "choco/ring/ntt.h"

#include <bit>

#include "choco/common/error.h"

namespace choco::ring {

NttTables::NttTables(std::size_t n, const Modulus& modulus)
    : n_(n), modulus_(modulus) {
  if (n == 0 || !std::has_single_bit(n)) throw InvalidArgument("N must be a power of two");
  log_n_ = std::countr_zero(n);
  root_ = MinimalPrimitiveRoot(2 * n, modulus_);
  const uint64_t inv_root = modulus_.Inverse(root_);

  root_powers_.resize(n);
  inv_root_powers_.resize(n);
  uint64_t power = 1, inv_power = 1;
  std::vector<uint64_t> natural(n), inv_natural(n);
  for (std::size_t i = 0; i < n; ++i) {
    natural[i] = power;
    inv_natural[i] = inv_power;
    power = modulus_.Mul(power, root_);
    inv_power = modulus_.Mul(inv_power, inv_root);
  }
  for (std::size_t i = 0; i < n; ++i) {
    root_powers_[i] = natural[ReverseBits(i, log_n_)];
    inv_root_powers_[i] = inv_natural[ReverseBits(i, log_n_)];
  }
  root_powers_shoup_.resize(n);
  inv_root_powers_shoup_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    root_powers_shoup_[i] = modulus_.ShoupPrecompute(root_powers_[i]);
    inv_root_powers_shoup_[i] = modulus_.ShoupPrecompute(inv_root_powers_[i]);
  }
  n_inv_ = modulus_.Inverse(n % modulus_.value());
  n_inv_shoup_ = modulus_.ShoupPrecompute(n_inv_);
}

void NttTables::Forward(std::span<uint64_t> a) const {
  if (a.size() != n_) throw InvalidArgument("length mismatch");
  const Modulus& p = modulus_;
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const uint64_t w = root_powers_[m + i];
      const uint64_t w_shoup = root_powers_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const uint64_t u = a[j];
        const uint64_t v = p.MulShoup(a[j + t], w, w_shoup);
        a[j] = p.Add(u, v);
        a[j + t] = p.Sub(u, v);
      }
    }
  }
}

void NttTables::Inverse(std::span<uint64_t> a) const {
  if (a.size() != n_) throw InvalidArgument("length mismatch");
  const Modulus& p = modulus_;
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const uint64_t w = inv_root_powers_[h + i];
      const uint64_t w_shoup = inv_root_powers_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const uint64_t u = a[j];
        const uint64_t v = a[j + t];
        a[j] = p.Add(u, v);
        a[j + t] = p.MulShoup(p.Sub(u, v), w, w_shoup);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = p.MulShoup(x, n_inv_, n_inv_shoup_);
}

}  // namespace choco::ring
