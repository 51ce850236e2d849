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

#include "choco/bfv/context.h"

#include "choco/common/error.h"

namespace choco::bfv {

Context::Context(HEParams params)
    : params_(std::move(params)),
      id_(params_.Id()),
      t_(params_.t()),
      encoder_(params_.n(), params_.t()) {
  const std::size_t k = params_.k();
  const ring::RnsBase full(params_.n(), params_.moduli());
  for (std::size_t r = 1; r <= k; ++r) {
    bases_.push_back(r == k ? full : full.Prefix(r));
  }
  for (std::size_t r = 1; r < k; ++r) {
    if (r == k - 1) {
      switch_bases_.push_back(full);
      continue;
    }
    std::vector<uint64_t> moduli(params_.moduli().begin(), params_.moduli().begin() + r);
    moduli.push_back(params_.key_prime());
    switch_bases_.emplace_back(params_.n(), moduli);
  }
  for (std::size_t r = 1; r <= k; ++r) {
    const ring::RnsBase& b = base(r);
    const ring::BigInt delta = b.product() / params_.t();
    std::vector<uint64_t> per_residue;
    for (std::size_t i = 0; i < r; ++i) {
      per_residue.push_back(static_cast<uint64_t>(delta % b.modulus(i).value()));
    }
    delta_.push_back(std::move(per_residue));
    delta_remainder_.push_back(static_cast<uint64_t>(b.product() % params_.t()));
  }
}

const ring::RnsBase& Context::base(std::size_t residues) const {
  if (residues == 0 || residues > bases_.size()) throw InvalidArgument("bad residue count");
  return bases_[residues - 1];
}

const ring::RnsBase& Context::switch_base(std::size_t residues) const {
  if (residues == 0 || residues > switch_bases_.size()) throw InvalidArgument("bad residue count");
  return switch_bases_[residues - 1];
}

void Context::CheckCiphertextResidues(std::size_t residues) const {
  if (residues == 0 || residues > data_residues()) {
    throw InvalidArgument("ciphertext residue count out of range");
  }
}

void Context::AddScaled(ring::RnsPoly& c0, std::span<const uint64_t> m) const {
  if (c0.domain() != ring::Domain::kCoefficient) throw InvalidArgument("expected coefficient form");
  if (m.size() != n()) throw InvalidArgument("expected N coefficients");
  const std::size_t r = c0.residues();
  const ring::RnsBase& b = base(r);
  const uint64_t t = params_.t();
  const uint64_t rem = delta_remainder_[r - 1];
  std::vector<uint64_t> correction(n());
  for (std::size_t j = 0; j < n(); ++j) {
    correction[j] = static_cast<uint64_t>((static_cast<ring::u128>(rem) * m[j] + t / 2) / t);
  }
  for (std::size_t i = 0; i < r; ++i) {
    const ring::Modulus& q = b.modulus(i);
    const uint64_t d = delta_[r - 1][i];
    const uint64_t d_shoup = q.ShoupPrecompute(d);
    auto x = c0.residue(i);
    for (std::size_t j = 0; j < n(); ++j) {
      const uint64_t scaled = q.Add(q.MulShoup(q.Reduce(m[j]), d, d_shoup), q.Reduce(correction[j]));
      x[j] = q.Add(x[j], scaled);
    }
  }
}

ring::RnsPoly Context::LiftCentered(std::span<const uint64_t> m, std::size_t residues) const {
  if (m.size() != n()) throw InvalidArgument("expected N coefficients");
  const ring::RnsBase& b = base(residues);
  const uint64_t t = params_.t();
  ring::RnsPoly out(n(), residues);
  for (std::size_t i = 0; i < residues; ++i) {
    const ring::Modulus& q = b.modulus(i);
    auto x = out.residue(i);
    for (std::size_t j = 0; j < n(); ++j) {
      x[j] = m[j] > t / 2 ? q.Sub(0, t - m[j]) : m[j];
    }
  }
  return out;
}

}  // namespace choco::bfv
