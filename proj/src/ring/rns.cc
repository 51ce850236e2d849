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

#include "choco/ring/rns.h"

#include <set>

#include "choco/common/error.h"

namespace choco::ring {

RnsBase::RnsBase(std::size_t n, std::span<const uint64_t> moduli) : n_(n) {
  if (moduli.empty()) throw InvalidArgument("empty RNS base");
  std::set<uint64_t> seen;
  for (uint64_t value : moduli) {
    if (!IsPrime(value)) throw InvalidArgument("RNS modulus is not prime");
    if (!seen.insert(value).second) throw InvalidArgument("RNS moduli repeat");
    if ((value - 1) % (2 * n) != 0) throw InvalidArgument("RNS modulus not 1 mod 2N");
    moduli_.emplace_back(value);
    ntt_.push_back(std::make_shared<const NttTables>(n, moduli_.back()));
  }
  ComputeCrt();
}

void RnsBase::ComputeCrt() {
  product_ = 1;
  for (const auto& m : moduli_) product_ *= m.value();
  punctured_.clear();
  punctured_inv_.clear();
  for (const auto& m : moduli_) {
    BigInt punctured = product_ / m.value();
    const uint64_t residue = static_cast<uint64_t>(punctured % m.value());
    punctured_.push_back(std::move(punctured));
    punctured_inv_.push_back(m.Inverse(residue));
  }
}

std::vector<uint64_t> RnsBase::values() const {
  std::vector<uint64_t> out;
  for (const auto& m : moduli_) out.push_back(m.value());
  return out;
}

RnsBase RnsBase::Prefix(std::size_t count) const {
  if (count == 0 || count > size()) throw InvalidArgument("bad prefix length");
  RnsBase out;
  out.n_ = n_;
  out.moduli_.assign(moduli_.begin(), moduli_.begin() + count);
  out.ntt_.assign(ntt_.begin(), ntt_.begin() + count);
  out.ComputeCrt();
  return out;
}

void RnsPoly::Truncate(std::size_t count) {
  if (count > residues_) throw InvalidArgument("cannot grow by truncation");
  residues_ = count;
  coeffs_.resize(n_ * count);
}

namespace {

void CheckShape(const RnsPoly& p, const RnsBase& base) {
  if (p.n() != base.n() || p.residues() > base.size()) {
    throw InvalidArgument("polynomial does not match RNS base");
  }
}

void CheckSame(const RnsPoly& a, const RnsPoly& b) {
  if (a.n() != b.n() || a.residues() != b.residues()) {
    throw InvalidArgument("polynomial shape mismatch");
  }
  if (a.domain() != b.domain()) throw InvalidArgument("polynomial domain mismatch");
}

}  // namespace

void NttForwardInPlace(RnsPoly& p, const RnsBase& base) {
  CheckShape(p, base);
  if (p.domain() != Domain::kCoefficient) throw Error("double transform");
  for (std::size_t i = 0; i < p.residues(); ++i) base.ntt(i).Forward(p.residue(i));
  p.set_domain(Domain::kEvaluation);
}

void NttInverseInPlace(RnsPoly& p, const RnsBase& base) {
  CheckShape(p, base);
  if (p.domain() != Domain::kEvaluation) throw Error("double transform");
  for (std::size_t i = 0; i < p.residues(); ++i) base.ntt(i).Inverse(p.residue(i));
  p.set_domain(Domain::kCoefficient);
}

RnsPoly NttForward(RnsPoly p, const RnsBase& base) {
  NttForwardInPlace(p, base);
  return p;
}

RnsPoly NttInverse(RnsPoly p, const RnsBase& base) {
  NttInverseInPlace(p, base);
  return p;
}

void AddInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base) {
  CheckShape(a, base);
  CheckSame(a, b);
  for (std::size_t i = 0; i < a.residues(); ++i) {
    const Modulus& m = base.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.Add(x[j], y[j]);
  }
}

void SubInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base) {
  CheckShape(a, base);
  CheckSame(a, b);
  for (std::size_t i = 0; i < a.residues(); ++i) {
    const Modulus& m = base.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.Sub(x[j], y[j]);
  }
}

void NegateInPlace(RnsPoly& a, const RnsBase& base) {
  CheckShape(a, base);
  for (std::size_t i = 0; i < a.residues(); ++i) {
    const Modulus& m = base.modulus(i);
    for (auto& x : a.residue(i)) x = m.Neg(x);
  }
}

void MulPointwiseInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base) {
  CheckShape(a, base);
  CheckSame(a, b);
  if (a.domain() != Domain::kEvaluation) throw InvalidArgument("pointwise product needs NTT form");
  for (std::size_t i = 0; i < a.residues(); ++i) {
    const Modulus& m = base.modulus(i);
    auto x = a.residue(i);
    auto y = b.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = m.Mul(x[j], y[j]);
  }
}

std::vector<BigInt> CrtRecombine(const RnsPoly& p, const RnsBase& full_base) {
  CheckShape(p, full_base);
  if (p.domain() != Domain::kCoefficient) throw InvalidArgument("CRT needs coefficient form");
  const RnsBase base = p.residues() == full_base.size() ? full_base : full_base.Prefix(p.residues());
  std::vector<BigInt> out(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const uint64_t y = base.modulus(i).Mul(p.residue(i)[j], base.punctured_inverse(i));
      acc += base.punctured_product(i) * y;
    }
    out[j] = acc % base.product();
  }
  return out;
}

RnsPoly RnsDecompose(std::span<const BigInt> coeffs, const RnsBase& base) {
  RnsPoly out(base.n(), base.size());
  if (coeffs.size() > base.n()) throw InvalidArgument("too many coefficients");
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] < 0 || coeffs[j] >= base.product()) throw InvalidArgument("out of range");
    for (std::size_t i = 0; i < base.size(); ++i) {
      out.residue(i)[j] = static_cast<uint64_t>(coeffs[j] % base.modulus(i).value());
    }
  }
  return out;
}

void DivideRoundByLast(RnsPoly& p, const RnsBase& base) {
  CheckShape(p, base);
  if (p.domain() != Domain::kCoefficient) throw InvalidArgument("modulus switch needs coefficient form");
  const std::size_t r = p.residues();
  if (r < 2) throw InvalidArgument("cannot drop the only residue");
  const Modulus& last = base.modulus(r - 1);
  const uint64_t half = last.value() >> 1;
  std::vector<uint64_t> shifted(p.residue(r - 1).begin(), p.residue(r - 1).end());
  for (auto& x : shifted) x = last.Add(x, half);
  for (std::size_t i = 0; i + 1 < r; ++i) {
    const Modulus& m = base.modulus(i);
    const uint64_t inv_last = m.Inverse(last.value() % m.value());
    const uint64_t inv_shoup = m.ShoupPrecompute(inv_last);
    const uint64_t half_mod = m.Reduce(half);
    auto x = p.residue(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const uint64_t v = m.Sub(m.Add(x[j], half_mod), m.Reduce(shifted[j]));
      x[j] = m.MulShoup(v, inv_last, inv_shoup);
    }
  }
  p.Truncate(r - 1);
}

}  // namespace choco::ring
