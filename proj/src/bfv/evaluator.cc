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

#include "choco/bfv/evaluator.h"

#include <algorithm>
#include <bit>

#include "choco/common/error.h"

namespace choco::bfv {

Evaluator::Evaluator(std::shared_ptr<const Context> ctx, OpLog* log)
    : ctx_(std::move(ctx)), log_(log) {}

void Evaluator::Check(const Ciphertext& a) const {
  if (a.params_id != ctx_->id()) throw InvalidArgument("ciphertext params mismatch");
  if (a.size() != 2) throw InvalidArgument("expected a two-component ciphertext");
  ctx_->CheckCiphertextResidues(a.residues());
}

Ciphertext Evaluator::Add(const Ciphertext& a, const Ciphertext& b) const {
  Ciphertext out = a;
  AddInPlace(out, b);
  return out;
}

void Evaluator::AddInPlace(Ciphertext& a, const Ciphertext& b) const {
  Check(a);
  Check(b);
  if (a.residues() != b.residues()) throw InvalidArgument("ciphertext residue mismatch");
  if (a.domain() != b.domain()) throw InvalidArgument("ciphertext domain mismatch");
  const ring::RnsBase& base = ctx_->base(a.residues());
  for (std::size_t c = 0; c < 2; ++c) ring::AddInPlace(a.components[c], b.components[c], base);
  a.plain_mul_depth = std::max(a.plain_mul_depth, b.plain_mul_depth);
  Record(log_, Op::kAddCt);
}

Ciphertext Evaluator::AddPlain(const Ciphertext& a, const Plaintext& m) const {
  Check(a);
  Ciphertext out = FromNtt(a);
  ctx_->AddScaled(out.components[0], ctx_->encoder().ToCoefficients(m));
  if (a.domain() == ring::Domain::kEvaluation) out = ToNtt(std::move(out));
  Record(log_, Op::kAddPt);
  return out;
}

PreparedPlaintext Evaluator::Prepare(const Plaintext& m, std::size_t residues) const {
  ctx_->CheckCiphertextResidues(residues);
  ring::RnsPoly lifted = ctx_->LiftCentered(ctx_->encoder().ToCoefficients(m), residues);
  ring::NttForwardInPlace(lifted, ctx_->base(residues));
  return PreparedPlaintext{std::move(lifted)};
}

Ciphertext Evaluator::MulPlain(const Ciphertext& a, const Plaintext& m) const {
  Check(a);
  return MulPlain(a, Prepare(m, a.residues()));
}

Ciphertext Evaluator::MulPlain(const Ciphertext& a, const PreparedPlaintext& m) const {
  Check(a);
  if (m.ntt.residues() != a.residues()) throw InvalidArgument("plaintext residue mismatch");
  const bool was_coeff = a.domain() == ring::Domain::kCoefficient;
  Ciphertext out = ToNtt(a);
  const ring::RnsBase& base = ctx_->base(a.residues());
  for (auto& c : out.components) ring::MulPointwiseInPlace(c, m.ntt, base);
  if (was_coeff) out = FromNtt(std::move(out));
  if (a.plain_mul_depth > 0) Record(log_, Op::kMulPtOnProduct);
  out.plain_mul_depth = static_cast<uint8_t>(std::min(255, a.plain_mul_depth + 1));
  Record(log_, Op::kMulPt);
  return out;
}

namespace {

// Non-adjacent form: the signed binary expansion with fewest nonzero digits.
std::vector<int64_t> NonAdjacentForm(int64_t value) {
  std::vector<int64_t> out;
  const bool negative = value < 0;
  int64_t v = negative ? -value : value;
  for (int64_t bit = 1; v != 0; bit <<= 1, v >>= 1) {
    if (v & 1) {
      const int64_t digit = 2 - (v & 3);  // +1 or -1
      out.push_back(negative ? -digit * bit : digit * bit);
      v -= digit;
    }
  }
  return out;
}

}  // namespace

std::vector<int64_t> Evaluator::DecomposeStep(int64_t step) const {
  const int64_t row = static_cast<int64_t>(ctx_->params().row_size());
  const int64_t s = ((step % row) + row) % row;
  // A whole-row term is the identity; among the two representatives of s
  // keep the lighter expansion.
  auto strip = [row](std::vector<int64_t> digits) {
    std::erase_if(digits, [row](int64_t d) { return d == row || d == -row; });
    return digits;
  };
  auto forward = strip(NonAdjacentForm(s));
  auto backward = strip(NonAdjacentForm(s - row));
  return backward.size() < forward.size() ? backward : forward;
}

Ciphertext Evaluator::Rotate(const Ciphertext& a, int64_t step, const GaloisKeys& keys) const {
  Check(a);
  const std::size_t n = ctx_->n();
  const auto steps = DecomposeStep(step);
  for (int64_t s : steps) {
    if (!keys.Has(GaloisElementForStep(n, s))) throw Error("no galois key");
  }
  Ciphertext out = a;
  for (int64_t s : steps) out = ApplyGalois(out, GaloisElementForStep(n, s), keys);
  Record(log_, Op::kRotate);
  return out;
}

Ciphertext Evaluator::RotateRows(const Ciphertext& a, const GaloisKeys& keys) const {
  Ciphertext out = ApplyGalois(a, RowSwapElement(ctx_->n()), keys);
  Record(log_, Op::kRotate);
  return out;
}

Ciphertext Evaluator::ApplyGalois(const Ciphertext& a, uint64_t element,
                                  const GaloisKeys& keys) const {
  Check(a);
  auto it = keys.keys.find(element);
  if (it == keys.keys.end()) throw Error("no galois key");
  const KeySwitchKey& key = it->second;
  const Context& ctx = *ctx_;
  const std::size_t r = a.residues();
  const std::size_t n = ctx.n();
  const ring::RnsBase& base = ctx.base(r);
  const ring::RnsBase& sb = ctx.switch_base(r);
  const std::size_t key_prime_row = ctx.k() - 1;

  const Ciphertext in = FromNtt(a);
  ring::RnsPoly c0 = ApplyAutomorphism(in.components[0], element, base);
  const ring::RnsPoly c1 = ApplyAutomorphism(in.components[1], element, base);

  // Hybrid key switch with the single special prime: lift each residue of
  // c1 as a digit into q_0..q_{r-1}, P, multiply by its key, divide by P.
  ring::RnsPoly acc0(n, r + 1, ring::Domain::kEvaluation);
  ring::RnsPoly acc1(n, r + 1, ring::Domain::kEvaluation);
  std::vector<uint64_t> lifted(n);
  for (std::size_t j = 0; j < r; ++j) {
    auto digit = c1.residue(j);
    for (std::size_t i = 0; i <= r; ++i) {
      const ring::Modulus& m = sb.modulus(i);
      const std::size_t row = i < r ? i : key_prime_row;
      for (std::size_t c = 0; c < n; ++c) lifted[c] = m.Reduce(digit[c]);
      sb.ntt(i).Forward(lifted);
      auto kb = key.digits[j][0].residue(row);
      auto ka = key.digits[j][1].residue(row);
      auto d0 = acc0.residue(i);
      auto d1 = acc1.residue(i);
      for (std::size_t c = 0; c < n; ++c) {
        d0[c] = m.Add(d0[c], m.Mul(lifted[c], kb[c]));
        d1[c] = m.Add(d1[c], m.Mul(lifted[c], ka[c]));
      }
    }
  }
  ring::NttInverseInPlace(acc0, sb);
  ring::NttInverseInPlace(acc1, sb);
  ring::DivideRoundByLast(acc0, sb);
  ring::DivideRoundByLast(acc1, sb);
  ring::AddInPlace(c0, acc0, base);

  Ciphertext out;
  out.params_id = a.params_id;
  out.plain_mul_depth = a.plain_mul_depth;
  out.components.push_back(std::move(c0));
  out.components.push_back(std::move(acc1));
  Record(log_, Op::kKeySwitch);
  return out;
}

Ciphertext Evaluator::DropResidue(const Ciphertext& a) const {
  Check(a);
  if (a.residues() < 2) throw InvalidArgument("cannot drop the only residue");
  const ring::RnsBase& base = ctx_->base(a.residues());
  Ciphertext out = FromNtt(a);
  for (auto& c : out.components) ring::DivideRoundByLast(c, base);
  Record(log_, Op::kDropResidue);
  return out;
}

Ciphertext Evaluator::ToNtt(Ciphertext a) const {
  if (a.domain() == ring::Domain::kEvaluation) return a;
  const ring::RnsBase& base = ctx_->base(a.residues());
  for (auto& c : a.components) ring::NttForwardInPlace(c, base);
  return a;
}

Ciphertext Evaluator::FromNtt(Ciphertext a) const {
  if (a.domain() == ring::Domain::kCoefficient) return a;
  const ring::RnsBase& base = ctx_->base(a.residues());
  for (auto& c : a.components) ring::NttInverseInPlace(c, base);
  return a;
}

}  // namespace choco::bfv
