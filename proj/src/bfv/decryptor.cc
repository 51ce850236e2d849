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

#include "choco/bfv/decryptor.h"

#include <cmath>

#include "choco/common/error.h"

namespace choco::bfv {

namespace {

double Log2(const ring::BigInt& x) {
  if (x <= 0) return -INFINITY;
  const unsigned top = boost::multiprecision::msb(x);
  if (top < 60) return std::log2(static_cast<double>(x.convert_to<uint64_t>()));
  const ring::BigInt head = x >> (top - 60);
  return std::log2(static_cast<double>(head.convert_to<uint64_t>())) + (top - 60);
}

// round(t * x / q) mod t for x in [0, q), exactly.
uint64_t ScaleAndRound(const ring::BigInt& x, const ring::BigInt& q, uint64_t t) {
  const ring::BigInt num = x * t * 2 + q;
  const ring::BigInt rounded = num / (q * 2);
  return static_cast<uint64_t>(rounded % t);
}

}  // namespace

Decryptor::Decryptor(std::shared_ptr<const Context> ctx, SecretKey sk, OpLog* log)
    : ctx_(std::move(ctx)), sk_(std::move(sk)), log_(log) {}

ring::RnsPoly Decryptor::Phase(const Ciphertext& ct) const {
  const Context& ctx = *ctx_;
  if (ct.params_id != ctx.id()) throw InvalidArgument("ciphertext params mismatch");
  if (ct.size() != 2) throw InvalidArgument("expected a two-component ciphertext");
  const std::size_t r = ct.residues();
  if (r == 0 || r > ctx.k()) throw InvalidArgument("bad residue count");
  const ring::RnsBase& base = ctx.base(r);
  ring::RnsPoly s = sk_.ntt;
  s.Truncate(r);
  ring::RnsPoly x = ct.components[1];
  if (x.domain() == ring::Domain::kCoefficient) ring::NttForwardInPlace(x, base);
  ring::MulPointwiseInPlace(x, s, base);
  ring::NttInverseInPlace(x, base);
  ring::RnsPoly c0 = ct.components[0];
  if (c0.domain() == ring::Domain::kEvaluation) ring::NttInverseInPlace(c0, base);
  ring::AddInPlace(x, c0, base);
  return x;
}

Plaintext Decryptor::Decrypt(const Ciphertext& ct, Encoding encoding) const {
  const Context& ctx = *ctx_;
  const ring::RnsPoly x = Phase(ct);
  const std::size_t r = x.residues();
  const ring::RnsBase& base = ctx.base(r);
  const uint64_t t = ctx.t().value();

  // t*x/q = sum_i y_i * t / q_i - t*v with y_i = x_i * (q/q_i)^-1 mod q_i, so
  // mod t only the sum matters. Integer parts are exact; the fractional sum
  // is taken in long double and recomputed exactly if it lands near a
  // rounding boundary.
  std::vector<uint64_t> m(ctx.n());
  for (std::size_t j = 0; j < ctx.n(); ++j) {
    uint64_t whole = 0;
    long double frac = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const ring::Modulus& qi = base.modulus(i);
      const uint64_t y = qi.Mul(x.residue(i)[j], base.punctured_inverse(i));
      const ring::u128 yt = static_cast<ring::u128>(y) * t;
      whole = (whole + static_cast<uint64_t>((yt / qi.value()) % t)) % t;
      frac += static_cast<long double>(static_cast<uint64_t>(yt % qi.value())) /
              static_cast<long double>(qi.value());
    }
    const long double shifted = frac + 0.5L;
    const long double floor_part = std::floor(shifted);
    const long double distance = shifted - floor_part;
    if (distance < 1e-9L || distance > 1 - 1e-9L) {
      ring::BigInt acc = 0;
      for (std::size_t i = 0; i < r; ++i) {
        const uint64_t y = base.modulus(i).Mul(x.residue(i)[j], base.punctured_inverse(i));
        acc += base.punctured_product(i) * y;
      }
      m[j] = ScaleAndRound(acc % base.product(), base.product(), t);
    } else {
      m[j] = (whole + static_cast<uint64_t>(floor_part) % t) % t;
    }
  }
  Record(log_, Op::kDecrypt);
  if (encoding == Encoding::kSlot) return Plaintext{ctx.encoder().Decode(m), Encoding::kSlot};
  return Plaintext{std::move(m), Encoding::kCoefficient};
}

Plaintext Decryptor::DecryptChecked(const Ciphertext& ct, Encoding encoding) const {
  if (NoiseBudget(ct).exhausted) throw NoiseOverflow();
  return Decrypt(ct, encoding);
}

NoiseReport Decryptor::NoiseBudget(const Ciphertext& ct) const {
  const Context& ctx = *ctx_;
  const ring::RnsPoly x = Phase(ct);
  const ring::RnsBase& base = ctx.base(x.residues());
  const ring::BigInt& q = base.product();
  const uint64_t t = ctx.t().value();
  ring::BigInt worst = 0;
  for (const auto& value : ring::CrtRecombine(x, base)) {
    ring::BigInt v = (value * t) % q;
    if (v > q / 2) v = q - v;
    if (v > worst) worst = v;
  }
  if (worst == 0) worst = 1;
  const double headroom = Log2(q) - 1 - std::log2(static_cast<double>(t)) - Log2(worst);
  NoiseReport report;
  report.budget_bits = std::max(0, static_cast<int>(std::floor(headroom)));
  report.exhausted = report.budget_bits == 0;
  Record(log_, Op::kNoiseBudget);
  return report;
}

}  // namespace choco::bfv
