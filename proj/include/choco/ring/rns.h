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

#ifndef CHOCO_RING_RNS_H_
#define CHOCO_RING_RNS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "choco/ring/modulus.h"
#include "choco/ring/ntt.h"

namespace choco::ring {

using BigInt = boost::multiprecision::cpp_int;

// An ordered list of distinct NTT-friendly primes together with the CRT
// constants needed to move between residue and integer form. The last
// modulus plays the role of the key (special) prime in the BFV layer.
class RnsBase {
 public:
  // Throws InvalidArgument if a value is not prime, repeats, or is not
  // 1 mod 2N.
  RnsBase(std::size_t n, std::span<const uint64_t> moduli);

  std::size_t n() const { return n_; }
  std::size_t size() const { return moduli_.size(); }
  const Modulus& modulus(std::size_t i) const { return moduli_[i]; }
  const NttTables& ntt(std::size_t i) const { return *ntt_[i]; }
  std::vector<uint64_t> values() const;

  // Product of all moduli.
  const BigInt& product() const { return product_; }
  // q / q_i and (q / q_i)^-1 mod q_i.
  const BigInt& punctured_product(std::size_t i) const { return punctured_[i]; }
  uint64_t punctured_inverse(std::size_t i) const { return punctured_inv_[i]; }

  // The sub-base formed by the first `count` moduli. NTT tables are shared.
  RnsBase Prefix(std::size_t count) const;

 private:
  RnsBase() = default;
  void ComputeCrt();

  std::size_t n_ = 0;
  std::vector<Modulus> moduli_;
  std::vector<std::shared_ptr<const NttTables>> ntt_;
  BigInt product_;
  std::vector<BigInt> punctured_;
  std::vector<uint64_t> punctured_inv_;
};

enum class Domain : uint8_t { kCoefficient = 0, kEvaluation = 1 };

// A polynomial of degree < N stored as one row of N residues per modulus.
// Row i is reduced modulo base.modulus(i) of whatever base it was created
// against; all rows share one domain flag.
class RnsPoly {
 public:
  RnsPoly() = default;
  RnsPoly(std::size_t n, std::size_t residues, Domain domain = Domain::kCoefficient)
      : n_(n), residues_(residues), domain_(domain), coeffs_(n * residues, 0) {}

  std::size_t n() const { return n_; }
  std::size_t residues() const { return residues_; }
  Domain domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = d; }

  std::span<uint64_t> residue(std::size_t i) { return {coeffs_.data() + i * n_, n_}; }
  std::span<const uint64_t> residue(std::size_t i) const {
    return {coeffs_.data() + i * n_, n_};
  }
  std::span<const uint64_t> data() const { return coeffs_; }
  std::span<uint64_t> data() { return coeffs_; }

  // Removes trailing residue rows, keeping the first `count`.
  void Truncate(std::size_t count);

  friend bool operator==(const RnsPoly&, const RnsPoly&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t residues_ = 0;
  Domain domain_ = Domain::kCoefficient;
  std::vector<uint64_t> coeffs_;
};

// Transforms; throw Error("double transform") on a domain mismatch.
RnsPoly NttForward(RnsPoly p, const RnsBase& base);
RnsPoly NttInverse(RnsPoly p, const RnsBase& base);
void NttForwardInPlace(RnsPoly& p, const RnsBase& base);
void NttInverseInPlace(RnsPoly& p, const RnsBase& base);

// Coefficient-wise arithmetic over the first p.residues() moduli of `base`.
void AddInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base);
void SubInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base);
void NegateInPlace(RnsPoly& a, const RnsBase& base);
// Pointwise product; both operands must be in the evaluation domain.
void MulPointwiseInPlace(RnsPoly& a, const RnsPoly& b, const RnsBase& base);

// CRT recombination of a coefficient-domain polynomial into integers in [0, q).
std::vector<BigInt> CrtRecombine(const RnsPoly& p, const RnsBase& base);
// Residue decomposition; throws InvalidArgument("out of range") if a value
// is negative or >= q.
RnsPoly RnsDecompose(std::span<const BigInt> coeffs, const RnsBase& base);

// Divides by the last active modulus with rounding and drops that residue:
// x -> round(x / q_last) over the remaining moduli.
void DivideRoundByLast(RnsPoly& p, const RnsBase& base);

}  // namespace choco::ring

#endif  // CHOCO_RING_RNS_H_
