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

#ifndef CHOCO_BFV_OP_LOG_H_
#define CHOCO_BFV_OP_LOG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace choco::bfv {

enum class Op : uint8_t {
  kEncrypt,
  kDecrypt,
  kNoiseBudget,
  kAddCt,
  kAddPt,
  kMulPt,
  // A plaintext multiply whose input already carried one.
  kMulPtOnProduct,
  // Logical rotate calls, however many key switches they expand into.
  kRotate,
  kKeySwitch,
  kDropResidue,
  kCount,
};

std::string OpName(Op op);

// Per-party operation counters. Not synchronized: one log per thread of
// work, as each protocol party already is.
class OpLog {
 public:
  void Record(Op op, uint64_t times = 1) { counts_[static_cast<std::size_t>(op)] += times; }
  uint64_t count(Op op) const { return counts_[static_cast<std::size_t>(op)]; }
  void Reset() { counts_.fill(0); }
  std::string Summary() const;

 private:
  std::array<uint64_t, static_cast<std::size_t>(Op::kCount)> counts_{};
};

inline void Record(OpLog* log, Op op) {
  if (log != nullptr) log->Record(op);
}

}  // namespace choco::bfv

#endif  // CHOCO_BFV_OP_LOG_H_
