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

#include "choco/bfv/op_log.h"

namespace choco::bfv {

std::string OpName(Op op) {
  switch (op) {
    case Op::kEncrypt: return "encrypt";
    case Op::kDecrypt: return "decrypt";
    case Op::kNoiseBudget: return "noise_budget";
    case Op::kAddCt: return "add_ct";
    case Op::kAddPt: return "add_pt";
    case Op::kMulPt: return "mul_pt";
    case Op::kMulPtOnProduct: return "mul_pt_on_product";
    case Op::kRotate: return "rotate";
    case Op::kKeySwitch: return "key_switch";
    case Op::kDropResidue: return "drop_residue";
    case Op::kCount: break;
  }
  return "unknown";
}

std::string OpLog::Summary() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += OpName(static_cast<Op>(i)) + "=" + std::to_string(counts_[i]);
  }
  return out;
}

}  // namespace choco::bfv
