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

#ifndef CHOCO_PACKING_NOISE_PROBE_H_
#define CHOCO_PACKING_NOISE_PROBE_H_

#include <cstdint>

#include "choco/bfv/params.h"

namespace choco::packing {

// Noise budgets (bits) of one 16-slot window: fresh, after a windowed
// rotation by one, and after the same rotation done as a masked
// permutation.
struct RotationNoise {
  int fresh = 0;
  int rotate = 0;
  int permute = 0;
};

// Generates keys from `seed`; deterministic.
RotationNoise MeasureRotationNoise(const bfv::HEParams& params, uint64_t seed = 1);

}  // namespace choco::packing

#endif  // CHOCO_PACKING_NOISE_PROBE_H_
