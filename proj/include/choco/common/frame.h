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

#ifndef CHOCO_COMMON_FRAME_H_
#define CHOCO_COMMON_FRAME_H_

#include <cstddef>

// Wire constants shared by the protocol and the traffic predictions that
// must match it byte for byte.
namespace choco {

// 4-byte magic, 1-byte kind, 8-byte little-endian payload length.
inline constexpr std::size_t kFrameHeaderBytes = 13;
// LAYER_INPUT / LAYER_OUTPUT payloads open with u32 stage, u32 count.
inline constexpr std::size_t kBatchPrefixBytes = 8;

}  // namespace choco

#endif  // CHOCO_COMMON_FRAME_H_
