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

#ifndef CHOCO_NN_REFERENCE_H_
#define CHOCO_NN_REFERENCE_H_

#include <vector>

#include "choco/nn/network.h"
#include "choco/nn/tensor.h"

// Plaintext integer layers. These are both the client's non-linear path
// and the local reference the offloaded result must match bit for bit.
namespace choco::nn {

IntTensor Conv2dReference(const IntTensor& x, const LayerSpec& layer);
// The input is read flattened in storage order.
IntTensor FcReference(const IntTensor& x, const LayerSpec& layer);

// Every linear layer of the stage on the same input, channels concatenated.
IntTensor LinearStageReference(const IntTensor& x, const NetworkSpec& net, const Stage& stage);

// ReLU, or max / rounded-mean pooling.
IntTensor ApplyNonlinear(const IntTensor& x, const LayerSpec& layer);
IntTensor ApplyNonlinear(IntTensor x, const NetworkSpec& net, const Stage& stage);

// ReLU and pooling in order, then requantization to `bits`.
QTensor ReluPoolRequantize(const IntTensor& x, const std::vector<LayerSpec>& layers, int bits = 4);

// Requantized stage output, shaped as the next stage reads it.
IntTensor NextStageInput(const IntTensor& y, const NetworkSpec& net, const Stage& next);

// Whole-network quantized inference. Intermediate stages are requantized
// to 4 bits; the last stage's accumulators are the scores.
IntTensor ReferenceInference(const NetworkSpec& net, const QTensor& image);

}  // namespace choco::nn

#endif  // CHOCO_NN_REFERENCE_H_
