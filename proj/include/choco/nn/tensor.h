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

#ifndef CHOCO_NN_TENSOR_H_
#define CHOCO_NN_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace choco::nn {

// Activation shape. Data is stored channel-major: (c * h + y) * w + x.
struct Shape {
  std::size_t h = 1;
  std::size_t w = 1;
  std::size_t c = 1;

  std::size_t size() const { return h * w * c; }
  std::size_t index(std::size_t ch, std::size_t y, std::size_t x) const {
    return (ch * h + y) * w + x;
  }
  std::string ToString() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

// Signed, symmetrically quantized tensor. `dims` is free-form: (h, w, c)
// for activations, (cout, cin, kh, kw) for conv weights, (out, in) for fc.
struct QTensor {
  std::vector<int32_t> data;
  std::vector<std::size_t> dims;
  double scale = 1.0;
  int64_t zero_point = 0;
  int bits = 4;

  int32_t min_value() const { return -(int32_t{1} << (bits - 1)); }
  int32_t max_value() const { return (int32_t{1} << (bits - 1)) - 1; }
  bool InRange() const;
  Shape shape() const;  // dims read as (h, w, c)
};

// Integer accumulators, e.g. a linear layer's output.
struct IntTensor {
  Shape shape;
  std::vector<int64_t> data;
  double scale = 1.0;

  friend bool operator==(const IntTensor& a, const IntTensor& b) {
    return a.shape == b.shape && a.data == b.data;
  }
};

// Symmetric: scale = max|t| / (2^(bits-1) - 1), saturating at the range ends.
QTensor Quantize(const std::vector<double>& values, const std::vector<std::size_t>& dims, int bits);
std::vector<double> Dequantize(const QTensor& q);

// Rescales accumulators into `bits` signed bits with the integer rule
// q = round_half_away(x * qmax / max|x|). Deterministic on every platform.
QTensor Requantize(const IntTensor& x, int bits = 4);

QTensor ActivationTensor(Shape shape, std::vector<int32_t> data, int bits = 4);
IntTensor Widen(const QTensor& q);

// Raw little-endian int8 payload at `path`, JSON sidecar at `path + ".json"`.
void WriteTensorFile(const std::string& path, const QTensor& q);
QTensor ReadTensorFile(const std::string& path);

}  // namespace choco::nn

#endif  // CHOCO_NN_TENSOR_H_
