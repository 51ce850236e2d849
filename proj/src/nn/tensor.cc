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

#include "choco/nn/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "choco/common/error.h"

namespace choco::nn {
namespace {

void CheckBits(int bits) {
  if (bits != 4 && bits != 8) throw InvalidArgument("bits must be 4 or 8");
}

std::size_t Product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

// round(num / den) with halves away from zero; den > 0.
int64_t RoundDiv(int64_t num, int64_t den) {
  const int64_t mag = (2 * std::llabs(num) + den) / (2 * den);
  return num < 0 ? -mag : mag;
}

}  // namespace

std::string Shape::ToString() const {
  std::ostringstream os;
  os << h << "x" << w << "x" << c;
  return os.str();
}

bool QTensor::InRange() const {
  return std::all_of(data.begin(), data.end(),
                     [&](int32_t v) { return v >= min_value() && v <= max_value(); });
}

Shape QTensor::shape() const {
  if (dims.size() != 3) throw InvalidArgument("not an activation tensor");
  return Shape{dims[0], dims[1], dims[2]};
}

QTensor Quantize(const std::vector<double>& values, const std::vector<std::size_t>& dims,
                 int bits) {
  CheckBits(bits);
  if (Product(dims) != values.size()) throw InvalidArgument("dims do not match data");
  QTensor q;
  q.bits = bits;
  q.dims = dims;
  double peak = 0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double qmax = q.max_value();
  q.scale = peak > 0 ? peak / qmax : 1.0;
  q.data.reserve(values.size());
  for (double v : values) {
    const double r = std::nearbyint(v / q.scale);
    q.data.push_back(static_cast<int32_t>(std::clamp<double>(r, q.min_value(), qmax)));
  }
  return q;
}

std::vector<double> Dequantize(const QTensor& q) {
  std::vector<double> out;
  out.reserve(q.data.size());
  for (int32_t v : q.data) out.push_back(q.scale * static_cast<double>(v - q.zero_point));
  return out;
}

QTensor Requantize(const IntTensor& x, int bits) {
  CheckBits(bits);
  QTensor q;
  q.bits = bits;
  q.dims = {x.shape.h, x.shape.w, x.shape.c};
  int64_t peak = 0;
  for (int64_t v : x.data) peak = std::max<int64_t>(peak, std::llabs(v));
  const int64_t qmax = q.max_value();
  q.data.resize(x.data.size(), 0);
  if (peak == 0) {
    q.scale = x.scale;
    return q;
  }
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    q.data[i] = static_cast<int32_t>(RoundDiv(x.data[i] * qmax, peak));
  }
  q.scale = x.scale * static_cast<double>(peak) / static_cast<double>(qmax);
  return q;
}

QTensor ActivationTensor(Shape shape, std::vector<int32_t> data, int bits) {
  CheckBits(bits);
  if (data.size() != shape.size()) throw InvalidArgument("dims do not match data");
  QTensor q;
  q.bits = bits;
  q.dims = {shape.h, shape.w, shape.c};
  q.data = std::move(data);
  if (!q.InRange()) throw InvalidArgument("value out of range");
  return q;
}

IntTensor Widen(const QTensor& q) {
  IntTensor out;
  out.shape = q.shape();
  out.scale = q.scale;
  out.data.assign(q.data.begin(), q.data.end());
  return out;
}

void WriteTensorFile(const std::string& path, const QTensor& q) {
  if (!q.InRange()) throw InvalidArgument("value out of range");
  std::ofstream bin(path, std::ios::binary);
  for (int32_t v : q.data) bin.put(static_cast<char>(static_cast<int8_t>(v)));
  if (!bin) throw Error("cannot write " + path);
  nlohmann::json side = {
      {"shape", q.dims}, {"scale", q.scale}, {"zero_point", q.zero_point}, {"bits", q.bits}};
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
  if (!js) throw Error("cannot write " + path + ".json");
}

QTensor ReadTensorFile(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw Error("cannot read " + path + ".json");
  QTensor q;
  try {
    const auto side = nlohmann::json::parse(js);
    q.dims = side.at("shape").get<std::vector<std::size_t>>();
    q.scale = side.at("scale").get<double>();
    q.zero_point = side.value("zero_point", int64_t{0});
    q.bits = side.at("bits").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad tensor sidecar: ") + e.what());
  }
  CheckBits(q.bits);
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw Error("cannot read " + path);
  const std::vector<char> raw((std::istreambuf_iterator<char>(bin)),
                              std::istreambuf_iterator<char>());
  if (raw.size() != Product(q.dims)) throw FormatError("tensor size does not match sidecar");
  q.data.reserve(raw.size());
  for (char c : raw) q.data.push_back(static_cast<int8_t>(c));
  if (!q.InRange()) throw FormatError("tensor value outside its bit range");
  return q;
}

}  // namespace choco::nn
