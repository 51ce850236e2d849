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

// Brute-force layer oracles and a one-layer encrypted round trip.

#ifndef CHOCO_TESTS_TESTING_NN_HARNESS_H_
#define CHOCO_TESTS_TESTING_NN_HARNESS_H_

#include <cstdint>
#include <random>
#include <vector>

#include "choco/nn/linear.h"
#include "choco/nn/network.h"
#include "choco/nn/tensor.h"
#include "testing/bfv_fixture.h"

namespace choco::testing {

// Zero-pads the image explicitly, then sums; shares no code with the
// library's bounds-checked loop.
inline std::vector<int64_t> OracleConv(const std::vector<int64_t>& x, std::size_t h, std::size_t w,
                                       std::size_t cin, const std::vector<int32_t>& wt,
                                       std::size_t k, std::size_t cout, std::size_t stride,
                                       std::size_t pad) {
  const std::size_t ph = h + 2 * pad, pw = w + 2 * pad;
  std::vector<int64_t> padded(cin * ph * pw, 0);
  for (std::size_t c = 0; c < cin; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t xx = 0; xx < w; ++xx) {
        padded[(c * ph + y + pad) * pw + xx + pad] = x[(c * h + y) * w + xx];
      }
    }
  }
  const std::size_t oh = (ph - k) / stride + 1, ow = (pw - k) / stride + 1;
  std::vector<int64_t> out(cout * oh * ow, 0);
  for (std::size_t o = 0; o < cout; ++o) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t xx = 0; xx < ow; ++xx) {
        int64_t s = 0;
        for (std::size_t c = 0; c < cin; ++c) {
          for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
              s += static_cast<int64_t>(wt[((o * cin + c) * k + a) * k + b]) *
                   padded[(c * ph + y * stride + a) * pw + xx * stride + b];
            }
          }
        }
        out[(o * oh + y) * ow + xx] = s;
      }
    }
  }
  return out;
}

inline std::vector<int64_t> OracleMatVec(const std::vector<int32_t>& m, std::size_t rows,
                                         std::size_t cols, const std::vector<int64_t>& v) {
  std::vector<int64_t> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r] += static_cast<int64_t>(m[r * cols + c]) * v[c];
  }
  return out;
}

inline std::vector<int32_t> RandomInts(std::mt19937_64& rng, std::size_t count, int bits = 4) {
  const uint64_t span = uint64_t{1} << bits;
  std::vector<int32_t> v(count);
  for (auto& x : v) x = static_cast<int32_t>(rng() % span) - static_cast<int32_t>(span / 2);
  return v;
}

inline nn::IntTensor RandomActivation(std::mt19937_64& rng, nn::Shape shape) {
  nn::IntTensor x;
  x.shape = shape;
  for (int32_t v : RandomInts(rng, shape.size())) x.data.push_back(v);
  return x;
}

inline void SetWeights(nn::LayerSpec& layer, std::vector<int32_t> data) {
  auto w = std::make_shared<nn::QTensor>();
  w->bits = 4;
  w->dims = layer.kind == nn::LayerKind::kConv2d
                ? std::vector<std::size_t>{layer.kernel.cout, layer.kernel.cin, layer.kernel.kh,
                                           layer.kernel.kw}
                : std::vector<std::size_t>{layer.kernel.cout, layer.kernel.cin};
  w->data = std::move(data);
  layer.weights = std::move(w);
}

struct EncryptedLayerRun {
  nn::IntTensor output;
  nn::StageLayout layout;
  std::vector<bfv::Ciphertext> outputs;
  int min_budget = 0;
};

// Packs, encrypts, evaluates, decrypts, and unpacks one linear layer.
inline EncryptedLayerRun RunEncryptedLayer(BfvParty& party, const nn::LayerSpec& layer,
                                           const nn::IntTensor& x) {
  nn::NetworkSpec net{"single", {layer}};
  const nn::Stage stage = net.Stages().front();
  EncryptedLayerRun run;
  run.layout = nn::PlanStage(net, stage, party.n());
  std::vector<bfv::Ciphertext> in;
  for (const auto& slots : nn::PackStageInput(x, net, stage, run.layout, party.n(), party.t())) {
    in.push_back(party.Encrypt(slots));
  }
  run.outputs = nn::EvaluateStage(in, net, stage, run.layout, party.evaluator, party.keys.galois);
  std::vector<std::vector<uint64_t>> slots;
  run.min_budget = 1 << 30;
  for (const auto& ct : run.outputs) {
    slots.push_back(party.Decrypt(ct));
    run.min_budget = std::min(run.min_budget, party.Budget(ct));
  }
  run.output = nn::UnpackLayerOutput(slots, layer, run.layout.outputs.front(), party.t());
  return run;
}

}  // namespace choco::testing

#endif  // CHOCO_TESTS_TESTING_NN_HARNESS_H_
