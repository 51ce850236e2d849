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

#include "choco/nn/linear.h"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include "choco/common/error.h"

namespace choco::nn {
namespace {

using bfv::Ciphertext;
using packing::NextPowerOfTwo;
using packing::PackingLayout;

[[noreturn]] void Fail(const LayerSpec& layer, const std::string& what) {
  throw InvalidArgument("layer " + layer.name + ": " + what);
}

std::size_t CeilDiv(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

int WeightBits(const LayerSpec& layer) { return layer.weights ? layer.weights->bits : 4; }

const QTensor& Weights(const LayerSpec& layer) {
  if (!layer.weights) Fail(layer, "no weights");
  return *layer.weights;
}

void Accumulate(std::optional<Ciphertext>& acc, Ciphertext term, const bfv::Evaluator& ev) {
  if (!acc) {
    acc = std::move(term);
  } else {
    ev.AddInPlace(*acc, term);
  }
}

// An all-zero weight block still has to produce a ciphertext of the right
// shape; multiplying by the zero plaintext keeps the layer at depth one.
Ciphertext ZeroLike(const Ciphertext& in, const bfv::Evaluator& ev) {
  const std::size_t n = ev.context().n();
  return ev.MulPlain(in, ev.Prepare(bfv::Plaintext{std::vector<uint64_t>(n, 0)}, in.residues()));
}

void CheckInputs(const std::vector<Ciphertext>& in, std::size_t expected, const LayerSpec& layer) {
  if (in.size() != expected) Fail(layer, "expected " + std::to_string(expected) + " input ciphertexts");
  for (const Ciphertext& ct : in) {
    if (ct.residues() != in.front().residues()) Fail(layer, "mixed residue counts");
  }
}

}  // namespace

uint64_t ToResidue(int64_t v, uint64_t t) {
  const int64_t m = v % static_cast<int64_t>(t);
  return static_cast<uint64_t>(m < 0 ? m + static_cast<int64_t>(t) : m);
}

int64_t FromResidue(uint64_t v, uint64_t t) {
  return v > t / 2 ? static_cast<int64_t>(v) - static_cast<int64_t>(t) : static_cast<int64_t>(v);
}

std::size_t ConvMargin(const LayerSpec& layer) {
  if (layer.kind != LayerKind::kConv2d) return 0;
  const int64_t w = static_cast<int64_t>(layer.in_shape.w);
  const int64_t p = static_cast<int64_t>(layer.padding);
  const int64_t dy[2] = {-p, static_cast<int64_t>(layer.kernel.kh) - 1 - p};
  const int64_t dx[2] = {-p, static_cast<int64_t>(layer.kernel.kw) - 1 - p};
  int64_t best = 0;
  for (int64_t y : dy) {
    for (int64_t x : dx) best = std::max<int64_t>(best, std::llabs(y * w + x));
  }
  return static_cast<std::size_t>(best);
}

void CheckAccumulator(const LayerSpec& layer, uint64_t t, int input_bits) {
  if (!layer.linear()) return;
  const unsigned __int128 bound = (static_cast<unsigned __int128>(1) << (input_bits - 1)) *
                                  (uint64_t{1} << (WeightBits(layer) - 1)) * layer.fan_in();
  if (2 * bound >= t) throw InvalidArgument("t too small for layer " + layer.name);
}

std::size_t StageLayout::total_output_ciphertexts() const {
  std::size_t total = 0;
  for (std::size_t c : output_ciphertexts) total += c;
  return total;
}

nlohmann::json StageLayout::ToJson() const {
  auto layout_json = [](const PackingLayout& l) {
    return nlohmann::json{{"channel_count", l.channel_count},
                          {"window", l.window},
                          {"margin", l.margin},
                          {"slot", l.slot}};
  };
  nlohmann::json outs = nlohmann::json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    outs.push_back({{"layout", layout_json(outputs[i])}, {"ciphertexts", output_ciphertexts[i]}});
  }
  return {{"input", layout_json(input)}, {"input_ciphertexts", input_ciphertexts}, {"outputs", outs}};
}

StageLayout StageLayout::FromJson(const nlohmann::json& j) {
  try {
    StageLayout s;
    s.input = PackingLayout::FromJson(j.at("input").dump());
    s.input_ciphertexts = j.at("input_ciphertexts").get<std::size_t>();
    for (const auto& o : j.at("outputs")) {
      s.outputs.push_back(PackingLayout::FromJson(o.at("layout").dump()));
      s.output_ciphertexts.push_back(o.at("ciphertexts").get<std::size_t>());
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad stage layout: ") + e.what());
  }
}

StageLayout PlanStage(const NetworkSpec& net, const Stage& stage, std::size_t n) {
  const std::size_t row = n / 2;
  const LayerSpec& first = net.layers[stage.linear.front()];
  StageLayout s;
  if (first.kind == LayerKind::kFc) {
    const std::size_t p = NextPowerOfTwo(std::max(first.kernel.cin, first.kernel.cout));
    if (p > row) Fail(first, "does not fit in N/2 slots");
    s.input = PackingLayout{1, p, 0, p};
    s.input_ciphertexts = 1;
    s.outputs = {s.input};
    s.output_ciphertexts = {1};
    return s;
  }
  std::size_t margin = 0;
  for (std::size_t idx : stage.linear) margin = std::max(margin, ConvMargin(net.layers[idx]));
  const Shape& in = first.in_shape;
  const std::size_t window = in.h * in.w;
  const std::size_t slot = NextPowerOfTwo(window + 2 * margin);
  if (slot > row) Fail(first, "does not fit in N/2 slots");
  const std::size_t per_ct = row / slot;
  const std::size_t group = std::min(NextPowerOfTwo(in.c), per_ct);
  s.input = PackingLayout{group, window, margin, slot};
  s.input_ciphertexts = CeilDiv(in.c, group);
  for (std::size_t idx : stage.linear) {
    s.outputs.push_back(PackingLayout{per_ct, window, margin, slot});
    s.output_ciphertexts.push_back(CeilDiv(net.layers[idx].kernel.cout, per_ct));
  }
  return s;
}

std::vector<std::vector<uint64_t>> PackStageInput(const IntTensor& x, const NetworkSpec& net,
                                                  const Stage& stage, const StageLayout& layout,
                                                  std::size_t n, uint64_t t) {
  const LayerSpec& first = net.layers[stage.linear.front()];
  std::vector<std::vector<uint64_t>> out;
  if (first.kind == LayerKind::kFc) {
    if (x.data.size() != first.kernel.cin) Fail(first, "input length mismatch");
    std::vector<uint64_t> v(layout.input.window, 0);
    for (std::size_t i = 0; i < x.data.size(); ++i) v[i] = ToResidue(x.data[i], t);
    out.push_back(packing::Pack({v}, layout.input, n));
    return out;
  }
  if (!(x.shape == first.in_shape)) Fail(first, "input shape mismatch");
  const std::size_t g = layout.input.channel_count;
  const std::size_t hw = x.shape.h * x.shape.w;
  for (std::size_t i = 0; i < layout.input_ciphertexts; ++i) {
    std::vector<std::vector<uint64_t>> channels(g, std::vector<uint64_t>(hw, 0));
    for (std::size_t c = 0; c < g; ++c) {
      const std::size_t ch = i * g + c;
      if (ch >= x.shape.c) break;
      for (std::size_t j = 0; j < hw; ++j) channels[c][j] = ToResidue(x.data[ch * hw + j], t);
    }
    out.push_back(packing::Pack(channels, layout.input, n));
  }
  return out;
}

IntTensor UnpackLayerOutput(const std::vector<std::vector<uint64_t>>& slots,
                            const LayerSpec& layer, const PackingLayout& out, uint64_t t) {
  IntTensor y;
  y.shape = layer.out_shape;
  y.data.assign(y.shape.size(), 0);
  if (layer.kind == LayerKind::kFc) {
    if (slots.size() != 1 || slots[0].size() < layer.kernel.cout) Fail(layer, "too few output slots");
    for (std::size_t j = 0; j < layer.kernel.cout; ++j) y.data[j] = FromResidue(slots[0][j], t);
    return y;
  }
  const std::size_t per_ct = out.channel_count;
  const std::size_t w = layer.in_shape.w, s = layer.stride;
  for (std::size_t co = 0; co < y.shape.c; ++co) {
    const std::size_t ct = co / per_ct, p = co % per_ct;
    if (ct >= slots.size()) Fail(layer, "too few output ciphertexts");
    const std::vector<uint64_t>& v = slots[ct];
    for (std::size_t oy = 0; oy < y.shape.h; ++oy) {
      for (std::size_t ox = 0; ox < y.shape.w; ++ox) {
        const std::size_t at = p * out.slot + out.margin + oy * s * w + ox * s;
        y.data[y.shape.index(co, oy, ox)] = FromResidue(v.at(at), t);
      }
    }
  }
  return y;
}

std::vector<Ciphertext> Conv2dEncrypted(const std::vector<Ciphertext>& in, const LayerSpec& layer,
                                        const PackingLayout& layout, const bfv::Evaluator& ev,
                                        const bfv::GaloisKeys& keys) {
  if (layer.kind != LayerKind::kConv2d) Fail(layer, "not a conv layer");
  const bfv::Context& ctx = ev.context();
  const uint64_t t = ctx.params().t();
  CheckAccumulator(layer, t);
  const QTensor& w = Weights(layer);
  const std::size_t row = ctx.params().row_size();
  const Shape& is = layer.in_shape;
  const Shape& os = layer.out_shape;
  const Kernel& k = layer.kernel;
  if (layout.window != is.h * is.w) Fail(layer, "layout window does not match the image");
  if (layout.margin < ConvMargin(layer)) Fail(layer, "layout margin below the kernel reach");
  const std::size_t slot = layout.slot;
  const std::size_t group = layout.channel_count;
  const std::size_t per_ct = row / slot;
  if (slot * per_ct != row || group == 0 || per_ct % group != 0) Fail(layer, "layout does not tile the row");
  const std::size_t in_cts = CeilDiv(k.cin, group);
  const std::size_t out_cts = CeilDiv(k.cout, per_ct);
  CheckInputs(in, in_cts, layer);
  const std::size_t residues = in.front().residues();
  const int64_t pad = static_cast<int64_t>(layer.padding);
  const int64_t width = static_cast<int64_t>(is.w);

  std::vector<std::optional<Ciphertext>> acc(out_cts);
  std::vector<uint64_t> plain(row);
  for (std::size_t i = 0; i < in_cts; ++i) {
    for (std::size_t j = 0; j < group; ++j) {
      for (std::size_t ky = 0; ky < k.kh; ++ky) {
        for (std::size_t kx = 0; kx < k.kw; ++kx) {
          const int64_t dy = static_cast<int64_t>(ky) - pad;
          const int64_t dx = static_cast<int64_t>(kx) - pad;
          const int64_t step = static_cast<int64_t>(j * slot) + dy * width + dx;
          std::optional<Ciphertext> rotated;
          for (std::size_t o = 0; o < out_cts; ++o) {
            std::fill(plain.begin(), plain.end(), 0);
            bool any = false;
            for (std::size_t p = 0; p < per_ct; ++p) {
              const std::size_t co = o * per_ct + p;
              // Slot p reads input channel (p + j) mod group after the rotation.
              const std::size_t ci = i * group + (p + j) % group;
              if (co >= k.cout || ci >= k.cin) continue;
              const int32_t wv = w.data[((co * k.cin + ci) * k.kh + ky) * k.kw + kx];
              if (wv == 0) continue;
              const uint64_t residue = ToResidue(wv, t);
              for (std::size_t oy = 0; oy < os.h; ++oy) {
                const int64_t y = static_cast<int64_t>(oy * layer.stride);
                if (y + dy < 0 || y + dy >= static_cast<int64_t>(is.h)) continue;
                for (std::size_t ox = 0; ox < os.w; ++ox) {
                  const int64_t x = static_cast<int64_t>(ox * layer.stride);
                  // Taps that fall in the zero padding get a zero weight.
                  if (x + dx < 0 || x + dx >= width) continue;
                  plain[p * slot + layout.margin + static_cast<std::size_t>(y * width + x)] = residue;
                  any = true;
                }
              }
            }
            if (!any) continue;
            if (!rotated) rotated = ev.ToNtt(step == 0 ? in[i] : ev.Rotate(in[i], step, keys));
            Accumulate(acc[o], ev.MulPlain(*rotated, ev.Prepare(bfv::Plaintext{plain}, residues)), ev);
          }
        }
      }
    }
  }
  std::vector<Ciphertext> out;
  out.reserve(out_cts);
  for (auto& a : acc) out.push_back(a ? ev.FromNtt(std::move(*a)) : ZeroLike(in.front(), ev));
  return out;
}

std::vector<Ciphertext> FcEncrypted(const std::vector<Ciphertext>& in, const LayerSpec& layer,
                                    const PackingLayout& layout, const bfv::Evaluator& ev,
                                    const bfv::GaloisKeys& keys) {
  if (layer.kind != LayerKind::kFc) Fail(layer, "not an fc layer");
  const bfv::Context& ctx = ev.context();
  const uint64_t t = ctx.params().t();
  CheckAccumulator(layer, t);
  const QTensor& w = Weights(layer);
  const std::size_t row = ctx.params().row_size();
  const std::size_t p = layout.window;
  const std::size_t cin = layer.kernel.cin, cout = layer.kernel.cout;
  if (p == 0 || (p & (p - 1)) != 0 || p > row || p < std::max(cin, cout)) {
    Fail(layer, "layout period must be a power of two covering the matrix");
  }
  CheckInputs(in, 1, layer);
  const std::size_t residues = in.front().residues();

  std::size_t log_p = 0;
  while ((std::size_t{1} << log_p) < p) ++log_p;
  const std::size_t baby = std::size_t{1} << ((log_p + 1) / 2);
  const std::size_t giant = p / baby;

  std::vector<std::optional<Ciphertext>> rotated(baby);
  std::optional<Ciphertext> acc;
  std::vector<uint64_t> plain(row);
  for (std::size_t g = 0; g < giant; ++g) {
    const std::size_t shift = g * baby;
    std::optional<Ciphertext> inner;
    for (std::size_t a = 0; a < baby; ++a) {
      const std::size_t diag = shift + a;
      // Diagonal `diag` pre-rotated right by `shift`: entry m holds
      // W[j][(j + diag) mod P] with j = (m - shift) mod P.
      bool any = false;
      for (std::size_t m = 0; m < row; ++m) {
        const std::size_t j = (m % p + p - shift) % p;
        const std::size_t col = (j + diag) % p;
        int32_t wv = 0;
        if (j < cout && col < cin) wv = w.data[j * cin + col];
        plain[m] = ToResidue(wv, t);
        any |= wv != 0;
      }
      if (!any) continue;
      if (!rotated[a]) rotated[a] = ev.ToNtt(a == 0 ? in[0] : ev.Rotate(in[0], static_cast<int64_t>(a), keys));
      Accumulate(inner, ev.MulPlain(*rotated[a], ev.Prepare(bfv::Plaintext{plain}, residues)), ev);
    }
    if (!inner) continue;
    Ciphertext part = ev.FromNtt(std::move(*inner));
    if (shift != 0) part = ev.Rotate(part, static_cast<int64_t>(shift), keys);
    Accumulate(acc, std::move(part), ev);
  }
  if (!acc) return {ZeroLike(in.front(), ev)};
  return {std::move(*acc)};
}

std::vector<Ciphertext> EvaluateStage(const std::vector<Ciphertext>& in, const NetworkSpec& net,
                                      const Stage& stage, const StageLayout& layout,
                                      const bfv::Evaluator& ev, const bfv::GaloisKeys& keys) {
  for (std::size_t idx : stage.linear) CheckAccumulator(net.layers[idx], ev.context().params().t());
  std::vector<Ciphertext> out;
  for (std::size_t idx : stage.linear) {
    const LayerSpec& l = net.layers[idx];
    auto part = l.kind == LayerKind::kConv2d ? Conv2dEncrypted(in, l, layout.input, ev, keys)
                                             : FcEncrypted(in, l, layout.input, ev, keys);
    for (auto& ct : part) out.push_back(std::move(ct));
  }
  return out;
}

}  // namespace choco::nn
