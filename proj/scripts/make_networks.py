#!/usr/bin/env python3
# Copyright 2026 The CHOCO Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the network spec files under data/networks.

Layer dims are reconstructions of the cited architectures; shapes are
derived here and re-checked by the C++ loader. Weights, where shipped, are
seeded uniform 4-bit values (no trained models are distributed).
"""

import argparse
import json
import os

import numpy as np


class Builder:
    def __init__(self, name, shape):
        self.name = name
        self.shape = tuple(shape)  # (h, w, c)
        self.layers = []
        self._last_conv_in = None

    def conv(self, name, k, cout, stride=1, padding=0, concat=False):
        h, w, c = self._last_conv_in if concat else self.shape
        oh = (h + 2 * padding - k) // stride + 1
        ow = (w + 2 * padding - k) // stride + 1
        layer = {"name": name, "kind": "conv2d", "in_shape": [h, w, c],
                 "out_shape": [oh, ow, cout], "kernel": [k, k, c, cout],
                 "stride": stride, "padding": padding}
        if concat:
            layer["concat"] = True
            ph, pw, pc = self.shape
            self.shape = (ph, pw, pc + cout)
        else:
            self._last_conv_in = (h, w, c)
            self.shape = (oh, ow, cout)
        self.layers.append(layer)

    def fc(self, name, cout):
        h, w, c = self.shape
        self.layers.append({"name": name, "kind": "fc", "in_shape": [h, w, c],
                            "out_shape": [1, 1, cout], "kernel": [1, 1, h * w * c, cout],
                            "stride": 1})
        self.shape = (1, 1, cout)

    def relu(self, name):
        s = list(self.shape)
        self.layers.append({"name": name, "kind": "relu", "in_shape": s, "out_shape": s})

    def pool(self, name, window, stride, kind="max"):
        h, w, c = self.shape
        out = [(h - window) // stride + 1, (w - window) // stride + 1, c]
        self.layers.append({"name": name, "kind": "pool", "pool": kind,
                            "window": [window, window], "stride": stride,
                            "in_shape": [h, w, c], "out_shape": out})
        self.shape = tuple(out)

    def fire(self, name, squeeze, expand):
        self.conv(name + "_squeeze", 1, squeeze)
        self.relu(name + "_squeeze_relu")
        self.conv(name + "_expand1", 1, expand)
        self.conv(name + "_expand3", 3, expand, padding=1, concat=True)
        self.relu(name + "_relu")

    def spec(self):
        return {"name": self.name, "layers": self.layers}


def lenet_sm():
    # mlpack digit-recognizer LeNet: two valid 5x5 convs, one classifier.
    b = Builder("LeNetSm", (28, 28, 1))
    b.conv("conv1", 5, 6)
    b.relu("relu1")
    b.pool("pool1", 2, 2)
    b.conv("conv2", 5, 16)
    b.relu("relu2")
    b.pool("pool2", 2, 2)
    b.fc("fc1", 10)
    return b


def lenet_lg():
    # TensorFlow LeNet: same-padded 5x5 convs with 32/64 filters, 512 hidden.
    b = Builder("LeNetLg", (28, 28, 1))
    b.conv("conv1", 5, 32, padding=2)
    b.relu("relu1")
    b.pool("pool1", 2, 2)
    b.conv("conv2", 5, 64, padding=2)
    b.relu("relu2")
    b.pool("pool2", 2, 2)
    b.fc("fc1", 512)
    b.relu("relu3")
    b.fc("fc2", 10)
    return b


def squeezenet():
    # CIFAR SqueezeNet: 3x3 stem, eight fire modules, 1x1 classifier conv,
    # global average pooling in place of fully connected layers.
    b = Builder("SqueezeNet", (32, 32, 3))
    b.conv("conv1", 3, 64, padding=1)
    b.relu("relu1")
    b.pool("pool1", 2, 2)
    b.fire("fire2", 16, 64)
    b.fire("fire3", 16, 64)
    b.pool("pool3", 2, 2)
    b.fire("fire4", 32, 128)
    b.fire("fire5", 32, 128)
    b.fire("fire6", 48, 192)
    b.fire("fire7", 48, 192)
    b.pool("pool7", 2, 2)
    b.fire("fire8", 64, 256)
    b.fire("fire9", 64, 256)
    b.conv("conv10", 1, 10)
    b.relu("relu10")
    b.pool("avgpool", 4, 4, kind="avg")
    return b


def vgg16():
    # VGG16 for CIFAR-10: thirteen same-padded 3x3 convs, five 2x2 pools,
    # a 512-wide hidden layer and the classifier.
    b = Builder("VGG16", (32, 32, 3))
    cfg = [64, 64, "M", 128, 128, "M", 256, 256, 256, "M", 512, 512, 512, "M",
           512, 512, 512, "M"]
    conv = 0
    pool = 0
    for v in cfg:
        if v == "M":
            pool += 1
            b.pool("pool%d" % pool, 2, 2)
        else:
            conv += 1
            b.conv("conv%d" % conv, 3, v, padding=1)
            b.relu("relu%d" % conv)
    b.fc("fc1", 512)
    b.relu("relu_fc1")
    b.fc("fc2", 10)
    return b


def toy_cnn():
    # Small three-linear-layer CNN for end-to-end runs.
    b = Builder("ToyCNN", (8, 8, 1))
    b.conv("conv1", 3, 4, padding=1)
    b.relu("relu1")
    b.pool("pool1", 2, 2)
    b.conv("conv2", 3, 8, padding=1)
    b.relu("relu2")
    b.pool("pool2", 2, 2)
    b.fc("fc1", 10)
    return b


def write_tensor(path, data, dims, scale):
    data = np.asarray(data, dtype=np.int8)
    data.tofile(path)
    with open(path + ".json", "w") as f:
        json.dump({"shape": list(dims), "scale": scale, "zero_point": 0, "bits": 4}, f, indent=2)
        f.write("\n")


def attach_weights(b, outdir, seed):
    rng = np.random.default_rng(seed)
    wdir = os.path.join(outdir, b.name.lower())
    os.makedirs(wdir, exist_ok=True)
    for layer in b.layers:
        if layer["kind"] not in ("conv2d", "fc"):
            continue
        kh, kw, cin, cout = layer["kernel"]
        dims = [cout, cin, kh, kw] if layer["kind"] == "conv2d" else [cout, cin]
        w = rng.integers(-8, 8, size=int(np.prod(dims)))
        rel = os.path.join(b.name.lower(), layer["name"] + ".w")
        write_tensor(os.path.join(outdir, rel), w, dims, 1.0 / 7.0)
        layer["weights"] = rel


def write_image(path, shape, seed):
    rng = np.random.default_rng(seed)
    h, w, c = shape
    write_tensor(path, rng.integers(-8, 8, size=h * w * c), [h, w, c], 1.0 / 7.0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "networks"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    builders = [lenet_sm(), lenet_lg(), squeezenet(), vgg16(), toy_cnn()]
    with_weights = {"LeNetSm": 11, "ToyCNN": 7}
    for b in builders:
        if b.name in with_weights:
            attach_weights(b, args.out, with_weights[b.name])
        with open(os.path.join(args.out, b.name.lower() + ".json"), "w") as f:
            json.dump(b.spec(), f, indent=2)
            f.write("\n")
    write_image(os.path.join(args.out, "toycnn_image.q"), (8, 8, 1), 3)
    write_image(os.path.join(args.out, "lenetsm_image.q"), (28, 28, 1), 5)


if __name__ == "__main__":
    main()
