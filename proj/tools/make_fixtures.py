#!/usr/bin/env python3
# Copyright 2026 The sparsekit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the committed fixtures under fixtures/.

separable.*  one dense layer, 2-class linearly separable points, 100% accuracy
lenet.*      small conv net trained on synthetic 12x12 bar images (4 classes)

Both models are bias-free so that an all-zero model scores every class 0
and predicts class 0.

    python3 tools/make_fixtures.py [--out fixtures]
"""

import argparse
import json
import pathlib
import struct

import numpy as np

CONV, FC = 0, 1


def write_spwt(path, layers):
    """layers: list of (name, kind, ndarray float32)."""
    out = bytearray(b"SPWT")
    out += struct.pack("<BI", 1, len(layers))
    for name, kind, w in layers:
        w = np.ascontiguousarray(w, dtype="<f4")
        raw = name.encode("utf-8")
        out += struct.pack("<H", len(raw)) + raw
        out += struct.pack("<BB", kind, w.ndim)
        out += struct.pack("<%dI" % w.ndim, *w.shape)
        out += w.tobytes()
    pathlib.Path(path).write_bytes(bytes(out))


def write_spds(path, inputs, labels, classes):
    inputs = np.ascontiguousarray(inputs, dtype="<f4")
    n = inputs.shape[0]
    shape = inputs.shape[1:]
    out = bytearray(b"SPDS")
    out += struct.pack("<BIB", 1, n, len(shape))
    out += struct.pack("<%dI" % len(shape), *shape)
    out += struct.pack("<I", classes)
    flat = inputs.reshape(n, -1)
    for i in range(n):
        out += flat[i].tobytes()
        out += struct.pack("<H", int(labels[i]))
    pathlib.Path(path).write_bytes(bytes(out))


def make_separable(out):
    rng = np.random.default_rng(7)
    # 60 points of class 0 (x0 > x1), 40 of class 1, margin 0.2
    pts, labels = [], []
    for label, count in ((0, 60), (1, 40)):
        while count:
            p = rng.uniform(-1.0, 1.0, size=2)
            gap = p[0] - p[1]
            if abs(gap) < 0.2 or (gap > 0) != (label == 0):
                continue
            pts.append(p)
            labels.append(label)
            count -= 1
    order = rng.permutation(len(labels))
    pts = np.array(pts, dtype=np.float32)[order]
    labels = np.array(labels)[order]
    # scores (x0 - 0.5 x1, x1 - 0.5 x0): class 0 wins exactly when x0 > x1
    w = np.array([[1.0, -0.5], [-0.5, 1.0]], dtype=np.float32)
    write_spwt(out / "separable.spwt", [("dense", FC, w)])
    write_spds(out / "separable.spds", pts, labels, 2)
    manifest = {"input_shape": [2], "layers": [{"op": "dense", "weights": "dense"}]}
    (out / "separable.json").write_text(json.dumps(manifest, indent=2) + "\n")


def bar_images(rng, n, probs):
    labels = rng.choice(len(probs), size=n, p=probs)
    imgs = np.zeros((n, 1, 12, 12), dtype=np.float32)
    for i, c in enumerate(labels):
        img = imgs[i, 0]
        off = rng.integers(1, 11)
        length = rng.integers(6, 11)
        start = rng.integers(0, 12 - length + 1)
        for t in range(start, start + length):
            if c == 0:
                img[off, t] = 1.0
            elif c == 1:
                img[t, off] = 1.0
            elif c == 2:
                img[t, t] = 1.0
            else:
                img[t, 11 - t] = 1.0
        img += rng.normal(0.0, 0.45, size=img.shape).astype(np.float32)
    return imgs, labels


def make_lenet(out):
    import torch
    from torch import nn

    torch.manual_seed(0)
    torch.set_num_threads(1)
    rng = np.random.default_rng(11)
    probs = [0.34, 0.26, 0.22, 0.18]
    x_train, y_train = bar_images(rng, 4000, probs)
    x_test, y_test = bar_images(rng, 600, probs)

    net = nn.Sequential(
        nn.Conv2d(1, 6, 3, bias=False), nn.ReLU(), nn.MaxPool2d(2),
        nn.Conv2d(6, 12, 3, bias=False), nn.ReLU(), nn.Flatten(),
        nn.Linear(108, 32, bias=False), nn.ReLU(),
        nn.Linear(32, 4, bias=False))
    opt = torch.optim.Adam(net.parameters(), lr=3e-3)
    xt = torch.from_numpy(x_train)
    yt = torch.from_numpy(y_train).long()
    for _ in range(25):
        perm = torch.randperm(len(yt))
        for b in range(0, len(yt), 64):
            idx = perm[b:b + 64]
            opt.zero_grad()
            loss = nn.functional.cross_entropy(net(xt[idx]), yt[idx])
            loss.backward()
            opt.step()

    ws = [p.detach().numpy().astype(np.float32).copy() for p in net.parameters()]
    # snap the tiniest magnitudes to +0.0 so the fixture carries a few
    # pre-existing exact zeros
    for w in ws:
        w[np.abs(w) < 1e-3] = 0.0
    with torch.no_grad():
        for p, w in zip(net.parameters(), ws):
            p.copy_(torch.from_numpy(w))
        acc = (net(torch.from_numpy(x_test)).argmax(1).numpy() == y_test).mean()
    print("lenet test accuracy (torch): %.4f" % acc)

    names = ["conv1", "conv2", "fc1", "fc2"]
    kinds = [CONV, CONV, FC, FC]
    write_spwt(out / "lenet.spwt", list(zip(names, kinds, ws)))
    write_spds(out / "lenet.spds", x_test, y_test, 4)
    manifest = {
        "input_shape": [1, 12, 12],
        "layers": [
            {"op": "conv2d", "weights": "conv1", "stride": 1, "padding": "valid"},
            {"op": "relu"},
            {"op": "maxpool2d", "window": 2, "stride": 2},
            {"op": "conv2d", "weights": "conv2", "stride": 1, "padding": "valid"},
            {"op": "relu"},
            {"op": "flatten"},
            {"op": "dense", "weights": "fc1"},
            {"op": "relu"},
            {"op": "dense", "weights": "fc2"},
            {"op": "softmax"},
        ],
    }
    (out / "lenet.json").write_text(json.dumps(manifest, indent=2) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    make_separable(out)
    make_lenet(out)


if __name__ == "__main__":
    main()
