#!/usr/bin/env python3
# Copyright 2026 The Whatif Authors. All Rights Reserved.
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
"""Regenerates data/profiles/*.csv from the torchvision model definitions.

Each parameterized module becomes one row. Rows are emitted output-most
first, which is the order gradients become ready during backward.

  bytes            fp32 parameter bytes, apportioned (largest remainder) so
                   the model total matches the published model size.
  backward_weight  multiply-accumulates per sample in the forward pass; the
                   synthesizer spaces ready times in proportion to it.
"""

import argparse
import math
import pathlib

import torch
import torchvision

MODELS = {
    # name: (constructor, total bytes, pinned (module, bytes) or None,
    #        default t_batch, default t_back, throughput note)
    "resnet50": (torchvision.models.resnet50, 97_000_000, None, 0.089, 0.059,
                 "~360 images/s"),
    "resnet101": (torchvision.models.resnet101, 170_000_000, None, 0.145,
                  0.097, "~220 images/s"),
    "vgg16": (torchvision.models.vgg16, 527_000_000,
              ("classifier.0", 400_000_000), 0.152, 0.101, "~210 images/s"),
}


def layer_rows(ctor):
  model = ctor()
  rows = []

  def hook_for(name):

    def hook(mod, _inp, out):
      params = sum(p.numel() for p in mod.parameters(recurse=False))
      if isinstance(mod, torch.nn.Conv2d):
        macs = out.numel() * (mod.in_channels // mod.groups) * \
            mod.kernel_size[0] * mod.kernel_size[1]
      elif isinstance(mod, torch.nn.Linear):
        macs = mod.in_features * mod.out_features
      else:
        macs = out.numel()
      rows.append((name, params, macs))

    return hook

  for name, mod in model.named_modules():
    if any(True for _ in mod.parameters(recurse=False)):
      mod.register_forward_hook(hook_for(name))
  with torch.no_grad():
    model(torch.zeros(1, 3, 224, 224))
  rows.reverse()
  return rows


def apportion(weights, total):
  s = sum(weights)
  raw = [w * total / s for w in weights]
  out = [math.floor(x) for x in raw]
  order = sorted(range(len(raw)), key=lambda i: (out[i] - raw[i], i))
  for i in order[:total - sum(out)]:
    out[i] += 1
  return out


def main():
  parser = argparse.ArgumentParser()
  parser.add_argument("--out", default="data/profiles")
  args = parser.parse_args()
  for model, (ctor, total, pinned, t_batch, t_back, rate) in MODELS.items():
    rows = layer_rows(ctor)
    if pinned:
      idx = next(i for i, r in enumerate(rows) if r[0] == pinned[0])
      rest = apportion([r[1] for i, r in enumerate(rows) if i != idx],
                       total - pinned[1])
      sizes = rest[:idx] + [pinned[1]] + rest[idx:]
    else:
      sizes = apportion([r[1] for r in rows], total)
    assert sum(sizes) == total
    path = pathlib.Path(args.out) / f"{model}.csv"
    with open(path, "w") as f:
      f.write(f"# {model} per-layer gradient table, output-most layer first.\n")
      f.write("# Generated by tools/gen_layer_tables.py from torchvision.\n")
      f.write(f"# Timings assume a V100 at batch 32, fp32 ({rate});\n")
      f.write("# backward is taken as two thirds of the batch time.\n")
      f.write(f"# model: {model}\n")
      f.write(f"# total_bytes: {total}\n")
      f.write(f"# default_t_batch_s: {t_batch}\n")
      f.write(f"# default_t_back_s: {t_back}\n")
      f.write("layer,name,params,bytes,backward_weight\n")
      for i, ((name, params, macs), size) in enumerate(zip(rows, sizes)):
        f.write(f"{i},{name},{params},{size},{macs}\n")


if __name__ == "__main__":
  main()
