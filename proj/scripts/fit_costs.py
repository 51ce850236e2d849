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
"""Fits the accelerator cost table to a calibration target.

Starting from relative block costs (costs_seed.json), three global scales
are adjusted -- cycle time, energy/leakage, area -- until the design the
power-capped selection picks lands on the target latency, energy and area.
The model itself is the C++ one, driven through `choco dse`.

The result is a calibration, not a measurement: the selection rule runs on
the fitted table, so matching the target says the table is consistent with
it, nothing more.
"""

import argparse
import copy
import json
import os
import subprocess
import sys
import tempfile

TARGET = {"latency_s": 0.66e-3, "energy_j": 0.1228e-3, "area_mm2": 19.3}


def scaled(seed, time, energy, area):
    t = copy.deepcopy(seed)
    for b in t["blocks"].values():
        b["ops_per_cycle"] /= time
        b["energy_per_op_j"] *= energy
        b["leakage_w"] *= energy
        b["area_mm2"] *= area
    t["memory"]["energy_per_byte_j"] *= energy
    t["memory"]["leakage_w_per_byte"] *= energy
    t["memory"]["area_mm2_per_byte"] *= area
    t["base"]["leakage_w"] *= energy
    t["base"]["area_mm2"] *= area
    return t


def select(choco, grid, table, cap, slack, workdir):
    costs = os.path.join(workdir, "costs.json")
    with open(costs, "w") as f:
        json.dump(table, f)
    out = os.path.join(workdir, "out")
    subprocess.run([choco, "dse", "--grid", grid, "--costs", costs, "--power-cap", str(cap),
                    "--slack", str(slack), "--out", out], check=True, stdout=subprocess.DEVNULL)
    with open(os.path.join(out, "selected.json")) as f:
        return json.load(f)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--choco", default="build/tools/choco")
    ap.add_argument("--grid", default="data/accel/grid.json")
    ap.add_argument("--seed-costs", default="data/accel/costs_seed.json")
    ap.add_argument("--out", default="data/accel/costs.json")
    ap.add_argument("--cap", type=float, default=0.2)
    ap.add_argument("--slack", type=float, default=0.01)
    ap.add_argument("--iterations", type=int, default=30)
    ap.add_argument("--tolerance", type=float, default=0.02)
    args = ap.parse_args()

    with open(args.seed_costs) as f:
        seed = json.load(f)
    time = energy = area = 1.0
    with tempfile.TemporaryDirectory() as work:
        for it in range(args.iterations):
            table = scaled(seed, time, energy, area)
            sel = select(args.choco, args.grid, table, args.cap, args.slack, work)
            err = {k: sel[k] / v - 1 for k, v in TARGET.items()}
            print(f"iter {it:2d}  {sel['latency_s'] * 1e3:.4f} ms  {sel['energy_j'] * 1e3:.4f} mJ  "
                  f"{sel['area_mm2']:.2f} mm2  {sel['power_w'] * 1e3:.1f} mW  {sel['key']}")
            if all(abs(e) <= args.tolerance for e in err.values()):
                break
            # Damped multiplicative steps: the selected design moves as the
            # scales move, so full steps can oscillate.
            time *= (1 + err["latency_s"]) ** -0.7
            energy *= (1 + err["energy_j"]) ** -0.7
            area *= (1 + err["area_mm2"]) ** -0.7
        else:
            print("did not converge within tolerance", file=sys.stderr)

    table["note"] = (f"fitted by scripts/fit_costs.py: selection at {args.cap * 1e3:.0f} mW, "
                     f"slack {args.slack}, targets 0.66 ms / 0.1228 mJ / 19.3 mm2 at 100 MHz; "
                     f"scales time {time:.4f} energy {energy:.4f} area {area:.4f}. "
                     "A calibration, not a measurement.")
    with open(args.out, "w") as f:
        json.dump(table, f, indent=2)
        f.write("\n")
    print(f"wrote {args.out}")
    for k, v in TARGET.items():
        print(f"  {k}: {sel[k]:.6g} vs {v:.6g} ({err[k] * 100:+.1f}%)")


if __name__ == "__main__":
    main()
