#!/usr/bin/env python3
# Copyright 2026 The LAP Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Median f - f* and gradient norm per run from trace CSVs, as SVG (log y).

    python3 tools/plot_traces.py out/lap_vs_sgd_unit -o lap_vs_sgd_unit.svg
"""

import argparse
import collections
import pathlib
import re

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load(directory):
    runs = collections.defaultdict(list)
    for path in sorted(pathlib.Path(directory).glob("*_seed*.csv")):
        run = re.sub(r"_seed\d+$", "", path.stem)
        data = np.genfromtxt(path, delimiter=",", names=True)
        runs[run].append(data)
    return runs


def median_column(traces, column):
    length = min(len(t) for t in traces)
    return np.median(np.stack([t[column][:length] for t in traces]), axis=0)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("directory", help="output directory holding <run>_seed<k>.csv files")
    parser.add_argument("-o", "--output", default="traces.svg")
    parser.add_argument("--grad-column", default="grad_norm2", choices=["grad_norm2", "grad_dualnorm_P"])
    args = parser.parse_args()

    runs = load(args.directory)
    if not runs:
        raise SystemExit(f"no trace CSVs in {args.directory}")

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4))
    for name, traces in sorted(runs.items()):
        label = f"{name} (median of {len(traces)})"
        left.plot(median_column(traces, "f_gap"), label=label)
        right.plot(median_column(traces, args.grad_column), label=label)
    left.set_ylabel("f - f*")
    right.set_ylabel(args.grad_column)
    for ax in (left, right):
        ax.set_yscale("log")
        ax.set_xlabel("t")
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.output)


if __name__ == "__main__":
    main()
