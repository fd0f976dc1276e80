#!/usr/bin/env python3
# Copyright 2026 The treeverify Authors.
#
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
"""Writes a synthetic additive model shaped like a fitted explainable
boosting machine: four univariate terms with 4,043 bins in total and six
pairwise terms on 61 x 61 grids. Score tables are random walks with
plateaus so that bin merging has work to do.

The 200-row logit fixture is computed here with exact fractions by direct
table lookup, independently of the C++ compiler. A value equal to an edge
belongs to the upper bin.
"""

import argparse
import bisect
import csv
import itertools
import json
import os
from fractions import Fraction

import numpy as np

FEATURES = [
    ("gwd", 0.37, 6.05),
    ("dist", 0.0, 3.29),
    ("slope", 0.0, 10.5),
    ("pga", 0.33, 0.57),
]
UNIVARIATE_BINS = [1211, 1068, 1003, 761]
PAIR_BINS = 61
# Overall trend per feature, echoing a susceptibility model: shallow water
# table, short distance and strong shaking raise the logit.
TRENDS = [-1.6, -1.2, 0.3, 1.5]


def f32_repr(x):
    return np.format_float_positional(np.float32(x), unique=True, trim="-")


def make_edges(rng, lo, hi, bins):
    """bins - 1 strictly ascending binary32 edges strictly inside (lo, hi)."""
    values = set()
    while len(values) < bins - 1:
        for v in rng.uniform(lo, hi, bins):
            f = np.float32(v)
            if lo < float(f) < hi:
                values.add(float(f))
    return sorted(values)[: bins - 1]


def walk(rng, n, trend, step, plateau):
    """Random walk with a linear trend, rounded to 6 decimals, with runs of
    repeated values."""
    out = []
    level = 0.0
    for i in range(n):
        if i == 0 or rng.random() >= plateau:
            level += trend / n + rng.normal(0.0, step)
        out.append(round(level, 6))
    mean = round(sum(out) / n, 6)
    return [round(v - mean, 6) for v in out]


def lookup(edges, x):
    return bisect.bisect_right(edges, x)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/additive")
    parser.add_argument("--seed", type=int, default=2016)
    parser.add_argument("--rows", type=int, default=200)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    terms = []
    for (name, lo, hi), bins, trend in zip(FEATURES, UNIVARIATE_BINS, TRENDS):
        edges = make_edges(rng, lo, hi, bins)
        scores = walk(rng, bins, trend, 0.004, 0.35)
        terms.append({"features": [name], "edges": edges, "scores": scores})
    for a, b in itertools.combinations(range(len(FEATURES)), 2):
        ea = make_edges(rng, FEATURES[a][1], FEATURES[a][2], PAIR_BINS)
        eb = make_edges(rng, FEATURES[b][1], FEATURES[b][2], PAIR_BINS)
        base = rng.normal(0.0, 0.03, (PAIR_BINS, PAIR_BINS))
        smooth = (base + np.roll(base, 1, 0) + np.roll(base, 1, 1)) / 3.0
        grid = [[round(float(v), 6) for v in row] for row in smooth]
        for r in range(PAIR_BINS):
            for c in range(1, PAIR_BINS):
                if rng.random() < 0.3:
                    grid[r][c] = grid[r][c - 1]
        terms.append({"features": [FEATURES[a][0], FEATURES[b][0]], "edges": [ea, eb], "scores": grid})
    intercept = -0.412

    def enc(v):
        return f32_repr(v) if isinstance(v, float) else v

    # Edges as shortest binary32 text, scores as 6-decimal text.
    lines = ['{"intercept": %s, "terms": [' % repr(intercept)]
    rendered = []
    for t in terms:
        if len(t["features"]) == 1:
            edges = "[" + ",".join(f32_repr(e) for e in t["edges"]) + "]"
            scores = "[" + ",".join("%.6f" % s for s in t["scores"]) + "]"
        else:
            edges = "[" + ",".join("[" + ",".join(f32_repr(e) for e in axis) + "]" for axis in t["edges"]) + "]"
            scores = "[" + ",".join("[" + ",".join("%.6f" % s for s in row) + "]" for row in t["scores"]) + "]"
        rendered.append('{"features": %s, "edges": %s, "scores": %s}' % (json.dumps(t["features"]), edges, scores))
    lines.append(",\n".join(rendered))
    lines.append("]}")
    with open(os.path.join(args.out, "model.json"), "w") as fh:
        fh.write("\n".join(lines) + "\n")

    space = {"features": [{"name": n, "lower": lo, "upper": hi} for n, lo, hi in FEATURES]}
    with open(os.path.join(args.out, "space.json"), "w") as fh:
        json.dump(space, fh, indent=2)
        fh.write("\n")

    # Fixture rows: random in-domain points, a quarter of them snapped to an
    # edge of some term.
    exact_edges = [[Fraction(f32_repr(e)) for e in t["edges"]] if len(t["features"]) == 1
                   else [[Fraction(f32_repr(e)) for e in axis] for axis in t["edges"]] for t in terms]
    index = {n: i for i, (n, _, _) in enumerate(FEATURES)}
    with open(os.path.join(args.out, "fixture.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([n for n, _, _ in FEATURES] + ["logit"])
        for row in range(args.rows):
            point = [np.float32(rng.uniform(lo, hi)) for _, lo, hi in FEATURES]
            point = [min(max(p, np.float32(lo)), np.float32(hi)) for p, (_, lo, hi) in zip(point, FEATURES)]
            if row % 4 == 0:
                t = terms[rng.integers(0, 4)]
                f = index[t["features"][0]]
                point[f] = np.float32(t["edges"][rng.integers(0, len(t["edges"]))])
            xs = [Fraction(f32_repr(p)) for p in point]
            total = Fraction(repr(intercept))
            for t, edges in zip(terms, exact_edges):
                if len(t["features"]) == 1:
                    s = t["scores"][lookup(edges, xs[index[t["features"][0]]])]
                else:
                    r = lookup(edges[0], xs[index[t["features"][0]]])
                    c = lookup(edges[1], xs[index[t["features"][1]]])
                    s = t["scores"][r][c]
                total += Fraction("%.6f" % s)
            writer.writerow([f32_repr(p) for p in point] + ["%.9f" % float(total)])
    bins = sum(len(t["scores"]) for t in terms[:4])
    print("univariate bins", bins, "pairwise terms", len(terms) - 4)


if __name__ == "__main__":
    main()
