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
"""Trains two 100-tree gradient-boosted classifiers on a synthetic
lateral-spreading-like dataset and exports them as gbt-dump JSON plus a
200-row logit fixture.

scikit-learn's histogram trees route ``x <= t`` left; inputs are binary32,
so the equivalent strict split is ``x < succ32(t)`` where succ32(t) is the
smallest binary32 value strictly above t. The dump stores that value.
"""

import argparse
import json
import re
import os

import numpy as np
from sklearn.ensemble import HistGradientBoostingClassifier

FEATURES = [
    ("gwd", 0.37, 6.05),
    ("dist", 0.0, 3.29),
    ("slope", 0.0, 10.5),
    ("pga", 0.33, 0.57),
]


def f32(x):
    return np.float32(x)


def strict_threshold(t):
    """Smallest binary32 strictly greater than the float64 threshold t."""
    c = np.float32(t)
    if float(c) <= t:
        c = np.nextafter(c, np.float32(np.inf))
    return c


def f32_repr(x):
    return np.format_float_positional(np.float32(x), unique=True, trim="-")


def make_data(rng, n):
    cols = []
    for name, lo, hi in FEATURES:
        if name == "dist":
            v = np.minimum(rng.exponential(0.8, n), hi)
        elif name == "slope":
            v = np.minimum(rng.gamma(1.5, 1.2, n), hi)
        else:
            v = rng.uniform(lo, hi, n)
        cols.append(v.astype(np.float32).astype(np.float64))
    X = np.stack(cols, axis=1)
    g, d, s, p = X.T
    logit = (1.4 - 0.55 * g - 1.6 * d + 0.12 * s + 14.0 * (p - 0.45)
             + 0.8 * np.sin(3.0 * g) * (p > 0.47))
    prob = 1.0 / (1.0 + np.exp(-logit))
    y = (rng.uniform(size=n) < prob).astype(int)
    return X, y


def export_tree(pred):
    nodes = pred.nodes

    def rec(i, depth):
        n = nodes[i]
        if n["is_leaf"]:
            return {"nodeid": int(i), "leaf": repr(float(n["value"]))}
        left, right = int(n["left"]), int(n["right"])
        return {
            "nodeid": int(i),
            "depth": depth,
            "split": FEATURES[int(n["feature_idx"])][0],
            "split_condition": f32_repr(strict_threshold(float(n["num_threshold"]))),
            "yes": left,
            "no": right,
            "missing": left if n["missing_go_to_left"] else right,
            "children": [rec(left, depth + 1), rec(right, depth + 1)],
        }

    return rec(0, 0)


def dump_json(trees):
    # Leaf weights and thresholds are emitted as bare JSON numbers with their
    # exact decimal text, the way gradient boosting libraries print them.
    text = json.dumps(trees, indent=1)
    return re.sub(r'"(leaf|split_condition)": "([^"]+)"', r'"\1": \2', text)


def count_leaves(t):
    return 1 if "leaf" in t else sum(count_leaves(c) for c in t["children"])


def train(X, y, mono, seed):
    return HistGradientBoostingClassifier(
        max_iter=100, max_depth=5, max_leaf_nodes=32, learning_rate=0.1,
        min_samples_leaf=10, early_stopping=False, random_state=seed,
        monotonic_cst=mono).fit(X, y)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "..", "data", "gbt"))
    ap.add_argument("--seed", type=int, default=2011)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    X, y = make_data(rng, 7291)
    Xfix, _ = make_data(rng, 200)

    for name, mono in [("unconstrained", None), ("monotone", [-1, -1, 0, 1])]:
        model = train(X, y, mono, args.seed)
        trees = [export_tree(p[0]) for p in model._predictors]
        base = float(np.ravel(model._baseline_prediction)[0])
        with open(os.path.join(args.out, f"{name}.json"), "w") as fh:
            fh.write(dump_json(trees) + "\n")
        raw = model._raw_predict(Xfix).ravel()
        with open(os.path.join(args.out, f"{name}_fixture.csv"), "w") as fh:
            fh.write(",".join(n for n, _, _ in FEATURES) + ",logit\n")
            for row, z in zip(Xfix, raw):
                fh.write(",".join(f32_repr(v) for v in row) + "," + repr(float(z)) + "\n")
        meta = {
            "base_score": repr(base),
            "trees": len(trees),
            "leaves": sum(count_leaves(t) for t in trees),
            "train_accuracy": float(model.score(X, y)),
            "monotone_constraints": mono,
            "producer": "scikit-learn HistGradientBoostingClassifier",
        }
        with open(os.path.join(args.out, f"{name}_meta.json"), "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
        print(name, meta)

    space = {"features": [{"name": n, "lower": lo, "upper": hi} for n, lo, hi in FEATURES]}
    with open(os.path.join(args.out, "space.json"), "w") as fh:
        json.dump(space, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
