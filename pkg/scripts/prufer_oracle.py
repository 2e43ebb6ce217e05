"""Count tree isomorphism classes by Prüfer brute force and compare with enumerate_trees."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import leaf_extension_classes, prufer_class_count  # noqa: E402

from treeshift.tree_core import enumerate_trees  # noqa: E402

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-prufer", type=int, default=9)
    ap.add_argument("--max-leaf", type=int, default=10)
    args = ap.parse_args()
    for n in range(1, max(args.max_prufer, args.max_leaf) + 1):
        t0 = time.time()
        enum = len(enumerate_trees(n))
        pr = prufer_class_count(n) if n <= args.max_prufer else None
        lf = len(leaf_extension_classes(n)) if n <= args.max_leaf else None
        print(f"n={n:2d} enumerate={enum:4d} prufer={pr} leaf={lf} ({time.time() - t0:.1f}s)")
