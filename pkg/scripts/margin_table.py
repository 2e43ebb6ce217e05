"""Minimum GTS margins per (quantity, n), recomputed without the package's spectral code.

Complement distances come from networkx, eigenvalues from numpy.linalg.eigvalsh.
The printed dict is frozen into tests/test_acceptance.py.
"""

import argparse

import networkx as nx
import numpy as np

from treeshift.transforms import gts, proper_gts_moves
from treeshift.tree_core import enumerate_trees, metrics

GRID = (0.0, 0.25, 0.5, 0.75, 0.9)


def radii(t):
    g = nx.complement(nx.Graph(list(t.edges)))
    g.add_nodes_from(range(t.n))
    d = np.asarray(nx.floyd_warshall_numpy(g, nodelist=range(t.n)))
    tr = np.diag(d.sum(axis=1))
    out = {"lambda": np.linalg.eigvalsh(d)[-1], "mu": np.linalg.eigvalsh(tr + d)[-1]}
    for a in GRID:
        out[f"rho({a:g})"] = np.linalg.eigvalsh(a * tr + (1 - a) * d)[-1]
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=10)
    args = ap.parse_args()
    table = {}
    for n in range(5, args.max_n + 1):
        best = {}
        for t in enumerate_trees(n):
            if metrics(t).diameter < 4:
                continue
            base = radii(t)
            for m in proper_gts_moves(t):
                img = radii(gts(t, m))
                for k, v in img.items():
                    best[k] = min(best.get(k, np.inf), v - base[k])
        for k, v in best.items():
            table[(k, n)] = float(v)
    print("{")
    for key, v in table.items():
        print(f"    {key!r}: {v!r},")
    print("}")
