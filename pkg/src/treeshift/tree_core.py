"""Labeled trees, isomorphism classes, and metric primitives.

Vertex labels are 0-based everywhere, including the on-disk formats.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

N_MAX_DEFAULT = 12


class TreeError(ValueError):
    """Base class for rejected tree inputs."""


class BadLabelError(TreeError):
    pass


class SelfLoopError(TreeError):
    pass


class DuplicateEdgeError(TreeError):
    pass


class EdgeCountError(TreeError):
    pass


class CycleError(TreeError):
    pass


class DisconnectedTreeError(TreeError):
    pass


class OrderRangeError(ValueError):
    pass


class DisconnectedComplementError(ValueError):
    """The complement graph of a tree is disconnected (star, or n <= 3)."""


@dataclass(frozen=True)
class Tree:
    """Immutable labeled tree.

    Edges are stored normalized (u < v) and sorted, so two Trees compare equal
    exactly when they have the same labeled edge set.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise BadLabelError(f"vertex count must be a positive integer, got {n!r}")
        norm = []
        for e in self.edges:
            if len(e) != 2:
                raise BadLabelError(f"edge {e!r} is not a pair")
            a, b = int(e[0]), int(e[1])
            if not (0 <= a < n and 0 <= b < n):
                raise BadLabelError(f"edge {e!r} has a label outside [0, {n})")
            if a == b:
                raise SelfLoopError(f"self-loop at vertex {a}")
            norm.append((a, b) if a < b else (b, a))
        if len(set(norm)) != len(norm):
            raise DuplicateEdgeError("duplicate edge in edge list")
        if len(norm) > n - 1:
            raise EdgeCountError(f"a tree on {n} vertices has {n - 1} edges, got {len(norm)}")

        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in norm:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise CycleError(f"edge ({a}, {b}) closes a cycle")
            parent[ra] = rb
        if len(norm) < n - 1:
            raise DisconnectedTreeError(f"{n - len(norm)} components, expected 1")

        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in norm:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(x)) for x in adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def pendants(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adjacency[v]) == 1]

    def path(self, u: int, v: int) -> list[int]:
        """The unique u-v path, endpoints included."""
        parent = {u: -1}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for y in self.adjacency[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for x, y in self.edges:
            a[x, y] = a[y, x] = 1
        return a

    def is_path(self) -> bool:
        return self.n <= 2 or (max(self.degree(v) for v in range(self.n)) <= 2)

    def is_star(self) -> bool:
        return self.n >= 2 and max(self.degree(v) for v in range(self.n)) == self.n - 1

    def relabel(self, perm: Sequence[int]) -> "Tree":
        """Tree with vertex i renamed to perm[i]."""
        return Tree(self.n, tuple((perm[a], perm[b]) for a, b in self.edges))


def from_edges(n: int, edges: Iterable[Sequence[int]]) -> Tree:
    return Tree(n, tuple(tuple(e) for e in edges))


def path_tree(n: int) -> Tree:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(n: int) -> Tree:
    return from_edges(n, [(0, i) for i in range(1, n)])


def spider(*legs: int) -> Tree:
    """Hub 0 with paths of the given lengths hanging off it."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return from_edges(nxt, edges)


def double_star(a: int, b: int) -> Tree:
    """Adjacent centers 0 and 1 carrying a and b leaves respectively."""
    edges = [(0, 1)]
    nxt = 2
    for center, count in ((0, a), (1, b)):
        for _ in range(count):
            edges.append((center, nxt))
            nxt += 1
    return from_edges(nxt, edges)


# -- canonical form -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalCode:
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def fromhex(cls, s: str) -> "CanonicalCode":
        return cls(bytes.fromhex(s))

    def __str__(self) -> str:
        return self.data.decode("ascii")


def tree_centers(t: Tree) -> list[int]:
    if t.n <= 2:
        return list(range(t.n))
    deg = [t.degree(v) for v in range(t.n)]
    layer = [v for v in range(t.n) if deg[v] == 1]
    remaining = t.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for leaf in layer:
            for y in t.adjacency[leaf]:
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt
    return sorted(layer)


def _rooted_ahu(t: Tree, root: int) -> tuple[dict[int, bytes], dict[int, int]]:
    order = [root]
    parent = {root: -1}
    for x in order:
        for y in t.adjacency[x]:
            if y != parent[x]:
                parent[y] = x
                order.append(y)
    codes: dict[int, bytes] = {}
    for x in reversed(order):
        kids = sorted(codes[y] for y in t.adjacency[x] if y != parent[x])
        codes[x] = b"(" + b"".join(kids) + b")"
    return codes, parent


def _best_rooting(t: Tree) -> tuple[int, dict[int, bytes], dict[int, int]]:
    best = None
    for c in tree_centers(t):
        codes, parent = _rooted_ahu(t, c)
        if best is None or codes[c] < best[1][best[0]]:
            best = (c, codes, parent)
    return best


def canonical_code(t: Tree) -> CanonicalCode:
    """AHU code rooted at the center; bicentral trees take the smaller rooting."""
    root, codes, _ = _best_rooting(t)
    return CanonicalCode(codes[root])


def canonical_form(t: Tree) -> Tree:
    """Relabeling that depends only on the isomorphism class.

    Vertices are numbered in BFS order from the canonical root, siblings
    ordered by their subtree codes.
    """
    root, codes, parent = _best_rooting(t)
    order = [root]
    for x in order:
        order.extend(sorted((y for y in t.adjacency[x] if y != parent[x]), key=codes.__getitem__))
    label = {v: i for i, v in enumerate(order)}
    return t.relabel([label[v] for v in range(t.n)])


# -- enumeration ----------------------------------------------------------------


def _next_rooted(levels: list[int], p: int | None = None) -> list[int] | None:
    if p is None:
        p = len(levels) - 1
        while levels[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while levels[q] != levels[p] - 1:
        q -= 1
    out = list(levels)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split(levels: list[int]) -> tuple[list[int], list[int]]:
    # left: first principal subtree (relative levels); rest: root plus the remaining subtrees
    m = len(levels)
    for i in range(2, len(levels)):
        if levels[i] == 1:
            m = i
            break
    left = [x - 1 for x in levels[1:m]]
    rest = [0] + levels[m:]
    return left, rest


def _next_free(levels: list[int]) -> list[int] | None:
    left, rest = _split(levels)
    lh, rh = max(left), max(rest)
    ok = rh >= lh
    if ok and rh == lh:
        if len(left) > len(rest) or (len(left) == len(rest) and left > rest):
            ok = False
    if ok:
        return levels
    p = len(left)
    nxt = _next_rooted(levels, p)
    if nxt is not None and levels[p] > 2:
        new_left, _ = _split(nxt)
        suffix = list(range(1, max(new_left) + 2))
        nxt[-len(suffix):] = suffix
    return nxt


def _levels_to_tree(levels: list[int]) -> Tree:
    edges = []
    stack: list[int] = []
    for v, lev in enumerate(levels):
        del stack[lev:]
        if stack:
            edges.append((stack[-1], v))
        stack.append(v)
    return from_edges(len(levels), edges)


def _free_level_sequences(n: int):
    # Wright-Richmond-Odlyzko-McKay successor scheme over center-rooted level sequences
    levels: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while levels is not None:
        levels = _next_free(levels)
        if levels is None:
            return
        yield levels
        levels = _next_rooted(levels)


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[Tree, ...]:
    if n == 1:
        trees = [Tree(1, ())]
    elif n == 2:
        trees = [path_tree(2)]
    else:
        trees = [_levels_to_tree(s) for s in _free_level_sequences(n)]
    return tuple(sorted(trees, key=canonical_code))


def enumerate_trees(n: int, n_max: int = N_MAX_DEFAULT) -> list[Tree]:
    """One representative per isomorphism class, sorted by canonical code."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= n_max:
        raise OrderRangeError(f"n must lie in [1, {n_max}], got {n!r}")
    return list(_enumerate_cached(int(n)))


# -- metrics ----------------------------------------------------------------------


@dataclass(frozen=True)
class TreeMetrics:
    diameter: int
    pendant_vertices: tuple[int, ...]
    distances: np.ndarray = field(repr=False, compare=False)


def _bfs_all_pairs(adj: Sequence[Sequence[int]]) -> np.ndarray:
    """All-pairs hop distances; -1 marks unreachable pairs."""
    n = len(adj)
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if row[y] < 0:
                    row[y] = row[x] + 1
                    queue.append(y)
    return dist


def metrics(t: Tree) -> TreeMetrics:
    dist = _bfs_all_pairs(t.adjacency)
    dist.setflags(write=False)
    return TreeMetrics(int(dist.max()), tuple(t.pendants()), dist)


def diameter(t: Tree) -> int:
    return metrics(t).diameter


def complement_adjacency(t: Tree) -> list[list[int]]:
    return [[y for y in range(t.n) if y != x and not t.has_edge(x, y)] for x in range(t.n)]


def complement_distances(t: Tree) -> np.ndarray:
    """Exact distance matrix of the complement graph, by BFS on the complement."""
    if t.n < 2:
        raise DisconnectedComplementError("complement distances need n >= 2")
    dist = _bfs_all_pairs(complement_adjacency(t))
    if (dist < 0).any():
        raise DisconnectedComplementError(f"complement of {canonical_code(t)} is disconnected")
    return dist


def closed_form_complement_distances(t: Tree) -> np.ndarray:
    """A + J - I: distance 2 across tree edges, 1 elsewhere off the diagonal.

    This is the shortcut for complement distances when diam(T) >= 4.  The
    variant with 2A in place of A would put 3 on tree edges, which never
    matches a complement distance.
    """
    n = t.n
    return t.adjacency_matrix() + np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)


# -- file formats ---------------------------------------------------------------


def format_edge_list(t: Tree) -> str:
    return "".join([f"{t.n}\n"] + [f"{a} {b}\n" for a, b in t.edges])


def parse_edge_list(text: str) -> Tree:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise TreeError("empty edge-list file")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            a, b = ln.split()
            edges.append((int(a), int(b)))
    except ValueError as exc:
        raise TreeError(f"malformed edge-list file: {exc}") from None
    if len(edges) != n - 1:
        raise EdgeCountError(f"expected {n - 1} edge lines, got {len(edges)}")
    return from_edges(n, edges)


def read_edge_list(path: str | Path) -> Tree:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def write_edge_list(t: Tree, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(t), encoding="utf-8", newline="\n")


def tree_to_json(t: Tree) -> str:
    return json.dumps(
        {"n": t.n, "edges": [list(e) for e in t.edges], "code": canonical_code(t).hex()},
        separators=(",", ":"),
    )


def tree_from_json(line: str) -> Tree:
    obj = json.loads(line)
    t = from_edges(obj["n"], obj["edges"])
    if "code" in obj and canonical_code(t).hex() != obj["code"]:
        raise TreeError("stored code does not match the edges")
    return t


def write_tree_set(trees: Iterable[Tree], path: str | Path) -> int:
    lines = [tree_to_json(t) for t in trees]
    Path(path).write_text("".join(ln + "\n" for ln in lines), encoding="utf-8", newline="\n")
    return len(lines)


def read_tree_set(path: str | Path) -> list[Tree]:
    text = Path(path).read_text(encoding="utf-8")
    return [tree_from_json(ln) for ln in text.splitlines() if ln.strip()]
