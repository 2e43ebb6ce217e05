"""Kelmans transformation, edge collapse with a new pendant, and the generalized tree shift."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .tree_core import Tree, CanonicalCode, canonical_code, from_edges, path_tree


class InvalidMoveError(ValueError):
    pass


@dataclass(frozen=True)
class KelmansMove:
    u: int
    v: int


@dataclass(frozen=True, order=True)
class GtsMove:
    """Shift every neighbor of ``v`` off the u-v path over to ``u``.

    ``path`` runs from u to v and ``w`` is the neighbor of v on it.
    """

    u: int
    v: int
    path: tuple[int, ...]
    w: int

    def to_json(self, proper: bool | None = None) -> dict:
        out = {"u": self.u, "v": self.v, "path": list(self.path), "w": self.w}
        if proper is not None:
            out["proper"] = proper
        return out

    def reversed(self) -> "GtsMove":
        path = self.path[::-1]
        return GtsMove(self.v, self.u, path, path[-2])


def _move_neighbors(t: Tree, src: int, dst: int, moved: Sequence[int]) -> Tree:
    moved = set(moved)
    edges = []
    for a, b in t.edges:
        if a == src and b in moved:
            edges.append((dst, b))
        elif b == src and a in moved:
            edges.append((a, dst))
        else:
            edges.append((a, b))
    return from_edges(t.n, edges)


def kelmans(t: Tree, m: KelmansMove) -> Tree:
    u, v = m.u, m.v
    if u == v or not (0 <= u < t.n and 0 <= v < t.n) or not t.has_edge(u, v):
        raise InvalidMoveError(f"({u}, {v}) is not an edge")
    keep = set(t.neighbors(u)) | {u}
    return _move_neighbors(t, v, u, [z for z in t.neighbors(v) if z not in keep])


def collapse_and_pendant(t: Tree, e: Sequence[int]) -> Tree:
    """Contract edge ``e`` to its lower endpoint and hang the freed label on it as a leaf."""
    a, b = sorted(e)
    if not (0 <= a < t.n and 0 <= b < t.n) or not t.has_edge(a, b):
        raise InvalidMoveError(f"({a}, {b}) is not an edge")
    if t.degree(a) < 2 or t.degree(b) < 2:
        raise InvalidMoveError(f"({a}, {b}) is a pendant edge")
    return _move_neighbors(t, b, a, [z for z in t.neighbors(b) if z != a])


def _validate(t: Tree, m: GtsMove) -> None:
    if m.u == m.v:
        raise InvalidMoveError("u and v must differ")
    if not (0 <= m.u < t.n and 0 <= m.v < t.n):
        raise InvalidMoveError("move endpoints out of range")
    if tuple(t.path(m.u, m.v)) != m.path:
        raise InvalidMoveError(f"{m.path} is not the tree path from {m.u} to {m.v}")
    if m.w != m.path[-2]:
        raise InvalidMoveError("w must be the neighbor of v on the path")
    if any(t.degree(x) != 2 for x in m.path[1:-1]):
        raise InvalidMoveError("an interior path vertex does not have degree 2")


def make_gts_move(t: Tree, u: int, v: int) -> GtsMove:
    if u == v:
        raise InvalidMoveError("u and v must differ")
    path = tuple(t.path(u, v))
    m = GtsMove(u, v, path, path[-2])
    _validate(t, m)
    return m


def enumerate_gts_moves(t: Tree) -> list[GtsMove]:
    """All ordered pairs whose connecting path has only degree-2 interior vertices."""
    moves = []
    for u in range(t.n):
        # walk outward from u, stopping past the first vertex whose degree is not 2
        for first in t.neighbors(u):
            prev, cur, path = u, first, [u, first]
            while True:
                moves.append(GtsMove(u, cur, tuple(path), prev))
                if t.degree(cur) != 2:
                    break
                nxt = next(z for z in t.neighbors(cur) if z != prev)
                prev, cur = cur, nxt
                path.append(cur)
    return sorted(moves)


def gts(t: Tree, m: GtsMove) -> Tree:
    _validate(t, m)
    return _move_neighbors(t, m.v, m.u, [z for z in t.neighbors(m.v) if z != m.w])


def is_proper(t: Tree, m: GtsMove) -> bool:
    _validate(t, m)
    return t.degree(m.u) > 1 and t.degree(m.v) > 1


def proper_gts_moves(t: Tree) -> list[GtsMove]:
    return [m for m in enumerate_gts_moves(t) if t.degree(m.u) > 1 and t.degree(m.v) > 1]


def gts_preimages(t1: Tree, universe: Sequence[Tree]) -> list[tuple[Tree, GtsMove]]:
    """Every (T, m) in the universe with m proper and gts(T, m) isomorphic to t1."""
    codes = [canonical_code(t) for t in universe]
    if any(t.n != t1.n for t in universe) or codes != sorted(codes):
        raise ValueError("universe must be enumerate_trees(t1.n), sorted by canonical code")
    target = canonical_code(t1)
    return [
        (t, m)
        for t in universe
        for m in proper_gts_moves(t)
        if canonical_code(gts(t, m)) == target
    ]


def one_step_collapse_images(n: int) -> list[CanonicalCode]:
    """Classes reachable from the path P_n by one collapse-and-pendant step."""
    if n < 4:
        raise ValueError("n must be at least 4")
    p = path_tree(n)
    return sorted({canonical_code(collapse_and_pendant(p, (i, i + 1))) for i in range(1, n - 2)})
