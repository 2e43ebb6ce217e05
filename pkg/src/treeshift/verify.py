"""Exhaustive verification campaigns over all trees of a given order."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import reports as R
from .config import DEFAULT_ALPHA_GRID, MARGIN_TOL, ORACLE_TOL, TIE_TOL
from .reports import CampaignReport, CheckRecord
from .spectral import (
    DISTANCE,
    ITER_TOL,
    SIGNLESS_LAPLACIAN,
    DistMatrix,
    MatrixKind,
    SpectralSummary,
    d_alpha,
    eig_oracle,
    matrix_from_distances,
    spectral_radius,
)
from .transforms import (
    GtsMove,
    KelmansMove,
    collapse_and_pendant,
    gts,
    kelmans,
    one_step_collapse_images,
    proper_gts_moves,
)
from .tree_core import (
    CanonicalCode,
    DisconnectedComplementError,
    Tree,
    canonical_code,
    canonical_form,
    closed_form_complement_distances,
    complement_distances,
    double_star,
    enumerate_trees,
    metrics,
    path_tree,
    star_tree,
)


class SpectralEngine:
    """Caches complement matrices and radii, cross-checking each new matrix with the oracle.

    ``summary`` works on the tree as labeled (its Perron vector is needed).
    ``radius`` is cached per isomorphism class and always computed on the
    canonical relabeling, so results do not depend on which labeled copy of a
    class turns up first.
    """

    def __init__(self, iter_tol: float = ITER_TOL, oracle_tol: float = ORACLE_TOL):
        self.iter_tol = iter_tol
        self.oracle_tol = oracle_tol
        self._dist: dict[tuple, np.ndarray] = {}
        self._summary: dict[tuple, SpectralSummary] = {}
        self._radius: dict[tuple, float] = {}
        self.checked = 0
        self.max_oracle_gap = 0.0
        self.min_perron_entry = np.inf
        self.max_residual = 0.0
        self.failures: list[dict] = []

    def distances(self, t: Tree) -> np.ndarray:
        d = self._dist.get(t.edges)
        if d is None:
            d = self._dist[t.edges] = complement_distances(t)
        return d

    def matrix(self, t: Tree, kind: MatrixKind) -> DistMatrix:
        return matrix_from_distances(self.distances(t), kind)

    def summary(self, t: Tree, kind: MatrixKind) -> SpectralSummary:
        key = (t.edges, kind)
        s = self._summary.get(key)
        if s is None:
            m = self.matrix(t, kind)
            s = self._summary[key] = spectral_radius(m, self.iter_tol)
            self._audit(t, m, s)
        return s

    def radius(self, t: Tree, kind: MatrixKind) -> float:
        key = (canonical_code(t), kind)
        r = self._radius.get(key)
        if r is None:
            r = self._radius[key] = self.summary(canonical_form(t), kind).radius
        return r

    def _audit(self, t: Tree, m: DistMatrix, s: SpectralSummary) -> None:
        gap = abs(s.radius - eig_oracle(m))
        self.checked += 1
        self.max_oracle_gap = max(self.max_oracle_gap, gap)
        self.min_perron_entry = min(self.min_perron_entry, float(s.perron.min()))
        self.max_residual = max(self.max_residual, s.residual)
        if gap > self.oracle_tol or s.perron.min() <= 0 or s.residual > self.iter_tol:
            self.failures.append({
                "tree_code": canonical_code(t).hex(),
                "kind": m.kind.label,
                "radius": s.radius,
                "oracle_gap": gap,
                "min_perron": float(s.perron.min()),
                "residual": s.residual,
                "matrix": m.entries.tolist(),
            })

    def diagnostics(self) -> dict:
        return {
            "matrices_checked": self.checked,
            "max_oracle_gap": self.max_oracle_gap,
            "min_perron_entry": float(self.min_perron_entry) if self.checked else None,
            "max_residual": self.max_residual,
            "failures": list(self.failures),
        }


def merge_diagnostics(parts: list[dict]) -> dict:
    parts = [p for p in parts if p.get("matrices_checked")]
    if not parts:
        return {"matrices_checked": 0, "max_oracle_gap": 0.0, "min_perron_entry": None,
                "max_residual": 0.0, "failures": []}
    return {
        "matrices_checked": sum(p["matrices_checked"] for p in parts),
        "max_oracle_gap": max(p["max_oracle_gap"] for p in parts),
        "min_perron_entry": min(p["min_perron_entry"] for p in parts),
        "max_residual": max(p["max_residual"] for p in parts),
        "failures": [f for p in parts for f in p["failures"]],
    }


def _hex(t: Tree) -> str:
    return canonical_code(t).hex()


def _kinds(alpha_grid) -> list[tuple[str, MatrixKind]]:
    return [(R.GTS_LAMBDA, DISTANCE), (R.GTS_MU, SIGNLESS_LAPLACIAN)] + [
        (R.gts_rho(a), d_alpha(a)) for a in alpha_grid
    ]


def _sources(n: int) -> list[Tree]:
    return [t for t in enumerate_trees(n) if metrics(t).diameter >= 4]


def _chunk_worker(fn, trees, kwargs):
    engine = SpectralEngine()
    records = [r for t in trees for r in fn(t, engine=engine, **kwargs)]
    return records, engine.diagnostics()


def _run_over_trees(fn, trees: list[Tree], workers: int, **kwargs):
    if workers <= 1 or len(trees) <= 1:
        records, diag = _chunk_worker(fn, trees, kwargs)
        return records, merge_diagnostics([diag])
    chunks = [trees[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(partial(_chunk_worker, fn, kwargs=kwargs), chunks))
    return [r for recs, _ in results for r in recs], merge_diagnostics([d for _, d in results])


def _failure_matrices(engine: SpectralEngine, kind: MatrixKind, **trees: Tree) -> dict:
    return {name: engine.matrix(t, kind).entries.tolist() for name, t in trees.items()}


# -- generalized tree shift ----------------------------------------------------------


def _gts_tree_records(t: Tree, *, engine: SpectralEngine, alpha_grid, tol) -> list[CheckRecord]:
    code = _hex(t)
    kinds = _kinds(alpha_grid)
    base = {kind: engine.summary(t, kind) for _, kind in kinds}
    out = []
    for m in proper_gts_moves(t):
        t1 = gts(t, m)
        move = m.to_json(proper=True)
        for theorem, kind in kinds:
            s = base[kind]
            r1 = engine.radius(t1, kind)
            # the shift and its reverse give isomorphic images; orient so x_u >= x_v
            x = s.perron
            om = m if x[m.u] >= x[m.v] else m.reversed()
            diff = engine.matrix(gts(t, om), kind).entries - engine.matrix(t, kind).entries
            gain = float(x @ diff @ x)
            detail = {"image_code": _hex(t1), "oriented": [om.u, om.v]}
            rec = R.strict(theorem, code, "radius", r1, s.radius, tol, move, detail)
            if not rec.passed:
                rec.detail["matrices"] = _failure_matrices(engine, kind, source=t, image=t1)
            out.append(rec)
            out.append(R.at_least(theorem, code, "rayleigh_gain", gain, 0.0, tol, move,
                                  {"radius_margin": rec.margin}))
    return out


def check_gts_monotonicity(n: int, alpha_grid=DEFAULT_ALPHA_GRID, tol: float = MARGIN_TOL,
                           workers: int = 1) -> CampaignReport:
    """Proper shifts on trees of diameter >= 4 must raise all three complement radii.

    Besides the radius records, each move carries a ``rayleigh_gain`` record:
    x'(M(T1) - M(T))x with x the Perron vector of the source, which has to be
    nonnegative once the move is oriented so that x_u >= x_v.
    """
    if n < 5:
        raise ValueError("diameter >= 4 needs n >= 5")
    records, diag = _run_over_trees(_gts_tree_records, _sources(n), workers,
                                    alpha_grid=tuple(alpha_grid), tol=tol)
    return CampaignReport("gts", n, list(alpha_grid), tol, records, diag)


# -- Kelmans (edge form) -------------------------------------------------------------


def _kelmans_tree_records(t: Tree, *, engine: SpectralEngine, tol) -> list[CheckRecord]:
    code = _hex(t)
    s = engine.summary(t, DISTANCE)
    x = s.perron
    diam = metrics(t).diameter
    pendants = len(t.pendants())
    out = []
    for a, b in t.edges:
        if abs(x[a] - x[b]) <= TIE_TOL:
            orientations = [(a, b), (b, a)]
        else:
            orientations = [(a, b) if x[a] > x[b] else (b, a)]
        for u, v in orientations:
            t2 = kelmans(t, KelmansMove(u, v))
            r2 = engine.radius(t2, DISTANCE)
            move = {"u": u, "v": v, "tie": len(orientations) == 2}
            if t.neighbors(v) == (u,):
                out.append(R.equal(R.KELMANS_THM1, code, "radius", r2, s.radius, tol, move))
                continue
            rec = R.strict(R.KELMANS_THM1, code, "radius", r2, s.radius, tol, move,
                           {"image_code": _hex(t2)})
            if not rec.passed:
                rec.detail["matrices"] = _failure_matrices(engine, DISTANCE, source=t, image=t2)
            out.append(rec)
            out.append(R.exact(R.KELMANS_THM1, code, "pendant_gain",
                               len(t2.pendants()) - pendants, 1, move))
            drop = diam - metrics(t2).diameter
            out.append(R.exact(R.KELMANS_THM1, code, "diameter_drop", drop, 0, move,
                               passed=drop in (0, 1)))
    return out


def check_kelmans_thm1(n: int, tol: float = MARGIN_TOL, workers: int = 1) -> CampaignReport:
    """Edge Kelmans moves oriented by the Perron vector of D(complement).

    Equality exactly when v is a leaf hanging on u, strict increase otherwise.
    Perron ties (|x_u - x_v| <= 1e-10) are checked in both orientations.
    """
    if n < 5:
        raise ValueError("diameter >= 4 needs n >= 5")
    records, diag = _run_over_trees(_kelmans_tree_records, _sources(n), workers, tol=tol)
    return CampaignReport("kelmans", n, [], tol, records, diag)


# -- collapse a non-pendant edge and add a pendant ---------------------------------


def _collapse_tree_records(t: Tree, *, engine: SpectralEngine, tol) -> list[CheckRecord]:
    code = _hex(t)
    base = engine.radius(t, DISTANCE)
    out = []
    for a, b in t.edges:
        if t.degree(a) < 2 or t.degree(b) < 2:
            continue
        t2 = collapse_and_pendant(t, (a, b))
        move = {"edge": [a, b]}
        try:
            r2 = engine.radius(t2, DISTANCE)
        except DisconnectedComplementError:
            out.append(CheckRecord(R.COLLAPSE_THM2, code, "radius", float("nan"), base,
                                   float("nan"), False, "strict", move,
                                   {"error": "image complement disconnected"}))
            continue
        rec = R.strict(R.COLLAPSE_THM2, code, "radius", r2, base, tol, move,
                       {"image_code": _hex(t2)})
        if not rec.passed:
            rec.detail["matrices"] = _failure_matrices(engine, DISTANCE, source=t, image=t2)
        out.append(rec)
    return out


def check_collapse_thm2(n: int, tol: float = MARGIN_TOL, workers: int = 1) -> CampaignReport:
    if n < 5:
        raise ValueError("diameter >= 4 needs n >= 5")
    records, diag = _run_over_trees(_collapse_tree_records, _sources(n), workers, tol=tol)
    return CampaignReport("collapse", n, [], tol, records, diag)


# -- minimality of the path ----------------------------------------------------------


def check_minimality(n: int, alpha_grid=DEFAULT_ALPHA_GRID, tol: float = MARGIN_TOL) -> CampaignReport:
    """The path's complement minimizes every radius among non-star trees."""
    if n < 4:
        raise ValueError("n must be at least 4")
    engine = SpectralEngine()
    path = path_tree(n)
    path_code = canonical_code(path)
    universe = [t for t in enumerate_trees(n) if not t.is_star()]
    records = []
    for theorem, kind in _kinds(alpha_grid):
        quantity = theorem.replace("GTS_", "").lower()
        values = {canonical_code(t): engine.radius(t, kind) for t in universe}
        best = min(values.values())
        argmin = sorted(c for c, val in values.items() if val - best <= tol)
        records.append(R.exact(R.MINIMALITY, path_code.hex(), quantity + ":argmin",
                               len(argmin), 1, passed=argmin == [path_code],
                               detail={"argmin": [c.hex() for c in argmin]}))
        for c, val in values.items():
            if c != path_code:
                records.append(R.strict(R.MINIMALITY, c.hex(), quantity, val, values[path_code], tol))
    return CampaignReport("minimality", n, list(alpha_grid), tol, records, engine.diagnostics())


# -- the A + J - I identity ----------------------------------------------------------


def identity_mismatches(t: Tree) -> list[tuple[int, int, int, int]]:
    """Pairs (i, j, bfs, formula) where complement BFS disagrees with A + J - I."""
    bfs = complement_distances(t)
    formula = closed_form_complement_distances(t)
    return [
        (i, j, int(bfs[i, j]), int(formula[i, j]))
        for i in range(t.n)
        for j in range(i + 1, t.n)
        if bfs[i, j] != formula[i, j]
    ]


def _witness_record(t: Tree, name: str, expected: list) -> CheckRecord:
    found = identity_mismatches(t)
    return R.exact(R.IDENTITY_2AJI, _hex(t), "witness:" + name, len(found), len(expected),
                   passed=found == expected,
                   detail={"mismatches": [list(x) for x in found], "diameter": metrics(t).diameter})


def check_identity(n: int) -> CampaignReport:
    if n < 5:
        raise ValueError("diameter >= 4 needs n >= 5")
    records = []
    for t in _sources(n):
        bad = identity_mismatches(t)
        records.append(R.exact(R.IDENTITY_2AJI, _hex(t), "mismatched_pairs", len(bad), 0,
                               detail={"mismatches": [list(x) for x in bad]} if bad else None))
    # diameter-3 trees where the shortcut breaks: the two centers sit at distance 3
    records.append(_witness_record(double_star(2, 2), "double_star_2_2", [(0, 1, 3, 2)]))
    records.append(_witness_record(path_tree(4), "path_4", [(1, 2, 3, 2)]))
    return CampaignReport("identity", n, [], 0.0, records)


# -- the proper GTS poset ---------------------------------------------------------------


@dataclass
class GtsPoset:
    n: int
    nodes: list[CanonicalCode]
    edges: list[tuple[CanonicalCode, CanonicalCode]]
    pendants: dict[CanonicalCode, int] = field(repr=False)
    diameters: dict[CanonicalCode, int] = field(repr=False)

    @property
    def path_code(self) -> CanonicalCode:
        return canonical_code(path_tree(self.n))

    @property
    def star_code(self) -> CanonicalCode:
        return canonical_code(star_tree(self.n))

    def in_degree(self) -> dict[CanonicalCode, int]:
        deg = dict.fromkeys(self.nodes, 0)
        for _, b in self.edges:
            deg[b] += 1
        return deg

    def out_degree(self) -> dict[CanonicalCode, int]:
        deg = dict.fromkeys(self.nodes, 0)
        for a, _ in self.edges:
            deg[a] += 1
        return deg

    def sources(self) -> list[CanonicalCode]:
        return [c for c, d in self.in_degree().items() if d == 0]

    def sinks(self) -> list[CanonicalCode]:
        return [c for c, d in self.out_degree().items() if d == 0]

    def successors(self) -> dict[CanonicalCode, list[CanonicalCode]]:
        out: dict[CanonicalCode, list[CanonicalCode]] = {c: [] for c in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
        return out

    def reachable_from(self, start: CanonicalCode) -> set[CanonicalCode]:
        succ = self.successors()
        seen = {start}
        queue = deque([start])
        while queue:
            for b in succ[queue.popleft()]:
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    def longest_chain(self) -> int:
        # edges raise the pendant count by one, so processing by pendant count is topological
        succ = self.successors()
        best = dict.fromkeys(self.nodes, 0)
        for c in sorted(self.nodes, key=lambda c: -self.pendants[c]):
            best[c] = max((best[b] + 1 for b in succ[c]), default=0)
        return max(best.values())

    def to_dot(self) -> str:
        index = {c: i for i, c in enumerate(self.nodes)}
        src, snk = set(self.sources()), set(self.sinks())
        lines = [f"digraph gts_poset_{self.n} {{", "  rankdir=BT;"]
        for c in self.nodes:
            attrs = [f'label="{index[c]}: p={self.pendants[c]} d={self.diameters[c]}"',
                     f'code="{c.hex()}"']
            if c in src:
                attrs.append("shape=box")
            if c in snk:
                attrs.append("shape=doubleoctagon")
            lines.append(f"  t{index[c]} [{', '.join(attrs)}];")
        for a, b in self.edges:
            lines.append(f"  t{index[a]} -> t{index[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_poset(n: int) -> GtsPoset:
    if n < 4:
        raise ValueError("n must be at least 4")
    universe = enumerate_trees(n)
    edges = set()
    for t in universe:
        a = canonical_code(t)
        for m in proper_gts_moves(t):
            edges.add((a, canonical_code(gts(t, m))))
    return GtsPoset(
        n,
        [canonical_code(t) for t in universe],
        sorted(edges),
        {canonical_code(t): len(t.pendants()) for t in universe},
        {canonical_code(t): metrics(t).diameter for t in universe},
    )


def check_poset(n: int) -> CampaignReport:
    poset = build_poset(n)
    p, s = poset.path_code, poset.star_code
    reach = poset.reachable_from(p)
    bad_grading = [(a, b) for a, b in poset.edges if poset.pendants[b] - poset.pendants[a] != 1]
    records = [
        R.exact(R.POSET_MINIMAL, p.hex(), "sources", len(poset.sources()), 1,
                passed=poset.sources() == [p]),
        R.exact(R.POSET_MINIMAL, p.hex(), "reachable_from_path", len(reach), len(poset.nodes)),
        R.exact(R.POSET_MAXIMAL, s.hex(), "sinks", len(poset.sinks()), 1,
                passed=poset.sinks() == [s]),
        R.exact(R.POSET_MAXIMAL, s.hex(), "grading_violations", len(bad_grading), 0),
        R.exact(R.POSET_MAXIMAL, s.hex(), "longest_chain", poset.longest_chain(), n - 3),
    ]
    return CampaignReport("poset", n, [], 0.0, records,
                          {"nodes": len(poset.nodes), "edges": len(poset.edges)})


# -- the counterexample to path-generation by collapse moves ------------------------


def check_counterexample(n: int) -> CampaignReport:
    """Three-pendant trees of diameter <= n-3 are missed by one collapse step from
    the path but are reached by proper shifts."""
    if n < 6:
        raise ValueError("n must be at least 6")
    images = set(one_step_collapse_images(n))
    poset = build_poset(n)
    p = poset.path_code
    reach = poset.reachable_from(p)
    targets = [c for c in poset.nodes if poset.pendants[c] == 3 and poset.diameters[c] <= n - 3]
    records = [R.exact(R.COUNTEREXAMPLE_THM2, p.hex(), "target_classes", len(targets),
                       len(targets), detail={"targets": [c.hex() for c in targets]})]
    for c in sorted(images):
        records.append(R.exact(R.COUNTEREXAMPLE_THM2, c.hex(), "image_diameter",
                               poset.diameters[c], n - 2, passed=poset.diameters[c] >= n - 2))
        records.append(R.exact(R.COUNTEREXAMPLE_THM2, c.hex(), "image_pendants",
                               poset.pendants[c], 3, passed=poset.pendants[c] <= 3))
    for c in targets:
        records.append(R.exact(R.COUNTEREXAMPLE_THM2, c.hex(), "absent_from_collapse_images",
                               int(c in images), 0))
        records.append(R.exact(R.COUNTEREXAMPLE_THM2, c.hex(), "reachable_from_path",
                               int(c in reach), 1))
    return CampaignReport("counterexample", n, [], 0.0, records)


CAMPAIGNS = ("gts", "kelmans", "collapse", "minimality", "identity", "poset", "counterexample")


def run_campaign(name: str, n: int, alpha_grid=DEFAULT_ALPHA_GRID, tol: float = MARGIN_TOL,
                 workers: int = 1) -> CampaignReport | None:
    """Run one campaign at order n; None when n is below the campaign's range."""
    if name == "gts":
        return check_gts_monotonicity(n, alpha_grid, tol, workers) if n >= 5 else None
    if name == "kelmans":
        return check_kelmans_thm1(n, tol, workers) if n >= 5 else None
    if name == "collapse":
        return check_collapse_thm2(n, tol, workers) if n >= 5 else None
    if name == "minimality":
        return check_minimality(n, alpha_grid, tol)
    if name == "identity":
        return check_identity(n) if n >= 5 else None
    if name == "poset":
        return check_poset(n)
    if name == "counterexample":
        return check_counterexample(n) if n >= 6 else None
    raise ValueError(f"unknown campaign {name!r}")
