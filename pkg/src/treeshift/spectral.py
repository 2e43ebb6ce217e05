"""Distance-type matrices of tree complements and their spectral radii.

Power iteration is the working method; ``eig_oracle`` is a cyclic Jacobi
solver kept deliberately separate so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tree_core import CanonicalCode, Tree, canonical_code, complement_distances

ITER_TOL = 1e-12
MAX_ITER = 10**6
JACOBI_TOL = 1e-12


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class MatrixKind:
    name: str
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.name not in ("distance", "signless_laplacian", "d_alpha"):
            raise ValueError(f"unknown matrix kind {self.name!r}")
        if self.name == "d_alpha":
            if self.alpha is None or not 0.0 <= self.alpha < 1.0:
                raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        elif self.alpha is not None:
            raise ValueError(f"{self.name} takes no alpha")

    @property
    def label(self) -> str:
        if self.name == "d_alpha":
            return f"d_alpha({self.alpha:g})"
        return self.name


DISTANCE = MatrixKind("distance")
SIGNLESS_LAPLACIAN = MatrixKind("signless_laplacian")


def d_alpha(alpha: float) -> MatrixKind:
    return MatrixKind("d_alpha", float(alpha))


@dataclass(frozen=True)
class DistMatrix:
    kind: MatrixKind
    entries: np.ndarray = field(repr=False, compare=False)
    source_code: CanonicalCode | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralSummary:
    radius: float
    perron: np.ndarray = field(repr=False, compare=False)
    residual: float
    iterations: int


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, DistMatrix) else np.asarray(m, dtype=float)


def transmissions(dist) -> np.ndarray:
    d = np.asarray(dist)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if (d != d.T).any():
        raise ValueError("distance matrix must be symmetric")
    if (d < 0).any():
        raise ValueError("distance matrix must be nonnegative")
    return d.sum(axis=1)


def matrix_from_distances(dist: np.ndarray, kind: MatrixKind, source_code=None) -> DistMatrix:
    d = np.asarray(dist, dtype=float)
    tr = np.diag(transmissions(d))
    if kind.name == "distance":
        out = d.copy()
    elif kind.name == "signless_laplacian":
        out = tr + d
    else:
        out = kind.alpha * tr + (1.0 - kind.alpha) * d
    out.setflags(write=False)
    return DistMatrix(kind, out, source_code)


def build_matrix(t: Tree, kind: MatrixKind) -> DistMatrix:
    """Matrix of the given kind for the complement of ``t``."""
    return matrix_from_distances(complement_distances(t), kind, canonical_code(t))


def spectral_radius(m, tol: float = ITER_TOL, max_iter: int = MAX_ITER) -> SpectralSummary:
    """Power iteration from the all-ones vector.

    Stops once successive Rayleigh quotients agree to ``tol`` and the
    residual ||Mx - rx||_inf is below ``tol``.
    """
    a = _entries(m)
    n = a.shape[0]
    x = np.full(n, 1.0 / np.sqrt(n))
    prev = np.inf
    for it in range(1, max_iter + 1):
        y = a @ x
        rq = float(x @ y)
        residual = float(np.abs(y - rq * x).max())
        if abs(rq - prev) < tol and residual < tol:
            return SpectralSummary(rq, x, residual, it)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return SpectralSummary(0.0, x, residual, it)
        x = y / norm
        prev = rq
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def eig_oracle(m) -> float:
    """Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(_entries(m), dtype=float)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    off = np.triu_indices(n, 1)
    for _ in range(200):
        if np.sqrt(2.0 * np.sum(a[off] ** 2)) < JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
    return float(np.max(np.diag(a)))


def rayleigh(m, x) -> float:
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise ValueError("rayleigh quotient needs a unit vector")
    return float(x @ _entries(m) @ x)
