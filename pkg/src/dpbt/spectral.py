"""Spectral radius and Perron eigenvector of the teleportation matrices.

Three routes: an exact closed form when every diagram height fits (d >= N),
the tridiagonal cosine closed form at d = 2, and a normalised power iteration
for everything in between.  A cyclic Jacobi eigensolver is kept as the
independent full-spectrum utility, and the character table provides an exact
integer diagonalisation of the full matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import character_matrix
from .diagrams import DiagramBasis, YoungDiagram, enumerate_diagrams, irrep_dim
from .telemat import LabeledIntMatrix, structure_report, teleportation_matrix

__all__ = [
    "SpectralResult",
    "PowerIterationError",
    "power_iteration",
    "closed_form_full",
    "closed_form_d2",
    "spectrum_via_characters",
    "jacobi_eigh",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000


@dataclass(frozen=True)
class SpectralResult:
    """Spectral radius estimate with its diagram-indexed Perron eigenvector.

    The Perron vector is sum-normalised with strictly positive entries;
    `residual` is the last successive-normaliser difference (0 for closed
    forms).
    """

    radius: float
    basis: DiagramBasis
    perron: tuple[float, ...]
    iterations: int
    residual: float
    method: str  # "closed_dgeN" | "closed_d2" | "power"

    def perron_entry(self, mu: YoungDiagram) -> float:
        return self.perron[self.basis.index(mu)]


class PowerIterationError(RuntimeError):
    """Power iteration did not converge; `last` holds the final iterate."""

    def __init__(self, message: str, last: SpectralResult):
        super().__init__(message)
        self.last = last


def power_iteration(
    m: LabeledIntMatrix,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SpectralResult:
    """Spectral radius and Perron vector of a primitive non-negative matrix.

    From the uniform positive start, iterate v <- A w, w <- v / sum(v) and
    stop once two successive normalisers differ by less than tol; the
    normaliser then estimates the radius and w the Perron vector.  The sums
    use numpy's pairwise summation, so runs are deterministic.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    report = structure_report(m)
    if not report.primitive:
        raise ValueError(
            f"matrix (kind {m.kind}, shape {m.shape}) is not primitive; "
            "power iteration requires a primitive non-negative matrix"
        )
    a = m.to_float()
    n = a.shape[0]
    w = np.full(n, 1.0 / n)
    s_prev: float | None = None
    s = 0.0
    diff = math.inf
    for it in range(1, max_iter + 1):
        v = a @ w
        s = float(np.sum(v))
        w = v / s
        if s_prev is not None:
            diff = abs(s - s_prev)
            if diff < tol:
                return SpectralResult(s, m.row_basis, tuple(w), it, diff, "power")
        s_prev = s
    last = SpectralResult(s, m.row_basis, tuple(w), max_iter, diff, "power")
    raise PowerIterationError(
        f"no convergence after {max_iter} iterations (last diff {diff:.3e})", last
    )


def closed_form_full(n: int) -> SpectralResult:
    """Exact dominant eigenpair of the full matrix (any d >= n).

    The radius is n and the Perron vector is proportional to the irrep
    dimensions.
    """
    if n < 1:
        raise ValueError("port count must be >= 1")
    basis = enumerate_diagrams(n)
    dims = [irrep_dim(mu) for mu in basis]
    total = sum(dims)
    perron = tuple(x / total for x in dims)
    return SpectralResult(float(n), basis, perron, 0, 0.0, "closed_dgeN")


def closed_form_d2(n: int) -> list[float]:
    """All eigenvalues of the integer d=2 matrix, sorted descending.

    The d=2 matrix is tridiagonal and its eigenvalues are 4 cos^2(k pi/(N+2))
    for k = 1..(N//2 + 1).  (The factor 4 rescales to the integer matrix; the
    division by d^2 happens exactly once, in the protocol layer.)
    """
    if n < 1:
        raise ValueError("port count must be >= 1")
    t = n // 2 + 1
    return [4.0 * math.cos(math.pi * k / (n + 2)) ** 2 for k in range(1, t + 1)]


def spectrum_via_characters(n: int) -> dict[int, int]:
    """Exact integer diagonalisation of the full matrix by character columns.

    Verifies M @ T(C) = k T(C) for every class C with k fixed points, then
    returns {eigenvalue k: number of classes with k fixed points}.  The
    eigenvalues are 0..n-2 and n, with n-1 absent.  Any failure of the exact
    identity is a hard error.
    """
    mf = teleportation_matrix(n)
    table = character_matrix(n)
    if mf.row_basis.entries != table.basis.entries:
        raise AssertionError("diagram bases of the matrix and the table disagree")
    size = len(table.basis)
    multiplicities: dict[int, int] = {}
    for j, cls in enumerate(table.classes):
        k = cls.fixed_points
        col = table.column(j)
        product = [
            sum(mf.entries[i][l] * col[l] for l in range(size)) for i in range(size)
        ]
        if product != [k * x for x in col]:
            raise ArithmeticError(
                f"character column {cls.label()} is not an eigenvector with "
                f"eigenvalue {k} for N={n}"
            )
        multiplicities[k] = multiplicities.get(k, 0) + 1
    expected = set(range(0, n - 1)) | {n}
    if set(multiplicities) != expected:
        raise ArithmeticError(
            f"spectrum {sorted(multiplicities)} != expected {sorted(expected)} for N={n}"
        )
    return multiplicities


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalisation of a real symmetric matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  Sweeps run
    until the off-diagonal Frobenius norm drops below tol relative to the
    matrix scale.  Kept dependency-light so spectra computed elsewhere can be
    cross-checked against an independent solver.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = math.sqrt(float((a * a).sum()))
    if n > 0 and float(np.abs(a - a.T).max()) > 1e-10 * max(1.0, scale):
        raise ValueError("matrix must be symmetric")
    v = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), v
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        # measure the off-diagonal norm directly: subtracting the diagonal
        # part of the Frobenius norm cancels catastrophically near convergence
        strict = a - np.diag(np.diag(a))
        off = math.sqrt(float((strict * strict).sum()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        raise ArithmeticError(f"jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
