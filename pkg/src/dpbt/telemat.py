"""The teleportation matrix and the branching-graph matrices tied to it.

The teleportation matrix over the diagrams of N has diagonal entries counting
single-box-removal parents and off-diagonal 1 for pairs related by moving one
box.  Restricting to heights <= d gives the principal submatrix governing
local dimension d.  The same data is reachable through the 0/1 parent-child
incidence matrix R: the Gram matrix of its columns reproduces the
teleportation matrix exactly, and the Gram matrix of its rows obeys a
recursion that steps N down by one.  All entries are exact integers.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .diagrams import (
    DiagramBasis,
    YoungDiagram,
    add_box,
    enumerate_diagrams,
    remove_box,
)

__all__ = [
    "LabeledIntMatrix",
    "StructureReport",
    "teleportation_matrix",
    "incidence_matrix",
    "gram_G",
    "gram_H",
    "recursion_defect",
    "structure_report",
    "to_csv",
    "parse_csv",
    "to_json_dict",
]

KINDS = ("MF", "R", "G", "H")


@dataclass(frozen=True)
class LabeledIntMatrix:
    """Exact-integer matrix whose rows and columns are indexed by diagram bases."""

    row_basis: DiagramBasis
    col_basis: DiagramBasis
    entries: tuple[tuple[int, ...], ...]
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if len(self.entries) != len(self.row_basis):
            raise ValueError("entry rows do not match the row basis")
        if any(len(row) != len(self.col_basis) for row in self.entries):
            raise ValueError("entry columns do not match the column basis")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_basis), len(self.col_basis))

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def entry(self, mu: YoungDiagram, nu: YoungDiagram) -> int:
        return self.entries[self.row_basis.index(mu)][self.col_basis.index(nu)]

    def to_float(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


def teleportation_matrix(n: int, d: int | None = None) -> LabeledIntMatrix:
    """Teleportation matrix over the diagrams of n with height <= d.

    Diagonal at mu counts all parents of mu (removing a box never increases
    height, so no extra filter applies); off-diagonal entries are 1 for pairs
    sharing a parent.  d=None (or d >= n) gives the full matrix.
    """
    if n < 1:
        raise ValueError("port count must be >= 1")
    basis = enumerate_diagrams(n, d)
    parents = [remove_box(mu) for mu in basis]
    rows = []
    for i in range(len(basis)):
        row = []
        for j in range(len(basis)):
            if i == j:
                row.append(len(parents[i]))
            else:
                row.append(1 if parents[i] & parents[j] else 0)
        rows.append(tuple(row))
    return LabeledIntMatrix(basis, basis, tuple(rows), "MF")


def incidence_matrix(n: int, d: int | None = None) -> LabeledIntMatrix:
    """0/1 parent-child matrix: rows are diagrams of n-1, columns diagrams of n.

    Entry 1 iff the column diagram grows from the row diagram by one box and
    fits the height cap.
    """
    if n < 1:
        raise ValueError("port count must be >= 1")
    row_basis = enumerate_diagrams(n - 1, d)
    col_basis = enumerate_diagrams(n, d)
    rows = []
    for alpha in row_basis:
        children = add_box(alpha, d)
        rows.append(tuple(1 if mu in children else 0 for mu in col_basis))
    return LabeledIntMatrix(row_basis, col_basis, tuple(rows), "R")


def gram_G(n: int, d: int | None = None) -> LabeledIntMatrix:
    """Gram matrix of the columns of the incidence matrix: R^T R, exact.

    Coincides entrywise with teleportation_matrix(n, d).
    """
    r = incidence_matrix(n, d)
    m = len(r.col_basis)
    g = [[0] * m for _ in range(m)]
    for row in r.entries:
        ones = [j for j, e in enumerate(row) if e]
        for a in ones:
            for b in ones:
                g[a][b] += 1
    return LabeledIntMatrix(r.col_basis, r.col_basis, tuple(map(tuple, g)), "G")


def gram_H(n: int, d: int | None = None) -> LabeledIntMatrix:
    """Gram matrix of the rows of the incidence matrix: R R^T, exact."""
    r = incidence_matrix(n, d)
    m = len(r.row_basis)
    h = [[0] * m for _ in range(m)]
    for j in range(len(r.col_basis)):
        ones = [i for i in range(m) if r.entries[i][j]]
        for a in ones:
            for b in ones:
                h[a][b] += 1
    return LabeledIntMatrix(r.row_basis, r.row_basis, tuple(map(tuple, h)), "H")


def recursion_defect(n: int, d: int | None = None) -> tuple[tuple[int, ...], ...]:
    """H(n,d) minus the diagonal correction minus the teleportation matrix of n-1.

    A parent of height < d keeps its add-a-new-row child under the height cap
    and picks up one extra unit on the Gram diagonal; a parent of height d
    loses exactly that child.  The correction is therefore the identity on the
    rows of height < d, and the difference must vanish identically.
    """
    if n < 2:
        raise ValueError("recursion needs n >= 2")
    h = gram_H(n, d)
    mf = teleportation_matrix(n - 1, d)
    if h.row_basis.entries != mf.row_basis.entries:
        raise AssertionError("basis mismatch between H and the stepped-down matrix")
    out = []
    for i, alpha in enumerate(h.row_basis):
        row = []
        for j in range(len(h.row_basis)):
            v = h.entries[i][j] - mf.entries[i][j]
            if i == j and (d is None or alpha.height < d):
                v -= 1
            row.append(v)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class StructureReport:
    irreducible: bool
    primitive: bool
    centrosymmetric: bool
    max_row_sum: int


def structure_report(m: LabeledIntMatrix) -> StructureReport:
    """Irreducibility (directed reachability), primitivity, centrosymmetry, 1-norm."""
    if not m.is_square:
        raise ValueError("structure report requires a square matrix")
    e = m.entries
    n = len(e)
    irreducible = _strongly_connected(e)
    primitive = irreducible and all(e[i][i] > 0 for i in range(n))
    centrosymmetric = all(
        e[i][j] == e[n - 1 - i][n - 1 - j] for i in range(n) for j in range(n)
    )
    max_row_sum = max(sum(abs(x) for x in row) for row in e)
    return StructureReport(irreducible, primitive, centrosymmetric, max_row_sum)


def _strongly_connected(e: tuple[tuple[int, ...], ...]) -> bool:
    n = len(e)
    if n == 1:
        return e[0][0] != 0

    def full_reach(adj: list[list[int]]) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    fwd = [[j for j in range(n) if e[i][j]] for i in range(n)]
    bwd = [[j for j in range(n) if e[j][i]] for i in range(n)]
    return full_reach(fwd) and full_reach(bwd)


def to_csv(m: LabeledIntMatrix) -> str:
    """CSV text with a header row/column of diagram labels and integer entries."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + [nu.label() for nu in m.col_basis])
    for mu, row in zip(m.row_basis, m.entries):
        writer.writerow([mu.label()] + list(row))
    return buf.getvalue()


def parse_csv(
    text: str,
) -> tuple[tuple[YoungDiagram, ...], tuple[YoungDiagram, ...], tuple[tuple[int, ...], ...]]:
    """Inverse of to_csv: (row diagrams, column diagrams, integer entries)."""
    records = [rec for rec in csv.reader(io.StringIO(text)) if rec]
    cols = tuple(YoungDiagram.from_label(t) for t in records[0][1:])
    row_labels = []
    entries = []
    for rec in records[1:]:
        row_labels.append(YoungDiagram.from_label(rec[0]))
        entries.append(tuple(int(x) for x in rec[1:]))
    return tuple(row_labels), cols, tuple(entries)


def to_json_dict(m: LabeledIntMatrix) -> dict:
    """JSON-ready form: {kind, N, d, basis, entries} (split bases for R)."""
    if m.is_square and m.row_basis.entries == m.col_basis.entries:
        basis = list(m.row_basis.labels())
    else:
        basis = {"rows": list(m.row_basis.labels()), "cols": list(m.col_basis.labels())}
    return {
        "kind": m.kind,
        "N": m.col_basis.n,
        "d": m.col_basis.d,
        "basis": basis,
        "entries": [list(row) for row in m.entries],
    }
