"""Brute-force dense-operator verification at small port counts.

Everything the fast modules compute through diagram combinatorics is rebuilt
here directly in the computational basis of (C^d)^(N+1): permutation
operators, Young projectors, the port operator and its eigenprojectors, the
measurement operators, the optimal resource operator and the dual
certificate.  Each formula is then checked by plain linear algebra.

Operators grow as d^(N+1), so constructions are capped (default 1024, which
covers (N,d) in {(2,2),(3,2),(4,2),(2,3),(3,3),(2,4),(4,3)}).  All operators
are kept complex even though every one of them is real in this basis; the
Hermiticity checks stay honest that way.  Eigensolves go through the internal
Jacobi routine, independent of the fast spectral path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import CycleType, character, cycle_types
from .diagrams import (
    YoungDiagram,
    add_box,
    enumerate_diagrams,
    irrep_dim,
    multiplicity,
)
from .protocol import (
    general_povm_fidelity,
    optimal_fidelity,
    optimal_solution,
    protocol_eigenvalues,
    sqrt_measurement_fidelity,
)
from .spectral import jacobi_eigh

__all__ = [
    "DEFAULT_CAP",
    "DEFAULT_CHECK_CELLS",
    "CapExceededError",
    "DenseOperator",
    "CheckResult",
    "permutation_operator",
    "transposition",
    "young_projector",
    "partial_transpose_last",
    "eta_operator",
    "f_projector",
    "direct_fidelity",
    "primal_constraint_check",
    "dual_witness_check",
    "run_checks",
]

DEFAULT_CAP = 1024

# cells small enough for the default cap; (4,3) fits but is slower
DEFAULT_CHECK_CELLS = ((2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4))


class CapExceededError(RuntimeError):
    """Requested operator dimension d^k lies above the configured cap."""


@dataclass
class DenseOperator:
    """Dense complex operator on `systems` tensor factors of local dimension d."""

    matrix: np.ndarray
    d: int
    systems: int

    def __post_init__(self) -> None:
        dim = self.d**self.systems
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape}, expected ({dim}, {dim})")

    @property
    def dim(self) -> int:
        return self.d**self.systems


def _require_cap(d: int, systems: int, cap: int) -> None:
    if d**systems > cap:
        raise CapExceededError(
            f"dimension {d}^{systems} = {d ** systems} exceeds cap {cap}"
        )


def transposition(i: int, j: int, k: int) -> tuple[int, ...]:
    """Permutation of 0..k-1 swapping positions i and j."""
    p = list(range(k))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def permutation_operator(
    perm: tuple[int, ...], d: int, cap: int = DEFAULT_CAP
) -> DenseOperator:
    """0/1 operator permuting tensor factors.

    Factor i of the output carries what factor perm^{-1}(i) carried on input,
    so V(s) V(t) = V(s o t) with (s o t)(x) = s(t(x)).
    """
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"not a permutation of 0..{k - 1}: {perm}")
    _require_cap(d, k, cap)
    dim = d**k
    inv = [0] * k
    for i, p in enumerate(perm):
        inv[p] = i
    weights = [d ** (k - 1 - i) for i in range(k)]
    mat = np.zeros((dim, dim), dtype=complex)
    for col, digits in enumerate(itertools.product(range(d), repeat=k)):
        row = sum(digits[inv[i]] * weights[i] for i in range(k))
        mat[row, col] = 1.0
    return DenseOperator(mat, d, k)


def _cycle_type_of(perm: tuple[int, ...]) -> CycleType:
    k = len(perm)
    seen = [False] * k
    parts = []
    for i in range(k):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parts.append(length)
    return CycleType(tuple(parts))


def young_projector(mu: YoungDiagram, d: int, cap: int = DEFAULT_CAP) -> DenseOperator:
    """Isotypic projector for mu on (C^d)^N: (dim_mu/N!) sum_s chi_mu(s) V(s).

    Characters of a class equal those of its inverses, so the class value is
    used directly.  Idempotent and Hermitian with trace d_mu * m_mu; the zero
    operator when the diagram is taller than d.
    """
    n = mu.boxes
    _require_cap(d, n, cap)
    if n == 0:
        return DenseOperator(np.ones((1, 1), dtype=complex), d, 0)
    dim = d**n
    chi = {c: character(mu, c) for c in cycle_types(n)}
    acc = np.zeros((dim, dim), dtype=complex)
    for perm in itertools.permutations(range(n)):
        acc += chi[_cycle_type_of(perm)] * permutation_operator(perm, d, cap).matrix
    acc *= irrep_dim(mu) / math.factorial(n)
    return DenseOperator(acc, d, n)


def _pt_last(mat: np.ndarray, d: int) -> np.ndarray:
    dim = mat.shape[0]
    rest = dim // d
    return mat.reshape(rest, d, rest, d).transpose(0, 3, 2, 1).reshape(dim, dim)


def partial_transpose_last(op: DenseOperator) -> DenseOperator:
    """Transpose applied to the last tensor factor only."""
    return DenseOperator(_pt_last(op.matrix, op.d), op.d, op.systems)


def _trace_last(mat: np.ndarray, d: int) -> np.ndarray:
    dim = mat.shape[0] // d
    return mat.reshape(dim, d, dim, d).trace(axis1=1, axis2=3)


def _ptilde_plus(d: int) -> np.ndarray:
    """Unnormalised maximally entangled projector sum_ij |ii><jj| on two factors."""
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            m[i * d + i, j * d + j] = 1.0
    return m


def _embed_front(mat: np.ndarray, trailing: int, d: int) -> np.ndarray:
    """Operator on leading factors, identity on `trailing` extra factors."""
    if trailing == 0:
        return mat
    return np.kron(mat, np.eye(d**trailing))


def _eigh(mat: np.ndarray):
    """Jacobi eigendecomposition after validating Hermiticity and realness."""
    scale = max(1.0, float(np.abs(mat).max()))
    herm = float(np.abs(mat - mat.conj().T).max())
    if herm > 1e-9 * scale:
        raise ArithmeticError(f"operator is not Hermitian (deviation {herm:.2e})")
    imag = float(np.abs(mat.imag).max())
    if imag > 1e-9 * scale:
        raise ArithmeticError(f"operator has complex entries (max imag {imag:.2e})")
    return jacobi_eigh(mat.real)


def eta_operator(n: int, d: int, cap: int = DEFAULT_CAP) -> DenseOperator:
    """Sum over ports of the last-factor partial transpose of the swap between
    port a and the teleported factor; Hermitian, d^N times the port state sum."""
    k = n + 1
    _require_cap(d, k, cap)
    acc = np.zeros((d**k, d**k), dtype=complex)
    for a in range(n):
        v = permutation_operator(transposition(a, k - 1, k), d, cap).matrix
        acc += _pt_last(v, d)
    return DenseOperator(acc, d, k)


def _sigma_operators(n: int, d: int, cap: int) -> list[np.ndarray]:
    k = n + 1
    _require_cap(d, k, cap)
    out = []
    for a in range(n):
        v = permutation_operator(transposition(a, k - 1, k), d, cap).matrix
        out.append(_pt_last(v, d) / d**n)
    return out


def f_projector(
    alpha: YoungDiagram, mu: YoungDiagram, d: int, cap: int = DEFAULT_CAP
) -> DenseOperator:
    """Port-operator eigenprojector labelled by parent alpha and child mu.

    (1/gamma) P_mu [sum_a V(a,N) (P_alpha x Ptilde+) V(a,N)] P_mu, acting on
    N+1 factors; idempotent with trace d_mu * m_alpha and eigenvalue gamma
    under the port operator.
    """
    n = mu.boxes
    k = n + 1
    if alpha.boxes != n - 1 or mu not in add_box(alpha):
        raise ValueError(f"{mu.label()} does not grow from {alpha.label()} by one box")
    _require_cap(d, k, cap)
    m_a = multiplicity(alpha, d)
    m_m = multiplicity(mu, d)
    if m_a == 0 or m_m == 0:
        raise ValueError(
            f"zero multiplicity at d={d} for {alpha.label()} -> {mu.label()}"
        )
    gamma = Fraction(n * m_m * irrep_dim(alpha), m_a * irrep_dim(mu))
    core = np.kron(young_projector(alpha, d, cap).matrix, _ptilde_plus(d))
    acc = np.zeros_like(core)
    for a in range(n):
        v = permutation_operator(transposition(a, n - 1, k), d, cap).matrix
        acc += v @ core @ v
    p_mu = _embed_front(young_projector(mu, d, cap).matrix, 1, d)
    return DenseOperator((p_mu @ acc @ p_mu) / float(gamma), d, k)


def _pseudo_inverse_sqrt(mat: np.ndarray, threshold: float = 1e-10) -> np.ndarray:
    """Inverse square root on the support; eigenvalues below threshold drop out."""
    w, v = _eigh(mat)
    inv = np.where(w > threshold, 1.0 / np.sqrt(np.maximum(w, threshold)), 0.0)
    return (v * inv) @ v.T


def _optimal_povm_element(n: int, d: int, cap: int) -> np.ndarray:
    sol = optimal_solution(n, d)
    dim = d ** (n + 1)
    pi = np.zeros((dim, dim), dtype=complex)
    for (alpha, mu), p in sorted(
        sol.p_coeffs.items(), key=lambda kv: (kv[0][0].rows, kv[0][1].rows)
    ):
        pi += p * f_projector(alpha, mu, d, cap).matrix
    return pi


def direct_fidelity(
    n: int, d: int, povm_spec: str, cap: int = DEFAULT_CAP
) -> float:
    """Teleportation fidelity by direct traces against a constructed POVM family.

    povm_spec "sqrt_measurement" conjugates the port states by the inverse
    square root of their sum; "optimal" sandwiches them with the optimal
    projector combination.
    """
    sigmas = _sigma_operators(n, d, cap)
    if povm_spec == "sqrt_measurement":
        rho = sum(sigmas)
        isqrt = _pseudo_inverse_sqrt(rho)
        povms = [isqrt @ s @ isqrt for s in sigmas]
    elif povm_spec == "optimal":
        pi = _optimal_povm_element(n, d, cap)
        povms = [pi @ s @ pi for s in sigmas]
    else:
        raise ValueError(f"unknown povm_spec {povm_spec!r}")
    total = math.fsum(float(np.trace(p @ s).real) for p, s in zip(povms, sigmas))
    return total / d**2


def primal_constraint_check(n: int, d: int, cap: int = DEFAULT_CAP) -> dict[str, float]:
    """Feasibility of the optimal primal point.

    Returns the smallest eigenvalue of X_A (x) 1 - sum_a POVM_a (must be
    >= -tolerance) and the trace of X_A (must be d^N).
    """
    sol = optimal_solution(n, d)
    dim_a = d**n
    x_a = np.zeros((dim_a, dim_a), dtype=complex)
    for mu in sol.basis:
        x_a += sol.c_coeffs[mu] * young_projector(mu, d, cap).matrix
    trace_xa = float(np.trace(x_a).real)
    pi = _optimal_povm_element(n, d, cap)
    povm_sum = np.zeros((d ** (n + 1), d ** (n + 1)), dtype=complex)
    for s in _sigma_operators(n, d, cap):
        povm_sum += pi @ s @ pi
    slack = _embed_front(x_a, 1, d) - povm_sum
    w, _ = _eigh(slack)
    return {"min_eig": float(w[0]), "trace_XA": trace_xa}


def dual_witness_check(n: int, d: int, cap: int = DEFAULT_CAP) -> dict[str, float]:
    """Feasibility and objective of the dual certificate.

    Per-diagram weights t are the Perron entries; the certificate must
    dominate every port state, and d^(N-2) times the infinity norm of its
    last-factor partial trace reproduces the optimum radius / d^2.
    """
    from .protocol import _dominant_eigenpair  # local: avoids a public wart

    eigenpair = _dominant_eigenpair(n, d, 1e-12, 1_000_000)
    t = {mu: eigenpair.perron_entry(mu) for mu in eigenpair.basis}
    dim = d ** (n + 1)
    _require_cap(d, n + 1, cap)
    omega = np.zeros((dim, dim), dtype=complex)
    for alpha in enumerate_diagrams(n - 1, d):
        group = [
            mu
            for mu in sorted(add_box(alpha, d), key=lambda x: x.rows, reverse=True)
            if multiplicity(mu, d) > 0
        ]
        t_sum = math.fsum(t[mu] for mu in group)
        m_a = multiplicity(alpha, d)
        for mu in group:
            coeff = t_sum * multiplicity(mu, d) / (m_a * t[mu] * d**n)
            omega += coeff * f_projector(alpha, mu, d, cap).matrix
    min_slack = math.inf
    for s in _sigma_operators(n, d, cap):
        w, _ = _eigh(omega - s)
        min_slack = min(min_slack, float(w[0]))
    reduced = _trace_last(omega, d)
    w, _ = _eigh(reduced)
    objective = d ** (n - 2) * float(np.abs(w).max())
    return {"min_slack": min_slack, "objective": objective}


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool


def _check(name: str, residual: float, tolerance: float) -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual, tolerance, residual <= tolerance)


def _norm_inf(mat: np.ndarray) -> float:
    return float(np.abs(mat).max()) if mat.size else 0.0


def run_checks(n: int, d: int, cap: int = DEFAULT_CAP, tol: float = 1e-8) -> list[CheckResult]:
    """Full verification battery at one (N, d); every formula the fast modules
    rely on is recomputed by dense linear algebra and compared."""
    _require_cap(d, n + 1, cap)
    checks: list[CheckResult] = []
    full_basis = enumerate_diagrams(n)
    dim_a = d**n
    dim = d ** (n + 1)

    # permutation operators compose like permutations
    comp_res = 0.0
    gens = [transposition(i, i + 1, n + 1) for i in range(n)]
    gens.append(tuple(range(1, n + 1)) + (0,))
    for s in gens:
        for t in gens:
            st = tuple(s[t[i]] for i in range(n + 1))
            lhs = (
                permutation_operator(s, d, cap).matrix
                @ permutation_operator(t, d, cap).matrix
            )
            comp_res = max(comp_res, _norm_inf(lhs - permutation_operator(st, d, cap).matrix))
    checks.append(_check("perm_composition", comp_res, 1e-12))

    # Young projectors: resolution, idempotence, Hermiticity, traces, centrality
    projectors = {mu: young_projector(mu, d, cap).matrix for mu in full_basis}
    resolution = sum(projectors.values()) - np.eye(dim_a)
    checks.append(_check("young_resolution", _norm_inf(resolution), 1e-10))
    idem = max(_norm_inf(p @ p - p) for p in projectors.values())
    checks.append(_check("young_idempotent", idem, 1e-10))
    herm = max(_norm_inf(p - p.conj().T) for p in projectors.values())
    checks.append(_check("young_hermitian", herm, 1e-10))
    trace_res = max(
        abs(float(np.trace(p).real) - irrep_dim(mu) * multiplicity(mu, d))
        for mu, p in projectors.items()
    )
    checks.append(_check("young_trace", trace_res, tol))
    commute = 0.0
    for perm in itertools.permutations(range(n)):
        v = permutation_operator(perm, d, cap).matrix
        for p in projectors.values():
            commute = max(commute, _norm_inf(p @ v - v @ p))
    checks.append(_check("young_commute", commute, 1e-10))

    # port operator: Hermitian, PSD, exact eigenvalue multiset with multiplicities
    eta = eta_operator(n, d, cap).matrix
    checks.append(_check("eta_hermitian", _norm_inf(eta - eta.conj().T), 1e-10))
    eigs_eta, _ = _eigh(eta)
    checks.append(_check("eta_psd", max(0.0, -float(eigs_eta[0])), 1e-10))
    eigen_labels = protocol_eigenvalues(n, d)
    expected = []
    for e in eigen_labels:
        expected.extend([float(e.gamma)] * (irrep_dim(e.mu) * multiplicity(e.alpha, d)))
    expected.extend([0.0] * (dim - len(expected)))
    expected.sort(reverse=True)
    actual = sorted((float(x) for x in eigs_eta), reverse=True)
    eig_res = max(abs(a - b) for a, b in zip(actual, expected))
    checks.append(_check("eta_eigenvalues", eig_res, tol))

    # eigenprojector family
    fams = {
        (e.alpha, e.mu): f_projector(e.alpha, e.mu, d, cap).matrix
        for e in eigen_labels
    }
    gamma_of = {(e.alpha, e.mu): float(e.gamma) for e in eigen_labels}
    checks.append(
        _check(
            "f_idempotent", max(_norm_inf(f @ f - f) for f in fams.values()), 1e-10
        )
    )
    checks.append(
        _check(
            "f_hermitian",
            max(_norm_inf(f - f.conj().T) for f in fams.values()),
            1e-10,
        )
    )
    f_trace_res = max(
        abs(float(np.trace(f).real) - irrep_dim(mu) * multiplicity(alpha, d))
        for (alpha, mu), f in fams.items()
    )
    checks.append(_check("f_trace", f_trace_res, tol))
    f_eig_res = max(
        _norm_inf(eta @ f - gamma_of[key] * f) for key, f in fams.items()
    )
    checks.append(_check("f_eigen", f_eig_res, 1e-10))
    ortho = 0.0
    keys = list(fams)
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1 :]:
            ortho = max(ortho, _norm_inf(fams[k1] @ fams[k2]))
    checks.append(_check("f_orthogonal", ortho, 1e-10))

    # basis-free inner-product identity: sandwiching an eigenprojector between
    # P_alpha (x) P+ rescales that projector by m_mu / (d m_alpha)
    inner_res = 0.0
    p_plus = _ptilde_plus(d) / d
    for (alpha, mu), f in fams.items():
        p_alpha = young_projector(alpha, d, cap).matrix
        wall = np.kron(p_alpha, p_plus)
        lhs = wall @ f @ wall
        rhs = (multiplicity(mu, d) / (d * multiplicity(alpha, d))) * wall
        inner_res = max(inner_res, _norm_inf(lhs - rhs))
    checks.append(_check("f_inner_product", inner_res, 1e-10))

    # reconstruction and support rank
    recon = sum(g * fams[key] for key, g in gamma_of.items()) - eta
    checks.append(_check("eta_reconstruction", _norm_inf(recon), 1e-9))
    rank_eta = int(np.sum(np.abs(eigs_eta) > 1e-8))
    rank_expected = sum(
        irrep_dim(mu) * multiplicity(alpha, d) for (alpha, mu) in fams
    )
    checks.append(_check("f_support_rank", abs(rank_eta - rank_expected), 0.5))

    # partial transpose is an involution and preserves traces
    checks.append(
        _check("pt_involution", _norm_inf(_pt_last(_pt_last(eta, d), d) - eta), 1e-12)
    )
    pt_trace = abs(float(np.trace(_pt_last(eta, d)).real - np.trace(eta).real))
    checks.append(_check("pt_trace", pt_trace, 1e-12))

    # the fidelity triangle
    f_sqrt_formula = sqrt_measurement_fidelity(n, d).fidelity
    f_sqrt_direct = direct_fidelity(n, d, "sqrt_measurement", cap)
    checks.append(_check("fidelity_sqrt_direct", abs(f_sqrt_direct - f_sqrt_formula), tol))
    f_family = general_povm_fidelity(n, d, 1, 2)
    checks.append(_check("fidelity_povm_family", abs(f_family - f_sqrt_formula), 1e-12))
    opt = optimal_fidelity(n, d)
    f_opt_direct = direct_fidelity(n, d, "optimal", cap)
    checks.append(_check("fidelity_optimal_direct", abs(f_opt_direct - opt.fidelity), tol))

    primal = primal_constraint_check(n, d, cap)
    checks.append(_check("primal_min_eig", max(0.0, -primal["min_eig"]), tol))
    checks.append(_check("primal_trace", abs(primal["trace_XA"] - d**n), tol))

    dual = dual_witness_check(n, d, cap)
    checks.append(_check("dual_min_slack", max(0.0, -dual["min_slack"]), tol))
    checks.append(_check("dual_objective", abs(dual["objective"] - opt.fidelity), tol))
    checks.append(_check("duality_gap", abs(f_opt_direct - dual["objective"]), tol))

    return checks
