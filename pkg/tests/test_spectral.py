"""Spectral routes: power iteration vs closed forms vs exact character spectrum."""

import math

import numpy as np
import pytest

from dpbt.diagrams import enumerate_diagrams
from dpbt.spectral import (
    PowerIterationError,
    closed_form_d2,
    closed_form_full,
    jacobi_eigh,
    power_iteration,
    spectrum_via_characters,
)
from dpbt.telemat import LabeledIntMatrix, teleportation_matrix


def make_matrix(entries, n=None):
    size = len(entries)
    n = n if n is not None else size
    basis = enumerate_diagrams(n)
    if len(basis) != size:
        raise AssertionError("pick n so the basis size matches")
    return LabeledIntMatrix(basis, basis, tuple(map(tuple, entries)), "MF")


class TestPowerIteration:
    def test_full_matrix_radius(self):
        res = power_iteration(teleportation_matrix(3), tol=1e-12)
        assert abs(res.radius - 3.0) < 1e-10
        assert res.method == "power"
        assert res.residual < 1e-12

    def test_golden_ratio_case(self):
        res = power_iteration(teleportation_matrix(3, 2))
        assert abs(res.radius - 4 * math.cos(math.pi / 5) ** 2) < 1e-9

    def test_one_by_one(self):
        m = make_matrix([[7]], n=1)
        res = power_iteration(m)
        assert res.radius == 7.0
        assert res.perron == (1.0,)

    def test_perron_properties(self):
        for n in range(2, 9):
            for d in range(2, n + 1):
                res = power_iteration(teleportation_matrix(n, d))
                assert all(x > 0 for x in res.perron)
                assert abs(sum(res.perron) - 1.0) < 1e-12

    def test_rejects_non_primitive(self):
        m = make_matrix([[0, 1], [1, 0]], n=2)  # zero diagonal
        with pytest.raises(ValueError, match="primitive"):
            power_iteration(m)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            power_iteration(teleportation_matrix(3), tol=0.0)

    def test_non_convergence_carries_last_iterate(self):
        with pytest.raises(PowerIterationError) as info:
            power_iteration(teleportation_matrix(6, 3), tol=1e-15, max_iter=2)
        last = info.value.last
        assert last.iterations == 2
        assert len(last.perron) == len(enumerate_diagrams(6, 3))


class TestClosedForms:
    def test_full_n2(self):
        res = closed_form_full(2)
        assert res.radius == 2.0
        assert res.perron == (0.5, 0.5)
        assert res.method == "closed_dgeN"

    def test_full_n4_dims(self):
        res = closed_form_full(4)
        dims = (1, 3, 2, 3, 1)
        assert res.perron == tuple(x / 10 for x in dims)

    def test_full_n1(self):
        assert closed_form_full(1).radius == 1.0

    def test_d2_examples(self):
        lam = closed_form_d2(3)
        assert abs(lam[0] - 2.618033988749895) < 1e-12
        assert abs(lam[1] - 0.381966011250105) < 1e-12
        assert abs(sum(lam) - 3) < 1e-12  # trace of [[1,1],[1,2]]
        lam2 = closed_form_d2(2)
        assert abs(lam2[0] - 2) < 1e-12 and abs(lam2[1]) < 1e-12
        lam4 = closed_form_d2(4)
        assert np.allclose(lam4, [3.0, 1.0, 0.0], atol=1e-12)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_d2_matches_jacobi_eigensolve(self, n):
        m = teleportation_matrix(n, 2)
        w, _ = jacobi_eigh(m.to_float())
        assert np.allclose(sorted(w, reverse=True), closed_form_d2(n), atol=1e-10)

    def test_d2_count(self):
        for n in range(1, 20):
            assert len(closed_form_d2(n)) == len(enumerate_diagrams(n, 2))


class TestAgreementAcrossRoutes:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_power_matches_closed_full(self, n):
        res = power_iteration(teleportation_matrix(n))
        closed = closed_form_full(n)
        assert abs(res.radius - closed.radius) < 1e-9
        for a, b in zip(res.perron, closed.perron):
            assert abs(a - b) < 1e-9

    @pytest.mark.parametrize("n", range(2, 21))
    def test_power_matches_closed_d2(self, n):
        res = power_iteration(teleportation_matrix(n, 2))
        assert abs(res.radius - closed_form_d2(n)[0]) < 1e-9

    def test_radius_nondecreasing_in_d(self):
        for n in range(2, 9):
            radii = []
            for d in range(2, n + 1):
                radii.append(power_iteration(teleportation_matrix(n, d)).radius)
            for lo, hi in zip(radii, radii[1:]):
                assert hi >= lo - 1e-10


class TestSpectrumViaCharacters:
    def test_examples(self):
        assert spectrum_via_characters(4) == {4: 1, 2: 1, 1: 1, 0: 2}
        assert spectrum_via_characters(3) == {3: 1, 1: 1, 0: 1}
        assert spectrum_via_characters(2) == {2: 1, 0: 1}

    @pytest.mark.parametrize("n", range(1, 9))
    def test_exact_identity_and_gap(self, n):
        mult = spectrum_via_characters(n)
        assert (n - 1) not in mult
        assert set(mult) == set(range(0, n - 1)) | {n}

    @pytest.mark.parametrize("n", range(2, 11))
    def test_low_lying_multiplicities(self, n):
        mult = spectrum_via_characters(n)
        assert mult[n] == 1
        assert mult[n - 2] == 1
        if n >= 3:
            assert mult[n - 3] == 1
        if n >= 4:
            assert mult[n - 4] == 2
        if n >= 5:
            assert mult[n - 5] == 2

    def test_total_multiplicity_is_class_count(self):
        for n in range(1, 9):
            assert sum(spectrum_via_characters(n).values()) == len(enumerate_diagrams(n))


class TestJacobi:
    def test_small_known(self):
        w, v = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(w, [1.0, 3.0], atol=1e-12)
        assert np.allclose(v @ np.diag(w) @ v.T, [[2, 1], [1, 2]], atol=1e-12)

    def test_against_numpy_random(self):
        rng = np.random.default_rng(11)
        for size in (3, 8, 17, 40):
            m = rng.normal(size=(size, size))
            a = (m + m.T) / 2
            w, v = jacobi_eigh(a)
            assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-9)
            assert np.allclose(a @ v, v @ np.diag(w), atol=1e-9)
            assert np.allclose(v.T @ v, np.eye(size), atol=1e-10)

    def test_near_zero_offdiagonal_converges(self):
        # regression: off-diagonal norm must be measured without cancellation
        a = np.diag([1.0, 2.0, 3.0])
        a[0, 1] = a[1, 0] = 1e-14
        w, _ = jacobi_eigh(a)
        assert np.allclose(w, [1.0, 2.0, 3.0], atol=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_zero_and_trivial(self):
        w, _ = jacobi_eigh(np.zeros((4, 4)))
        assert np.allclose(w, 0.0)
        w1, _ = jacobi_eigh(np.array([[5.0]]))
        assert w1[0] == 5.0
