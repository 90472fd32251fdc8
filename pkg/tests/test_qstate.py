import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discordlab.qstate import (
    CORRELATORS,
    CorrelationVector,
    as_vector,
    bell_density_matrix,
    correlation_vector,
    eigenvalues_bell,
    hermitian_eigenvalues,
    is_physical,
    pauli_components,
    trace_norm,
)

from conftest import physical_c, unit


class TestBellDensityMatrix:
    def test_maximally_mixed(self):
        np.testing.assert_allclose(bell_density_matrix((0, 0, 0)), np.eye(4) / 4, atol=0)

    def test_pure_bell_state(self):
        lam = hermitian_eigenvalues(bell_density_matrix((1, -1, 1)))
        np.testing.assert_allclose(lam, [1, 0, 0, 0], atol=1e-15)

    def test_entries(self):
        rho = bell_density_matrix((0.1, 0.2, 0.3))
        np.testing.assert_allclose(np.diag(rho).real, [0.325, 0.175, 0.175, 0.325], atol=1e-15)
        anti = [rho[0, 3], rho[1, 2], rho[2, 1], rho[3, 0]]
        np.testing.assert_allclose(np.real(anti), [-0.025, 0.075, 0.075, -0.025], atol=1e-15)

    def test_expansion_matches_pauli_sum(self):
        c = (0.3, -0.4, 0.2)
        expected = (np.eye(4) + sum(ci * s for ci, s in zip(c, CORRELATORS))) / 4
        np.testing.assert_allclose(bell_density_matrix(c), expected, atol=1e-15)

    @pytest.mark.parametrize("bad", [(1.5, 0, 0), (0, 0), (0, 0, 0, 0)])
    def test_rejects_bad_shape_or_range(self, bad):
        with pytest.raises(ValueError):
            bell_density_matrix(bad)

    @given(st.tuples(unit, unit, unit))
    def test_hermitian_unit_trace(self, c):
        rho = bell_density_matrix(c)
        assert np.allclose(rho, rho.conj().T, atol=0)
        assert abs(np.trace(rho) - 1) < 1e-14


class TestEigenvalues:
    def test_mixed(self):
        np.testing.assert_allclose(eigenvalues_bell((0, 0, 0)), [0.25] * 4)

    def test_unphysical_vertex_partner(self):
        assert -0.5 in eigenvalues_bell((1, 1, 1))

    def test_example_against_dense(self):
        # 0.175 appears on the diagonal only; the blocks give (1.3 +- 0.1)/4, (0.7 +- 0.3)/4
        lam = eigenvalues_bell((0.1, 0.2, 0.3))
        np.testing.assert_allclose(lam, [0.35, 0.30, 0.25, 0.10], atol=1e-15)
        np.testing.assert_allclose(lam, hermitian_eigenvalues(bell_density_matrix((0.1, 0.2, 0.3))),
                                   atol=1e-10)

    @given(st.tuples(unit, unit, unit))
    def test_closed_form_matches_dense(self, c):
        np.testing.assert_allclose(eigenvalues_bell(c),
                                   hermitian_eigenvalues(bell_density_matrix(c)), atol=1e-10)

    @given(st.tuples(unit, unit, unit))
    def test_sorted_descending_and_sum_one(self, c):
        lam = eigenvalues_bell(c)
        assert np.all(np.diff(lam) <= 0)
        assert abs(lam.sum() - 1) < 1e-14


class TestPhysicality:
    @pytest.mark.parametrize("c, expected", [
        ((0, 0, 0), True),
        ((1, 1, 1), False),
        ((0.1, 0.2, 0.3), True),
        ((1, -1, 1), True),
        ((0.5, 0.5, 0.5), False),
    ])
    def test_examples(self, c, expected):
        assert is_physical(c) is expected

    @pytest.mark.parametrize("vertex", [(1, 1, -1), (-1, -1, -1), (1, -1, 1), (-1, 1, 1)])
    def test_tetrahedron_vertices(self, vertex):
        assert is_physical(vertex)

    @given(physical_c, physical_c, st.floats(0, 1))
    def test_convex(self, a, b, t):
        mix = t * np.asarray(a) + (1 - t) * np.asarray(b)
        assert is_physical(mix)

    @given(physical_c)
    def test_equivalent_to_positive_semidefinite(self, c):
        assert hermitian_eigenvalues(bell_density_matrix(c))[-1] >= -1e-10


class TestHermitianEigenvalues:
    def test_zero(self):
        np.testing.assert_array_equal(hermitian_eigenvalues(np.zeros((4, 4))), np.zeros(4))

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.diag([1.0, 2, 3, 4])), [4, 3, 2, 1])

    def test_rejects_non_hermitian(self):
        m = np.zeros((2, 2))
        m[0, 1] = 1.0
        with pytest.raises(ValueError, match="Hermitian"):
            hermitian_eigenvalues(m)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian_eigenvalues(np.zeros((2, 3)))

    def test_stack(self, rng):
        a = rng.normal(size=(5, 4, 4)) + 1j * rng.normal(size=(5, 4, 4))
        h = a + np.conj(np.swapaxes(a, -1, -2))
        lam = hermitian_eigenvalues(h)
        assert lam.shape == (5, 4)
        np.testing.assert_allclose(lam[2], hermitian_eigenvalues(h[2]))


class TestTraceNorm:
    def test_zero(self):
        assert trace_norm(np.zeros((4, 4))) == 0

    def test_diagonal(self):
        assert trace_norm(np.diag([1, -1, 0.5, -0.5])) == pytest.approx(3)

    def test_shifted_bell_state(self):
        c = (0.1, 0.2, 0.3)
        expected = np.sum(np.abs(eigenvalues_bell(c) - 0.25))
        assert trace_norm(bell_density_matrix(c) - np.eye(4) / 4) == pytest.approx(expected, abs=1e-14)

    def test_equals_nuclear_norm(self, rng):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = a + a.conj().T
        assert trace_norm(h) == pytest.approx(np.linalg.norm(h, "nuc"), rel=1e-12)

    def test_stack_returns_array(self):
        out = trace_norm(np.stack([np.eye(2), -2 * np.eye(2)]))
        np.testing.assert_allclose(out, [2, 4])


class TestCorrelationVector:
    def test_round_trip_example(self):
        c, res = correlation_vector(bell_density_matrix((0.1, 0.2, 0.3)), return_residual=True)
        np.testing.assert_allclose(c, (0.1, 0.2, 0.3), atol=1e-15)
        assert res <= 1e-15

    def test_identity(self):
        assert correlation_vector(np.eye(4) / 4) == (0, 0, 0)

    def test_product_state_reports_residual(self):
        rho = np.zeros((4, 4))
        rho[0, 0] = 1
        c, res = correlation_vector(rho, return_residual=True)
        assert c == (0, 0, 1)
        assert res == pytest.approx(1.0)
        t = pauli_components(rho)
        assert t[3, 0] == t[0, 3] == 1

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError, match="trace"):
            correlation_vector(np.eye(4))

    @given(st.tuples(unit, unit, unit))
    def test_round_trip(self, c):
        np.testing.assert_allclose(correlation_vector(bell_density_matrix(c)), c, atol=1e-12)

    def test_parse(self):
        assert CorrelationVector.parse(" 1, -0.1,0.1") == (1.0, -0.1, 0.1)
        for bad in ("1,2", "a,b,c", "nan,0,0"):
            with pytest.raises(ValueError):
                CorrelationVector.parse(bad)

    def test_as_vector_accepts_rounding_slack(self):
        assert as_vector((1 + 1e-12, 0, 0))[0] > 1
