import math
from functools import reduce

import numpy as np
import pytest

from discordlab.channels import ChannelKind, apply_local_channel, kraus_set
from discordlab.discord import oracle_minimize
from discordlab.qstate import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, correlation_vector
from discordlab.xxz import (
    DENSE_LIMIT,
    ChainSpec,
    build_hamiltonian,
    ground_energy,
    ground_state,
    hellmann_feynman_check,
    richardson_limit,
    sector_basis,
    thermodynamic_correlations,
    xxz_sudden_change_table,
    _lowest,
)


def site_op(op, i, L):
    # bit i of the basis index is site i, with site 0 the least significant bit
    return reduce(np.kron, [op if k == i else I2 for k in reversed(range(L))])


def dense_xxz(L, delta):
    """Independent dense construction from Pauli strings."""
    h = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L):
        j = (i + 1) % L
        for s, w in ((SIGMA_X, 1.0), (SIGMA_Y, 1.0), (SIGMA_Z, delta)):
            h -= 0.5 * w * site_op(s, i, L) @ site_op(s, j, L)
    return h


def free_fermion_energy(L):
    """Ground energy of the periodic XX chain via Jordan-Wigner fermions."""
    best = math.inf
    for n in range(L + 1):
        shift = 0.0 if n % 2 else 0.5  # odd particle number: periodic modes
        eps = sorted(-2 * math.cos(2 * math.pi * (m + shift) / L) for m in range(L))
        best = min(best, sum(eps[:n]))
    return best


class TestChainSpec:
    @pytest.mark.parametrize("L", [3, 0, 18])
    def test_invalid_length(self, L):
        with pytest.raises(ValueError):
            ChainSpec(L, 0.5)

    def test_limit_can_be_raised(self):
        assert ChainSpec(18, 0.5, max_length=18).length == 18

    def test_non_finite_delta(self):
        with pytest.raises(ValueError):
            ChainSpec(8, math.nan)


class TestHamiltonian:
    @pytest.mark.parametrize("L, delta", [(2, 1.0), (4, 0.3), (6, -1.7)])
    def test_matches_dense_pauli_construction(self, L, delta):
        h = build_hamiltonian(ChainSpec(L, delta)).matrix.toarray()
        np.testing.assert_allclose(h, dense_xxz(L, delta), atol=1e-14)

    def test_two_sites_isotropic(self):
        # both periodic bonds join the same pair: H = -(XX+YY+ZZ), triplet -1, singlet 3
        h = build_hamiltonian(ChainSpec(2, 1.0)).matrix.toarray()
        assert h.shape == (4, 4)
        np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1, -1, -1, 3], atol=1e-14)
        assert ground_energy(ChainSpec(2, 1.0)) == pytest.approx(-1)

    @pytest.mark.parametrize("L", [4, 6, 8, 10])
    def test_free_fermion_energy(self, L):
        assert ground_energy(ChainSpec(L, 0.0)) == pytest.approx(free_fermion_energy(L), abs=1e-10)

    def test_four_site_xx_value(self):
        # modes at +-pi/4 filled twice over: -4 cos(pi/4)
        assert ground_energy(ChainSpec(4, 0.0)) / 4 == pytest.approx(-1 / math.sqrt(2), abs=1e-12)

    def test_sectors_reassemble_full_spectrum(self):
        spec = ChainSpec(6, 0.7)
        full = np.linalg.eigvalsh(build_hamiltonian(spec).matrix.toarray())
        parts = np.concatenate([np.linalg.eigvalsh(build_hamiltonian(spec, n).matrix.toarray())
                                for n in range(7)])
        np.testing.assert_allclose(np.sort(parts), full, atol=1e-12)

    @pytest.mark.parametrize("L, n", [(4, 2), (8, 3), (10, 5)])
    def test_hermitian_and_sector_size(self, L, n):
        s = build_hamiltonian(ChainSpec(L, -0.4), n)
        assert s.dim == math.comb(L, n)
        assert abs(s.matrix - s.matrix.T).max() == 0

    @pytest.mark.parametrize("L, delta", [(6, 0.5), (8, -1.3), (10, 2.0)])
    def test_translation_symmetry(self, L, delta, rng):
        s = build_hamiltonian(ChainSpec(L, delta), L // 2)
        v = rng.normal(size=s.dim)
        np.testing.assert_allclose(s.matrix @ s.translate(v), s.translate(s.matrix @ v), atol=1e-12)

    def test_translation_cycles(self, rng):
        s = build_hamiltonian(ChainSpec(6, 0.1), 3)
        v = rng.normal(size=s.dim)
        w = v
        for _ in range(6):
            w = s.translate(w)
        np.testing.assert_array_equal(w, v)

    def test_sector_basis_sorted(self):
        b = sector_basis(6, 2)
        assert list(b) == sorted(b) and len(b) == 15

    def test_sparse_solver_path(self):
        s = build_hamiltonian(ChainSpec(14, 0.3), 7)
        assert s.dim > DENSE_LIMIT
        vals, vecs = _lowest(s, 2)
        for e, v in zip(vals, vecs.T):
            assert np.linalg.norm(s.matrix @ v - e * v) <= 1e-10 * max(1.0, abs(e))


class TestGroundState:
    @pytest.mark.parametrize("delta", [-2.0, -1.5, -0.5, 0.0, 0.5, 1.5, 2.0])
    def test_invariants(self, delta):
        gs = ground_state(ChainSpec(12, delta))
        assert abs(gs.gxx - gs.gyy) <= 1e-8
        assert gs.energy_density == pytest.approx(-(gs.gxx + gs.gyy + delta * gs.gzz) / 2, abs=1e-8)
        assert gs.bell_residual <= 1e-8
        assert all(abs(x) <= 1 + 1e-12 for x in gs.c)

    @pytest.mark.parametrize("delta, larger", [
        (-0.5, "c1"), (0.0, "c1"), (0.5, "c1"),
        (-1.5, "c3"), (-2.0, "c3"), (1.5, "c3"), (2.0, "c3"),
    ])
    def test_phase_ordering(self, delta, larger):
        c1, _, c3 = ground_state(ChainSpec(12, delta)).c
        assert (abs(c1) > abs(c3)) == (larger == "c1")

    @pytest.mark.parametrize("L", [4, 8, 12])
    def test_polarized_phase(self, L):
        gs = ground_state(ChainSpec(L, 2.0))
        assert gs.c == pytest.approx((0, 0, 1), abs=1e-12)
        assert gs.degeneracy == 2  # all up and all down; XX+YY splits the rest
        assert gs.energy_density == pytest.approx(-1.0)

    @pytest.mark.parametrize("L", [8, 10, 12])
    def test_free_fermion_correlators(self, L):
        gs = ground_state(ChainSpec(L, 0.0))
        c1 = 2 / (L * math.sin(math.pi / L))
        assert gs.c.c1 == pytest.approx(c1, abs=1e-10)
        assert gs.c.c3 == pytest.approx(-c1**2, abs=1e-10)

    def test_rdm_is_a_state(self):
        rho = ground_state(ChainSpec(10, -0.7)).rdm
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12

    def test_finite_size_sequence_monotone(self):
        vals = [ground_state(ChainSpec(L, 0.4)).c.c1 for L in (8, 10, 12, 14)]
        steps = np.diff(vals)
        assert np.all(steps < 0) and np.all(np.abs(steps[1:]) < np.abs(steps[:-1]))


class TestHellmannFeynman:
    def test_free_point(self):
        r = hellmann_feynman_check(ChainSpec(10, 0.0))
        assert max(r.c1_residual, r.c3_residual) <= 1e-6

    def test_polarized(self):
        r = hellmann_feynman_check(ChainSpec(8, 2.0))
        assert r.denergy == pytest.approx(-0.5, abs=1e-8)
        assert max(r.c1_residual, r.c3_residual) <= 1e-6

    @pytest.mark.parametrize("delta", [-1.5, 0.0, 0.5])
    def test_default_tolerance(self, delta):
        r = hellmann_feynman_check(ChainSpec(12, delta))
        assert max(r.c1_residual, r.c3_residual) <= 1e-5

    def test_second_order(self):
        # steps large enough that truncation, not round-off, dominates
        coarse = hellmann_feynman_check(ChainSpec(10, 0.5), 0.02)
        fine = hellmann_feynman_check(ChainSpec(10, 0.5), 0.01)
        assert coarse.c3_residual / fine.c3_residual >= 3.9
        assert coarse.c1_residual / fine.c1_residual >= 3.9

    def test_warns_near_transition(self):
        with pytest.warns(RuntimeWarning, match="transition"):
            hellmann_feynman_check(ChainSpec(8, 0.95))

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            hellmann_feynman_check(ChainSpec(8, 0.0), 0.0)


class TestExtrapolation:
    def test_richardson_exact_for_polynomial(self):
        Ls = [8, 10, 12, 14]
        vals = [0.7 + 2 / L**2 - 5 / L**4 + 3 / L**6 for L in Ls]
        assert richardson_limit(Ls, vals) == pytest.approx(0.7, abs=1e-12)

    def test_richardson_validates(self):
        with pytest.raises(ValueError):
            richardson_limit([8, 10], [1.0])

    @pytest.mark.slow
    def test_xx_chain_limit(self):
        c = thermodynamic_correlations(0.0)
        assert c.c1 == pytest.approx(2 / math.pi, abs=1e-6)
        assert c.c3 == pytest.approx(-4 / math.pi**2, abs=1e-6)


class TestSuddenChangeTable:
    def test_antiferromagnetic_bit_flip(self):
        (row,) = xxz_sudden_change_table([-1.5], 12, ["bf"])
        assert row.numeric == row.analytic == 1

    def test_gapless_dephasing(self):
        (row,) = xxz_sudden_change_table([0.0], 12, ["pf"])
        assert row.numeric == row.analytic == 0

    def test_polarized_all_channels(self):
        rows = xxz_sudden_change_table([2.0], 8)
        assert [r.channel for r in rows] == list(ChannelKind)
        assert all(r.numeric == r.analytic == 0 for r in rows)
        assert rows[0].c == pytest.approx((0, 0, 1))

    def test_numeric_matches_analytic(self):
        for r in xxz_sudden_change_table([-2.5, -1.5, -0.5, 0.5, 1.5], 10):
            assert r.numeric == r.analytic, r

    def test_rejects_transition_point(self):
        with pytest.raises(ValueError):
            xxz_sudden_change_table([1.0], 8)

    def test_warns_close_to_transition(self):
        with pytest.warns(RuntimeWarning):
            xxz_sudden_change_table([-1.05], 8, ["bf"])

    def test_row_dict(self):
        (row,) = xxz_sudden_change_table([0.0], 8, ["gad"])
        d = row.as_dict()
        assert d["channel"] == "gad" and d["length"] == 8 and d["numeric_sc"] == 0

    def test_gad_antiferromagnet_has_no_kink(self):
        # c1 = c2 = a < |c3|: the two transverse components decay together and
        # stay the middle value, so D_G = a (1 - gamma) is a straight line.
        # Checked on the chain's own two-site state through Kraus maps and the
        # brute-force minimum rather than the closed forms.
        gs = ground_state(ChainSpec(12, -1.5))
        a, _, c3 = gs.c
        assert 0 < a < abs(c3)
        values = []
        for g in np.linspace(0, 1, 11):
            rho = apply_local_channel(gs.rdm, kraus_set("gad", 0.5, g))
            c = correlation_vector(rho)
            values.append(oracle_minimize(c, 2000).value)
        np.testing.assert_allclose(values, a * (1 - np.linspace(0, 1, 11)), atol=1e-9)
        (row,) = xxz_sudden_change_table([-1.5], 12, ["gad"])
        assert row.numeric == row.analytic == 0

