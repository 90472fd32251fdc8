"""Periodic XXZ chain by exact diagonalization in fixed-magnetization sectors.

    H = -(1/2) sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Delta Z_i Z_{i+1}),  J = 1

Basis states are integers whose bit ``i`` is 1 when site ``i`` points down.
With this sign convention Delta > 1 is the Ising ferromagnet (ground doublet
all-up / all-down), -1 < Delta < 1 the gapless phase and Delta < -1 the
antiferromagnet.

Nearest-neighbour correlators come from the two-site reduced density matrix
of the ground state. A degenerate ground multiplet is replaced by its
equal-weight mixture, which restores the spin-flip symmetry and makes the
reduced state Bell-diagonal.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from . import _parallel
from .channels import ChannelKind, bell_form_residual
from .dynamics import critical_points, detect_kinks, trajectory
from .qstate import CORRELATORS, SIGMA_X, CorrelationVector

L_MAX = 16
DEGENERACY_TOL = 1e-9
RESIDUAL_TOL = 1e-10
DENSE_LIMIT = 1500
CRITICAL_MARGIN = 0.1
_SEED = 20130411


@dataclass(frozen=True)
class ChainSpec:
    length: int
    delta: float
    max_length: int = L_MAX

    def __post_init__(self):
        if self.length < 2 or self.length % 2:
            raise ValueError(f"chain length must be even and >= 2, got {self.length}")
        if self.length > self.max_length:
            raise ValueError(
                f"L={self.length} exceeds the configured limit L_max={self.max_length}")
        if not math.isfinite(self.delta):
            raise ValueError("anisotropy must be finite")

    def with_delta(self, delta: float) -> "ChainSpec":
        return ChainSpec(self.length, delta, self.max_length)


@dataclass(frozen=True)
class Sector:
    length: int
    n_down: int | None  # None for the full 2**L space
    basis: np.ndarray
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def translate(self, v: np.ndarray) -> np.ndarray:
        """Shift a sector vector by one site (i -> i + 1, periodic)."""
        L = self.length
        mask = (1 << L) - 1
        shifted = ((self.basis << 1) | (self.basis >> (L - 1))) & mask
        out = np.empty_like(v)
        out[np.searchsorted(self.basis, shifted)] = v
        return out


def sector_basis(length: int, n_down: int) -> np.ndarray:
    """Sorted integers in [0, 2**L) with ``n_down`` set bits."""
    states = np.arange(1 << length, dtype=np.int64)
    counts = np.zeros_like(states)
    for i in range(length):
        counts += (states >> i) & 1
    return states[counts == n_down]


def build_hamiltonian(spec: ChainSpec, n_down: int | None = None) -> Sector:
    """Sparse Hamiltonian restricted to ``n_down`` flipped spins (or the full space).

    Every bond (i, i+1 mod L) contributes, so for L = 2 the single pair is
    counted twice, as the periodic sum prescribes.
    """
    L = spec.length
    if n_down is None:
        basis = np.arange(1 << L, dtype=np.int64)
    else:
        if not 0 <= n_down <= L:
            raise ValueError(f"n_down must lie in [0, {L}]")
        basis = sector_basis(L, n_down)
    dim = len(basis)
    diag = np.zeros(dim)
    rows, cols = [], []
    for i in range(L):
        j = (i + 1) % L
        bi = (basis >> i) & 1
        bj = (basis >> j) & 1
        anti = bi != bj
        diag += np.where(anti, 0.5 * spec.delta, -0.5 * spec.delta)
        # (XX + YY)|ud> = 2|du>, times -1/2
        src = np.flatnonzero(anti)
        flipped = basis[src] ^ ((1 << i) | (1 << j))
        rows.append(np.searchsorted(basis, flipped))
        cols.append(src)
    rows = np.concatenate(rows) if rows else np.empty(0, int)
    cols = np.concatenate(cols) if cols else np.empty(0, int)
    off = sp.csr_matrix((-np.ones(len(rows)), (rows, cols)), shape=(dim, dim))
    matrix = (off + sp.diags(diag)).tocsr()
    return Sector(L, n_down, basis, matrix)


def _lowest(sector: Sector, count: int = 3) -> tuple[np.ndarray, np.ndarray]:
    h = sector.matrix
    dim = sector.dim
    if dim <= DENSE_LIMIT:
        vals, vecs = np.linalg.eigh(h.toarray())
        vals, vecs = vals[:count], vecs[:, :count]
    else:
        v0 = np.random.default_rng(_SEED).standard_normal(dim)
        vals, vecs = eigsh(h, k=min(count, dim - 1), which="SA", v0=v0, tol=0)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    for e, v in zip(vals, vecs.T):
        res = np.linalg.norm(h @ v - e * v) / max(1.0, abs(e))
        if res > RESIDUAL_TOL:
            raise RuntimeError(
                f"eigensolver did not converge in sector n_down={sector.n_down} "
                f"(relative residual {res:.2e})")
    return vals, vecs


def two_site_rdm(length: int, basis: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Reduced state of sites 0 and 1 (site 0 is the first tensor factor)."""
    pair = 2 * (basis & 1) + ((basis >> 1) & 1)
    _, rest = np.unique(basis >> 2, return_inverse=True)
    m = np.zeros((4, rest.max() + 1), dtype=complex)
    m[pair, rest] = psi
    return m @ m.conj().T


@dataclass(frozen=True)
class GroundStateResult:
    spec: ChainSpec
    energy: float
    degeneracy: int
    gxx: float
    gyy: float
    gzz: float
    rdm: np.ndarray = field(repr=False)
    sectors: tuple = ()

    @property
    def energy_density(self) -> float:
        return self.energy / self.spec.length

    @property
    def c(self) -> CorrelationVector:
        c1 = (self.gxx + self.gyy) / 2
        return CorrelationVector(c1, c1, self.gzz)

    @property
    def bell_residual(self) -> float:
        return bell_form_residual(self.rdm)


def sector_energies(spec: ChainSpec, count: int = 3) -> dict:
    """Lowest ``count`` energies and vectors for every magnetization sector.

    Sectors related by a global spin flip have identical spectra, so only
    ``n_down <= L/2`` are diagonalized.
    """
    out = {}
    for n in range(spec.length // 2 + 1):
        sector = build_hamiltonian(spec, n)
        vals, vecs = _lowest(sector, count)
        out[n] = (sector, vals, vecs)
    return out


def ground_energy(spec: ChainSpec) -> float:
    return min(float(v[1][0]) for v in sector_energies(spec, 1).values())


def ground_state(spec: ChainSpec) -> GroundStateResult:
    """Ground-state energy and nearest-neighbour correlators of the chain."""
    L = spec.length
    data = sector_energies(spec)
    e0 = min(float(vals[0]) for _, vals, _ in data.values())
    xx = np.kron(SIGMA_X, SIGMA_X)
    rdm = np.zeros((4, 4), dtype=complex)
    members = []
    for n, (sector, vals, vecs) in data.items():
        for e, v in zip(vals, vecs.T):
            if e - e0 > DEGENERACY_TOL:
                continue
            r = two_site_rdm(L, sector.basis, v)
            rdm += r
            members.append(n)
            if n != L - n:
                # spin-flipped partner in sector L - n
                rdm += xx @ r @ xx
                members.append(L - n)
    rdm /= len(members)
    gxx, gyy, gzz = (float(np.real(np.trace(rdm @ s))) for s in CORRELATORS)
    return GroundStateResult(spec, e0, len(members), gxx, gyy, gzz, rdm, tuple(sorted(members)))


@dataclass(frozen=True)
class HellmannFeynmanResult:
    c1: float
    c3: float
    denergy: float
    c1_residual: float
    c3_residual: float


def hellmann_feynman_check(spec: ChainSpec, step: float = 1e-4) -> HellmannFeynmanResult:
    """Compare measured correlators with derivatives of the energy density.

    With e(Delta) the ground energy per site, ``c1 = Delta e' - e`` and
    ``c3 = -2 e'``; e' is taken by central differences of size ``step``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if min(abs(spec.delta - 1), abs(spec.delta + 1)) < CRITICAL_MARGIN:
        warnings.warn(
            f"Delta={spec.delta} is near a transition; finite-size level crossings "
            "can spoil the energy derivative", RuntimeWarning, stacklevel=2)
    gs = ground_state(spec)
    L = spec.length
    e_plus = ground_energy(spec.with_delta(spec.delta + step)) / L
    e_minus = ground_energy(spec.with_delta(spec.delta - step)) / L
    de = (e_plus - e_minus) / (2 * step)
    c1, _, c3 = gs.c
    eps = gs.energy_density
    return HellmannFeynmanResult(
        c1, c3, de,
        abs(c1 - (spec.delta * de - eps)),
        abs(c3 + 2 * de),
    )


def richardson_limit(lengths, values) -> float:
    """Extrapolate ``values(L)`` to L -> infinity as a polynomial in 1/L**2 (Neville)."""
    x = 1.0 / np.asarray(lengths, dtype=float) ** 2
    p = np.asarray(values, dtype=float).copy()
    if len(x) != len(p) or len(x) == 0:
        raise ValueError("lengths and values must be non-empty and of equal size")
    n = len(x)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i])
    return float(p[0])


def thermodynamic_correlations(delta: float, lengths=(8, 10, 12, 14, 16)) -> CorrelationVector:
    """Nearest-neighbour correlation vector extrapolated from finite chains."""
    results = [ground_state(ChainSpec(L, delta, max(L_MAX, L))) for L in lengths]
    c1 = richardson_limit(lengths, [r.c.c1 for r in results])
    c3 = richardson_limit(lengths, [r.c.c3 for r in results])
    return CorrelationVector(c1, c1, c3)


@dataclass(frozen=True)
class SuddenChangeRow:
    delta: float
    length: int
    channel: ChannelKind
    c: CorrelationVector
    analytic: int
    numeric: int
    degenerate: bool
    kinks: tuple

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "length": self.length,
            "channel": self.channel.value,
            "c1": self.c.c1,
            "c3": self.c.c3,
            "analytic_sc": self.analytic,
            "numeric_sc": self.numeric,
            "degenerate": self.degenerate,
            "kinks": list(self.kinks),
        }


def _clip_cube(c: CorrelationVector) -> tuple:
    # round-off can push |G| a hair past 1 in the polarized phase
    return tuple(float(np.clip(x, -1.0, 1.0)) for x in c)


def xxz_sudden_change_table(deltas, length: int = 12, channels=tuple(ChannelKind),
                            steps: int = 1000, workers: int | None = None) -> list[SuddenChangeRow]:
    """Sudden-change counts of the nearest-neighbour discord for each (Delta, channel)."""
    deltas = [float(d) for d in deltas]
    for d in deltas:
        if abs(abs(d) - 1) <= 1e-9:
            raise ValueError("Delta = +-1 is a transition point; offset it")
        if abs(abs(d) - 1) < CRITICAL_MARGIN:
            warnings.warn(f"Delta={d} is within {CRITICAL_MARGIN} of a transition",
                          RuntimeWarning, stacklevel=2)
    kinds = [ChannelKind.parse(k) for k in channels]
    states = _parallel.ordered_map(
        lambda d: ground_state(ChainSpec(length, d, max(L_MAX, length))), deltas, workers)
    rows = []
    for d, gs in zip(deltas, states):
        c = _clip_cube(gs.c)
        for kind in kinds:
            report = critical_points(c, kind)
            kinks = detect_kinks(trajectory(c, kind, steps))
            rows.append(SuddenChangeRow(d, length, kind, CorrelationVector(*c),
                                        len(report.points), len(kinks),
                                        report.degenerate, tuple(kinks)))
    return rows
