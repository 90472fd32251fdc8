"""Trace-norm and Hilbert-Schmidt geometric discord of Bell-diagonal states.

Two independent routes are provided for the trace-norm discord:

* :func:`gqd_1norm`, the closed form (middle of the sorted ``|c_i|``);
* :func:`gqd_1norm_oracle`, a brute-force minimisation of
  ``||rho - Phi_n(rho)||_1`` over projective measurements on qubit A, where
  ``Phi_n`` dephases A in the eigenbasis of ``n·sigma``.

The oracle only searches measured states ``Phi_n(rho)``, not the full set of
classical-quantum states; for Bell-diagonal inputs that restriction is taken
as given.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import _parallel
from .qstate import I2, PAULI, as_vector, bell_density_matrix, is_physical, trace_norm

UNIT_TOL = 1e-12
GOLDEN = (math.sqrt(5) - 1) / 2


class DiscordValue(float):
    """A float carrying how it was obtained: ``"analytic"`` or ``"oracle"``."""

    method: str

    def __new__(cls, value, method: str = "analytic"):
        obj = super().__new__(cls, value)
        obj.method = method
        return obj

    def __repr__(self):
        return f"DiscordValue({float(self)!r}, method={self.method!r})"


def _require_physical(c) -> np.ndarray:
    arr = as_vector(c)
    if not is_physical(arr):
        raise ValueError(f"correlation vector {tuple(arr)} is not a physical Bell-diagonal state")
    return arr


def intermediate_abs(c) -> np.ndarray:
    """Middle of the sorted ``|c_i|`` along the last axis (vectorised, no checks)."""
    return np.sort(np.abs(np.asarray(c, dtype=float)), axis=-1)[..., 1]


def hs_discord(c) -> np.ndarray:
    """``(sum c_i^2 - max c_i^2) / 4`` along the last axis (vectorised, no checks)."""
    sq = np.asarray(c, dtype=float) ** 2
    return (np.sum(sq, axis=-1) - np.max(sq, axis=-1)) / 4


def gqd_1norm(c) -> DiscordValue:
    """Trace-norm geometric discord, ``int[|c1|, |c2|, |c3|]``.

    Raises ValueError for points outside the physical tetrahedron.
    """
    return DiscordValue(intermediate_abs(_require_physical(c)), "analytic")


def gqd_2norm(c) -> DiscordValue:
    """Hilbert-Schmidt geometric discord ``(|c|^2 - max c_i^2) / 4``."""
    return DiscordValue(hs_discord(_require_physical(c)), "analytic")


def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape[-1] != 3:
        raise ValueError(f"measurement direction must have 3 components, got shape {n.shape}")
    norms = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norms - 1) > UNIT_TOL):
        raise ValueError("measurement direction must be a unit vector")
    return n


def _measure_stack(rho: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """Phi_n(rho) for every row of ``ns`` (shape (k, 3)) -> (k, 4, 4)."""
    proj = np.einsum("ki,iab->kab", ns.astype(complex), np.array(PAULI))
    plus = np.einsum("kab,cd->kacbd", (I2 + proj) / 2, I2).reshape(-1, 4, 4)
    minus = np.einsum("kab,cd->kacbd", (I2 - proj) / 2, I2).reshape(-1, 4, 4)
    return plus @ rho @ plus + minus @ rho @ minus


def measure_along(c, n) -> np.ndarray:
    """Dephase qubit A of ``rho(c)`` along ``n``: sum_k (P_k⊗I) rho (P_k⊗I)."""
    n = _unit(n)
    if n.ndim != 1:
        raise ValueError("measure_along takes a single direction")
    return _measure_stack(bell_density_matrix(c), n[None, :])[0]


def trace_distance_to_measured(c, n) -> float | np.ndarray:
    """``||rho(c) - Phi_n(rho(c))||_1``; ``n`` may be one direction or a (k, 3) stack."""
    n = _unit(n)
    rho = bell_density_matrix(_require_physical(c))
    ns = np.atleast_2d(n)
    d = trace_norm(rho[None] - _measure_stack(rho, ns))
    return float(d[0]) if n.ndim == 1 else d


def fibonacci_sphere(count: int) -> np.ndarray:
    """``count`` Fibonacci-lattice points on the unit sphere, in index order."""
    if count < 1:
        raise ValueError("count must be positive")
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    r = np.sqrt(1 - z * z)
    phi = i * math.pi * (3 - math.sqrt(5))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def fibonacci_octant(count: int) -> np.ndarray:
    """About ``count`` lattice directions covering the octant ``n_i >= 0``.

    A Bell-diagonal state commutes with every ``sigma_k (x) sigma_k``, which
    flips the sign of two components of the measurement direction; together
    with ``n -> -n`` any sign pattern is reachable, so one octant holds the
    full range of the objective. The points are the octant members of an
    ``8 * count`` point sphere lattice, which keeps its local regularity.
    """
    pts = fibonacci_sphere(8 * count)
    return pts[np.all(pts >= 0, axis=1)]


class OracleResult(NamedTuple):
    value: float
    direction: np.ndarray
    grid_value: float
    grid_direction: np.ndarray
    evaluations: int


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _tangent_frame(n0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(n0[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n0, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n0, e1)


def _refine(objective, n0: np.ndarray, width: float, step: float = 1e-8,
            max_sweeps: int = 200) -> tuple[np.ndarray, float, int]:
    """Coordinate-wise golden-section descent over two rotation angles about ``n0``."""
    e1, e2 = _tangent_frame(n0)
    calls = 0

    def direction(a: float, b: float) -> np.ndarray:
        # rotate n0 by a about e2 (towards e1) and then by b towards e2
        v = math.cos(a) * n0 + math.sin(a) * e1
        return math.cos(b) * v + math.sin(b) * e2

    def f(a: float, b: float) -> float:
        nonlocal calls
        calls += 1
        return objective(direction(a, b))

    angles = [0.0, 0.0]
    best = f(0.0, 0.0)
    w = width
    for _ in range(max_sweeps):
        moved = 0.0
        for axis in (0, 1):
            centre = angles[axis]

            def line(x, axis=axis):
                trial = list(angles)
                trial[axis] = x
                return f(*trial)

            x, fx = _golden_min(line, centre - w, centre + w, step)
            if fx < best:
                moved = max(moved, abs(x - centre))
                angles[axis], best = x, fx
        if moved < step:
            break
        w = max(2 * moved, 10 * step)
    return direction(*angles), best, calls


def oracle_minimize(c, resolution: int = 10_000, refine: bool = True,
                    workers: int | None = None) -> OracleResult:
    """Brute-force minimum of the trace distance to measured states.

    The Fibonacci grid is evaluated in fixed-size chunks (possibly in
    parallel); the argmin takes the lowest grid index on ties so the result
    does not depend on the worker count.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 directions")
    arr = _require_physical(c)
    rho = bell_density_matrix(arr)
    grid = fibonacci_octant(resolution)
    chunks = [grid[i:i + 2048] for i in range(0, len(grid), 2048)]

    def evaluate(ns):
        return trace_norm(rho[None] - _measure_stack(rho, ns))

    values = np.concatenate(_parallel.ordered_map(evaluate, chunks, workers))
    k = int(np.argmin(values))
    grid_value, grid_dir = float(values[k]), grid[k]
    if not refine:
        return OracleResult(grid_value, grid_dir, grid_value, grid_dir, len(grid))

    def objective(n):
        return float(trace_norm(rho - _measure_stack(rho, n[None, :])[0]))

    spacing = math.sqrt(0.5 * math.pi / len(grid))
    n_best, f_best, calls = _refine(objective, grid_dir, 2 * spacing)
    if f_best > grid_value:
        n_best, f_best = grid_dir, grid_value
    return OracleResult(f_best, n_best, grid_value, grid_dir, len(grid) + calls)


def gqd_1norm_oracle(c, resolution: int = 10_000, refine: bool = True) -> DiscordValue:
    """Trace-norm discord from :func:`oracle_minimize`, tagged ``"oracle"``."""
    return DiscordValue(oracle_minimize(c, resolution, refine).value, "oracle")
