"""Discord along decoherence trajectories: sudden changes and freezing.

A sudden change is a jump in the slope of a discord curve as a function of
the decoherence parameter. For Bell-diagonal states it happens when the
ordering of the decaying ``|c'_i|`` changes which component is the middle
one. :func:`critical_points` locates these analytically;
:func:`detect_kinks` finds them numerically on a sampled curve so the two can
be cross-checked.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _parallel
from .channels import DECAY_POWERS, ChannelKind, evolve_correlations
from .discord import hs_discord, intermediate_abs
from .qstate import CorrelationVector, as_vector, is_physical

TIE_TOL = 1e-12
KINK_RATIO = 10.0
KINK_WINDOW = 10
KINK_GUARD = 2
FREEZE_RTOL = 1e-9
FREEZE_MIN_CELLS = 3
MIN_SAMPLES = 50
# below this, doubles lose relative precision (subnormal range is reached
# by second differences)
_FULL_PRECISION_FLOOR = np.finfo(float).tiny * 2.0**53

# index of the component each flip channel leaves untouched
_CONSTANT_INDEX = {ChannelKind.BF: 0, ChannelKind.PF: 2, ChannelKind.BPF: 1}


@dataclass(frozen=True)
class Trajectory:
    kind: ChannelKind
    c: CorrelationVector
    params: np.ndarray
    cp: np.ndarray  # evolved correlation vectors, shape (steps, 3)
    dg: np.ndarray  # trace-norm discord
    d2: np.ndarray  # Hilbert-Schmidt discord

    def __len__(self):
        return len(self.params)

    def curve(self, which: str) -> np.ndarray:
        if which in ("dg", "dg1", "D_G"):
            return self.dg
        if which in ("d2", "dg2", "D_2"):
            return self.d2
        raise ValueError(f"unknown curve {which!r}; use 'dg' or 'd2'")


@dataclass(frozen=True)
class CriticalPointReport:
    kind: ChannelKind
    c: CorrelationVector
    conditions: dict
    points: tuple
    degenerate: bool
    physical: bool = True

    @property
    def double(self) -> bool:
        return all(self.conditions.values())

    @property
    def classification(self) -> str:
        if self.double:
            return "double"
        return "single" if self.points else "none"

    def as_dict(self) -> dict:
        return {
            "channel": self.kind.value,
            "c": [float(x) for x in self.c],
            "conditions": dict(self.conditions),
            "points": [float(p) for p in self.points],
            "double": self.double,
            "degenerate": self.degenerate,
            "classification": self.classification,
            "physical": self.physical,
        }


@dataclass(frozen=True)
class FreezingInterval:
    start: float
    end: float
    value: float

    @property
    def width(self) -> float:
        return self.end - self.start


def trajectory(c, kind, steps: int = 1000) -> Trajectory:
    """Sample both discords on a uniform grid of the decoherence parameter."""
    kind = ChannelKind.parse(kind)
    if steps < 2:
        raise ValueError("steps must be >= 2")
    arr = as_vector(c)
    if not is_physical(arr):
        raise ValueError(f"correlation vector {tuple(arr)} is not physical")
    params = np.linspace(0.0, 1.0, steps)
    cp = evolve_correlations(arr, kind, params)
    return Trajectory(kind, CorrelationVector(*map(float, arr)), params, cp,
                      intermediate_abs(cp), hs_discord(cp))


# -- analytic critical points ------------------------------------------------

def _lt(a, b) -> bool:
    return a < b - TIE_TOL


def _ne(a, b) -> bool:
    return abs(a - b) > TIE_TOL


def _table_conditions(mags, kind: ChannelKind) -> tuple[dict, bool]:
    """Double-sudden-change conditions and their tie-relaxed counterpart."""
    if kind is ChannelKind.GAD:
        a1, a2, a3 = mags
        strict = {
            "c3_above_c1_c2": _lt(a1, a3) and _lt(a2, a3),
            "c1_c2_nonzero": _ne(a1, 0) and _ne(a2, 0),
            "c1_ne_c2": _ne(a1, a2),
        }
        weak = not _lt(a3, a1) and not _lt(a3, a2) and strict["c1_c2_nonzero"]
        return strict, weak
    k = _CONSTANT_INDEX[kind]
    i, j = (m for m in range(3) if m != k)
    ck, ci, cj = mags[k], mags[i], mags[j]
    strict = {
        f"c{k+1}_below_c{i+1}_c{j+1}": _lt(ck, ci) and _lt(ck, cj),
        f"c{k+1}_nonzero": _ne(ck, 0),
        f"c{i+1}_ne_c{j+1}": _ne(ci, cj),
    }
    weak = not _lt(ci, ck) and not _lt(cj, ck) and strict[f"c{k+1}_nonzero"]
    return strict, weak


def _table_points(mags, kind: ChannelKind) -> tuple:
    if kind is ChannelKind.GAD:
        a1, a2, a3 = mags
        return (1 - max(a1, a2) / a3, 1 - min(a1, a2) / a3)
    k = _CONSTANT_INDEX[kind]
    others = [mags[m] for m in range(3) if m != k]
    ck = mags[k]
    return (1 - math.sqrt(ck / min(others)), 1 - math.sqrt(ck / max(others)))


def component_crossings(c, kind) -> list[float]:
    """Parameters in (0, 1) where the discord slope genuinely jumps.

    Every pair of components with different decay laws can cross once. A
    crossing counts only if the middle component's derivative differs on the
    two sides; tangential touches and exchanges between equal components do
    not change the curve and are dropped.
    """
    kind = ChannelKind.parse(kind)
    mags = [float(abs(x)) for x in c]
    powers = DECAY_POWERS[kind]
    candidates = []
    for a in range(3):
        for b in range(a + 1, 3):
            if powers[a] == powers[b]:
                continue
            fast, slow = (a, b) if powers[a] > powers[b] else (b, a)
            if mags[fast] <= 0 or mags[slow] <= 0:
                continue
            u = (mags[slow] / mags[fast]) ** (1.0 / (powers[fast] - powers[slow]))
            if TIE_TOL < 1 - u < 1 - TIE_TOL:
                candidates.append(1 - u)
    found = []
    for p in sorted(candidates):
        if found and abs(p - found[-1]) <= TIE_TOL:
            continue
        if _is_slope_jump(mags, powers, p):
            found.append(p)
    return found


def _middle_branches(mags, powers, p: float) -> tuple[tuple, tuple]:
    """(slope, curvature) of the middle component just left and right of ``p``."""
    u = 1 - p
    vals = [m * u ** k for m, k in zip(mags, powers)]
    ders = [-k * m * u ** (k - 1) if k else 0.0 for m, k in zip(mags, powers)]
    curv = [k * (k - 1) * m * u ** (k - 2) if k > 1 else 0.0 for m, k in zip(mags, powers)]
    scale = max(vals) or 1.0

    def ordered(side):
        def cmp(i, j):
            if abs(vals[i] - vals[j]) > 1e-9 * scale:
                return -1 if vals[i] < vals[j] else 1
            # just left of p a larger derivative means a smaller value
            di, dj = (-ders[i], -ders[j]) if side < 0 else (ders[i], ders[j])
            return (di > dj) - (di < dj)
        return sorted(range(3), key=functools.cmp_to_key(cmp))

    left, right = ordered(-1)[1], ordered(+1)[1]
    return (ders[left], curv[left]), (ders[right], curv[right])


def _is_slope_jump(mags, powers, p: float) -> bool:
    (dl, _), (dr, _) = _middle_branches(mags, powers, p)
    # relative, so that the test does not depend on the overall scale of c
    return abs(dl - dr) > 1e-9 * max(abs(dl), abs(dr))


def resolvable_points(c, kind, steps: int = 1000, ratio: float = KINK_RATIO) -> list[bool]:
    """Whether each analytic sudden change can be seen on a ``steps`` grid.

    A point is resolvable when it sits at least three cells from either end
    and from any other sudden change, and its slope jump spread over one cell
    beats ``2 * ratio`` times the curvature background that the kink detector
    compares against.
    """
    kind = ChannelKind.parse(kind)
    report = critical_points(c, kind)
    h = 1.0 / (steps - 1)
    mags = [float(abs(x)) for x in c]
    powers = DECAY_POWERS[kind]
    scale = float(np.max(intermediate_abs(evolve_correlations(np.asarray(c, float), kind,
                                                              np.linspace(0, 1, steps)))))
    out = []
    pts = [float(p) for p in report.points]
    for n, p in enumerate(pts):
        ok = 3 * h <= p <= 1 - 3 * h
        ok = ok and all(abs(p - q) >= 3 * h for m, q in enumerate(pts) if m != n)
        (dl, kl), (dr, kr) = _middle_branches(mags, powers, p)
        signal = abs(dl - dr) / (2 * h)
        ok = ok and signal > 2 * ratio * max(abs(kl), abs(kr), scale)
        ok = ok and scale >= _FULL_PRECISION_FLOOR
        out.append(bool(ok))
    return out


def critical_points(c, kind) -> CriticalPointReport:
    """Sudden-change locations of the trace-norm discord along ``kind``.

    When the double-sudden-change conditions hold, both closed-form points are
    returned (exact when ``c`` holds :class:`fractions.Fraction` entries and
    ``kind`` is GAD). Otherwise the genuine single crossing, if any, is
    returned, and ``degenerate`` marks states where a tie among the ``|c_i|``
    is what breaks the conditions.

    The formulas are pure arithmetic, so points outside the tetrahedron are
    accepted and reported with ``physical=False``.
    """
    kind = ChannelKind.parse(kind)
    physical = is_physical(as_vector([float(x) for x in c]))
    mags = [abs(x) for x in c]
    conditions, weak = _table_conditions(mags, kind)
    cv = CorrelationVector(*c)
    if all(conditions.values()):
        return CriticalPointReport(kind, cv, conditions, _table_points(mags, kind), False, physical)
    points = tuple(component_crossings(c, kind))
    return CriticalPointReport(kind, cv, conditions, points, weak, physical)


# -- numeric kink and plateau detection -------------------------------------

def _local_median(a: np.ndarray, window: int, guard: int) -> np.ndarray:
    n = len(a)
    padded = np.concatenate([np.full(window, np.nan), a, np.full(window, np.nan)])
    view = np.lib.stride_tricks.sliding_window_view(padded, 2 * window + 1).copy()
    view[:, window - guard:window + guard + 1] = np.nan
    return np.nanmedian(view, axis=1)[:n]


def find_kinks(x, y, ratio: float = KINK_RATIO, window: int = KINK_WINDOW,
               guard: int = KINK_GUARD) -> list[float]:
    """Locations of slope discontinuities of a uniformly sampled curve.

    With ``a`` the second difference divided by ``h**2``, a node is a kink
    when ``a`` is the largest within ``guard`` nodes and exceeds ``ratio``
    times each of: the median of ``a`` over the curve, the median over the
    surrounding ``window`` nodes (skipping the ``guard`` nearest), and the
    largest magnitude of the curve. It must also stand ``ratio`` times above
    ``a`` at ``guard + 1`` nodes away on at least one side. The reported
    location is the centroid of the excess ``a`` over the peak and its two
    neighbours, which recovers the crossing point of two linear pieces that
    meet between grid nodes. Nodes next to either end are skipped: their
    stencil reaches the end point, where a break belongs to the boundary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(y) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples to detect kinks")
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
        raise ValueError("kink detection needs a uniform grid")
    scale = float(np.max(np.abs(y)))
    if scale < _FULL_PRECISION_FLOOR:
        return []  # zero, or so small that rounding dominates the shape
    a = np.abs(y[2:] - 2 * y[1:-1] + y[:-2]) / h**2
    local = _local_median(a, window, guard)
    threshold = ratio * np.maximum(np.maximum(np.median(a), local), scale)
    padded = np.concatenate([np.full(guard, -np.inf), a, np.full(guard, -np.inf)])
    neighbourhood = np.lib.stride_tricks.sliding_window_view(padded, 2 * guard + 1).max(axis=1)
    # prominence: at guard + 1 cells on at least one side the curve must be
    # smooth again, which rules out noise maxima on short curved stretches;
    # a side beyond the grid cannot vouch for that
    reach = guard + 1
    shifted = np.concatenate([np.full(reach, np.inf), a, np.full(reach, np.inf)])
    side = np.minimum(shifted[:-2 * reach], shifted[2 * reach:])
    interior = np.zeros(len(a), dtype=bool)
    interior[1:-1] = True
    peaks = np.flatnonzero(interior & (a > threshold) & (a >= neighbourhood) & (a > ratio * side))
    kinks = []
    for k in peaks:
        if kinks and x[1 + k] - kinks[-1][1] <= guard * h:
            continue  # equal-height plateau of a single kink
        lo, hi = max(k - 1, 0), min(k + 2, len(a))
        w = np.clip(a[lo:hi] - local[k], 0.0, None)
        loc = float(np.dot(w, x[1 + lo:1 + hi]) / w.sum())
        kinks.append((loc, x[1 + k]))
    return [loc for loc, _ in kinks]


def detect_kinks(t: Trajectory, which: str = "dg") -> list[float]:
    """Numeric sudden changes of the ``"dg"`` or ``"d2"`` curve of ``t``."""
    return find_kinks(t.params, t.curve(which))


def find_plateaus(x, y, rtol: float = FREEZE_RTOL, min_cells: int = FREEZE_MIN_CELLS,
                  zero_tol: float = 1e-12) -> list[FreezingInterval]:
    """Maximal runs on which ``y`` is constant to ``rtol`` (relative) and nonzero."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = []
    i, n = 0, len(y)
    while i < n:
        lo = hi = y[i]
        j = i
        while j + 1 < n:
            nlo, nhi = min(lo, y[j + 1]), max(hi, y[j + 1])
            if nhi - nlo > rtol * max(abs(nlo), abs(nhi)):
                break
            lo, hi, j = nlo, nhi, j + 1
        value = float(np.median(y[i:j + 1]))
        if j - i >= min_cells and abs(value) > zero_tol:
            out.append(FreezingInterval(float(x[i]), float(x[j]), value))
        i = j + 1
    return out


def freezing_intervals(t: Trajectory, which: str = "dg") -> list[FreezingInterval]:
    """Intervals on which the chosen discord stays frozen at a nonzero value."""
    if len(t) < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    return find_plateaus(t.params, t.curve(which))


# -- region scans -------------------------------------------------------------

def sample_physical(seed: int, index: int) -> np.ndarray:
    """The ``index``-th uniform sample of the tetrahedron for ``seed``.

    Each index owns its own generator, so samples can be drawn in any order
    or in parallel with identical results.
    """
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    rng = np.random.default_rng([seed, index])
    while True:
        c = rng.uniform(-1.0, 1.0, 3)
        if is_physical(c):
            return c


def sample_tetrahedron(samples: int, seed: int, workers: int | None = None) -> np.ndarray:
    chunks = [range(i, min(i + 512, samples)) for i in range(0, samples, 512)]
    parts = _parallel.ordered_map(
        lambda r: [sample_physical(seed, i) for i in r], chunks, workers)
    rows = [c for part in parts for c in part]
    return np.array(rows).reshape(-1, 3)


def double_sc_region(kind, samples: int, seed: int = 0, include=(),
                     workers: int | None = None) -> list[tuple[CorrelationVector, str]]:
    """Classify random physical states as ``none``, ``single`` or ``double``.

    Points in ``include`` are classified first, ahead of the random samples.
    """
    kind = ChannelKind.parse(kind)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    states = [np.asarray(p, dtype=float) for p in include]
    states.extend(sample_tetrahedron(samples, seed, workers))

    def classify(c):
        cv = CorrelationVector(*map(float, c))
        return cv, critical_points(cv, kind).classification

    return _parallel.ordered_map(classify, states, workers)


# -- 2-norm contrast ----------------------------------------------------------

@dataclass
class Proposition1Report:
    kind: ChannelKind
    c: CorrelationVector
    d2_kinks: list
    d2_freezing: list
    dg_kinks: list
    dg_freezing: list
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return len(self.d2_kinks) <= 1 and not self.d2_freezing

    @property
    def dg_shows_feature(self) -> bool:
        """True when the trace-norm curve has a double kink or a frozen stretch."""
        return len(self.dg_kinks) >= 2 or bool(self.dg_freezing)


def check_proposition1(c, kind, steps: int = 1000) -> Proposition1Report:
    """Check that the 2-norm discord has at most one kink and never freezes.

    Only nontrivial states (no vanishing ``c_i``) are admissible; with a zero
    component the 2-norm discord can freeze.
    """
    arr = as_vector(c)
    if np.any(np.abs(arr) <= TIE_TOL):
        raise ValueError("all correlation components must be nonzero")
    t = trajectory(arr, kind, steps)
    idx = np.linspace(0, len(t) - 1, 11).astype(int)
    evidence = {
        "params": t.params[idx].tolist(),
        "d2": t.d2[idx].tolist(),
        "dg": t.dg[idx].tolist(),
    }
    return Proposition1Report(
        t.kind, t.c,
        detect_kinks(t, "d2"), freezing_intervals(t, "d2"),
        detect_kinks(t, "dg"), freezing_intervals(t, "dg"),
        evidence,
    )
