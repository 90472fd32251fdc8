"""Local Markovian decoherence channels acting identically on both qubits.

Each channel is given by single-qubit Kraus operators ``{E_k}``; the two-qubit
map is ``rho -> sum_ij (E_i⊗E_j) rho (E_i⊗E_j)^†``. For Bell-diagonal inputs
the flip channels (any p) and generalized amplitude damping at p = 1/2 keep
the Bell-diagonal form, and :func:`evolve_correlations` gives the resulting
correlation vector in closed form.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .qstate import (
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    CorrelationVector,
    _check_density,
    _bell_residual_from_components,
    pauli_components,
)

COMPLETENESS_TOL = 1e-12


class ChannelKind(str, enum.Enum):
    BF = "bf"
    PF = "pf"
    BPF = "bpf"
    GAD = "gad"

    @classmethod
    def parse(cls, name) -> "ChannelKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown channel {name!r} (choose from {choices})") from None

    @property
    def label(self) -> str:
        return self.name


# Per channel, the decay law of each correlation component as a power of
# (1 - parameter). For GAD the parameter is the damping probability gamma.
DECAY_POWERS = {
    ChannelKind.BF: (0, 2, 2),
    ChannelKind.PF: (2, 2, 0),
    ChannelKind.BPF: (2, 0, 2),
    ChannelKind.GAD: (1, 1, 2),
}


@dataclass(frozen=True)
class KrausSet:
    operators: tuple
    kind: ChannelKind
    p: float
    gamma: float = 0.0

    def __post_init__(self):
        total = sum(e.conj().T @ e for e in self.operators)
        dev = float(np.max(np.abs(total - I2)))
        if dev > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not trace preserving (|sum E^†E - I| = {dev:.3e})")

    def completeness_error(self) -> float:
        total = sum(e.conj().T @ e for e in self.operators)
        return float(np.max(np.abs(total - I2)))

    @functools.cached_property
    def pair_operators(self) -> np.ndarray:
        """Stack of all ``E_i ⊗ E_j``, shape ``(k*k, 4, 4)``."""
        return np.array([np.kron(ei, ej) for ei in self.operators for ej in self.operators])


def _check_unit_interval(name: str, x) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def kraus_set(kind, p: float, gamma: float = 0.0) -> KrausSet:
    """Single-qubit Kraus operators for ``kind``; ``gamma`` is used by GAD only."""
    kind = ChannelKind.parse(kind)
    p = _check_unit_interval("p", p)
    if kind is ChannelKind.GAD:
        g = _check_unit_interval("gamma", gamma)
        a, b = np.sqrt(p), np.sqrt(1 - p)
        ops = (
            a * np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex),
            a * np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex),
            b * np.array([[np.sqrt(1 - g), 0], [0, 1]], dtype=complex),
            b * np.array([[0, 0], [np.sqrt(g), 0]], dtype=complex),
        )
        return KrausSet(ops, kind, p, g)
    flip = {ChannelKind.BF: SIGMA_X, ChannelKind.PF: SIGMA_Z, ChannelKind.BPF: SIGMA_Y}[kind]
    ops = (np.sqrt(1 - p / 2) * I2, np.sqrt(p / 2) * flip)
    return KrausSet(ops, kind, p, 0.0)


def apply_local_channel(rho, kraus: KrausSet) -> np.ndarray:
    """Apply the same channel to both qubits of a two-qubit density matrix."""
    rho = _check_density(rho)
    e = kraus.pair_operators
    return np.sum(e @ rho @ np.conj(np.swapaxes(e, 1, 2)), axis=0)


def evolve_correlations(c, kind, parameter):
    """Closed-form correlation vector after the channel.

    ``parameter`` is p for the flip channels and gamma for GAD, whose thermal
    weight is fixed at p = 1/2 (other values do not keep the Bell-diagonal
    form). A scalar parameter returns a :class:`CorrelationVector`; an array
    of parameters returns an array of shape ``(len(parameter), 3)``.
    """
    kind = ChannelKind.parse(kind)
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise ValueError("correlation vector must have 3 components")
    par = np.asarray(parameter, dtype=float)
    if np.any((par < 0) | (par > 1)) or np.any(~np.isfinite(par)):
        raise ValueError("decoherence parameter must lie in [0, 1]")
    powers = np.array(DECAY_POWERS[kind])
    out = c * (1 - par[..., None]) ** powers
    if par.ndim == 0:
        return CorrelationVector(*(float(x) for x in out))
    return out


def bell_form_residual(rho) -> float:
    """Largest local Bloch or off-diagonal correlation component of ``rho``.

    Zero exactly for Bell-diagonal states.
    """
    rho = _check_density(rho)
    return _bell_residual_from_components(pauli_components(rho))
