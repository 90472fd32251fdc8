"""Two-qubit Bell-diagonal states and small dense Hermitian algebra.

A Bell-diagonal state is fixed by its correlation vector ``c = (c1, c2, c3)``::

    rho = (I⊗I + c1 X⊗X + c2 Y⊗Y + c3 Z⊗Z) / 4

Constructors accept any point of the cube [-1, 1]^3 so that region scans can
probe unphysical points; use :func:`is_physical` to test membership of the
tetrahedron of valid states.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

EPS_HERM = 1e-12
EPS_TRACE = 1e-12
EPS_PSD = 1e-10
EPS_EIG = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# sigma_i ⊗ sigma_i, i = 1, 2, 3
CORRELATORS = tuple(np.kron(s, s) for s in PAULI)


class CorrelationVector(NamedTuple):
    c1: float
    c2: float
    c3: float

    @classmethod
    def parse(cls, text: str) -> "CorrelationVector":
        """Parse ``"a,b,c"``; raises ValueError on malformed input."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated components, got {text!r}")
        vals = [float(p) for p in parts]
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite component in {text!r}")
        return cls(*vals)


def as_vector(c) -> np.ndarray:
    """Return ``c`` as a float array of shape (3,), checking the cube bounds."""
    arr = np.asarray(c, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"correlation vector must have 3 components, got shape {arr.shape}")
    if np.any(np.abs(arr) > 1 + EPS_PSD):
        raise ValueError(f"correlation components must lie in [-1, 1], got {tuple(arr)}")
    return arr


def bell_density_matrix(c) -> np.ndarray:
    """Density matrix of the Bell-diagonal state with correlation vector ``c``.

    Examples
    --------
    >>> np.real(np.diag(bell_density_matrix((0.1, 0.2, 0.3))))
    array([0.325, 0.175, 0.175, 0.325])
    """
    c1, c2, c3 = as_vector(c)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 1 + c3
    rho[1, 1] = rho[2, 2] = 1 - c3
    rho[0, 3] = rho[3, 0] = c1 - c2
    rho[1, 2] = rho[2, 1] = c1 + c2
    return rho / 4


def eigenvalues_bell(c) -> np.ndarray:
    """Closed-form spectrum of :func:`bell_density_matrix`, sorted descending.

    The matrix splits into two 2x2 blocks, giving
    ``(1 + c3 ± (c1 - c2)) / 4`` and ``(1 - c3 ± (c1 + c2)) / 4``.
    """
    c1, c2, c3 = as_vector(c)
    lam = np.array([
        1 + c3 + (c1 - c2),
        1 + c3 - (c1 - c2),
        1 - c3 + (c1 + c2),
        1 - c3 - (c1 + c2),
    ]) / 4
    return np.sort(lam)[::-1]


def is_physical(c, tol: float = EPS_PSD) -> bool:
    """True iff every Bell eigenvalue is >= -tol (``c`` inside the tetrahedron)."""
    return bool(eigenvalues_bell(c)[-1] >= -tol)


def _check_hermitian(m: np.ndarray, tol: float = EPS_HERM) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {m.shape}")
    dev = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2)))) if m.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |M - M^†| = {dev:.3e})")
    return m


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix (or stack), sorted descending.

    Raises ValueError when ``m`` deviates from Hermiticity by more than
    ``EPS_HERM``. Works on arrays of shape ``(..., n, n)``.
    """
    m = _check_hermitian(m)
    # symmetrise away the sub-tolerance antihermitian part before LAPACK
    h = (m + np.conj(np.swapaxes(m, -1, -2))) / 2
    return np.linalg.eigvalsh(h)[..., ::-1]


def trace_norm(m) -> np.ndarray | float:
    """Sum of absolute eigenvalues of a Hermitian matrix (or stack)."""
    norms = np.sum(np.abs(hermitian_eigenvalues(m)), axis=-1)
    return float(norms) if np.ndim(norms) == 0 else norms


def _check_density(rho) -> np.ndarray:
    rho = _check_hermitian(np.asarray(rho, dtype=complex))
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit density matrix, got shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1) > EPS_TRACE:
        raise ValueError(f"density matrix trace is {tr.real:.15g}, expected 1")
    return rho


_PAULI_BASIS = (I2,) + PAULI
_PAULI_PRODUCTS = np.array([np.kron(sa, sb) for sa in _PAULI_BASIS for sb in _PAULI_BASIS]).conj()


def pauli_components(rho) -> np.ndarray:
    """Full Pauli expansion ``T[a, b] = Tr[rho sigma_a ⊗ sigma_b]``, a, b in {0..3}.

    Index 0 is the identity, so ``T[i, 0]`` and ``T[0, j]`` hold the local
    Bloch vectors and ``T[1:, 1:]`` the correlation tensor.
    """
    rho = np.asarray(rho, dtype=complex)
    # Pauli strings are Hermitian: Tr[rho P] = sum_ij rho_ij P_ji = sum_ij rho_ij conj(P_ij)
    t = np.einsum("ij,kij->k", rho, _PAULI_PRODUCTS)
    return np.real(t).reshape(4, 4)


def correlation_vector(rho, return_residual: bool = False):
    """Diagonal correlations ``c_i = Tr[rho sigma_i ⊗ sigma_i]`` of a two-qubit state.

    Parameters
    ----------
    rho : (4, 4) array
        Hermitian, unit-trace matrix.
    return_residual : bool
        Also return the largest magnitude among the local Bloch components and
        off-diagonal correlation-tensor entries. It vanishes iff ``rho`` has
        the Bell-diagonal form.
    """
    rho = _check_density(rho)
    t = pauli_components(rho)
    c = CorrelationVector(*(float(t[i, i]) for i in (1, 2, 3)))
    if not return_residual:
        return c
    return c, _bell_residual_from_components(t)


def _bell_residual_from_components(t: np.ndarray) -> float:
    off = t.copy()
    off[0, 0] = 0.0
    off[1, 1] = off[2, 2] = off[3, 3] = 0.0
    return float(np.max(np.abs(off)))
