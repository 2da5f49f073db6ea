"""Complex linear-algebra kernel: Hermitian eigenvalues, entropy, norms, traces.

All functions accept plain numpy arrays; objects carrying a ``.matrix``
attribute (see :mod:`qudiscord.states`) are unwrapped transparently.
Entropies are in bits (log base 2).
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .errors import DimensionMismatch, InvalidState, NonHermitian

HERMITICITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-8

_LN2 = np.log(2.0)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_array(m) -> np.ndarray:
    if not isinstance(m, np.ndarray):
        m = m.matrix
    return np.asarray(m, dtype=complex)


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    m = _as_array(m)
    return bool(np.abs(m - m.conj().T).max() <= tol)


def eigvals_2x2_herm(a, b, c):
    """Eigenvalues (hi, lo) of [[a, c], [conj(c), b]] with a, b real.

    Closed form; accepts scalars or broadcastable arrays (the hot path
    for X-structured work).
    """
    mid = 0.5 * (a + b)
    r = np.sqrt(0.25 * (a - b) ** 2 + np.abs(c) ** 2)
    return mid + r, mid - r


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    2x2 inputs use the closed form; larger ones go through LAPACK.
    """
    m = _as_array(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise NonHermitian(f"max |M - M^dag| entry {dev:.3e} exceeds {tol:.1e}")
    if m.shape[0] == 1:
        return np.array([m[0, 0].real])
    if m.shape[0] == 2:
        hi, lo = eigvals_2x2_herm(m[0, 0].real, m[1, 1].real, m[0, 1])
        return np.array([hi, lo])
    return np.linalg.eigvalsh(m)[::-1]


def entropy_from_eigenvalues(eigs, floor: float = EIGENVALUE_FLOOR) -> float:
    """Shannon entropy (bits) of an eigenvalue distribution.

    Eigenvalues in [floor, 0) are clipped to 0; anything below floor is
    rejected as unphysical.
    """
    w = np.asarray(eigs, dtype=float)
    if w.size and w.min() < floor:
        raise InvalidState(f"eigenvalue {w.min():.3e} below floor {floor:.1e}")
    w = np.clip(w, 0.0, None)
    return max(float(-xlogy(w, w).sum() / _LN2), 0.0)


def von_neumann_entropy(rho) -> float:
    """S(rho) = -sum_i lambda_i log2(lambda_i), with 0 log 0 := 0."""
    return entropy_from_eigenvalues(hermitian_eigenvalues(_as_array(rho)))


def partial_trace(rho, dim_b: int, over: str = "A") -> np.ndarray:
    """Trace a 2 (x) d state over one party.

    over='A' sums the two diagonal d x d blocks; over='B' returns the
    2x2 matrix of block traces.
    """
    m = _as_array(rho)
    n = 2 * dim_b
    if m.shape != (n, n):
        raise DimensionMismatch(f"expected shape {(n, n)}, got {m.shape}")
    if over == "A":
        return m[:dim_b, :dim_b] + m[dim_b:, dim_b:]
    if over == "B":
        d = dim_b
        return np.array(
            [
                [np.trace(m[:d, :d]), np.trace(m[:d, d:])],
                [np.trace(m[d:, :d]), np.trace(m[d:, d:])],
            ]
        )
    raise ValueError(f"over must be 'A' or 'B', got {over!r}")


def hs_inner(m1, m2) -> float:
    """tr(M1 M2), real for a Hermitian pair."""
    a, b = _as_array(m1), _as_array(m2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.einsum("ij,ji->", a, b).real)


def hs_norm_sq(m) -> float:
    """tr(M^2) = sum |M_ij|^2 for Hermitian M."""
    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return float((np.abs(a) ** 2).sum())


def kron(a, b) -> np.ndarray:
    """Tensor product."""
    return np.kron(_as_array(a), _as_array(b))
