"""Structured eigenvalue fast paths for X and block-X (extended-X) matrices.

A 2d x 2d extended-X matrix couples basis index r only to d+1-r, d+r and
2d+1-r (1-based), so it splits into floor(d/2) Hermitian 4x4 blocks plus,
for odd d, one 2x2 block. Eigenvalues then come from tiny dense solves
instead of one 2d x 2d solve. d x d X matrices split further into 2x2
pairs with a closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import matcore, states
from .errors import NotExtendedX, NotXStructured


@dataclass(frozen=True)
class OrbitDecomposition:
    """Index orbits (0-based) partitioning {0..2d-1}."""

    d: int
    quartets: tuple[tuple[int, int, int, int], ...]
    doublet: tuple[int, int] | None


@lru_cache(maxsize=None)
def extended_x_orbits(d: int) -> OrbitDecomposition:
    """Coupling orbits of the block-X sparsity pattern at qudit dimension d."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    quartets = tuple(
        tuple(sorted((r, d - 1 - r, d + r, 2 * d - 1 - r))) for r in range(d // 2)
    )
    doublet = None
    if d % 2:
        mid = d // 2
        doublet = (mid, d + mid)
    return OrbitDecomposition(d=d, quartets=quartets, doublet=doublet)


@lru_cache(maxsize=None)
def _quartet_index(d: int) -> np.ndarray:
    orbits = extended_x_orbits(d)
    return np.array(orbits.quartets, dtype=np.intp)


def eigenvalues_extended_x(rho, tol: float = states.STRUCTURE_TOL) -> np.ndarray:
    """Eigenvalues of an extended-X matrix via its orbit blocks, descending.

    All quartet blocks are solved in one batched Hermitian call; the odd-d
    doublet uses the 2x2 closed form.
    """
    m, d = states.state_matrix(rho)
    n = 2 * d
    off = np.abs(m)[~states.extended_x_support_mask(n)]
    if off.size and off.max() > tol:
        raise NotExtendedX(f"off-pattern magnitude {off.max():.3e} exceeds {tol:.1e}")

    vals = []
    idx = _quartet_index(d)
    if idx.size:
        blocks = m[idx[:, :, None], idx[:, None, :]]
        vals.append(np.linalg.eigvalsh(blocks).ravel())
    orbits = extended_x_orbits(d)
    if orbits.doublet is not None:
        i, j = orbits.doublet
        hi, lo = matcore.eigvals_2x2_herm(m[i, i].real, m[j, j].real, m[i, j])
        vals.append(np.array([hi, lo]))
    w = np.concatenate(vals)
    w.sort()
    return w[::-1]


def eigenvalues_x(m, tol: float = states.STRUCTURE_TOL) -> np.ndarray:
    """Eigenvalues of a d x d Hermitian X matrix, descending.

    Each (r, d+1-r) pair is a closed-form 2x2 solve; odd d contributes the
    bare center entry.
    """
    m = np.asarray(m, dtype=complex)
    d = m.shape[0]
    off = np.abs(m)[~states.x_support_mask(d)]
    if off.size and off.max() > tol:
        raise NotXStructured(f"off-pattern magnitude {off.max():.3e} exceeds {tol:.1e}")

    r = np.arange(d // 2)
    rp = d - 1 - r
    hi, lo = matcore.eigvals_2x2_herm(
        m[r, r].real, m[rp, rp].real, m[r, rp]
    )
    vals = [hi, lo]
    if d % 2:
        mid = d // 2
        vals.append(np.array([m[mid, mid].real]))
    w = np.concatenate(vals)
    w.sort()
    return w[::-1]
