"""Geometric (Hilbert-Schmidt) discord for qubit-qudit states.

The measure is the squared Hilbert-Schmidt distance from rho to the
nearest classical-quantum state chi = p1 P1 (x) rho1 + p2 P2 (x) rho2
with orthogonal qubit projectors P_i. In the Bloch representation

    rho = (1/2d) (I + sum_i x_i sigma_i (x) I
                    + sum_j y_j I (x) O_j
                    + sum_ij T_ij sigma_i (x) O_j)

with a traceless Hermitian qudit basis O_j normalized to
tr(O_i O_j) = d delta_ij (so O = sigma at d=2), the minimum is

    D = (1/2d) (|x|^2 + |T|^2 - k_max),

k_max the top eigenvalue of the 3x3 matrix x x^T + T T^T. The minimizing
chi follows from the stationary values t = x.e, s+ = y, s- = T^T e along
the top eigenvector e. A brute-force minimizer over the classical
parametrization is included as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from . import matcore, states
from .errors import DimensionMismatch, InvalidState, NotTwoQubit, NotXState


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """Local Bloch vectors and correlation tensor of a 2 (x) d state."""

    x: np.ndarray  # (3,)
    y: np.ndarray  # (d^2 - 1,)
    T: np.ndarray  # (3, d^2 - 1)
    d: int


@dataclass(frozen=True, eq=False)
class ClassicalState:
    """Zero-discord parametrization (t, e, s+, s-) plus its reconstruction.

    The closed-form stationary point ignores positivity, so chi may fail
    to be PSD; psd_flag records whether it is a physical state.
    """

    t: float
    e: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    chi: np.ndarray
    psd_flag: bool


@lru_cache(maxsize=None)
def _basis_tuple(d: int):
    """Generalized Gell-Mann family scaled so tr(O_i O_j) = d delta_ij.

    Ordering: for each index pair (j, k), j < k, the symmetric then the
    antisymmetric matrix; then the d-1 diagonal ones. At d=2 this is
    exactly (sigma_x, sigma_y, sigma_z).
    """
    if d < 2:
        raise DimensionMismatch(f"basis requires d >= 2, got {d}")
    scale = np.sqrt(d / 2.0)
    ops = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            ops.append(scale * sym)
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k] = -1j
            asym[k, j] = 1j
            ops.append(scale * asym)
    for l in range(1, d):
        diag = np.zeros(d, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        ops.append(scale * np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag))
    stack = np.stack(ops)
    stack.setflags(write=False)
    return stack


def operator_basis(d: int) -> np.ndarray:
    """The d^2 - 1 traceless Hermitian basis operators, stacked."""
    return _basis_tuple(d).copy()


@lru_cache(maxsize=None)
def _bloch_operators(d: int):
    basis = _basis_tuple(d)
    paulis = np.stack([matcore.SIGMA_X, matcore.SIGMA_Y, matcore.SIGMA_Z])
    eye_d = np.eye(d)
    a_ops = np.stack([np.kron(s, eye_d) for s in paulis])
    b_ops = np.stack([np.kron(np.eye(2), o) for o in basis])
    ab_ops = np.stack([np.stack([np.kron(s, o) for o in basis]) for s in paulis])
    for arr in (a_ops, b_ops, ab_ops):
        arr.setflags(write=False)
    return a_ops, b_ops, ab_ops


def bloch_decompose(rho) -> BlochDecomposition:
    """Components x_i = tr(rho sigma_i (x) I), y_j = tr(rho I (x) O_j),
    T_ij = tr(rho sigma_i (x) O_j)."""
    m, d = states.state_matrix(rho)
    a_ops, b_ops, ab_ops = _bloch_operators(d)
    x = np.einsum("aij,ji->a", a_ops, m).real
    y = np.einsum("bij,ji->b", b_ops, m).real
    t = np.einsum("abij,ji->ab", ab_ops, m).real
    return BlochDecomposition(x=x, y=y, T=t, d=d)


def bloch_reconstruct(decomp: BlochDecomposition, d: int | None = None) -> np.ndarray:
    """Invert the decomposition; exact for components produced by it."""
    if d is None:
        d = decomp.d
    elif d != decomp.d:
        raise DimensionMismatch(f"d={d} does not match decomposition d={decomp.d}")
    a_ops, b_ops, ab_ops = _bloch_operators(d)
    m = np.eye(2 * d, dtype=complex)
    m += np.einsum("a,aij->ij", decomp.x, a_ops)
    m += np.einsum("b,bij->ij", decomp.y, b_ops)
    m += np.einsum("ab,abij->ij", decomp.T, ab_ops)
    return m / (2.0 * d)


def _top_eigvec(k: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of a symmetric 3x3 and a deterministic eigenvector.

    Degenerate tops (within 1e-12) resolve to the sign-fixed eigenvector
    with lexicographically largest components.
    """
    w, v = np.linalg.eigh(k)
    k_max = float(w[-1])
    cands = []
    for i in range(len(w)):
        if w[i] >= k_max - 1e-12:
            vec = v[:, i].copy()
            nz = np.flatnonzero(np.abs(vec) > 1e-12)
            if nz.size and vec[nz[0]] < 0:
                vec = -vec
            cands.append(vec)
    best = max(cands, key=lambda u: tuple(u))
    return k_max, best


def _classical_from_e(dec: BlochDecomposition, e: np.ndarray) -> ClassicalState:
    t = float(dec.x @ e)
    s_plus = dec.y.copy()
    s_minus = dec.T.T @ e
    chi = bloch_reconstruct(
        BlochDecomposition(x=t * e, y=s_plus, T=np.outer(e, s_minus), d=dec.d)
    )
    psd = bool(np.linalg.eigvalsh(chi).min() >= matcore.EIGENVALUE_FLOOR)
    return ClassicalState(
        t=t, e=e, s_plus=s_plus, s_minus=s_minus, chi=chi, psd_flag=psd
    )


def geometric_discord(rho):
    """Closed-form geometric discord.

    Returns (D, e, chi) where e is the optimal measurement axis and chi
    the nearest classical state at the stationary parameters.
    """
    m, d = states.state_matrix(rho)
    dec = bloch_decompose(m)
    k = np.outer(dec.x, dec.x) + dec.T @ dec.T.T
    k_max, e = _top_eigvec(k)
    value = (float(dec.x @ dec.x) + float((dec.T * dec.T).sum()) - k_max) / (2.0 * d)
    return max(value, 0.0), e, _classical_from_e(dec, e)


def geometric_discord_x_compact(rho) -> float:
    """Two-qubit X-state shortcut.

    With the correlation tensor reduced to a 2x2 block a, the diagonal
    entry d11 and local component d10, the discord is
    (1/4) min(|a|^2, |a|^2/2 + d10^2 + d11^2 - sqrt(|a|^4 - a^4)/2).
    """
    m, d = states.state_matrix(rho)
    if d != 2:
        raise NotTwoQubit(f"requires a two-qubit state, got dim_b={d}")
    if states.classify_structure(m).tag != states.X:
        raise NotXState("state is not X-classified")
    dec = bloch_decompose(m)
    a_block = dec.T[:2, :2]
    d10 = float(dec.x[2])
    d11 = float(dec.T[2, 2])
    a_sq = float((a_block * a_block).sum())
    a_det_sq = 2.0 * float(a_block[0, 0] * a_block[1, 1] - a_block[0, 1] * a_block[1, 0])
    lam0 = d10 * d10 + d11 * d11
    radicand = a_sq * a_sq - a_det_sq * a_det_sq
    if radicand < -1e-9:
        raise InvalidState(f"negative radicand {radicand:.3e} in X shortcut")
    root = np.sqrt(max(radicand, 0.0))
    return 0.25 * min(a_sq, 0.5 * a_sq + lam0 - 0.5 * root)


def _unit_from_angles(alpha: float, beta: float) -> np.ndarray:
    sa = np.sin(alpha)
    return np.array([sa * np.cos(beta), sa * np.sin(beta), np.cos(alpha)])


def oracle_min_over_classical(rho, restarts: int = 32, rng_seed: int = 0) -> float:
    """Brute-force minimum of |rho - chi|^2 over classical states.

    For each measurement axis e the optimal (t, s+, s-) follow from the
    stationarity conditions; the residual search over e runs on a sphere
    grid plus multi-start simplex refinement. Distances are evaluated on
    the reconstructed matrices, independently of the closed form.
    """
    m, d = states.state_matrix(rho)
    dec = bloch_decompose(m)
    a_ops, _, ab_ops = _bloch_operators(d)
    base = m - bloch_reconstruct(
        BlochDecomposition(x=np.zeros(3), y=dec.y, T=np.zeros_like(dec.T), d=d)
    )

    def distance_for(es: np.ndarray) -> np.ndarray:
        # es: (G, 3) unit vectors; chi differs from the fixed part only in
        # its x and T components
        ts = es @ dec.x
        s_minus = es @ dec.T
        x_chi = ts[:, None] * es
        t_chi = es[:, :, None] * s_minus[:, None, :]
        chis = np.einsum("ga,aij->gij", x_chi, a_ops)
        chis += np.einsum("gab,abij->gij", t_chi, ab_ops)
        diff = base[None, :, :] - chis / (2.0 * d)
        return (np.abs(diff) ** 2).sum(axis=(1, 2))

    def f(v: np.ndarray) -> float:
        return float(distance_for(_unit_from_angles(v[0], v[1])[None, :])[0])

    alphas = np.linspace(0.0, np.pi, 25)
    betas = np.linspace(0.0, 2.0 * np.pi, 48, endpoint=False)
    aa, bb = np.meshgrid(alphas, betas, indexing="ij")
    es = np.stack(
        [np.sin(aa) * np.cos(bb), np.sin(aa) * np.sin(bb), np.cos(aa)], axis=-1
    ).reshape(-1, 3)
    grid_vals = distance_for(es)
    best = float(grid_vals.min())
    i = int(np.argmin(grid_vals))
    starts = [np.array([aa.ravel()[i], bb.ravel()[i]])]

    rng = np.random.default_rng(rng_seed)
    for _ in range(max(int(restarts), 0)):
        starts.append(
            np.array([rng.uniform(0.0, np.pi), rng.uniform(0.0, 2.0 * np.pi)])
        )
    for x0 in starts:
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options=dict(xatol=1e-9, fatol=1e-12, maxiter=300, maxfev=600),
        )
        best = min(best, float(res.fun))
    return best
