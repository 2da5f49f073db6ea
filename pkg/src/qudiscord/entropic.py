"""Entropic quantum discord of qubit-qudit states.

Discord is quantum mutual information minus the classical correlation,
the latter a supremum over projective measurements on the qubit. A
measurement direction is a Bloch unit vector with polar angles
(theta, phi). Conditional states on B are weighted sums of the four
d x d blocks of rho, so X-sparse blocks keep the per-angle cost down to
a few closed-form 2x2 solves; that is what makes the full-grid
optimization affordable.

Three optimization modes:

* ``candidate``  evaluates only the pole/equator directions
  (0,0), (pi/2,0), (pi/2,pi/2), (pi/2,pi), which are optimal for the
  overwhelming majority of random X states;
* ``theta-only`` fixes phi=0 and minimizes over theta in [0, pi/2],
  valid whenever phi provably drops out of the conditional spectra;
* ``full`` searches theta in [0, pi/2] with phi unrestricted (the
  parity (theta,phi) -> (pi-theta, pi+phi) halves theta) by grid plus
  simplex refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from . import matcore, states, xblocks
from .errors import ConstraintViolated, NotExtendedX

CANDIDATE = "candidate"
THETA_ONLY = "theta-only"
FULL = "full"

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi

CANDIDATE_ANGLES = (
    (0.0, 0.0),
    (HALF_PI, 0.0),
    (HALF_PI, HALF_PI),
    (HALF_PI, math.pi),
)

GRID_SIZE = 64
THETA_LINE_POINTS = 65
TIE_TOL = 1e-10
SIMPLEX_FATOL = 1e-10

_LN2 = math.log(2.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MeasurementAngles:
    """Polar angles of the measurement direction on qubit A."""

    theta: float
    phi: float


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    optimal_angles: MeasurementAngles
    mode: str
    candidate_gap: float


def z_vector(t: float, y) -> np.ndarray:
    """Measurement direction from unitary parameters (t, y), |t|^2+|y|^2=1."""
    y = np.asarray(y, dtype=float)
    if y.shape != (3,):
        raise ConstraintViolated(f"y must be a 3-vector, got shape {y.shape}")
    norm = t * t + float(y @ y)
    if abs(norm - 1.0) > 1e-10:
        raise ConstraintViolated(f"t^2 + |y|^2 = {norm!r} is not 1")
    y1, y2, y3 = y
    return np.array(
        [
            2.0 * (-t * y2 + y1 * y3),
            2.0 * (t * y1 + y2 * y3),
            t * t + y3 * y3 - y1 * y1 - y2 * y2,
        ]
    )


def _angles_pair(angles) -> tuple[float, float]:
    if isinstance(angles, MeasurementAngles):
        return angles.theta, angles.phi
    theta, phi = angles
    return float(theta), float(phi)


def measurement_projector(angles, sign: int = +1) -> np.ndarray:
    """Rank-1 projector (1 + sign * z.sigma)/2 for direction z(theta, phi)."""
    theta, phi = _angles_pair(angles)
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    if sign == -1:
        theta, phi = math.pi - theta, math.pi + phi
    a = math.cos(theta / 2.0) ** 2
    b = 0.5 * math.sin(theta) * complex(math.cos(phi), -math.sin(phi))
    return np.array([[a, b], [b.conjugate(), 1.0 - a]])


def conditional_state(rho, angles, sign: int = +1):
    """Outcome probability and normalized post-measurement state of B.

    The unnormalized state is the block combination
    A[0,0]*TL + A[1,0]*TR + A[0,1]*BL + A[1,1]*BR, which equals tracing
    qubit A out of (A (x) I) rho (A (x) I). Returns (0.0, None) for a
    zero-probability branch.
    """
    m, d = states.state_matrix(rho)
    proj = measurement_projector(angles, sign)
    tl, tr = m[:d, :d], m[:d, d:]
    bl, br = m[d:, :d], m[d:, d:]
    unnorm = proj[0, 0] * tl + proj[1, 0] * tr + proj[0, 1] * bl + proj[1, 1] * br
    p = float(np.trace(unnorm).real)
    if p < 1e-14:
        return 0.0, None
    return p, unnorm / p


def _entropy_of_b_state(mat: np.ndarray) -> float:
    if states.classify_structure(mat).tag == states.X:
        return matcore.entropy_from_eigenvalues(xblocks.eigenvalues_x(mat))
    return matcore.von_neumann_entropy(mat)


def conditional_entropy(rho, angles) -> float:
    """sum_i p_i S(rho_i) over the two measurement outcomes, in bits."""
    total = 0.0
    for sign in (+1, -1):
        p, sigma = conditional_state(rho, angles, sign)
        if sigma is None:
            continue
        total += p * _entropy_of_b_state(sigma)
    return total


def phi_independence_check(rho, tol: float = 1e-12) -> bool:
    """Sufficient test that phi drops out of the conditional spectra.

    True guarantees conditional_entropy(rho, (theta, phi)) is the same for
    every phi at each theta. Requires an extended-X state; demands a zero
    top-right block diagonal and, per anti-diagonal pair, couplings coming
    either from the diagonal blocks alone or from a single top-right entry.
    Conservative: may return False on states where phi still drops.
    """
    m, d = states.state_matrix(rho)
    off = np.abs(m)[~states.extended_x_support_mask(2 * d)]
    if off.size and off.max() > states.STRUCTURE_TOL:
        raise NotExtendedX(f"off-pattern magnitude {off.max():.3e}")
    tl, tr = m[:d, :d], m[:d, d:]
    br = m[d:, d:]
    if np.abs(np.diagonal(tr)).max() > tol:
        return False
    for r in range(d // 2):
        rp = d - 1 - r
        diag_coupling = max(abs(tl[r, rp]), abs(br[r, rp]))
        qa, qb = abs(tr[r, rp]), abs(tr[rp, r])
        if qa <= tol and qb <= tol:
            continue
        if diag_coupling <= tol and min(qa, qb) <= tol:
            continue
        return False
    return True


class _ConditionalEntropyFn:
    """Conditional entropy as a function of the measurement angles.

    Precomputes block data of rho once. When all four blocks are X-sparse
    (always the case for d=2) the spectra come from closed-form 2x2 pair
    solves, vectorized over whole angle grids; otherwise each evaluation
    is a pair of small batched Hermitian solves.
    """

    def __init__(self, rho):
        m, d = states.state_matrix(rho)
        self.d = d
        self.tl = np.ascontiguousarray(m[:d, :d])
        self.tr = np.ascontiguousarray(m[:d, d:])
        self.br = np.ascontiguousarray(m[d:, d:])
        self.tr_dag = self.tr.conj().T.copy()
        self.trace_tl = float(np.trace(self.tl).real)
        self.trace_br = float(np.trace(self.br).real)
        self.trace_tr = complex(np.trace(self.tr))
        off = np.abs(m)[~states.extended_x_support_mask(2 * d)]
        self.x_sparse = off.size == 0 or float(off.max()) <= states.STRUCTURE_TOL
        if self.x_sparse:
            pairs = []
            for r in range(d // 2):
                rp = d - 1 - r
                pairs.append(
                    (
                        float(self.tl[r, r].real),
                        float(self.tl[rp, rp].real),
                        complex(self.tl[r, rp]),
                        float(self.br[r, r].real),
                        float(self.br[rp, rp].real),
                        complex(self.br[r, rp]),
                        complex(self.tr[r, r]),
                        complex(self.tr[rp, rp]),
                        complex(self.tr[r, rp]),
                        complex(self.tr[rp, r]),
                    )
                )
            self.pairs = pairs
            self.center = None
            if d % 2:
                mid = d // 2
                self.center = (
                    float(self.tl[mid, mid].real),
                    float(self.br[mid, mid].real),
                    complex(self.tr[mid, mid]),
                )

    # -- vectorized path ---------------------------------------------------

    def grid(self, thetas, phis) -> np.ndarray:
        th, ph = np.broadcast_arrays(
            np.asarray(thetas, dtype=float), np.asarray(phis, dtype=float)
        )
        shape = th.shape
        th = th.ravel()
        ph = ph.ravel()
        cos_t = np.cos(th)
        top = 0.5 * (1.0 + cos_t)
        bot = 0.5 * (1.0 - cos_t)
        w = 0.5 * np.sin(th) * np.exp(1j * ph)
        total = np.zeros(th.size)
        for a, c, ww in ((top, bot, w), (bot, top, -w)):
            prob = a * self.trace_tl + c * self.trace_br + 2.0 * (ww * self.trace_tr).real
            if self.x_sparse:
                lams = []
                for p1, p2, pc, r1, r2, rc, q1, q2, qa, qb in self.pairs:
                    m1 = a * p1 + c * r1 + 2.0 * (ww * q1).real
                    m2 = a * p2 + c * r2 + 2.0 * (ww * q2).real
                    s = a * pc + c * rc + ww * qa + (ww * qb).conj()
                    hi, lo = matcore.eigvals_2x2_herm(m1, m2, s)
                    lams.extend((hi, lo))
                if self.center is not None:
                    pc_, rc_, qc_ = self.center
                    lams.append(a * pc_ + c * rc_ + 2.0 * (ww * qc_).real)
                lam = np.stack(lams)
            else:
                mats = (
                    a[:, None, None] * self.tl
                    + ww[:, None, None] * self.tr
                    + ww.conj()[:, None, None] * self.tr_dag
                    + c[:, None, None] * self.br
                )
                lam = np.linalg.eigvalsh(mats).T
            lam = np.maximum(lam, 0.0)
            total += -xlogy(lam, lam).sum(axis=0) / _LN2
            total += xlogy(np.maximum(prob, 0.0), np.maximum(prob, 0.0)) / _LN2
        return np.maximum(total, 0.0).reshape(shape)

    # -- scalar path ---------------------------------------------------------

    def __call__(self, theta: float, phi: float) -> float:
        if not self.x_sparse:
            return float(self.grid(np.array([theta]), np.array([phi]))[0])
        cos_t = math.cos(theta)
        top = 0.5 * (1.0 + cos_t)
        bot = 0.5 * (1.0 - cos_t)
        w = 0.5 * math.sin(theta) * complex(math.cos(phi), math.sin(phi))
        total = 0.0
        for a, c, ww in ((top, bot, w), (bot, top, -w)):
            acc = 0.0
            prob = a * self.trace_tl + c * self.trace_br + 2.0 * (ww * self.trace_tr).real
            for p1, p2, pc, r1, r2, rc, q1, q2, qa, qb in self.pairs:
                m1 = a * p1 + c * r1 + 2.0 * (ww * q1).real
                m2 = a * p2 + c * r2 + 2.0 * (ww * q2).real
                s = a * pc + c * rc + ww * qa + (ww * qb).conjugate()
                mid = 0.5 * (m1 + m2)
                rad = math.sqrt(
                    0.25 * (m1 - m2) ** 2 + s.real * s.real + s.imag * s.imag
                )
                for lam in (mid + rad, mid - rad):
                    if lam > 0.0:
                        acc -= lam * math.log2(lam)
            if self.center is not None:
                p1, r1, q1 = self.center
                lam = a * p1 + c * r1 + 2.0 * (ww * q1).real
                if lam > 0.0:
                    acc -= lam * math.log2(lam)
            if prob > 0.0:
                acc += prob * math.log2(prob)
            total += acc
        return total if total > 0.0 else 0.0


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Fold a direction into theta in [0, pi/2], phi in [0, 2 pi)."""
    theta = theta % TWO_PI
    if theta > math.pi:
        theta = TWO_PI - theta
        phi += math.pi
    if theta > HALF_PI:
        theta = math.pi - theta
        phi += math.pi
    phi = phi % TWO_PI
    if theta == 0.0:
        phi = 0.0
    return theta, phi


def _golden_min(f, a: float, b: float, xtol: float = 1e-9):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class _OptOutcome:
    value: float
    angles: MeasurementAngles
    candidate_value: float


def _select(points) -> tuple[float, MeasurementAngles]:
    """Minimum value plus lexicographically smallest angles among ties."""
    vmin = min(p[0] for p in points)
    tied = [p for p in points if p[0] <= vmin + TIE_TOL]
    best = min(tied, key=lambda p: (p[1], p[2]))
    return vmin, MeasurementAngles(best[1], best[2])


def _theta_line_points(ev: _ConditionalEntropyFn):
    thetas = np.linspace(0.0, HALF_PI, THETA_LINE_POINTS)
    vals = ev.grid(thetas, np.zeros_like(thetas))
    pts = [
        (float(v), *_canonical_angles(float(t), 0.0)) for v, t in zip(vals, thetas)
    ]
    i = int(np.argmin(vals))
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, THETA_LINE_POINTS - 1)]
    x, fx = _golden_min(lambda t: ev(t, 0.0), float(lo), float(hi))
    pts.append((fx, *_canonical_angles(x, 0.0)))
    return pts


def _optimize_conditional_entropy(ev: _ConditionalEntropyFn, mode: str) -> _OptOutcome:
    cand_pts = [
        (ev(th, phv), *_canonical_angles(th, phv)) for th, phv in CANDIDATE_ANGLES
    ]
    cand_value = min(p[0] for p in cand_pts)

    if mode == CANDIDATE:
        value, angles = _select(cand_pts)
        return _OptOutcome(value=value, angles=angles, candidate_value=value)

    if mode == THETA_ONLY:
        pts = _theta_line_points(ev)
        value, angles = _select(pts)
        return _OptOutcome(value=value, angles=angles, candidate_value=cand_value)

    if mode != FULL:
        raise ValueError(f"unknown optimization mode {mode!r}")

    th_axis = np.linspace(0.0, HALF_PI, GRID_SIZE)
    ph_axis = np.linspace(0.0, TWO_PI, GRID_SIZE, endpoint=False)
    th, ph = np.meshgrid(th_axis, ph_axis, indexing="ij")
    grid_vals = ev.grid(th, ph)

    pts = list(cand_pts)
    pts.extend(_theta_line_points(ev))

    flat = grid_vals.ravel()
    i = int(np.argmin(flat))
    x0 = np.array([th.ravel()[i], ph.ravel()[i]])
    seed_value = float(flat[i])
    best_start = min(pts, key=lambda p: p[0])
    if best_start[0] < seed_value:
        x0 = np.array([best_start[1], best_start[2]])

    step = 0.05
    simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
    res = minimize(
        lambda v: ev(v[0], v[1]),
        x0,
        method="Nelder-Mead",
        options=dict(
            initial_simplex=simplex,
            xatol=1e-6,
            fatol=SIMPLEX_FATOL,
            maxiter=400,
            maxfev=800,
        ),
    )
    pts.append((float(res.fun), *_canonical_angles(float(res.x[0]), float(res.x[1]))))

    # keep only grid points that can matter for the tie-break
    vmin = min(min(p[0] for p in pts), float(flat.min()))
    close = np.flatnonzero(flat <= vmin + TIE_TOL)
    th_flat, ph_flat = th.ravel(), ph.ravel()
    for j in close:
        pts.append(
            (float(flat[j]), *_canonical_angles(float(th_flat[j]), float(ph_flat[j])))
        )

    value, angles = _select(pts)
    return _OptOutcome(value=value, angles=angles, candidate_value=cand_value)


def _marginal_entropies(m: np.ndarray, d: int) -> tuple[float, float]:
    rho_a = matcore.partial_trace(m, d, over="B")
    rho_b = matcore.partial_trace(m, d, over="A")
    return matcore.von_neumann_entropy(rho_a), _entropy_of_b_state(rho_b)


def mutual_information(rho) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB) in bits."""
    m, d = states.state_matrix(rho)
    s_a, s_b = _marginal_entropies(m, d)
    if states.classify_structure(m).tag != states.GENERAL:
        s_ab = matcore.entropy_from_eigenvalues(xblocks.eigenvalues_extended_x(m))
    else:
        s_ab = matcore.von_neumann_entropy(m)
    return s_a + s_b - s_ab


def classical_correlation(rho, mode: str = FULL):
    """Best extractable correlation and the measurement angles achieving it.

    Returns (C, MeasurementAngles) with
    C = S(rho_B) - min over searched angles of the conditional entropy.
    Ties within 1e-10 report the lexicographically smallest (theta, phi).
    """
    m, d = states.state_matrix(rho)
    _, s_b = _marginal_entropies(m, d)
    out = _optimize_conditional_entropy(_ConditionalEntropyFn(m), mode)
    return s_b - out.value, out.angles


def entropic_discord(rho, mode: str = FULL, escalate: bool = False) -> DiscordResult:
    """Entropic discord with optimizer diagnostics.

    With mode='candidate' and escalate=True, states whose conditional
    spectra provably do not depend on phi are promoted to the theta-only
    line search. candidate_gap is the best candidate conditional entropy
    minus the mode's optimum (zero in candidate mode, >= 0 in full mode).
    """
    m, d = states.state_matrix(rho)
    mode_used = mode
    if mode == CANDIDATE and escalate:
        if states.classify_structure(m).tag != states.GENERAL and phi_independence_check(m):
            mode_used = THETA_ONLY

    s_a, s_b = _marginal_entropies(m, d)
    if states.classify_structure(m).tag != states.GENERAL:
        s_ab = matcore.entropy_from_eigenvalues(xblocks.eigenvalues_extended_x(m))
    else:
        s_ab = matcore.von_neumann_entropy(m)
    mi = s_a + s_b - s_ab

    out = _optimize_conditional_entropy(_ConditionalEntropyFn(m), mode_used)
    correlation = s_b - out.value
    return DiscordResult(
        discord=mi - correlation,
        classical_correlation=correlation,
        mutual_information=mi,
        optimal_angles=out.angles,
        mode=mode_used,
        candidate_gap=out.candidate_value - out.value,
    )
