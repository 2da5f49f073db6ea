"""Bipartite qubit-qudit density matrices: construction, validation,
structure classification, Hilbert-Schmidt random sampling, X projection.

A state lives on a 2 (x) d system; the measured party A is always the
qubit and comes first in the tensor ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import matcore
from .errors import (
    BadSpec,
    DimensionMismatch,
    NonHermitian,
    NotPSD,
    ParseError,
    TraceNotOne,
    UnsupportedTag,
)

TRACE_TOL = 1e-10
STRUCTURE_TOL = 1e-12

GENERAL = "general"
X = "x"
EXTENDED_X = "extended-x"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated Hermitian PSD unit-trace matrix on a 2 (x) dim_b system."""

    matrix: np.ndarray
    dim_b: int
    dim_a: int = 2

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def blocks(self):
        """The four dim_b x dim_b blocks (TL, TR, BL, BR)."""
        d = self.dim_b
        m = self.matrix
        return m[:d, :d], m[:d, d:], m[d:, :d], m[d:, d:]


@dataclass(frozen=True)
class StructureClass:
    tag: str
    tolerance: float


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def state_matrix(rho, dim_b: int | None = None):
    """Coerce a DensityMatrix or raw array to (matrix, dim_b)."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.dim_b
    m = np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise DimensionMismatch(f"not a 2d x 2d matrix: shape {m.shape}")
    inferred = m.shape[0] // 2
    if dim_b is not None and dim_b != inferred:
        raise DimensionMismatch(f"dim_b={dim_b} inconsistent with shape {m.shape}")
    return m, inferred


def validate(matrix, dim_b: int | None = None) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; wrap on success."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if dim_b is None:
        if n % 2:
            raise DimensionMismatch(f"odd total dimension {n} cannot split as 2 x d")
        dim_b = n // 2
    elif n != 2 * dim_b:
        raise DimensionMismatch(f"matrix of size {n} does not match dim_b={dim_b}")
    if dim_b < 2:
        raise DimensionMismatch(f"dim_b must be >= 2, got {dim_b}")
    dev = np.abs(m - m.conj().T).max()
    if dev > matcore.HERMITICITY_TOL:
        raise NonHermitian(f"max |M - M^dag| entry {dev:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace {tr!r} is not 1")
    w = np.linalg.eigvalsh(m)
    if w.min() < matcore.EIGENVALUE_FLOOR:
        raise NotPSD(f"eigenvalue {w.min():.3e} below {matcore.EIGENVALUE_FLOOR:.1e}")
    return DensityMatrix(matrix=m, dim_b=dim_b)


@lru_cache(maxsize=None)
def x_support_mask(n: int) -> np.ndarray:
    """Boolean mask of the diagonal + anti-diagonal of an n x n matrix."""
    idx = np.arange(n)
    r, c = np.meshgrid(idx, idx, indexing="ij")
    mask = (r == c) | (r + c == n - 1)
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def extended_x_support_mask(n: int) -> np.ndarray:
    """Block-X mask: each of the four (n/2)-blocks keeps only its own
    diagonal and anti-diagonal."""
    d = n // 2
    mask = np.tile(x_support_mask(d), (2, 2))
    mask.setflags(write=False)
    return mask


def classify_structure(rho, tol: float = STRUCTURE_TOL) -> StructureClass:
    """Tag a state as X, extended-X, or general by sparsity pattern."""
    m = _as_matrix(rho)
    n = m.shape[0]
    mags = np.abs(m)
    if mags[~x_support_mask(n)].max(initial=0.0) <= tol:
        return StructureClass(tag=X, tolerance=tol)
    if n % 2 == 0 and mags[~extended_x_support_mask(n)].max(initial=0.0) <= tol:
        return StructureClass(tag=EXTENDED_X, tolerance=tol)
    return StructureClass(tag=GENERAL, tolerance=tol)


def parameter_count(tag: str, d: int) -> int:
    """Independent real parameters of the structure class at qudit dimension d."""
    if d < 2:
        raise DimensionMismatch(f"d must be >= 2, got {d}")
    if tag == X:
        return 4 * d - 1
    if tag == EXTENDED_X:
        return 8 * d - 1 if d % 2 == 0 else 8 * d - 5
    raise UnsupportedTag(f"no parameter count for tag {tag!r}")


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def sample_hs_random(dim: int, rng_seed: int) -> DensityMatrix:
    """Draw a density matrix from the Hilbert-Schmidt measure.

    Uses the square-Ginibre construction rho = G G^dag / tr(G G^dag).
    dim is the total dimension and must be even (a 2 x dim/2 split).
    """
    if dim < 4 or dim % 2:
        raise DimensionMismatch(f"total dimension must be even and >= 4, got {dim}")
    rng = np.random.default_rng(rng_seed)
    g = _ginibre(dim, rng)
    m = g @ g.conj().T
    m /= np.trace(m).real
    return validate(m, dim // 2)


def random_unitary(dim: int, rng_seed: int) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fixing."""
    rng = np.random.default_rng(rng_seed)
    q, r = np.linalg.qr(_ginibre(dim, rng))
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph


def project_to_x(rho) -> DensityMatrix:
    """Zero every entry off the diagonal and anti-diagonal.

    Equals the channel sum_i E_i rho E_i with E_i the diagonal 0/1 masks
    pairing basis index i with 2d+1-i, so it is trace preserving, positivity
    preserving and idempotent.
    """
    m, d = state_matrix(rho)
    out = np.where(x_support_mask(m.shape[0]), m, 0.0)
    return DensityMatrix(matrix=out, dim_b=d)


def project_to_extended_x(rho) -> DensityMatrix:
    """Zero everything outside the block-X support (CPTP, idempotent).

    Handy for generating random extended-X states: the masks here are the
    diagonal 0/1 projectors onto the coupling orbits, so positivity and
    trace are preserved.
    """
    m, d = state_matrix(rho)
    out = np.where(extended_x_support_mask(m.shape[0]), m, 0.0)
    return DensityMatrix(matrix=out, dim_b=d)


# ---------------------------------------------------------------------------
# named states


def _ket_to_dm(psi: np.ndarray, dim_b: int) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(matrix=np.outer(psi, psi.conj()), dim_b=dim_b)


def bell(k: int) -> DensityMatrix:
    """Bell states 1..4: Phi+, Phi-, Psi+, Psi-."""
    kets = {
        1: [1, 0, 0, 1],
        2: [1, 0, 0, -1],
        3: [0, 1, 1, 0],
        4: [0, 1, -1, 0],
    }
    if k not in kets:
        raise BadSpec(f"bell index must be 1..4, got {k}")
    return _ket_to_dm(np.array(kets[k], dtype=complex), 2)


def werner(z: float) -> DensityMatrix:
    """z |Phi+><Phi+| + (1-z) I/4."""
    if not 0.0 <= z <= 1.0:
        raise BadSpec(f"werner mixing must lie in [0, 1], got {z}")
    m = z * bell(1).matrix + (1.0 - z) * np.eye(4) / 4.0
    return DensityMatrix(matrix=m, dim_b=2)


def ghz(n: int) -> DensityMatrix:
    """(|0...0> + |1...1>)/sqrt(2) on n qubits, split as qubit 1 vs rest."""
    if n < 2:
        raise BadSpec(f"ghz needs at least 2 qubits, got {n}")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1.0
    return _ket_to_dm(psi, 2 ** (n - 1))


def w_state(n: int) -> DensityMatrix:
    """Uniform single-excitation superposition on n qubits."""
    if n < 2:
        raise BadSpec(f"w needs at least 2 qubits, got {n}")
    psi = np.zeros(2**n, dtype=complex)
    for i in range(n):
        psi[2**i] = 1.0
    return _ket_to_dm(psi, 2 ** (n - 1))


def product(rho_a, rho_b) -> DensityMatrix:
    """rho_A (x) rho_B with rho_A a qubit state."""
    a = _as_matrix(rho_a)
    b = _as_matrix(rho_b)
    if a.shape != (2, 2):
        raise BadSpec(f"party A must be a qubit, got shape {a.shape}")
    return DensityMatrix(matrix=np.kron(a, b), dim_b=b.shape[0])


def maximally_mixed(dim: int) -> DensityMatrix:
    """I/dim on a 2 x (dim/2) system; dim is the total dimension."""
    if dim < 4 or dim % 2:
        raise BadSpec(f"total dimension must be even and >= 4, got {dim}")
    return DensityMatrix(matrix=np.eye(dim, dtype=complex) / dim, dim_b=dim // 2)


def classical_quantum(p: float, rho1, rho2) -> DensityMatrix:
    """p |0><0| (x) rho1 + (1-p) |1><1| (x) rho2 (a zero-discord state)."""
    if not 0.0 <= p <= 1.0:
        raise BadSpec(f"probability must lie in [0, 1], got {p}")
    r1, r2 = _as_matrix(rho1), _as_matrix(rho2)
    if r1.shape != r2.shape:
        raise DimensionMismatch("rho1 and rho2 must share dimensions")
    d = r1.shape[0]
    m = np.zeros((2 * d, 2 * d), dtype=complex)
    m[:d, :d] = p * r1
    m[d:, d:] = (1.0 - p) * r2
    return DensityMatrix(matrix=m, dim_b=d)


def named_state(spec: str) -> DensityMatrix:
    """Build a state from a CLI-style specifier.

    Grammar: bell1..bell4, werner:<z>, ghz:<n>, w:<n>, mixed:<dim>.
    """
    spec = spec.strip().lower()
    try:
        if spec.startswith("bell"):
            return bell(int(spec[4:]))
        head, _, arg = spec.partition(":")
        if head == "werner":
            return werner(float(arg))
        if head == "ghz":
            return ghz(int(arg))
        if head == "w":
            return w_state(int(arg))
        if head == "mixed":
            return maximally_mixed(int(arg))
    except BadSpec:
        raise
    except (ValueError, IndexError) as exc:
        raise BadSpec(f"cannot parse state specifier {spec!r}") from exc
    raise BadSpec(f"unknown state specifier {spec!r}")


# ---------------------------------------------------------------------------
# JSON interchange


def state_to_json_dict(dm: DensityMatrix) -> dict:
    rows = [[[float(v.real), float(v.imag)] for v in row] for row in dm.matrix]
    return {"dim_a": dm.dim_a, "dim_b": dm.dim_b, "matrix": rows}


def state_from_json_dict(payload: dict) -> DensityMatrix:
    try:
        dim_b = int(payload["dim_b"])
        rows = payload["matrix"]
        m = np.array([[complex(re, im) for re, im in row] for row in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed density-matrix JSON: {exc}") from exc
    return validate(m, dim_b)


def save_state(dm: DensityMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_json_dict(dm), fh)
        fh.write("\n")


def load_state(path) -> DensityMatrix:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return state_from_json_dict(payload)


# ---------------------------------------------------------------------------
# seeding

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, index: int) -> int:
    """Per-sample seed from (master seed, index): splitmix64 finalizer.

    Order-free, so parallel campaigns reproduce bit-identically for any
    scheduling of samples.
    """
    z = (int(master_seed) + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64
