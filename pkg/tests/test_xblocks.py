import time

import numpy as np
import pytest

from qudiscord import matcore, states, xblocks
from qudiscord.errors import NotExtendedX, NotXStructured


def random_extended_x(d, seed):
    return states.project_to_extended_x(states.sample_hs_random(2 * d, seed)).matrix


def random_x_hermitian(d, rng):
    m = np.zeros((d, d), dtype=complex)
    for r in range(d):
        m[r, r] = rng.standard_normal()
    for r in range(d // 2):
        rp = d - 1 - r
        c = complex(*rng.standard_normal(2))
        m[r, rp] = c
        m[rp, r] = np.conj(c)
    return m


def test_orbits_d4():
    orbits = xblocks.extended_x_orbits(4)
    assert orbits.quartets == ((0, 3, 4, 7), (1, 2, 5, 6))
    assert orbits.doublet is None


def test_orbits_d2():
    orbits = xblocks.extended_x_orbits(2)
    assert orbits.quartets == ((0, 1, 2, 3),)
    assert orbits.doublet is None


def test_orbits_d3():
    orbits = xblocks.extended_x_orbits(3)
    assert orbits.quartets == ((0, 2, 3, 5),)
    assert orbits.doublet == (1, 4)


def test_orbits_partition():
    for d in range(2, 65):
        orbits = xblocks.extended_x_orbits(d)
        seen = [i for q in orbits.quartets for i in q]
        if orbits.doublet is not None:
            seen.extend(orbits.doublet)
        assert sorted(seen) == list(range(2 * d))
        assert len(orbits.quartets) == d // 2


def test_orbits_match_connectivity_oracle():
    # brute-force connected components of the block-X coupling graph
    for d in range(2, 11):
        mask = states.extended_x_support_mask(2 * d)
        n = 2 * d
        comp = [-1] * n
        label = 0
        for start in range(n):
            if comp[start] >= 0:
                continue
            stack = [start]
            comp[start] = label
            while stack:
                i = stack.pop()
                for j in range(n):
                    if mask[i, j] and comp[j] < 0:
                        comp[j] = label
                        stack.append(j)
            label += 1
        groups = sorted(
            sorted(i for i in range(n) if comp[i] == g) for g in range(label)
        )
        orbits = xblocks.extended_x_orbits(d)
        expected = sorted(
            [sorted(q) for q in orbits.quartets]
            + ([sorted(orbits.doublet)] if orbits.doublet else [])
        )
        assert groups == expected


def test_extended_x_eigenvalues_ghz():
    w = xblocks.eigenvalues_extended_x(states.ghz(3))
    assert np.allclose(w, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-12)


def test_extended_x_eigenvalues_diagonal():
    p = np.arange(1, 9, dtype=float)
    p /= p.sum()
    w = xblocks.eigenvalues_extended_x(np.diag(p).astype(complex))
    assert np.allclose(w, np.sort(p)[::-1], atol=1e-15)


def test_extended_x_eigenvalues_match_dense():
    count = 0
    for d in (2, 3, 4, 8, 16):
        for i in range(40):
            m = random_extended_x(d, states.derive_seed(d, i))
            fast = xblocks.eigenvalues_extended_x(m)
            dense = np.linalg.eigvalsh(m)[::-1]
            assert np.abs(fast - dense).max() <= 1e-10
            count += 1
    assert count == 200


def test_extended_x_rejects_dense_matrix():
    with pytest.raises(NotExtendedX):
        xblocks.eigenvalues_extended_x(np.full((8, 8), 1.0 / 8.0))


def test_x_eigenvalues_diagonal():
    p = np.array([0.4, 0.3, 0.2, 0.1])
    assert np.allclose(xblocks.eigenvalues_x(np.diag(p)), p, atol=1e-15)


def test_x_eigenvalues_bell_marginal_pattern():
    m = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    assert np.allclose(xblocks.eigenvalues_x(m), [1.0, 0.0], atol=1e-15)


def test_x_eigenvalues_match_dense():
    rng = np.random.default_rng(3)
    for d in (2, 3, 4, 5, 8):
        for _ in range(50):
            m = random_x_hermitian(d, rng)
            fast = xblocks.eigenvalues_x(m)
            dense = np.linalg.eigvalsh(m)[::-1]
            assert np.abs(fast - dense).max() <= 1e-12


def test_x_eigenvalues_rejects_off_pattern():
    m = np.eye(4, dtype=complex)
    m[0, 1] = m[1, 0] = 0.3
    with pytest.raises(NotXStructured):
        xblocks.eigenvalues_x(m)


def test_fast_path_speed_report():
    # soft benchmark at d=16: reported, never failed
    d = 16
    mats = [random_extended_x(d, states.derive_seed(1234, i)) for i in range(200)]

    def best_of(f, repeats=5):
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            for m in mats:
                f(m)
            times.append(time.perf_counter() - t0)
        return min(times) / len(mats)

    fast = best_of(xblocks.eigenvalues_extended_x)
    dense = best_of(matcore.hermitian_eigenvalues)
    print(
        f"\nblock eigensolver at d={d}: {fast*1e6:.1f} us vs dense "
        f"{dense*1e6:.1f} us ({dense/fast:.1f}x, soft target 5x)"
    )
