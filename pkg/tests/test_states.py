import json

import numpy as np
import pytest

from qudiscord import states
from qudiscord.errors import (
    BadSpec,
    DimensionMismatch,
    NonHermitian,
    NotPSD,
    ParseError,
    TraceNotOne,
    UnsupportedTag,
)


def test_validate_accepts_maximally_mixed():
    dm = states.validate(np.eye(4) / 4, 2)
    assert dm.dim_b == 2 and dm.dim == 4


def test_validate_rejects_non_hermitian():
    m = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    m[0, 1] = 0.6
    with pytest.raises(NonHermitian):
        states.validate(m, 2)


def test_validate_rejects_not_psd():
    with pytest.raises(NotPSD):
        states.validate(np.diag([2.0, -1.0, 0.0, 0.0]), 2)


def test_validate_rejects_bad_trace():
    with pytest.raises(TraceNotOne):
        states.validate(np.eye(4) / 2, 2)


def test_validate_rejects_bad_dims():
    with pytest.raises(DimensionMismatch):
        states.validate(np.eye(4) / 4, 3)
    with pytest.raises(DimensionMismatch):
        states.validate(np.eye(3) / 3)


def eq1_pattern_state():
    # valid 8x8 state with every block-X entry generically nonzero
    raw = states.sample_hs_random(8, 123)
    dm = states.project_to_extended_x(raw)
    mask = states.extended_x_support_mask(8)
    assert np.abs(dm.matrix[mask]).min() > 1e-4  # pattern fully populated
    return dm


def test_classify_block_x_pattern():
    dm = eq1_pattern_state()
    assert states.classify_structure(dm).tag == states.EXTENDED_X
    # entries exist only on the block-X support
    assert np.abs(dm.matrix[~states.extended_x_support_mask(8)]).max() == 0.0


def test_classify_ghz_is_x():
    assert states.classify_structure(states.ghz(3)).tag == states.X


def test_classify_uniform_is_general():
    m = np.full((8, 8), 1.0 / 8.0)
    assert states.classify_structure(m).tag == states.GENERAL


def test_x_support_subset_of_extended():
    for n in (4, 6, 8, 12):
        x = states.x_support_mask(n)
        ext = states.extended_x_support_mask(n)
        assert np.all(ext[x])


def test_parameter_counts():
    assert states.parameter_count(states.X, 2) == 7
    assert states.parameter_count(states.EXTENDED_X, 2) == 15
    assert states.parameter_count(states.EXTENDED_X, 3) == 19
    assert states.parameter_count(states.EXTENDED_X, 4) == 31
    for n_qubits in range(2, 7):
        d = 2 ** (n_qubits - 1)
        assert states.parameter_count(states.EXTENDED_X, d) == 2 ** (n_qubits + 2) - 1


def test_parameter_count_rejects_general():
    with pytest.raises(UnsupportedTag):
        states.parameter_count(states.GENERAL, 2)


def test_sampler_is_deterministic():
    a = states.sample_hs_random(8, 42)
    b = states.sample_hs_random(8, 42)
    assert np.array_equal(a.matrix, b.matrix)
    c = states.sample_hs_random(8, 43)
    assert not np.array_equal(a.matrix, c.matrix)


def test_sampler_outputs_valid():
    for dim in (4, 8, 6):
        for i in range(10_000):
            states.sample_hs_random(dim, states.derive_seed(dim, i))


def test_sampler_mean_matches_maximally_mixed():
    # Monte-Carlo check on the sampler itself: the HS-measure mean is I/dim
    dim, n = 4, 10_000
    stack = np.empty((n, dim, dim), dtype=complex)
    for i in range(n):
        stack[i] = states.sample_hs_random(dim, states.derive_seed(99, i)).matrix
    mean = stack.mean(axis=0)
    target = np.eye(dim) / dim
    for part in (np.real, np.imag):
        dev = np.abs(part(mean) - part(target))
        se = part(stack).std(axis=0, ddof=1) / np.sqrt(n)
        assert np.all(dev <= 5.0 * np.maximum(se, 1e-15))


def test_project_to_x_is_cptp_and_idempotent():
    rng_seeds = range(1000)
    for seed in rng_seeds:
        dim = 4 if seed % 2 else 8
        rho = states.sample_hs_random(dim, states.derive_seed(7, seed))
        xst = states.project_to_x(rho)
        assert abs(np.trace(xst.matrix) - 1.0) <= 1e-12
        assert np.linalg.eigvalsh(xst.matrix).min() >= -1e-12
        again = states.project_to_x(xst)
        assert np.array_equal(again.matrix, xst.matrix)
        assert states.classify_structure(xst).tag == states.X


def test_project_to_x_matches_mask_channel():
    # the masking map equals the channel built from the paired diagonal
    # projectors E_i = diag mask on {i, 2d+1-i}
    rho = states.sample_hs_random(8, 5).matrix
    total = np.zeros_like(rho)
    for i in range(4):
        mask = np.zeros(8)
        mask[i] = mask[7 - i] = 1.0
        e = np.diag(mask)
        total += e @ rho @ e
    assert np.allclose(states.project_to_x(rho).matrix, total, atol=1e-15)


def test_project_to_x_uniform_example():
    m = np.full((8, 8), 1.0 / 8.0)
    out = states.project_to_x(m).matrix
    mask = states.x_support_mask(8)
    assert np.allclose(out[mask], 1.0 / 8.0)
    assert np.abs(out[~mask]).max() == 0.0


def test_project_to_x_leaves_ghz_unchanged():
    g = states.ghz(3)
    assert np.array_equal(states.project_to_x(g).matrix, g.matrix)


def test_project_to_extended_x_valid():
    for seed in range(50):
        rho = states.sample_hs_random(8, states.derive_seed(11, seed))
        ext = states.project_to_extended_x(rho)
        states.validate(ext.matrix, 4)
        assert states.classify_structure(ext).tag == states.EXTENDED_X


def test_named_states():
    assert np.allclose(states.werner(0.0).matrix, np.eye(4) / 4)
    g = states.ghz(3)
    assert states.classify_structure(g).tag == states.X
    assert abs(g.matrix[0, 0] - 0.5) < 1e-15
    assert abs(g.matrix[0, 7] - 0.5) < 1e-15
    b = states.bell(1)
    from qudiscord import matcore

    assert np.allclose(matcore.partial_trace(b.matrix, 2, "A"), np.eye(2) / 2)
    w = states.w_state(3)
    assert abs(np.trace(w.matrix) - 1.0) < 1e-14
    cq = states.classical_quantum(0.3, np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert np.allclose(np.diag(cq.matrix), [0.3, 0.0, 0.0, 0.7])
    mm = states.maximally_mixed(6)
    assert mm.dim_b == 3


def test_named_state_grammar():
    assert np.allclose(states.named_state("bell1").matrix, states.bell(1).matrix)
    assert np.allclose(states.named_state("werner:0.5").matrix, states.werner(0.5).matrix)
    assert states.named_state("ghz:3").dim_b == 4
    assert states.named_state("w:3").dim_b == 4
    assert states.named_state("mixed:4").dim_b == 2
    for bad in ("bell9", "werner:2", "nope", "ghz:x", "w:-1"):
        with pytest.raises(BadSpec):
            states.named_state(bad)


def test_json_roundtrip(tmp_path):
    dm = states.sample_hs_random(6, 21)
    path = tmp_path / "state.json"
    states.save_state(dm, path)
    loaded = states.load_state(path)
    assert loaded.dim_b == 3
    assert np.allclose(loaded.matrix, dm.matrix, atol=1e-16)
    payload = json.loads(path.read_text())
    assert set(payload) == {"dim_a", "dim_b", "matrix"}


def test_json_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        states.load_state(path)
    path.write_text('{"dim_b": 2}')
    with pytest.raises(ParseError):
        states.load_state(path)


def test_derive_seed_is_stable_and_spread():
    a = states.derive_seed(42, 0)
    assert a == states.derive_seed(42, 0)
    seeds = {states.derive_seed(42, i) for i in range(1000)}
    assert len(seeds) == 1000
