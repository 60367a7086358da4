"""Sampler distributions, the orthogonal bank, and QR properties."""

import numpy as np
import pytest

from vqcinit.init_schemes import (SCHEME_NAMES, InitSpec, orthogonal_bank,
                                  qr_decompose, sample, sample_xavier_chunked)

GAMMA = np.sqrt(1.0 / 160.0)
N_PARAMS = 300

# target variance of each per-vector scheme at gamma^2 = 1/160, n_params = 300
VARIANCE_TARGETS = {
    "zero": 0.0,
    "uniform": (2 * np.pi) ** 2 / 12.0,
    "gaussian": 1.0 / 160.0,
    "xavier_normal": 2.0 / (160.0 * 300.0),
    "he_normal": 2.0 / (160.0 * 300.0),
    "xavier_uniform": 2.0 / (160.0 * 300.0),
    "he_uniform": 2.0 / (160.0 * 300.0),
    "lecun_normal": 1.0 / (160.0 * 300.0),
    "lecun_uniform": 1.0 / (160.0 * 300.0),
}


def draws(scheme, total=200_000):
    spec = InitSpec(scheme=scheme, gamma=GAMMA)
    rng = np.random.default_rng(42)
    vectors = [sample(spec, N_PARAMS, rng) for _ in range(total // N_PARAMS + 1)]
    return np.concatenate(vectors)[:total]


@pytest.mark.parametrize("scheme", sorted(VARIANCE_TARGETS))
def test_empirical_variance_matches_target(scheme):
    values = draws(scheme)
    target = VARIANCE_TARGETS[scheme]
    if target == 0.0:
        assert np.all(values == 0.0)
    else:
        assert np.var(values) == pytest.approx(target, rel=0.02)


def test_lecun_normal_variance_value():
    # gamma^2 / n_params with the benchmark settings is 1/48000
    assert VARIANCE_TARGETS["lecun_normal"] == pytest.approx(2.0833333e-5, rel=1e-6)


@pytest.mark.parametrize("scheme,bound", [
    ("uniform", None),
    ("xavier_uniform", GAMMA * np.sqrt(6.0 / N_PARAMS)),
    ("he_uniform", GAMMA * np.sqrt(6.0 / N_PARAMS)),
    ("lecun_uniform", GAMMA * np.sqrt(3.0 / N_PARAMS)),
])
def test_uniform_schemes_stay_in_bounds(scheme, bound):
    values = draws(scheme)
    if bound is None:
        assert np.all(values >= 0.0) and np.all(values < 2 * np.pi)
    else:
        assert np.all(np.abs(values) <= bound)


def test_xavier_and_he_draw_identically():
    """The global variants coincide; assert it rather than hide it."""
    for a, b in (("xavier_normal", "he_normal"), ("xavier_uniform", "he_uniform")):
        xa = sample(InitSpec(scheme=a, gamma=GAMMA), 50,
                    np.random.default_rng(123))
        he = sample(InitSpec(scheme=b, gamma=GAMMA), 50,
                    np.random.default_rng(123))
        np.testing.assert_array_equal(xa, he)


def test_sampling_is_seed_deterministic():
    for scheme in SCHEME_NAMES:
        if scheme in ("orthogonal", "xavier_chunked"):
            continue
        spec = InitSpec(scheme=scheme, gamma=GAMMA)
        first = sample(spec, 40, np.random.default_rng(5))
        second = sample(spec, 40, np.random.default_rng(5))
        np.testing.assert_array_equal(first, second)


def test_uniform_range_is_configurable():
    spec = InitSpec(scheme="uniform", uniform_low=-0.5, uniform_high=0.5)
    values = sample(spec, 1000, np.random.default_rng(0))
    assert np.all(values >= -0.5) and np.all(values < 0.5)


def test_chunked_sampler():
    chunks = tuple((30 * layer, 30) for layer in range(10))
    rng = np.random.default_rng(42)
    pooled = np.concatenate(
        [sample_xavier_chunked(chunks, 15, rng) for _ in range(600)])
    assert pooled.shape == (180_000,)
    assert np.var(pooled) == pytest.approx(1.0 / 15.0, rel=0.02)
    # per-chunk std follows 1/sqrt(n_qubits), about 0.2582 at n=15
    assert np.std(pooled) == pytest.approx(0.2582, abs=0.002)
    single = sample_xavier_chunked(((0, 4),), 1, np.random.default_rng(1))
    assert single.shape == (4,)
    with pytest.raises(ValueError):
        sample_xavier_chunked((), 15, rng)


def test_sample_rejects_bank_schemes():
    with pytest.raises(ValueError):
        sample(InitSpec(scheme="orthogonal"), 10, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample(InitSpec(scheme="xavier_chunked"), 10, np.random.default_rng(0))
    with pytest.raises(ValueError):
        sample(InitSpec(scheme="gaussian", gamma=GAMMA), 0, np.random.default_rng(0))


def test_unknown_scheme_is_rejected():
    with pytest.raises(ValueError, match="xavierish"):
        InitSpec(scheme="xavierish")


def test_qr_identity():
    q, r = qr_decompose(np.eye(4))
    np.testing.assert_array_equal(q, np.eye(4))
    np.testing.assert_array_equal(r, np.eye(4))


def test_qr_of_permutation_is_orthogonal():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    q, r = qr_decompose(a)
    np.testing.assert_allclose(q.T @ q, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(q @ r, a, atol=1e-14)
    assert np.all(np.diag(r) >= 0.0)


@pytest.mark.parametrize("size", [5, 50, 300])
def test_qr_reconstruction_and_orthonormality(size):
    rng = np.random.default_rng(size)
    a = rng.normal(size=(size, size))
    q, r = qr_decompose(a)
    assert np.max(np.abs(q @ r - a)) < 1e-10
    assert np.max(np.abs(q.T @ q - np.eye(size))) < 1e-10
    assert np.all(np.diag(r) >= 0.0)
    assert np.all(r[np.tril_indices(size, k=-1)] == 0.0)


def test_qr_rejects_bad_input():
    with pytest.raises(ValueError):
        qr_decompose(np.ones((3, 2)))
    with pytest.raises(ValueError):
        qr_decompose(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_orthogonal_bank_geometry():
    bank = orthogonal_bank(5, 300, GAMMA, 1.0, np.random.default_rng(42))
    assert bank.rows.shape == (5, 300)
    norms = np.linalg.norm(bank.rows, axis=1)
    np.testing.assert_allclose(norms, GAMMA, atol=1e-10)
    gram = bank.rows @ bank.rows.T
    off_diag = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off_diag)) < 1e-10 * GAMMA**2 + 1e-12


def test_orthogonal_bank_scaling_and_edge_cases():
    bank = orthogonal_bank(1, 1, 2.0, 0.25, np.random.default_rng(0))
    assert abs(bank.rows[0, 0]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        orthogonal_bank(6, 5, 1.0, 1.0, np.random.default_rng(0))


def test_sign_fix_makes_first_row_sign_symmetric():
    """Without the non-negative-diagonal convention the first Q row would
    inherit a LAPACK-dependent sign bias; with it, each coordinate's mean
    over many draws should sit within a few standard errors of zero."""
    rng = np.random.default_rng(42)
    trials, dim = 4000, 4
    rows = np.empty((trials, dim))
    for t in range(trials):
        q, _ = qr_decompose(rng.normal(size=(dim, dim)))
        rows[t] = q[0]
    means = rows.mean(axis=0)
    stderr = rows.std(axis=0, ddof=1) / np.sqrt(trials)
    assert np.all(np.abs(means) < 4.0 * stderr + 1e-12)
