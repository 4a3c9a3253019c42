import numpy as np
import pytest

from rislink.power import (
    build_covariances,
    channel_eigvals,
    waterfill,
    waterfill_covariances,
)
from rislink.rng import substream


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def test_eigvals_identity_channel():
    heq = np.eye(3, dtype=complex)[None]
    lams, u = channel_eigvals(heq, 1.0)
    np.testing.assert_allclose(lams, np.ones((1, 3)), atol=1e-12)
    np.testing.assert_allclose(np.abs(u[0].conj().T @ u[0]), np.eye(3), atol=1e-12)


def test_eigvals_scalar_channel():
    h = 0.8 - 0.3j
    lams, _ = channel_eigvals(np.full((1, 1, 1), h), 0.5)
    np.testing.assert_allclose(lams, [[abs(h) ** 2 / 0.5]], rtol=1e-12)


def test_eigvals_match_svd_oracle():
    rng = substream(70)
    heq = crandn(rng, 2, 3, 3)
    sigma2 = 0.9
    lams, u = channel_eigvals(heq, sigma2)
    for k in range(2):
        s = np.linalg.svd(heq[k] / np.sqrt(sigma2), compute_uv=False)
        np.testing.assert_allclose(lams[k], np.sort(s**2)[::-1], rtol=1e-10, atol=1e-12)
        # eigenvectors diagonalize the Gram matrix
        gram = heq[k].conj().T @ heq[k] / sigma2
        np.testing.assert_allclose(u[k].conj().T @ gram @ u[k], np.diag(lams[k]), atol=1e-9)


def test_waterfill_equal_gains():
    p, cutoff = waterfill(np.array([1.0, 1.0]), 2.0)
    np.testing.assert_allclose(p, [1.0, 1.0], atol=1e-9)
    assert cutoff == pytest.approx(0.5, abs=1e-9)


def test_waterfill_hand_derived():
    p, cutoff = waterfill(np.array([4.0, 1.0]), 1.0)
    np.testing.assert_allclose(p, [0.875, 0.125], atol=1e-9)
    assert cutoff == pytest.approx(8.0 / 9.0, abs=1e-9)


def test_waterfill_single_stream():
    for lam in (1e-3, 1.0, 1e4):
        p, _ = waterfill(np.array([lam]), 3.0)
        np.testing.assert_allclose(p, [3.0], rtol=1e-12)


def test_waterfill_rejects_degenerate():
    with pytest.raises(ValueError):
        waterfill(np.array([0.0, 1e-16]), 1.0)
    with pytest.raises(ValueError):
        waterfill(np.array([1.0]), 0.0)


def test_waterfill_kkt_and_budget_random():
    rng = substream(71)
    for _ in range(100):
        n = rng.integers(2, 12)
        lam = rng.uniform(1e-3, 50.0, size=n)
        pt = rng.uniform(0.1, 100.0)
        p, cutoff = waterfill(lam, pt)
        assert abs(p.sum() - pt) <= 1e-9 * pt
        active = p > 0
        # active pairs fill to the water level, inactive sit above it
        np.testing.assert_allclose(p[active] + 1.0 / lam[active], 1.0 / cutoff, atol=1e-9)
        assert np.all(1.0 / lam[~active] >= 1.0 / cutoff - 1e-9)


def test_waterfill_monotone_in_gain():
    rng = substream(72)
    for _ in range(50):
        lam = rng.uniform(0.1, 5.0, size=2)
        pt = rng.uniform(0.5, 5.0)
        p_before, _ = waterfill(lam, pt)
        bumped = lam.copy()
        bumped[0] *= 1.3
        p_after, _ = waterfill(bumped, pt)
        assert p_after[0] >= p_before[0] - 1e-9


def test_build_covariances():
    u = np.eye(3, dtype=complex)[None]
    p = np.array([[2.0, 1.0, 0.0]])
    np.testing.assert_allclose(build_covariances(u, p)[0], np.diag([2.0, 1.0, 0.0]), atol=1e-12)

    assert np.all(build_covariances(u, np.zeros((1, 3))) == 0)

    rng = substream(73)
    q_full, _ = np.linalg.qr(crandn(rng, 3, 3))
    q = build_covariances(q_full[None], np.array([[1.0, 1.0, 0.0]]))[0]
    eig = np.sort(np.linalg.eigvalsh(q))
    np.testing.assert_allclose(eig, [0.0, 1.0, 1.0], atol=1e-10)


def test_waterfill_covariances_invariants():
    rng = substream(74)
    heq = crandn(rng, 4, 2, 5)
    alloc = waterfill_covariances(heq, total_power=7.0, noise_var=0.8)
    assert alloc.p.shape == (4, 2)
    assert alloc.p.sum() <= 7.0 * (1 + 1e-9)
    assert abs(alloc.p.sum() - 7.0) <= 1e-9 * 7.0
    herm_err = np.max(np.abs(alloc.q - alloc.q.conj().transpose(0, 2, 1)))
    assert herm_err <= 1e-10
    eigs = np.linalg.eigvalsh(alloc.q)
    assert eigs.min() >= -1e-10
    rebuilt = np.einsum("ktg,kg,ksg->kts", alloc.u, alloc.p, alloc.u.conj())
    assert np.max(np.abs(rebuilt - alloc.q)) <= 1e-10
    np.testing.assert_allclose(np.einsum("kii->k", alloc.q).real, alloc.p.sum(axis=1), atol=1e-10)


def test_waterfilled_rate_beats_uniform():
    from rislink.rate import rate_from_heq

    rng = substream(75)
    for _ in range(20):
        k, n_r, n_t = 3, 2, 4
        heq = crandn(rng, k, n_r, n_t)
        pt = rng.uniform(0.5, 40.0)
        alloc = waterfill_covariances(heq, pt, 1.0)
        n_s = alloc.p.shape[1]
        uniform = build_covariances(alloc.u, np.full((k, n_s), pt / (k * n_s)))
        assert rate_from_heq(heq, alloc.q, 1.0) >= rate_from_heq(heq, uniform, 1.0) - 1e-12
