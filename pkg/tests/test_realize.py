import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import gwgauss as gw

d_vectors = st.lists(
    st.floats(0.05, 0.95, allow_nan=False), min_size=1, max_size=5
).map(lambda xs: np.array(sorted(xs, reverse=True)))


def test_family_realization_scalar_values():
    real = gw.family_realization([0.5], 1.2)
    np.testing.assert_allclose(real.qz1, [[7.0 / 12.0]], rtol=1e-14)
    np.testing.assert_allclose(real.qz2, [[0.4]], rtol=1e-14)
    np.testing.assert_allclose(real.c1, [[math.sqrt(0.5) / 1.2]], rtol=1e-14)
    np.testing.assert_allclose(real.c2, [[math.sqrt(0.5)]], rtol=1e-14)


@given(d_vectors, st.integers(0, 2**32 - 1))
def test_state_triple_reproduces_pair_and_ci(d, seed):
    qw = gw.sample_state_matrix(d, np.random.default_rng(seed))
    triple = gw.state_triple(d, qw)
    n = d.size
    np.testing.assert_allclose(triple.pair.q11.entries, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(triple.pair.q22.entries, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(triple.pair.q12, np.diag(d), atol=1e-12)
    # conditional independence: Q12 = Q1W QW^{-1} Q2W.T exactly
    ci = triple.q1w @ np.linalg.solve(triple.qw.entries, triple.q2w.T)
    np.testing.assert_allclose(ci, np.diag(d), atol=1e-10)
    # the whole triple is a covariance
    ev = np.linalg.eigvalsh(triple.joint())
    assert ev.min() > -1e-10


@given(d_vectors, st.integers(0, 2**32 - 1))
def test_noise_covariances_positive_semidefinite(d, seed):
    qw = gw.sample_state_matrix(d, np.random.default_rng(seed))
    real = gw.family_realization(d, qw)
    assert np.linalg.eigvalsh(real.qz1).min() > -1e-10
    assert np.linalg.eigvalsh(real.qz2).min() > -1e-10


def test_encoder_split_inverts_family_construction():
    d = np.array([0.8, 0.3])
    qw = np.diag([1.1, 0.9])
    real = gw.family_realization(d, qw)
    split = gw.encoder_split(gw.state_triple(d, qw))
    np.testing.assert_allclose(split.c1, real.c1, atol=1e-12)
    np.testing.assert_allclose(split.c2, real.c2, atol=1e-12)
    np.testing.assert_allclose(split.qz1, real.qz1, atol=1e-12)
    np.testing.assert_allclose(split.qz2, real.qz2, atol=1e-12)


def test_optimal_state_scalar_gains():
    st_ = gw.optimal_state(gw.IndexSextuple(0, 1, 0, 0, 1, 0), [0.5])
    np.testing.assert_allclose(st_.l1, [math.sqrt(0.5) / 1.5], rtol=1e-14)
    np.testing.assert_allclose(st_.l2, st_.l1, rtol=1e-14)
    np.testing.assert_allclose(st_.l3, [math.sqrt(0.5 / 1.5)], rtol=1e-14)
    # gains reconstruct a unit-variance state: l1^2 + l2^2 + 2 l1 l2 d + l3^2 = 1
    l1, l3, d = st_.l1[0], st_.l3[0], 0.5
    assert math.isclose(2 * l1 * l1 * (1 + d) + l3 * l3, 1.0, rel_tol=1e-13)


def test_optimal_triple_cov_structure():
    idx = gw.IndexSextuple(1, 2, 1, 1, 2, 2)
    d = np.array([0.7, 0.3])
    q = gw.optimal_triple_cov(idx, d)
    p1, p2, nw = 4, 5, 3
    assert q.shape == (p1 + p2 + nw, p1 + p2 + nw)
    np.testing.assert_allclose(q[:p1, :p1], np.eye(p1), atol=1e-12)
    np.testing.assert_allclose(q[p1:p1 + p2, p1:p1 + p2], np.eye(p2), atol=1e-12)
    np.testing.assert_allclose(
        q[:p1, p1:p1 + p2], gw.canonical_cross_pattern(idx, d), atol=1e-12
    )
    # conditional independence through the state block
    q1w = q[:p1, p1 + p2:]
    q2w = q[p1:p1 + p2, p1 + p2:]
    qw = q[p1 + p2:, p1 + p2:]
    ci = q1w @ np.linalg.solve(qw, q2w.T)
    np.testing.assert_allclose(ci, q[:p1, p1:p1 + p2], atol=1e-10)
    assert np.linalg.eigvalsh(q).min() > -1e-10


def test_optimal_state_information_matches_common_information():
    # I(Y1,Y2;W) at the optimal state equals the minimum over the family
    idx = gw.IndexSextuple(0, 3, 0, 0, 3, 0)
    d = np.array([0.8, 0.5, 0.1])
    q = gw.optimal_triple_cov(idx, d)
    mi = gw.gaussian_mi(q, (6, 3))
    assert math.isclose(mi, gw.common_information(idx, d).value, rel_tol=1e-10)


def test_test_channel_scalar_values():
    ch = gw.test_channel([0.5], 1.0, [0.25], [0.25])
    np.testing.assert_allclose(ch.qz1, [[0.5]], rtol=1e-14)
    np.testing.assert_allclose(ch.a1, [[0.5]], rtol=1e-14)
    np.testing.assert_allclose(ch.qv1, [[0.125]], rtol=1e-14)
    np.testing.assert_allclose(ch.qe1, [[0.25]], rtol=1e-14)


@given(d_vectors, st.integers(0, 2**32 - 1))
def test_test_channel_second_moment_identity(d, seed):
    # cov(reconstruction) + error covariance = conditional covariance
    rng = np.random.default_rng(seed)
    q = np.ones(d.size)
    ch = gw.test_channel(d, q, 0.3 * (1 - d), 0.4 * (1 - d))
    for a, qv, qe, qz in ((ch.a1, ch.qv1, ch.qe1, ch.qz1), (ch.a2, ch.qv2, ch.qe2, ch.qz2)):
        recon_cov = a @ qz @ a.T + qv
        np.testing.assert_allclose(recon_cov + qe, qz, atol=1e-10)
        assert np.linalg.eigvalsh(gw.sqrt_psd(qv) @ gw.sqrt_psd(qv)).min() > -1e-10


def test_allocation_bounds_enforced():
    with pytest.raises(gw.AllocationOutOfRange):
        gw.test_channel([0.5], 1.0, [0.75], [0.25])  # above conditional variance 0.5
    with pytest.raises(gw.AllocationOutOfRange):
        gw.test_channel([0.5], 1.0, [0.0], [0.25])


def test_sampling_is_deterministic_per_seed():
    st_ = gw.optimal_state(gw.IndexSextuple(0, 2, 1, 0, 2, 0), [0.6, 0.2])
    a = gw.sample(st_, 2000, seed=9)
    b = gw.sample(st_, 2000, seed=9)
    c = gw.sample(st_, 2000, seed=10)
    np.testing.assert_array_equal(a.y1, b.y1)
    np.testing.assert_array_equal(a.w, b.w)
    assert not np.array_equal(a.y1, c.y1)


def test_sample_shapes_per_kind():
    d = np.array([0.6, 0.2])
    real = gw.family_realization(d, np.eye(2))
    blk = gw.sample(real, 1500, seed=1)
    assert blk.y1.shape == (1500, 2) and blk.w.shape == (1500, 2)
    assert blk.yhat1 is None

    idx = gw.IndexSextuple(1, 2, 1, 1, 2, 2)
    st_ = gw.optimal_state(idx, d)
    blk = gw.sample(st_, 1500, seed=1)
    assert blk.y1.shape == (1500, 4) and blk.y2.shape == (1500, 5)
    assert blk.w.shape == (1500, 3)

    ch = gw.test_channel(d, np.ones(2), [0.1, 0.1], [0.2, 0.2])
    blk = gw.sample(ch, 1500, seed=1)
    assert blk.yhat1.shape == (1500, 2) and blk.yhat2.shape == (1500, 2)


def test_family_samples_match_target_moments():
    d = np.array([0.8, 0.3])
    qw = np.diag([1.2, 0.8])
    blk = gw.sample(gw.family_realization(d, qw), 60000, seed=77)
    rep = gw.validate_realization(blk, gw.state_triple(d, qw).joint())
    assert rep.cov_rel_err < 0.05
    assert rep.ci_residual < 0.05


def test_optimal_samples_match_target_moments_with_identical_parts():
    idx = gw.IndexSextuple(1, 2, 1, 1, 2, 2)
    d = np.array([0.7, 0.3])
    blk = gw.sample(gw.optimal_state(idx, d), 60000, seed=5)
    rep = gw.validate_realization(blk, gw.optimal_triple_cov(idx, d))
    assert rep.cov_rel_err < 0.05
    assert rep.ci_residual < 0.05
    # identical coordinates pass through exactly
    np.testing.assert_array_equal(blk.y1[:, 0], blk.y2[:, 0])
    np.testing.assert_array_equal(blk.y1[:, 0], blk.w[:, 0])


def test_channel_samples_hit_distortion_targets():
    d = np.array([0.8, 0.5, 0.1])
    alloc1 = np.array([0.05, 0.1, 0.2])
    alloc2 = np.array([0.1, 0.1, 0.1])
    ch = gw.test_channel(d, np.ones(3), alloc1, alloc2)
    blk = gw.sample(ch, 60000, seed=3)
    e1, e2 = gw.validate_distortion(blk, alloc1.sum(), alloc2.sum())
    assert e1 < 0.05 and e2 < 0.05


def test_sqrt_psd_squares_back(rng):
    g = rng.standard_normal((4, 4))
    q = g @ g.T
    r = gw.sqrt_psd(q)
    np.testing.assert_allclose(r @ r, q, atol=1e-10)
    np.testing.assert_allclose(r, r.T, atol=1e-12)


def test_sqrt_psd_rejects_indefinite():
    with pytest.raises(gw.NotPositiveDefinite):
        gw.sqrt_psd(np.diag([1.0, -0.5]))
