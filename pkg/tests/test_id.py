import numpy as np
import pytest

from interpdecomp.dense import truncated_svd_error
from interpdecomp.errors import InvalidArgumentError, NotPositiveDefiniteError, SingularMatrixError
from interpdecomp.id import (
    diagnostics,
    id_auto,
    make_rng,
    optim_id,
    optim_rid,
    oversampled_count,
    sample_without_replacement,
    skeleton,
)


@pytest.fixture
def rng():
    return np.random.default_rng(77)


def test_identity_full_rank():
    res = optim_id(np.eye(5), 5)
    np.testing.assert_allclose(res.approx, np.eye(5), atol=0)
    assert diagnostics(np.eye(5), res).relative_error == 0.0
    # z is the permutation matrix with z[:, cols] = I
    assert sorted(res.cols) == list(range(5))
    p = np.zeros((5, 5))
    p[np.arange(5), res.cols] = 1.0
    np.testing.assert_array_equal(res.z, p)


def test_rank_two_picks_largest_then_orthogonal():
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([0.0, 1.0, 0.0])
    a = np.column_stack([u, 2 * u, v])
    res = optim_id(a, 2)
    assert list(res.cols) == [1, 2]
    np.testing.assert_allclose(res.approx, a, atol=1e-15)
    np.testing.assert_allclose(res.z, [[0.5, 1.0, 0.0], [0.0, 0.0, 1.0]], atol=1e-15)


def test_optim_id_is_least_squares_solution(rng):
    a = rng.standard_normal((30, 45))
    res = optim_id(a, 12)
    c = a[:, res.cols]
    z_ref = np.linalg.lstsq(c, a, rcond=None)[0]
    np.testing.assert_allclose(res.z, z_ref, atol=1e-10)
    np.testing.assert_array_equal(res.approx, c @ res.z)


def test_optim_id_deterministic(rng):
    a = rng.standard_normal((20, 25))
    r1, r2 = optim_id(a, 7), optim_id(a, 7)
    np.testing.assert_array_equal(r1.z, r2.z)
    np.testing.assert_array_equal(r1.cols, r2.cols)


def test_optim_id_rank_deficient_signals():
    a = np.array([[1.0, 0.0, 2.0], [0.0, 0.0, 0.0]])
    with pytest.raises(NotPositiveDefiniteError):
        optim_id(a, 2)


@pytest.mark.parametrize("k", [0, 6, -1, 2.5])
def test_k_out_of_range(rng, k):
    a = rng.standard_normal((5, 8))
    with pytest.raises(InvalidArgumentError):
        optim_id(a, k)
    with pytest.raises(InvalidArgumentError):
        optim_rid(a, k, seed=0)


# -- randomized --

def test_oversampled_count():
    assert oversampled_count(190, 1000) == 228
    assert oversampled_count(10, 1000) == 12
    assert oversampled_count(4, 1000) == 4
    assert oversampled_count(10, 10) == 10
    assert oversampled_count(10, 1000, 0.5) == 15


def test_sampling_without_replacement_is_uniform():
    rng = make_rng(5)
    counts = np.zeros(10)
    trials = 20000
    for _ in range(trials):
        idx = sample_without_replacement(10, 3, rng)
        assert len(set(idx)) == 3
        counts[idx] += 1
    # each index appears with probability 3/10
    expected = trials * 0.3
    assert np.max(np.abs(counts - expected)) < 5 * np.sqrt(expected)


def test_rid_forced_full_sample():
    res = optim_rid(np.eye(10), 10, seed=3)
    assert sorted(res.cols) == list(range(10))
    assert diagnostics(np.eye(10), res).relative_error == 0.0


def test_rid_seed_reproducible(rng):
    a = rng.standard_normal((20, 60))
    r1, r2 = optim_rid(a, 8, seed=11), optim_rid(a, 8, seed=11)
    np.testing.assert_array_equal(r1.cols, r2.cols)
    np.testing.assert_array_equal(r1.z, r2.z)
    r3 = optim_rid(a, 8, seed=12)
    assert not np.array_equal(r1.cols, r3.cols)


def test_rid_cols_are_original_indices(rng):
    a = rng.standard_normal((15, 50))
    res = optim_rid(a, 6, seed=2)
    assert len(set(res.cols)) == 6
    np.testing.assert_array_equal(res.approx, a[:, res.cols] @ res.z)
    assert diagnostics(a, res).identity_deviation <= 1e-8


def test_rid_rank_deficient_sample_raises():
    a = np.zeros((4, 20))
    a[0, 0] = a[1, 1] = 1.0
    raised = 0
    for seed in range(20):
        try:
            optim_rid(a, 2, seed=seed)
        except SingularMatrixError:
            raised += 1
    assert raised > 0


# -- transpose dual --

def test_auto_transposes_tall(rng):
    a = rng.standard_normal((1000, 784))
    res = id_auto(a, 50)
    assert res.transposed
    assert res.approx.shape == (1000, 784)
    assert res.z.shape == (50, 1000)
    np.testing.assert_allclose(res.approx, res.z.T @ a[res.cols, :], atol=1e-9)
    np.testing.assert_array_equal(skeleton(a, res), a[res.cols, :])


@pytest.mark.parametrize("method", ["deterministic", "randomized"])
def test_auto_square_matches_direct(rng, method):
    a = rng.standard_normal((12, 12))
    got = id_auto(a, 5, method=method, seed=9)
    want = optim_id(a, 5) if method == "deterministic" else optim_rid(a, 5, seed=9)
    assert not got.transposed
    np.testing.assert_array_equal(got.cols, want.cols)
    np.testing.assert_array_equal(got.z, want.z)


def test_auto_tall_low_rank_exact(rng):
    rows = rng.standard_normal((3, 8))
    a = rows[rng.integers(0, 3, 50)]
    a[:3] = rows
    res = id_auto(a, 3)
    assert res.transposed
    assert diagnostics(a, res).relative_error < 1e-10


def test_auto_unknown_method(rng):
    with pytest.raises(InvalidArgumentError):
        id_auto(rng.standard_normal((3, 4)), 2, method="magic")


# -- diagnostics --

def test_diagnostics_fields(rng):
    a = rng.standard_normal((40, 60))
    res = optim_id(a, 15)
    d = diagnostics(a, res)
    assert d.identity_deviation <= 1e-8
    assert d.relative_error >= truncated_svd_error(a, 15) - 1e-10
    assert d.max_abs_z == pytest.approx(np.max(np.abs(res.z)))
    assert d.entry_bound_satisfied == (d.max_abs_z <= 2 + 1e-12)


def test_diagnostics_flags_large_entries():
    a = np.array([[1.0, 0.0, 3.0], [0.0, 1.0, 0.0]])
    res = optim_id(a, 2)
    # the largest column is selected first, so every coefficient stays bounded
    assert diagnostics(a, res).entry_bound_satisfied
    forced = type(res)(cols=np.array([0, 1]), z=np.array([[1.0, 0.0, 3.0], [0.0, 1.0, 0.0]]),
                       approx=a)
    d = diagnostics(a, forced)
    assert d.max_abs_z == 3.0 and not d.entry_bound_satisfied
    assert d.relative_error == 0.0


def test_diagnostics_shape_mismatch(rng):
    a = rng.standard_normal((5, 6))
    res = optim_id(a, 2)
    with pytest.raises(InvalidArgumentError):
        diagnostics(a[:, :5], res)
