"""Property tests for the kernel and ID invariants on random well-conditioned inputs."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from interpdecomp.dense import (
    frobenius_norm,
    qr_column_pivoted,
    solve_posdef,
    solve_symmetric_indefinite,
    svd,
    truncated_svd_error,
)
from interpdecomp.id import diagnostics, id_auto, optim_id, optim_rid

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 40)


def gaussian(seed, m, n):
    return np.random.default_rng(seed).standard_normal((m, n))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=dims, n=dims, data=st.data())
def test_qr_invariants_and_prefix(seed, m, n, data):
    a = gaussian(seed, m, n)
    s = data.draw(st.integers(1, min(m, n)))
    k = data.draw(st.integers(1, s))
    fac = qr_column_pivoted(a, s)
    assert np.max(np.abs(fac.q.T @ fac.q - np.eye(s))) <= 1e-10
    assert frobenius_norm(a[:, fac.perm[:s]] - fac.q @ fac.r[:, :s]) <= 1e-10 * frobenius_norm(a)
    d = np.abs(np.diag(fac.r[:, :s]))
    assert np.all(d[:-1] >= d[1:] * (1 - 1e-10))
    np.testing.assert_array_equal(qr_column_pivoted(a, k).perm[:k], fac.perm[:k])


def conditioned_symmetric(seed, n, definite, cond):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    mags = np.geomspace(1.0, 1.0 / cond, n)
    if not definite:
        mags = mags * rng.choice([-1.0, 1.0], n)
    return (q * mags) @ q.T


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 25), definite=st.booleans(),
       log_cond=st.floats(0, 6), nrhs=st.integers(1, 4))
def test_solve_residual_bound(seed, n, definite, log_cond, nrhs):
    s = conditioned_symmetric(seed, n, definite, 10.0 ** log_cond)
    b = np.random.default_rng(seed + 1).standard_normal((n, nrhs))
    solvers = [solve_symmetric_indefinite] + ([solve_posdef] if definite else [])
    for solve in solvers:
        x = solve(s, b)
        assert frobenius_norm(s @ x - b) <= 1e-9 * frobenius_norm(s) * frobenius_norm(x) + 1e-12


@settings(max_examples=100, deadline=None)
@given(seed=seeds, m=dims, n=dims)
def test_svd_contract(seed, m, n):
    a = gaussian(seed, m, n)
    res = svd(a)
    r = min(m, n)
    assert np.max(np.abs(res.u.T @ res.u - np.eye(r))) <= 1e-9
    assert np.max(np.abs(res.vt @ res.vt.T - np.eye(r))) <= 1e-9
    recon = (res.u * res.singular_values) @ res.vt
    assert frobenius_norm(a - recon) <= 1e-9 * frobenius_norm(a)
    sv = res.singular_values
    assert np.all(sv >= 0) and np.all(sv[:-1] >= sv[1:])
    errs = [truncated_svd_error(a, k, sigma=sv) for k in range(1, r + 1)]
    assert all(b <= a_ + 1e-15 for a_, b in zip(errs, errs[1:]))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=st.integers(2, 40), n=st.integers(2, 60), data=st.data())
def test_deterministic_id_properties(seed, m, n, data):
    a = gaussian(seed, m, n)
    k = data.draw(st.integers(1, min(m, n)))
    res = id_auto(a, k)
    c = a[res.cols, :].T if res.transposed else a[:, res.cols]
    d = diagnostics(a, res)
    assert d.identity_deviation <= 1e-8
    assert d.relative_error >= truncated_svd_error(a, k) - 1e-10
    if not res.transposed:
        np.testing.assert_array_equal(res.approx, c @ res.z)
        resid = c.T @ (a - c @ res.z)
        assert frobenius_norm(resid) <= 1e-9 * frobenius_norm(c) * frobenius_norm(a)
    again = id_auto(a, k)
    np.testing.assert_array_equal(again.z, res.z)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, m=st.integers(2, 30), n=st.integers(2, 50))
def test_deterministic_error_monotone_in_k(seed, m, n):
    # m <= n keeps results in direct orientation for every k
    m = min(m, n)
    a = gaussian(seed, m, n)
    errs = [diagnostics(a, optim_id(a, k)).relative_error for k in range(1, m + 1)]
    assert all(b <= a_ + 1e-10 for a_, b in zip(errs, errs[1:]))
    assert errs[-1] <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=seeds, rank=st.integers(1, 6), m=st.integers(6, 30), n=st.integers(6, 40))
def test_exact_at_full_rank(seed, rank, m, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))
    assert diagnostics(a, id_auto(a, rank)).relative_error <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=st.integers(2, 30), n=st.integers(2, 60), data=st.data(),
       rng_seed=st.integers(0, 2**63))
def test_randomized_id_properties(seed, m, n, data, rng_seed):
    m = min(m, n)
    a = gaussian(seed, m, n)
    k = data.draw(st.integers(1, m))
    res = optim_rid(a, k, seed=rng_seed)
    assert len(set(res.cols.tolist())) == k and res.cols.max() < n
    np.testing.assert_array_equal(res.approx, a[:, res.cols] @ res.z)
    assert diagnostics(a, res).relative_error >= truncated_svd_error(a, k) - 1e-10
    again = optim_rid(a, k, seed=rng_seed)
    np.testing.assert_array_equal(again.z, res.z)
