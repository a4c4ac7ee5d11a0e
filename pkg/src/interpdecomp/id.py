"""
Rank-k interpolative decompositions ``A ~= C Z`` with ``C = A[:, cols]``.

``optim_id`` picks ``cols`` by column-pivoted QR of the whole matrix;
``optim_rid`` runs the same pivoting on a random column sample.  Both
compute ``Z`` from the normal equations ``R_k^T R_k Z = C^T A``.
"""
from dataclasses import dataclass

import numpy as np

from .dense import (
    as_matrix,
    frobenius_norm,
    qr_column_pivoted,
    solve_posdef,
    solve_symmetric_indefinite,
)
from .errors import InvalidArgumentError

DEFAULT_OVERSAMPLING = 0.2
ENTRY_BOUND = 2.0
ENTRY_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class IdResult:
    """Columns, coefficients and reconstruction of one ID.

    When ``transposed`` is set the decomposition was computed on ``A.T``:
    ``cols`` then indexes rows of ``A`` and ``approx == z.T @ A[cols, :]``.
    ``approx`` is always in the orientation of the original input.
    """
    cols: np.ndarray
    z: np.ndarray
    approx: np.ndarray
    transposed: bool = False


@dataclass(frozen=True)
class IdDiagnostics:
    relative_error: float
    max_abs_z: float
    identity_deviation: float
    entry_bound_satisfied: bool


def _check_rank(a, k):
    limit = min(a.shape)
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= limit:
        raise InvalidArgumentError(f"k={k!r} outside [1, {limit}] for shape {a.shape}")
    return int(k)


def oversampled_count(k, n, fraction=DEFAULT_OVERSAMPLING):
    """Number of sampled columns: ``k + floor(fraction * k)``, clamped to ``n``."""
    if fraction < 0:
        raise InvalidArgumentError(f"oversampling fraction must be >= 0, got {fraction}")
    return min(n, k + int(fraction * k))


def sample_without_replacement(n, p, rng):
    """First ``p`` entries of a partial Fisher-Yates shuffle of ``range(n)``."""
    idx = np.arange(n)
    swaps = rng.integers(np.arange(p), n)
    for i, j in enumerate(swaps):
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:p].copy()


def make_rng(seed):
    """Counter-based generator (Philox) so any integer seed gives an independent stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def _solve_coefficients(r_k, c, a, solver):
    gram = r_k.T @ r_k
    return solver(gram, c.T @ a)


def optim_id(a, k):
    """Deterministic rank-``k`` ID from ``k`` steps of column-pivoted QR.

    Raises ``NotPositiveDefiniteError`` when ``R_k^T R_k`` is not positive
    definite, which signals ``rank(a) < k``.
    """
    a = as_matrix(a)
    k = _check_rank(a, k)
    fac = qr_column_pivoted(a, k)
    cols = fac.perm[:k].copy()
    c = a[:, cols]
    z = _solve_coefficients(fac.r[:, :k], c, a, solve_posdef)
    return IdResult(cols=cols, z=z, approx=c @ z)


def optim_rid(a, k, oversampling_fraction=DEFAULT_OVERSAMPLING, seed=None):
    """Randomized rank-``k`` ID from pivoted QR of ``k + floor(0.2 k)`` sampled columns.

    The sampled columns may span fewer than ``k`` dimensions; an exactly
    singular normal matrix then raises ``SingularMatrixError``.
    """
    a = as_matrix(a)
    k = _check_rank(a, k)
    n = a.shape[1]
    p = oversampled_count(k, n, oversampling_fraction)
    idx = sample_without_replacement(n, p, make_rng(seed))
    sample = a[:, idx]
    fac = qr_column_pivoted(sample, k)
    cols = idx[fac.perm[:k]]
    c = sample[:, fac.perm[:k]]
    z = _solve_coefficients(fac.r[:, :k], c, a, solve_symmetric_indefinite)
    return IdResult(cols=cols, z=z, approx=c @ z)


def id_auto(a, k, method="deterministic", seed=None,
            oversampling_fraction=DEFAULT_OVERSAMPLING):
    """Run ``method`` on ``a``, or on ``a.T`` when ``a`` has more rows than columns."""
    a = as_matrix(a)
    if method == "deterministic":
        run = optim_id
    elif method == "randomized":
        def run(x, rank):
            return optim_rid(x, rank, oversampling_fraction=oversampling_fraction, seed=seed)
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")

    if a.shape[0] <= a.shape[1]:
        return run(a, k)
    dual = run(a.T, k)
    return IdResult(cols=dual.cols, z=dual.z, approx=dual.approx.T, transposed=True)


def skeleton(a, result):
    """The matrix of reused columns (or rows, for a transposed result)."""
    a = as_matrix(a)
    return a[result.cols, :] if result.transposed else a[:, result.cols]


def diagnostics(a, result):
    a = as_matrix(a)
    if result.approx.shape != a.shape:
        raise InvalidArgumentError(
            f"approximation shape {result.approx.shape} does not match {a.shape}")
    norm = frobenius_norm(a)
    resid = frobenius_norm(a - result.approx)
    rel = resid / norm if norm > 0 else resid
    z = result.z
    k = len(result.cols)
    max_abs_z = float(np.max(np.abs(z)))
    identity_dev = float(np.max(np.abs(z[:, result.cols] - np.eye(k))))
    return IdDiagnostics(
        relative_error=float(rel),
        max_abs_z=max_abs_z,
        identity_deviation=identity_dev,
        entry_bound_satisfied=bool(max_abs_z <= ENTRY_BOUND + ENTRY_BOUND_SLACK),
    )
