"""
Dense kernels the ID algorithms are assembled from.

Matrices are plain 2-D float64 numpy arrays addressed as ``a[row, col]``.
Every function here is pure: inputs are copied before any in-place work.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidArgumentError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

# pivots whose residual norms agree to this relative tolerance count as tied
PIVOT_TIE_RTOL = 1e-14
# squared residual norms are recomputed once they fall below this fraction
# of the last exactly computed value
NORM_RECOMPUTE_FRACTION = 1e-6
TRIANGULAR_SINGULAR_TOL = 1e-300


def as_matrix(a, name="a"):
    """Return ``a`` as a 2-D float64 array with at least one row and column."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidArgumentError(f"{name} must be non-empty, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class PivotedQr:
    """Economy column-pivoted QR after ``steps`` Householder steps.

    ``a[:, perm[:steps]] == q @ r[:, :steps]`` and the remaining columns of
    ``r`` hold the projections of the unpivoted columns onto ``q``.
    """
    q: np.ndarray
    r: np.ndarray
    perm: np.ndarray
    steps: int


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


def matmul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise InvalidArgumentError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def frobenius_norm(a):
    a = np.asarray(a, dtype=np.float64)
    return float(np.sqrt(np.sum(a * a)))


def _householder(x):
    """Reflector ``H = I - tau v v^T`` with ``H x = beta e_0`` and ``v[0] = 1``.

    Follows the LAPACK ``dlarfg`` convention: when ``x`` is already a multiple
    of ``e_0`` no reflection is applied (``tau = 0``).
    """
    x0 = x[0]
    tail_norm = np.linalg.norm(x[1:])
    v = np.empty_like(x)
    v[0] = 1.0
    if tail_norm == 0.0:
        v[1:] = 0.0
        return v, 0.0, x0
    beta = -np.copysign(np.hypot(x0, tail_norm), x0)
    tau = (beta - x0) / beta
    v[1:] = x[1:] / (x0 - beta)
    return v, tau, beta


def _select_pivot(norms2, perm, j):
    """Column (position >= j) of largest residual norm; lowest original index on ties."""
    norms = np.sqrt(norms2[j:])
    best = norms.max()
    tied = np.flatnonzero(norms >= best * (1.0 - PIVOT_TIE_RTOL))
    return j + tied[np.argmin(perm[j:][tied])]


def qr_column_pivoted(a, max_steps=None):
    """Householder QR with greedy column pivoting, stopped after ``max_steps``.

    Greedy pivoting is prefix-stable: the first ``s`` pivots are the same
    whether or not the factorization continues, so stopping early only
    saves work.
    """
    a = as_matrix(a)
    m, n = a.shape
    limit = min(m, n)
    if max_steps is None:
        max_steps = limit
    if isinstance(max_steps, bool) or int(max_steps) != max_steps:
        raise InvalidArgumentError(f"max_steps must be an integer, got {max_steps!r}")
    s = int(max_steps)
    if not 1 <= s <= limit:
        raise InvalidArgumentError(f"max_steps={s} outside [1, {limit}]")

    work = a.copy()
    perm = np.arange(n)
    norms2 = np.einsum("ij,ij->j", work, work)
    ref2 = norms2.copy()
    vs = []
    taus = np.zeros(s)

    for j in range(s):
        p = _select_pivot(norms2, perm, j)
        if p != j:
            work[:, [j, p]] = work[:, [p, j]]
            perm[[j, p]] = perm[[p, j]]
            norms2[[j, p]] = norms2[[p, j]]
            ref2[[j, p]] = ref2[[p, j]]

        v, tau, beta = _householder(work[j:, j])
        vs.append(v)
        taus[j] = tau
        work[j, j] = beta
        work[j + 1:, j] = 0.0
        if j + 1 == n:
            continue
        trailing = work[j:, j + 1:]
        if tau != 0.0:
            trailing -= np.outer(tau * v, v @ trailing)

        norms2[j + 1:] -= work[j, j + 1:] ** 2
        stale = np.flatnonzero(norms2[j + 1:] < NORM_RECOMPUTE_FRACTION * ref2[j + 1:]) + j + 1
        if stale.size:
            tail = work[j + 1:, stale]
            fresh = np.einsum("ij,ij->j", tail, tail)
            norms2[stale] = fresh
            ref2[stale] = fresh

    q = np.zeros((m, s))
    q[np.arange(s), np.arange(s)] = 1.0
    for j in range(s - 1, -1, -1):
        if taus[j] != 0.0:
            block = q[j:, j:]
            block -= np.outer(taus[j] * vs[j], vs[j] @ block)

    r = np.triu(work[:s, :])
    return PivotedQr(q=q, r=r, perm=perm, steps=s)


def solve_triangular(t, b, side="upper"):
    """Solve ``t @ x = b`` by substitution; ``side`` names which triangle of ``t`` is used."""
    t = as_matrix(t, "t")
    b_arr = np.asarray(b, dtype=np.float64)
    vector = b_arr.ndim == 1
    b = as_matrix(b_arr[:, None] if vector else b_arr, "b")
    k = t.shape[0]
    if t.shape[1] != k:
        raise InvalidArgumentError(f"t must be square, got {t.shape}")
    if b.shape[0] != k:
        raise InvalidArgumentError(f"b has {b.shape[0]} rows, expected {k}")
    if side not in ("lower", "upper"):
        raise InvalidArgumentError(f"side must be 'lower' or 'upper', got {side!r}")
    diag = np.abs(np.diag(t))
    bad = np.flatnonzero(diag <= TRIANGULAR_SINGULAR_TOL)
    if bad.size:
        raise SingularMatrixError(f"triangular factor has zero diagonal at index {bad[0]}")

    x = np.empty_like(b)
    if side == "lower":
        for i in range(k):
            x[i] = (b[i] - t[i, :i] @ x[:i]) / t[i, i]
    else:
        for i in range(k - 1, -1, -1):
            x[i] = (b[i] - t[i, i + 1:] @ x[i + 1:]) / t[i, i]
    return x[:, 0] if vector else x


def cholesky(s):
    """Lower-triangular ``l`` with ``l @ l.T == s``."""
    s = as_matrix(s, "s")
    k = s.shape[0]
    if s.shape[1] != k:
        raise InvalidArgumentError(f"s must be square, got {s.shape}")
    low = np.zeros_like(s)
    for j in range(k):
        row = low[j, :j]
        d = s[j, j] - row @ row
        if not d > 0.0:
            raise NotPositiveDefiniteError(f"non-positive pivot {d:.3e} at index {j}")
        low[j, j] = np.sqrt(d)
        low[j + 1:, j] = (s[j + 1:, j] - low[j + 1:, :j] @ row) / low[j, j]
    return low


def solve_posdef(s, b):
    """Solve ``s @ x = b`` for symmetric positive definite ``s`` via Cholesky."""
    low = cholesky(s)
    return solve_triangular(low.T, solve_triangular(low, b, "lower"), "upper")


BK_ALPHA = (1.0 + np.sqrt(17.0)) / 8.0


@dataclass(frozen=True)
class LdltFactor:
    """``s[perm][:, perm] == l @ d @ l.T`` with ``d`` block diagonal (1x1 and 2x2 blocks).

    ``blocks`` lists the starting index and size of every diagonal block.
    """
    l: np.ndarray
    d: np.ndarray
    perm: np.ndarray
    blocks: tuple


def _sym_swap(w, i, j):
    w[[i, j], :] = w[[j, i], :]
    w[:, [i, j]] = w[:, [j, i]]


def ldlt_bunch_kaufman(s):
    """Symmetric indefinite LDL^T with Bunch-Kaufman partial pivoting.

    The input is symmetrized as ``(s + s.T) / 2`` first.
    """
    s = as_matrix(s, "s")
    k = s.shape[0]
    if s.shape[1] != k:
        raise InvalidArgumentError(f"s must be square, got {s.shape}")
    w = 0.5 * (s + s.T)
    low = np.eye(k)
    d = np.zeros((k, k))
    perm = np.arange(k)
    blocks = []

    i = 0
    while i < k:
        absakk = abs(w[i, i])
        if i + 1 < k:
            col = np.abs(w[i + 1:, i])
            imax = i + 1 + int(np.argmax(col))
            colmax = col[imax - i - 1]
        else:
            imax, colmax = i, 0.0

        if absakk == 0.0 and colmax == 0.0:
            raise SingularMatrixError(f"exactly singular pivot column at index {i}")

        size, kp = 1, i
        if absakk < BK_ALPHA * colmax:
            row = np.abs(w[imax, i:])
            row[imax - i] = 0.0
            rowmax = row.max()
            if absakk * rowmax >= BK_ALPHA * colmax * colmax:
                kp = i
            elif abs(w[imax, imax]) >= BK_ALPHA * rowmax:
                kp = imax
            else:
                size, kp = 2, imax

        target = i + size - 1
        if kp != target:
            _sym_swap(w, target, kp)
            low[[target, kp], :i] = low[[kp, target], :i]
            perm[[target, kp]] = perm[[kp, target]]

        if size == 1:
            piv = w[i, i]
            d[i, i] = piv
            if i + 1 < k:
                mult = w[i + 1:, i] / piv
                w[i + 1:, i + 1:] -= np.outer(mult, w[i + 1:, i])
                low[i + 1:, i] = mult
        else:
            blk = w[i:i + 2, i:i + 2].copy()
            det = blk[0, 0] * blk[1, 1] - blk[0, 1] * blk[1, 0]
            if det == 0.0:
                raise SingularMatrixError(f"exactly singular 2x2 pivot block at index {i}")
            d[i:i + 2, i:i + 2] = blk
            if i + 2 < k:
                inv = np.array([[blk[1, 1], -blk[0, 1]], [-blk[1, 0], blk[0, 0]]]) / det
                panel = w[i + 2:, i:i + 2]
                mult = panel @ inv
                w[i + 2:, i + 2:] -= mult @ panel.T
                low[i + 2:, i:i + 2] = mult
        blocks.append((i, size))
        i += size

    return LdltFactor(l=low, d=d, perm=perm, blocks=tuple(blocks))


def solve_symmetric_indefinite(s, b):
    """Solve ``s @ x = b`` for symmetric (possibly indefinite) ``s`` by diagonal pivoting."""
    fac = ldlt_bunch_kaufman(s)
    b_arr = np.asarray(b, dtype=np.float64)
    vector = b_arr.ndim == 1
    b = as_matrix(b_arr[:, None] if vector else b_arr, "b")
    if b.shape[0] != fac.l.shape[0]:
        raise InvalidArgumentError(f"b has {b.shape[0]} rows, expected {fac.l.shape[0]}")

    y = solve_triangular(fac.l, b[fac.perm], "lower")
    for start, size in fac.blocks:
        if size == 1:
            y[start] /= fac.d[start, start]
        else:
            blk = fac.d[start:start + 2, start:start + 2]
            y[start:start + 2] = np.linalg.solve(blk, y[start:start + 2])
    z = solve_triangular(fac.l.T, y, "upper")
    x = np.empty_like(z)
    x[fac.perm] = z
    return x[:, 0] if vector else x


def svd(a):
    """Thin SVD, ``a == u @ diag(singular_values) @ vt``."""
    a = as_matrix(a)
    try:
        u, sv, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return SvdResult(u=u, singular_values=sv, vt=vt)


def singular_values(a):
    a = as_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc


def truncated_svd_error(a, k, sigma=None):
    """Relative Frobenius error of the best rank-``k`` approximation of ``a``.

    ``sigma`` may carry precomputed singular values of ``a``.
    """
    a = as_matrix(a)
    limit = min(a.shape)
    if not 1 <= k <= limit:
        raise InvalidArgumentError(f"k={k} outside [1, {limit}]")
    if sigma is None:
        sigma = singular_values(a)
    total = frobenius_norm(a)
    if total == 0.0:
        return 0.0
    tail = sigma[k:]
    return float(np.sqrt(np.sum(tail * tail)) / total)
