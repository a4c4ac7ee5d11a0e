"""Slow, independent reference computations used to check the kernels."""
import math

import numpy as np


def matmul_loops(a, b):
    m, n = len(a), len(b[0])
    out = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for t in range(len(b)):
                acc += a[i][t] * b[t][j]
            out[i, j] = acc
    return out


def frobenius_sum(a):
    total = 0.0
    for row in a:
        for x in row:
            total += float(x) * float(x)
    return math.sqrt(total)


def gram_schmidt_pivoted(a, steps):
    """Greedy pivoting by exhaustive residual-norm rescans, twice-orthogonalized.

    Returns (pivot order, residual norm at each pivot).
    """
    a = np.array(a, dtype=float)
    n = a.shape[1]
    basis = []
    chosen, norms = [], []
    for _ in range(steps):
        best, best_norm, best_vec = None, -1.0, None
        for c in range(n):
            if c in chosen:
                continue
            v = a[:, c].copy()
            for _ in range(2):
                for q in basis:
                    v -= (q @ v) * q
            nv = np.linalg.norm(v)
            if nv > best_norm * (1 + 1e-14):
                best, best_norm, best_vec = c, nv, v
        chosen.append(best)
        norms.append(best_norm)
        basis.append(best_vec / best_norm)
    return chosen, np.array(norms)


def jacobi_eigenvalues(s, tol=1e-14, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending."""
    a = np.array(s, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol * np.linalg.norm(a):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q], rot[q, p] = sn, -sn
                a = rot.T @ a @ rot
    else:
        raise RuntimeError("Jacobi did not converge")
    return np.sort(np.diag(a))[::-1]
