"""Numba-compiled hot kernels.

Importing this module pulls in numba; _kernels does so only when the numba
backend is selected.  Math must match the numpy fallbacks in _kernels up to
summation order.
"""

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def condition_scan(w2, r1, r2, inv_gap, used):
    """Barrier feasibility values for every candidate column of w2.

    w2[t, i] is |<eigvec_t, u_i>|^2, r1/r2 the first and second resolvent
    weights at the advanced shift.  Used candidates get +inf.  Each output
    slot is accumulated independently so the result does not depend on the
    thread schedule.
    """
    m, n = w2.shape
    out = np.empty(n, dtype=np.float64)
    for i in prange(n):
        if used[i]:
            out[i] = np.inf
        else:
            s1 = 0.0
            s2 = 0.0
            for t in range(m):
                s1 += r1[t] * w2[t, i]
                s2 += r2[t] * w2[t, i]
            out[i] = s2 * inv_gap + s1
    return out


@njit(cache=True)
def subset_search(U, k, mode, ref_top, ref_comp):
    """Exhaustive scan over all k-subsets of the frame columns of U.

    Enumerates subsets in lexicographic order, keeping running partial sums
    of the rank-one accumulations so advancing the last index costs one
    rank-one add plus one small eigensolve.  Returns the first subset (in
    lexicographic order) attaining the minimum of:

        mode 0: lambda_max(A_S)
        mode 1: max(lambda_max(A_S) - ref_top, (1 - lambda_min(A_S)) - ref_comp)

    along with the value and the pair (lambda_max, 1 - lambda_min).
    """
    m, n = U.shape
    c = np.empty(k, dtype=np.int64)
    for t in range(k):
        c[t] = t
    partial = np.zeros((k + 1, m, m), dtype=np.complex128)
    for t in range(k):
        col = c[t]
        for r in range(m):
            ur = U[r, col]
            for s in range(m):
                partial[t + 1, r, s] = partial[t, r, s] + ur * np.conj(U[s, col])

    best_val = np.inf
    best_top = 0.0
    best_comp = 0.0
    best_idx = np.empty(k, dtype=np.int64)
    while True:
        w = np.linalg.eigvalsh(partial[k])
        top = w[m - 1]
        comp = 1.0 - w[0]
        if mode == 0:
            val = top
        else:
            val = max(top - ref_top, comp - ref_comp)
        if val < best_val:
            best_val = val
            best_top = top
            best_comp = comp
            for t in range(k):
                best_idx[t] = c[t]

        d = k - 1
        while d >= 0 and c[d] == n - k + d:
            d -= 1
        if d < 0:
            break
        c[d] += 1
        for t in range(d + 1, k):
            c[t] = c[t - 1] + 1
        for t in range(d, k):
            col = c[t]
            for r in range(m):
                ur = U[r, col]
                for s in range(m):
                    partial[t + 1, r, s] = partial[t, r, s] + ur * np.conj(U[s, col])

    return best_idx, best_val, best_top, best_comp
