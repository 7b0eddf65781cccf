"""Hot-kernel dispatch: numba-compiled loops with a pure-numpy fallback.

The backend is chosen once at import from FLATFRAME_BACKEND:

    unset / ""  auto: numba when importable, else numpy
    "numba"     require numba (raise if unavailable)
    "numpy"     force the pure-numpy path

Both backends implement the same math; results agree to roundoff but not
bit-for-bit because summation orders differ.  benchmarks/bench_kernels.py
compares their throughput.
"""

from __future__ import annotations

import itertools
import os
import sys

import numpy as np

from . import config

MODE_ONE_SIDED = 0
MODE_TWO_SIDED = 1

_CHUNK = 2048


def condition_scan_numpy(w2, r1, r2, inv_gap, used):
    cond = (r2 @ w2) * inv_gap + r1 @ w2
    cond[used] = np.inf
    return cond


def subset_search_numpy(U, k, mode, ref_top, ref_comp):
    m, n = U.shape
    best_val = np.inf
    best_top = 0.0
    best_comp = 0.0
    best_idx = np.empty(k, dtype=np.int64)
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64)
        X = U[:, idx].transpose(1, 0, 2)  # (B, m, k)
        A = X @ X.conj().transpose(0, 2, 1)
        w = np.linalg.eigvalsh(A)
        top = w[:, -1]
        comp = 1.0 - w[:, 0]
        if mode == MODE_ONE_SIDED:
            vals = top
        else:
            vals = np.maximum(top - ref_top, comp - ref_comp)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_top = float(top[i])
            best_comp = float(comp[i])
            best_idx = idx[i].copy()
    return best_idx, best_val, best_top, best_comp


def _resolve_backend() -> tuple[str, object | None]:
    requested = os.environ.get(config.BACKEND_ENV, "").strip().lower()
    if requested not in ("", "auto", "numba", "numpy"):
        raise ValueError(
            f"{config.BACKEND_ENV} must be 'numba' or 'numpy', got {requested!r}"
        )
    if requested == "numpy":
        return "numpy", None
    try:
        from . import _kernels_numba
    except ImportError as exc:
        if requested == "numba":
            raise ImportError(
                f"{config.BACKEND_ENV}=numba but numba is not importable: {exc}"
            ) from exc
        print(
            f"flatframe: numba unavailable ({exc}); using numpy kernels",
            file=sys.stderr,
        )
        return "numpy", None
    return "numba", _kernels_numba


_BACKEND_NAME, _NUMBA_MOD = _resolve_backend()


def backend_name() -> str:
    return _BACKEND_NAME


def condition_scan(w2, r1, r2, inv_gap, used):
    """Feasibility condition values for all candidates; +inf where used."""
    if _NUMBA_MOD is not None:
        return _NUMBA_MOD.condition_scan(w2, r1, r2, inv_gap, used)
    return condition_scan_numpy(w2, r1, r2, inv_gap, used)


def subset_search(U, k, mode, ref_top, ref_comp):
    """Lexicographically-first minimizer over all k-subsets of frame columns.

    Returns (indices, value, top_norm, complement_norm).  The k = 0 case is
    resolved here so the kernels only see 1 <= k <= n.
    """
    if k == 0:
        empty = np.empty(0, dtype=np.int64)
        if mode == MODE_ONE_SIDED:
            return empty, 0.0, 0.0, 1.0
        return empty, max(0.0 - ref_top, 1.0 - ref_comp), 0.0, 1.0
    U = np.ascontiguousarray(U, dtype=np.complex128)
    if _NUMBA_MOD is not None:
        idx, val, top, comp = _NUMBA_MOD.subset_search(
            U, k, mode, float(ref_top), float(ref_comp)
        )
        return idx, float(val), float(top), float(comp)
    return subset_search_numpy(U, k, mode, float(ref_top), float(ref_comp))
