"""Runtime limits and numerical tolerances.

Caps can be overridden through environment variables (read at call time so
tests and callers can adjust them without re-importing):

    FLATFRAME_ORDER_CAP   largest group order for dense construction
    FLATFRAME_ENUM_CAP    largest C(n, k) accepted by exhaustive subset search
    FLATFRAME_BACKEND     "numba" or "numpy" kernel backend (see _kernels)
"""

import os

DEFAULT_ORDER_CAP = 4096
DEFAULT_ENUM_CAP = 10_000_000

ORDER_CAP_ENV = "FLATFRAME_ORDER_CAP"
ENUM_CAP_ENV = "FLATFRAME_ENUM_CAP"
BACKEND_ENV = "FLATFRAME_BACKEND"

# Basis invariants.
UNITARITY_TOL = 1e-10
FLATNESS_TOL = 1e-8
CHARACTER_MODULUS_TOL = 1e-12
TENSOR_FACTORIZATION_TOL = 1e-10

# Hermitian operator arithmetic.
HERMITIAN_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-9
SHIFT_MARGIN = 1e-12
DENOMINATOR_TOL = 1e-12
SUM_INEQUALITY_TOL = 1e-12
INVERSE_AGREEMENT_TOL = 1e-9

# Subspace geometry.
PROJECTION_IDEMPOTENT_TOL = 1e-10
TRACE_TOL = 1e-9
DETECTION_TOL = 1e-12
INTERSECTION_TOL = 1e-6
COMB_VALUE_TOL = 1e-9
STACKED_SIGMA_MIN = 1e-8
EXCHANGE_RESIDUAL_TOL = 1e-6

# Frames and barrier selection.
FRAME_NORM_TOL = 1e-8
FRAME_RESOLUTION_TOL = 1e-8
FRAME_COUNT_TOL = 1e-9
FEASIBILITY_TOL = 1e-9
POTENTIAL_SLACK = 1e-9
COMPLEMENT_IDENTITY_TOL = 1e-10


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def order_cap() -> int:
    return _env_int(ORDER_CAP_ENV, DEFAULT_ORDER_CAP)


def enum_cap() -> int:
    return _env_int(ENUM_CAP_ENV, DEFAULT_ENUM_CAP)
