"""Dense complex Hermitian operator arithmetic.

Operators are plain complex numpy arrays.  Every update re-symmetrizes so the
Hermitian deviation stays below HERMITIAN_TOL even across long runs of
rank-one updates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import NumericalGuaranteeError, ValidationError


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, optionally with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray | None = None


@dataclass(frozen=True)
class SumInequality:
    lhs: float
    rhs: float
    holds: bool


def symmetrize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.conj().T)


def hermitian_deviation(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def assert_hermitian(A: np.ndarray, tol: float = config.HERMITIAN_TOL) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"operator must be square, got shape {A.shape}")
    dev = hermitian_deviation(A)
    if dev > tol:
        raise ValidationError(
            f"operator is not Hermitian: deviation {dev:.3e} > {tol:.0e}"
        )


def eigen(A: np.ndarray, vectors: bool = True) -> Spectrum:
    """Full Hermitian eigendecomposition with ascending eigenvalues."""
    assert_hermitian(A)
    try:
        if vectors:
            w, v = np.linalg.eigh(A)
            return Spectrum(eigenvalues=w, vectors=v)
        return Spectrum(eigenvalues=np.linalg.eigvalsh(A), vectors=None)
    except np.linalg.LinAlgError as exc:
        raise NumericalGuaranteeError(
            f"eigendecomposition failed to converge on a {A.shape[0]}x"
            f"{A.shape[0]} operator: {exc}"
        ) from exc


def operator_norm(A: np.ndarray) -> float:
    """Largest |eigenvalue|; equals the top eigenvalue for positive operators."""
    w = eigen(A, vectors=False).eigenvalues
    return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0


def upper_potential(A: np.ndarray, a: float) -> float:
    """Resolvent trace sum_i 1/(a - lambda_i), defined for a above the norm.

    Penalizes eigenvalues close to the shift a, which is what makes it usable
    as a soft barrier during greedy rank-one accumulation.
    """
    w = eigen(A, vectors=False).eigenvalues
    norm = float(max(abs(w[0]), abs(w[-1])))
    if a <= norm + config.SHIFT_MARGIN:
        raise ValidationError(
            f"shift a={a:.17g} must exceed the operator norm {norm:.17g} "
            f"by more than {config.SHIFT_MARGIN:.0e}"
        )
    return float(np.sum(1.0 / (a - w)))


def rank_one_update(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """A + v v*, re-symmetrized."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or A.shape != (v.size, v.size):
        raise ValidationError(
            f"dimension mismatch: operator {A.shape}, vector {v.shape}"
        )
    return symmetrize(A + np.outer(v, v.conj()))


def sherman_morrison_inverse(Ainv: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Inverse of A + v v* given Ainv = A^{-1}.

    Uses Ainv - (Ainv v)(Ainv v)* / (1 + <Ainv v, v>); the caller guarantees
    Ainv is the inverse of a positive invertible operator.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or Ainv.shape != (v.size, v.size):
        raise ValidationError(
            f"dimension mismatch: operator {Ainv.shape}, vector {v.shape}"
        )
    w = Ainv @ v
    denom = 1.0 + np.real(np.vdot(v, w))
    if abs(denom) < config.DENOMINATOR_TOL:
        raise ValidationError(
            f"update denominator {denom:.3e} within {config.DENOMINATOR_TOL:.0e} "
            "of zero"
        )
    return symmetrize(Ainv - np.outer(w, w.conj()) / denom)


def check_sum_inequality(a, b) -> SumInequality:
    """Compare sum a_i b_i against (1/m) sum a_i sum b_i.

    Requires a ascending, b descending, both positive; for such pairs the
    first sum never exceeds the second.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ValidationError("sequences must be 1-d with equal lengths")
    m = a.size
    if m < 1:
        raise ValidationError("sequences must be nonempty")
    if np.any(a <= 0) or np.any(b <= 0):
        raise ValidationError("sequences must be strictly positive")
    if np.any(np.diff(a) < 0):
        raise ValidationError("first sequence must be ascending")
    if np.any(np.diff(b) > 0):
        raise ValidationError("second sequence must be descending")
    lhs = float(np.sum(a * b))
    rhs = float(np.sum(a) * np.sum(b) / m)
    return SumInequality(lhs=lhs, rhs=rhs, holds=lhs <= rhs + config.SUM_INEQUALITY_TOL)
