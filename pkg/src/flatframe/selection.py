"""Parseval frames from Fourier subspaces and barrier-potential subset selection.

Writing Q for the projection onto a Fourier subspace of dimension m inside an
ambient space of dimension n, the columns u_g of the frame are the images
Q e_g expressed in an orthonormal basis of the subspace.  They form a tight
frame (sum of u_g u_g* is the identity on C^m) of equal-norm vectors with
||u_g||^2 = eps = m/n.

The selector accumulates rank-one terms u_i u_i* while keeping all
eigenvalues strictly below a shift schedule

    a_j = sqrt(eps) + j / ((1 - sqrt(eps)) n),

using the resolvent-trace potential tr((aI - A)^{-1}) as a soft barrier.  A
counting argument guarantees some unused index passes the feasibility test at
every step, so a completed run certifies

    ||sum_{i in S} u_i u_i*|| < sqrt(eps) + k / ((1 - sqrt(eps)) n)

exactly, not just asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, config
from .errors import NoFeasibleCandidate, NumericalGuaranteeError, ValidationError
from .operators import eigen, rank_one_update, symmetrize
from .subspaces import FourierSubspace

OBJECTIVE_ONE_SIDED = "one-sided"
OBJECTIVE_TWO_SIDED = "two-sided-max-excess"


@dataclass(frozen=True, eq=False)
class FrameSystem:
    """Equal-norm tight frame of n vectors in C^m, stored as matrix columns."""

    m: int
    n: int
    epsilon: float
    vectors: np.ndarray  # (m, n), column i is u_i

    def __post_init__(self):
        U = self.vectors
        if U.shape != (self.m, self.n):
            raise ValidationError(
                f"frame matrix shape {U.shape} does not match ({self.m}, {self.n})"
            )
        norms = np.sum(np.abs(U) ** 2, axis=0)
        dev = float(np.max(np.abs(norms - self.epsilon)))
        if dev > config.FRAME_NORM_TOL:
            raise ValidationError(
                f"frame vector norm deviates from epsilon by {dev:.3e}"
            )
        gram = U @ U.conj().T
        dev = float(np.max(np.abs(gram - np.eye(self.m))))
        if dev > config.FRAME_RESOLUTION_TOL:
            raise ValidationError(
                f"frame does not resolve the identity: deviation {dev:.3e}"
            )
        if abs(self.n * self.epsilon - self.m) > config.FRAME_COUNT_TOL:
            raise ValidationError(
                f"n * epsilon = {self.n * self.epsilon:.17g} must equal m = {self.m}"
            )

    def column(self, i: int) -> np.ndarray:
        return self.vectors[:, i]


@dataclass(frozen=True, eq=False)
class BarrierState:
    """Running state after j accepted vectors."""

    j: int
    selected: tuple[int, ...]
    A: np.ndarray
    a: float
    phi: float


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """Outcome of a completed one-sided barrier run.

    `achieved_one_sided` is ||sum_{i in S} u_i u_i*|| and is strictly below
    `bound_one_sided` for every completed run.  `bound_complement` is the
    reference level (n - k)/n for the complement norm; the one-sided run
    reports but does not control it.
    """

    S: tuple[int, ...]
    selection_order: tuple[int, ...]
    k: int
    n: int
    m: int
    epsilon: float
    achieved_one_sided: float
    bound_one_sided: float
    achieved_complement: float
    bound_complement: float
    potential_trace: tuple[tuple[float, float], ...]
    feasibility_margins: tuple[float, ...]
    shift_margins: tuple[float, ...]
    final_state: BarrierState
    backend: str


@dataclass(frozen=True, eq=False)
class TwoSidedEvaluation:
    """Both one-sided norms of a subset, with excesses over the flat levels."""

    S: tuple[int, ...]
    k: int
    n: int
    qpq_norm: float
    complement_norm: float
    excess: float
    excess_complement: float
    operator_sum: np.ndarray
    complement_operator: np.ndarray


def build_frame(F: FourierSubspace) -> FrameSystem:
    """Tight frame of the coordinate-vector images inside the subspace.

    Coordinates are taken in the orthonormal basis given by the subspace's
    flat-basis rows, so column g holds the conjugated basis entries at g.
    """
    n = F.basis.dim
    m = F.dim
    if m == 0:
        raise ValidationError(
            "dim(F) = 0 gives the zero frame; selection needs 1 <= dim F < dim"
        )
    if m == n:
        raise ValidationError(
            "dim(F) equals the ambient dimension, so Q = I and every nonempty "
            "subset has full overlap; the shift schedule is singular at eps = 1"
        )
    U = np.ascontiguousarray(F.basis.matrix[list(F.indices), :].conj())
    return FrameSystem(m=m, n=n, epsilon=m / n, vectors=U)


def barrier_condition(
    A: np.ndarray, a: float, delta: float, v: np.ndarray, phi_gap: float
) -> float:
    """Feasibility value for adding v v* while advancing the shift to a + delta.

    Returns <((a+d)I - A)^{-2} v, v> / phi_gap + <((a+d)I - A)^{-1} v, v>
    where phi_gap is the potential drop of A between shifts a and a + delta.
    A value at most 1 certifies that the update keeps the norm below a + delta
    without increasing the potential.
    """
    if delta <= 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    if phi_gap <= 0:
        raise ValidationError(f"phi_gap must be positive, got {phi_gap}")
    spec = eigen(A, vectors=True)
    w = spec.eigenvalues
    norm = float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0
    if norm >= a:
        raise ValidationError(f"shift a={a:.17g} must exceed the norm {norm:.17g}")
    v = np.asarray(v, dtype=np.complex128)
    coeff = np.abs(spec.vectors.conj().T @ v) ** 2
    resolvent = 1.0 / (a + delta - w)
    return float(np.sum(coeff * resolvent**2) / phi_gap + np.sum(coeff * resolvent))


def _scan_conditions(U, lam, V, a_next, phi_gap, used):
    w2 = np.ascontiguousarray(np.abs(V.conj().T @ U) ** 2)
    r1 = 1.0 / (a_next - lam)
    r2 = r1 * r1
    return _kernels.condition_scan(w2, r1, r2, 1.0 / phi_gap, used)


def select_onesided(frame: FrameSystem, k: int) -> SelectionResult:
    """Greedy barrier selection of k frame indices with an exact norm bound.

    At each step the unused index with the smallest feasibility value is
    taken, ties broken by smallest index.  If no index passes (a float-error
    symptom; the counting argument rules it out exactly), the accumulated
    operator is rebuilt and re-factorized once before giving up with
    NoFeasibleCandidate.
    """
    n, m = frame.n, frame.m
    if not 0 <= k <= n:
        raise ValidationError(f"subset size {k} out of range 0..{n}")
    eps = frame.epsilon
    if eps >= 1.0:
        raise ValidationError(
            f"selection needs epsilon < 1, got {eps} (shift schedule singular)"
        )
    sqrt_eps = math.sqrt(eps)
    shifts = [sqrt_eps + (j / n) / (1.0 - sqrt_eps) for j in range(k + 1)]

    U = frame.vectors
    A = np.zeros((m, m), dtype=np.complex128)
    lam = np.zeros(m)
    V = np.eye(m, dtype=np.complex128)
    phi = float(np.sum(1.0 / (shifts[0] - lam)))
    used = np.zeros(n, dtype=np.bool_)
    order: list[int] = []
    trace = [(shifts[0], phi)]
    feas_margins: list[float] = []
    shift_margins: list[float] = []

    for j in range(k):
        a_j, a_next = shifts[j], shifts[j + 1]
        shift_margin = a_j - float(lam[-1])
        if shift_margin <= 0:
            raise NumericalGuaranteeError(
                f"shift domination failed at step {j}: margin {shift_margin:.3e}"
            )
        phi_gap = phi - float(np.sum(1.0 / (a_next - lam)))
        cond = _scan_conditions(U, lam, V, a_next, phi_gap, used)
        min_cond = float(np.min(cond))
        if min_cond > 1.0 + config.FEASIBILITY_TOL:
            # Rebuild from scratch and refactor once; fresh rounding usually
            # recovers the guaranteed feasible index.
            A = symmetrize(
                sum(
                    (np.outer(U[:, i], U[:, i].conj()) for i in order),
                    start=np.zeros((m, m), dtype=np.complex128),
                )
            )
            spec = eigen(A, vectors=True)
            lam, V = spec.eigenvalues, spec.vectors
            phi = float(np.sum(1.0 / (a_j - lam)))
            phi_gap = phi - float(np.sum(1.0 / (a_next - lam)))
            cond = _scan_conditions(U, lam, V, a_next, phi_gap, used)
            min_cond = float(np.min(cond))
            if min_cond > 1.0 + config.FEASIBILITY_TOL:
                raise NoFeasibleCandidate(j, min_cond, shift_margin)
        pick = int(np.argmin(cond))
        feas_margins.append(min_cond)
        order.append(pick)
        used[pick] = True
        A = rank_one_update(A, U[:, pick])
        spec = eigen(A, vectors=True)
        lam, V = spec.eigenvalues, spec.vectors
        norm = float(lam[-1])
        if norm >= a_next:
            raise NumericalGuaranteeError(
                f"norm {norm:.17g} reached shift {a_next:.17g} at step {j}"
            )
        shift_margins.append(a_next - norm)
        phi_new = float(np.sum(1.0 / (a_next - lam)))
        if phi_new > phi + config.POTENTIAL_SLACK:
            raise NumericalGuaranteeError(
                f"potential increased at step {j}: {phi:.17g} -> {phi_new:.17g}"
            )
        phi = phi_new
        trace.append((a_next, phi))

    achieved = float(lam[-1]) if k else 0.0
    bound = sqrt_eps + (k / n) / (1.0 - sqrt_eps)
    if achieved >= bound:
        raise NumericalGuaranteeError(
            f"achieved norm {achieved:.17g} reached the bound {bound:.17g}"
        )
    comp = float(np.max(np.abs(1.0 - lam))) if k else 1.0
    state = BarrierState(
        j=k, selected=tuple(order), A=A, a=shifts[k], phi=phi
    )
    return SelectionResult(
        S=tuple(sorted(order)),
        selection_order=tuple(order),
        k=k,
        n=n,
        m=m,
        epsilon=eps,
        achieved_one_sided=achieved,
        bound_one_sided=bound,
        achieved_complement=comp,
        bound_complement=(n - k) / n,
        potential_trace=tuple(trace),
        feasibility_margins=tuple(feas_margins),
        shift_margins=tuple(shift_margins),
        final_state=state,
        backend=_kernels.backend_name(),
    )


def _subset_operator(frame: FrameSystem, S: Sequence[int]) -> np.ndarray:
    A = np.zeros((frame.m, frame.m), dtype=np.complex128)
    for i in S:
        u = frame.vectors[:, i]
        A += np.outer(u, u.conj())
    return symmetrize(A)


def evaluate_twosided(frame: FrameSystem, S: Iterable[int]) -> TwoSidedEvaluation:
    """Norms of the subset operator and its complement to the identity.

    The two operators sum to the identity exactly, so one eigensolve yields
    both ||QPQ|| and ||Q(I-P)Q|| together with their excesses over k/n and
    (n-k)/n.
    """
    idx = sorted(int(i) for i in S)
    if len(set(idx)) != len(idx):
        raise ValidationError("subset indices must be distinct")
    for i in idx:
        if not 0 <= i < frame.n:
            raise ValidationError(f"index {i} out of range for frame size {frame.n}")
    A = _subset_operator(frame, idx)
    w = eigen(A, vectors=False).eigenvalues
    if w.size:
        qpq = float(max(abs(w[0]), abs(w[-1])))
        compl = float(max(abs(1.0 - w[0]), abs(1.0 - w[-1])))
    else:
        qpq, compl = 0.0, 1.0
    k = len(idx)
    return TwoSidedEvaluation(
        S=tuple(idx),
        k=k,
        n=frame.n,
        qpq_norm=qpq,
        complement_norm=compl,
        excess=qpq - k / frame.n,
        excess_complement=compl - (frame.n - k) / frame.n,
        operator_sum=A,
        complement_operator=np.eye(frame.m, dtype=np.complex128) - A,
    )


def brute_force_best(
    frame: FrameSystem,
    k: int,
    objective: str = OBJECTIVE_ONE_SIDED,
    cap: int | None = None,
) -> tuple[tuple[int, ...], float]:
    """Exact minimizer over all k-subsets (lexicographically first on ties).

    objective "one-sided" minimizes ||sum_{i in S} u_i u_i*|| and
    "two-sided-max-excess" minimizes the larger of the two excesses over the
    flat levels k/n and (n-k)/n.  Refuses to enumerate more than `cap`
    subsets (default from FLATFRAME_ENUM_CAP).
    """
    n = frame.n
    if not 0 <= k <= n:
        raise ValidationError(f"subset size {k} out of range 0..{n}")
    if objective not in (OBJECTIVE_ONE_SIDED, OBJECTIVE_TWO_SIDED):
        raise ValidationError(f"unknown objective {objective!r}")
    cap = config.enum_cap() if cap is None else cap
    count = math.comb(n, k)
    if count > cap:
        raise ValidationError(
            f"C({n}, {k}) = {count} exceeds the enumeration cap {cap}"
        )
    mode = (
        _kernels.MODE_ONE_SIDED
        if objective == OBJECTIVE_ONE_SIDED
        else _kernels.MODE_TWO_SIDED
    )
    idx, value, _, _ = _kernels.subset_search(
        frame.vectors, k, mode, k / n, (n - k) / n
    )
    return tuple(int(i) for i in idx), float(value)


def adjust_cardinality(
    S: Iterable[int], k: int, frame: FrameSystem
) -> tuple[int, ...]:
    """Resize an index set to exactly k elements, moving the norm least.

    Oversized sets drop the element whose removal decreases ||QPQ|| the
    least; undersized sets add the element whose addition increases it the
    least.  Ties take the smallest index.
    """
    current = sorted(int(i) for i in S)
    if len(set(current)) != len(current):
        raise ValidationError("subset indices must be distinct")
    if not 0 <= k <= frame.n:
        raise ValidationError(f"target size {k} out of range 0..{frame.n}")
    current_set = set(current)
    A = _subset_operator(frame, current)

    def top_norm(M):
        w = np.linalg.eigvalsh(M)
        return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0

    while len(current_set) > k:
        best_i, best_norm = None, None
        for i in sorted(current_set):
            u = frame.vectors[:, i]
            norm = top_norm(symmetrize(A - np.outer(u, u.conj())))
            if best_norm is None or norm > best_norm:
                best_i, best_norm = i, norm
        u = frame.vectors[:, best_i]
        A = symmetrize(A - np.outer(u, u.conj()))
        current_set.remove(best_i)
    while len(current_set) < k:
        best_i, best_norm = None, None
        for i in range(frame.n):
            if i in current_set:
                continue
            u = frame.vectors[:, i]
            norm = top_norm(symmetrize(A + np.outer(u, u.conj())))
            if best_norm is None or norm < best_norm:
                best_i, best_norm = i, norm
        u = frame.vectors[:, best_i]
        A = symmetrize(A + np.outer(u, u.conj()))
        current_set.add(best_i)
    return tuple(sorted(current_set))
