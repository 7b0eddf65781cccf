"""Coordinate (standard) and flat-basis (Fourier) subspaces and their geometry.

A standard subspace is the span of coordinate vectors indexed by S; a Fourier
subspace is the span of flat-basis rows indexed by T.  The overlap norm
||PQ|| of their projections is the largest cosine of a principal angle and is
computed from the singular values of the T x S submatrix of the basis, which
is numerically equivalent to the square root of the top eigenvalue of QPQ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import config
from .errors import NumericalGuaranteeError, ValidationError
from .groups import FlatBasis, Group, fourier_basis, make_group
from .operators import symmetrize


def _normalized_indices(indices: Iterable[int], dim: int) -> tuple[int, ...]:
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValidationError("subspace indices must be distinct")
    for i in idx:
        if not 0 <= i < dim:
            raise ValidationError(f"index {i} out of range for dimension {dim}")
    return tuple(sorted(idx))


@dataclass(frozen=True, eq=False)
class StandardSubspace:
    """Span of the coordinate vectors e_g for g in `indices`."""

    basis: FlatBasis
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "indices", _normalized_indices(self.indices, self.basis.dim)
        )

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class FourierSubspace:
    """Span of the flat-basis rows indexed by `indices`."""

    basis: FlatBasis
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "indices", _normalized_indices(self.indices, self.basis.dim)
        )

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class UncertaintyVerdict:
    multiplicative_applies: bool
    additive_applies: bool
    overlap_norm: float
    intersects: bool


@dataclass(frozen=True, eq=False)
class CombExample:
    """A vector that is sparse in both bases on a group of square order.

    `function` takes the value n on the multiples of n in Z/(n^2) and zero
    elsewhere, so it lies in the n-dimensional standard subspace on `support`
    and, by construction, in the n-dimensional Fourier subspace on
    `characters`.  Both dimensions equal the square root of the group order,
    which makes the support-size product bound sharp.
    """

    group: Group
    support: tuple[int, ...]
    characters: tuple[int, ...]
    function: np.ndarray


def projection(sub: StandardSubspace | FourierSubspace) -> np.ndarray:
    """Orthogonal projection matrix onto the subspace."""
    n = sub.basis.dim
    if isinstance(sub, StandardSubspace):
        P = np.zeros((n, n), dtype=np.complex128)
        idx = list(sub.indices)
        P[idx, idx] = 1.0
        return P
    rows = sub.basis.matrix[list(sub.indices), :]
    return symmetrize(np.einsum("ri,rj->ij", rows, rows.conj()))


def overlap_norm(E: StandardSubspace, F: FourierSubspace) -> float:
    """||PQ|| for the projections P, Q onto E and F; lies in [0, 1].

    Equals sup{||Qv||: v in E, ||v|| = 1} and is symmetric in the two roles.
    """
    if E.basis.dim != F.basis.dim:
        raise ValidationError(
            f"ambient dimensions differ: {E.basis.dim} vs {F.basis.dim}"
        )
    if not E.indices or not F.indices:
        return 0.0
    sub = F.basis.matrix[np.ix_(list(F.indices), list(E.indices))]
    top = float(np.linalg.svd(sub, compute_uv=False)[0])
    return min(max(top, 0.0), 1.0)


def single_vector_detection(E: StandardSubspace, phi: int) -> float:
    """||P e^_phi||^2, the energy of one flat-basis vector inside E.

    Flatness forces this to equal dim(E)/dim for every phi, so a single
    basis vector sees exactly the dimension fraction of any coordinate
    subspace, no more.
    """
    if not 0 <= phi < E.basis.dim:
        raise ValidationError(f"character index {phi} out of range")
    if not E.indices:
        return 0.0
    row = E.basis.matrix[phi, list(E.indices)]
    return float(np.sum(np.abs(row) ** 2))


def check_uncertainty(
    E: StandardSubspace,
    F: FourierSubspace,
    intersect_tol: float = config.INTERSECTION_TOL,
) -> UncertaintyVerdict:
    """Support-size bound verdict for a pair of subspaces over a group basis.

    The product bound dim(E) dim(F) < |G|, and on prime-order groups the
    additive bound dim(E) + dim(F) <= |G|, each force E and F to meet only
    in 0.  The verdict records which hypotheses apply and whether the
    computed overlap contradicts them (which would be a numerical breach).
    """
    group = F.basis.group
    if group is None:
        raise ValidationError(
            "uncertainty verdict requires a Fourier basis built from a group"
        )
    ov = overlap_norm(E, F)
    mult = E.dim * F.dim < group.order
    add = group.is_prime_order and (E.dim + F.dim) <= group.order
    intersects = ov > 1.0 - intersect_tol
    if intersects and (mult or add):
        raise NumericalGuaranteeError(
            f"subspaces with dims {E.dim}, {F.dim} on order {group.order} "
            f"must intersect trivially but overlap is {ov:.17g}"
        )
    return UncertaintyVerdict(
        multiplicative_applies=mult,
        additive_applies=add,
        overlap_norm=ov,
        intersects=intersects,
    )


def comb_example(n: int, cap: int | None = None) -> CombExample:
    """Doubly sparse comb vector on the cyclic group of order n^2."""
    if n < 2:
        raise ValidationError(f"comb construction needs n >= 2, got {n}")
    group = make_group([n * n], cap=cap)
    basis = fourier_basis(group)
    characters = tuple(n * b for b in range(n))
    # Characters are sqrt(|G|) times the normalized basis rows.
    f = n * basis.matrix[list(characters), :].sum(axis=0)
    support = tuple(range(0, n * n, n))
    on = np.zeros(n * n, dtype=bool)
    on[list(support)] = True
    err_on = float(np.max(np.abs(f[on] - n)))
    err_off = float(np.max(np.abs(f[~on]))) if np.any(~on) else 0.0
    if max(err_on, err_off) > config.COMB_VALUE_TOL:
        raise NumericalGuaranteeError(
            f"comb values off by {max(err_on, err_off):.3e} "
            f"(tolerance {config.COMB_VALUE_TOL:.0e})"
        )
    return CombExample(
        group=group, support=support, characters=characters, function=f
    )


def exchange_complement(F: FourierSubspace) -> StandardSubspace:
    """Standard subspace of dimension |G| - dim(F) meeting F only in 0.

    Scans coordinate vectors in ascending index and keeps those that stay
    linearly independent of the running set seeded with the rows of F
    (one-pass replacement).  Independence of the final stacked system is
    certified by its smallest singular value.
    """
    n = F.basis.dim
    fcols = F.basis.matrix[list(F.indices), :].T  # columns are the F rows
    target = n - F.dim
    Q = np.zeros((n, n), dtype=np.complex128)
    r = F.dim
    Q[:, :r] = fcols
    kept: list[int] = []
    for g in range(n):
        if len(kept) == target:
            break
        w = np.zeros(n, dtype=np.complex128)
        w[g] = 1.0
        w -= Q[:, :r] @ (Q[:, :r].conj().T @ w)
        # second orthogonalization pass for numerical safety
        w -= Q[:, :r] @ (Q[:, :r].conj().T @ w)
        nrm = float(np.linalg.norm(w))
        if nrm > config.EXCHANGE_RESIDUAL_TOL:
            Q[:, r] = w / nrm
            r += 1
            kept.append(g)
    if len(kept) != target:
        raise NumericalGuaranteeError(
            f"exchange kept {len(kept)} of {target} coordinate vectors; "
            "residual tolerance breached"
        )
    eye = np.eye(n, dtype=np.complex128)
    stacked = np.concatenate([fcols, eye[:, kept]], axis=1)
    smin = float(np.linalg.svd(stacked, compute_uv=False)[-1])
    if smin <= config.STACKED_SIGMA_MIN:
        raise NumericalGuaranteeError(
            f"stacked system smallest singular value {smin:.3e} <= "
            f"{config.STACKED_SIGMA_MIN:.0e}"
        )
    return StandardSubspace(basis=F.basis, indices=tuple(kept))


def random_index_set(k: int, seed: int, dim: int) -> tuple[int, ...]:
    """Uniform k-subset of range(dim) by partial Fisher-Yates shuffle.

    Draws from numpy's PCG64 generator seeded with `seed`; the same seed
    always yields the same subset.
    """
    if not 0 <= k <= dim:
        raise ValidationError(f"subset size {k} out of range for dimension {dim}")
    rng = np.random.default_rng(seed)
    idx = np.arange(dim)
    for i in range(k):
        j = int(rng.integers(i, dim))
        idx[i], idx[j] = idx[j], idx[i]
    return tuple(sorted(int(i) for i in idx[:k]))


def random_standard(k: int, seed: int, ambient: FlatBasis) -> StandardSubspace:
    """Seeded uniformly random standard subspace of dimension k."""
    return StandardSubspace(
        basis=ambient, indices=random_index_set(k, seed, ambient.dim)
    )
