"""Finite abelian groups as products of cyclic factors, and flat orthonormal bases.

A group is described by its cyclic factor orders (n_1, ..., n_r).  Elements
and characters are both indexed 0..|G|-1 through the same mixed-radix
bijection with the first factor most significant, so index
i <-> (t_1, ..., t_r) with i = ((t_1 n_2 + t_2) n_3 + t_3) ...

A flat basis is a square unitary matrix all of whose entries have modulus
n^{-1/2}; rows are the basis vectors.  The Fourier basis of a group (its
normalized character table) is the canonical example, and Hadamard-type
matrices loaded from files are accepted through the same interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from . import config
from .errors import ValidationError

FOURIER_SOURCE = "fourier-of-group"
LOADED_SOURCE = "loaded-file"


@dataclass(frozen=True)
class Group:
    """Product of cyclic groups Z/n_1 x ... x Z/n_r with mixed-radix indexing."""

    factors: tuple[int, ...]
    order: int

    def __post_init__(self):
        if not self.factors:
            raise ValidationError("group needs at least one cyclic factor")
        for n in self.factors:
            if n < 2:
                raise ValidationError(f"cyclic factor must be >= 2, got {n}")
        if self.order != math.prod(self.factors):
            raise ValidationError(
                f"order {self.order} does not match factor product "
                f"{math.prod(self.factors)}"
            )

    def index_to_tuple(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise ValidationError(f"index {index} out of range for order {self.order}")
        digits = []
        for n in reversed(self.factors):
            index, d = divmod(index, n)
            digits.append(d)
        return tuple(reversed(digits))

    def tuple_to_index(self, digits: Sequence[int]) -> int:
        if len(digits) != len(self.factors):
            raise ValidationError(
                f"expected {len(self.factors)} digits, got {len(digits)}"
            )
        index = 0
        for d, n in zip(digits, self.factors):
            if not 0 <= d < n:
                raise ValidationError(f"digit {d} out of range for factor {n}")
            index = index * n + d
        return index

    @property
    def is_prime_order(self) -> bool:
        return _is_prime(self.order)


@dataclass(frozen=True, eq=False)
class FlatBasis:
    """Square unitary matrix with all entries of modulus dim^{-1/2}.

    Row phi is the basis vector indexed phi.  `group` is set when the basis
    is the Fourier basis of a group and None for matrices loaded from files.
    """

    matrix: np.ndarray
    source: str
    group: Group | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def make_group(factors: Sequence[int], cap: int | None = None) -> Group:
    """Build a group from cyclic factor orders, enforcing the order cap."""
    factors = tuple(int(n) for n in factors)
    if not factors:
        raise ValidationError("group needs at least one cyclic factor")
    for n in factors:
        if n < 2:
            raise ValidationError(f"cyclic factor must be >= 2, got {n}")
    order = math.prod(factors)
    cap = config.order_cap() if cap is None else cap
    if order > cap:
        raise ValidationError(f"group order {order} exceeds cap {cap}")
    return Group(factors=factors, order=order)


def tensor_group(g1: Group, g2: Group, cap: int | None = None) -> Group:
    """Direct product; factor lists concatenate and indexing stays mixed-radix.

    The Fourier basis of the product is the Kronecker product of the factor
    bases under this indexing (tested as a module property).
    """
    return make_group(g1.factors + g2.factors, cap=cap)


def character_value(group: Group, chi: int, g: int) -> complex:
    """Value of character chi at element g, a product of roots of unity.

    Computed in one shot from the exact rational angle
    sum_t (a_t b_t mod n_t)/n_t so repeated evaluation never drifts.
    """
    chi_digits = group.index_to_tuple(chi)
    g_digits = group.index_to_tuple(g)
    lcm = math.lcm(*group.factors)
    num = 0
    for a, b, n in zip(g_digits, chi_digits, group.factors):
        num += ((a * b) % n) * (lcm // n)
    num %= lcm
    return complex(np.exp(2j * np.pi * (num / lcm)))


@lru_cache(maxsize=16)
def fourier_basis(group: Group) -> FlatBasis:
    """Normalized character table of the group as a flat basis.

    Row chi holds |G|^{-1/2} chi(g) for g = 0..|G|-1.  When every factor is 2
    the matrix is real with entries +-|G|^{-1/2}, i.e. Hadamard-type.
    Unitarity and flatness are verified on construction; results are cached
    per group.
    """
    n = group.order
    digits = np.array(
        np.unravel_index(np.arange(n), group.factors), dtype=np.int64
    )  # (r, n): digits[t, i] = t-th mixed-radix digit of index i
    lcm = math.lcm(*group.factors)
    num = np.zeros((n, n), dtype=np.int64)
    for t, nt in enumerate(group.factors):
        num += ((digits[t][:, None] * digits[t][None, :]) % nt) * (lcm // nt)
    num %= lcm
    matrix = np.exp(2j * np.pi * (num / lcm)) / np.sqrt(n)
    matrix.setflags(write=False)
    basis = FlatBasis(matrix=matrix, source=FOURIER_SOURCE, group=group)
    verify_flat_basis(basis.matrix)
    return basis


def flat_basis_deviations(matrix: np.ndarray):
    """Max deviations from the two flat-basis invariants.

    Returns (unitarity_dev, unitarity_entry, flatness_dev, flatness_entry)
    where the entries are the (row, col) positions of the worst offenders.
    """
    n = matrix.shape[0]
    flat_err = np.abs(np.abs(matrix) - 1.0 / np.sqrt(n))
    fi, fj = np.unravel_index(np.argmax(flat_err), flat_err.shape)
    gram_err = np.abs(matrix @ matrix.conj().T - np.eye(n))
    ui, uj = np.unravel_index(np.argmax(gram_err), gram_err.shape)
    return (
        float(gram_err[ui, uj]),
        (int(ui), int(uj)),
        float(flat_err[fi, fj]),
        (int(fi), int(fj)),
    )


def verify_flat_basis(matrix: np.ndarray) -> None:
    """Raise ValidationError if the matrix is not square, flat and unitary."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"flat basis must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("flat basis contains non-finite entries")
    unit_dev, unit_entry, flat_dev, flat_entry = flat_basis_deviations(matrix)
    if flat_dev > config.FLATNESS_TOL:
        i, j = flat_entry
        raise ValidationError(
            f"flatness violation at entry ({i}, {j}): modulus "
            f"{abs(matrix[i, j]):.17g} deviates from {matrix.shape[0]}**-0.5 "
            f"by {flat_dev:.3e} (tolerance {config.FLATNESS_TOL:.0e})"
        )
    if unit_dev > config.UNITARITY_TOL:
        i, j = unit_entry
        raise ValidationError(
            f"unitarity violation: Gram entry ({i}, {j}) deviates from "
            f"identity by {unit_dev:.3e} (tolerance {config.UNITARITY_TOL:.0e})"
        )


def _parse_entry(token: str, line_no: int, col: int) -> complex:
    try:
        if "," in token:
            re_s, im_s = token.split(",")
            return complex(float(re_s), float(im_s))
        return complex(token)
    except ValueError as exc:
        raise ValidationError(
            f"line {line_no}: cannot parse entry {col + 1} ({token!r}) "
            "as a complex number"
        ) from exc


def load_flat_basis(path: str | Path) -> FlatBasis:
    """Read a flat basis from a text file.

    Format: first non-empty line is the dimension n, then n lines each with n
    whitespace-separated entries.  An entry is either a complex literal with
    "j" suffix ("0.5-0.5j", "1", "-2j") or a "re,im" pair ("0.5,-0.5").
    Both invariants are verified; violations report the offending entry.
    """
    path = Path(path)
    lines = [
        (i + 1, line.strip())
        for i, line in enumerate(path.read_text().splitlines())
        if line.strip()
    ]
    if not lines:
        raise ValidationError(f"{path}: empty basis file")
    head_no, head = lines[0]
    try:
        n = int(head)
    except ValueError as exc:
        raise ValidationError(
            f"{path}: line {head_no}: expected dimension, got {head!r}"
        ) from exc
    if n < 1:
        raise ValidationError(f"{path}: dimension must be >= 1, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise ValidationError(
            f"{path}: expected {n} matrix rows, found {len(rows)}"
        )
    matrix = np.empty((n, n), dtype=np.complex128)
    for r, (line_no, line) in enumerate(rows):
        tokens = line.split()
        if len(tokens) != n:
            raise ValidationError(
                f"{path}: line {line_no}: expected {n} entries, found {len(tokens)}"
            )
        for c, token in enumerate(tokens):
            matrix[r, c] = _parse_entry(token, line_no, c)
    verify_flat_basis(matrix)
    matrix.setflags(write=False)
    return FlatBasis(matrix=matrix, source=LOADED_SOURCE, group=None)


def save_flat_basis(path: str | Path, basis: FlatBasis) -> None:
    """Write a basis in the text format accepted by load_flat_basis."""
    n = basis.dim
    out = [str(n)]
    for row in basis.matrix:
        out.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    Path(path).write_text("\n".join(out) + "\n")
