"""Seeded, reproducible experiment drivers.

Each driver returns an ExperimentReport whose per-trial records carry enough
inputs (group, sets, per-trial seed) to replay any trial in isolation, and
whose summary is recomputable from the records.  Per-trial seeds derive from
the experiment seed through numpy's SeedSequence, so a fixed seed fixes the
whole report except for its timestamp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import config, report
from .errors import ValidationError
from .groups import fourier_basis, make_group
from .selection import (
    OBJECTIVE_TWO_SIDED,
    brute_force_best,
    build_frame,
    evaluate_twosided,
    select_onesided,
)
from .subspaces import (
    FourierSubspace,
    overlap_norm,
    random_index_set,
    random_standard,
)


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    command: str
    inputs: dict
    trials: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        """Full JSON envelope (adds tool version and timestamp)."""
        return report.build_envelope(
            self.command, self.inputs, {"trials": self.trials}, self.summary
        )


def trial_seeds(seed: int, count: int) -> list[int]:
    """Per-trial 64-bit seeds derived deterministically from one seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, np.uint64)]


def mc_intersection(
    n: int,
    N: int,
    trials: int,
    seed: int,
    intersect_tol: float = config.INTERSECTION_TOL,
    cap: int | None = None,
) -> ExperimentReport:
    """Random standard subspaces against a tensor-style Fourier subspace.

    On the group [n^2, N] the character set {(nb, c)} spans the Fourier
    subspace whose dimension fraction is 1/n.  Each trial draws a uniformly
    random standard subspace of dimension |G|/n and records whether the
    overlap norm exceeds the intersection threshold: as N grows the sampled
    intersection frequency should approach 1.
    """
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    if trials < 1:
        raise ValidationError(f"trial count must be >= 1, got {trials}")
    group = make_group([n * n, N], cap=cap)
    order = group.order
    if order % n != 0:
        raise ValidationError(f"group order {order} not divisible by n={n}")
    dim_e = order // n
    chars = tuple(n * b * N + c for b in range(n) for c in range(N))
    basis = fourier_basis(group)
    F = FourierSubspace(basis, chars)
    seeds = trial_seeds(seed, trials)
    records = []
    hits = 0
    for t, s in enumerate(seeds):
        E = random_standard(dim_e, s, basis)
        ov = overlap_norm(E, F)
        hit = ov > 1.0 - intersect_tol
        hits += hit
        records.append(
            {
                "trial": t,
                "seed": s,
                "group": list(group.factors),
                "k": dim_e,
                "set": list(E.indices),
                "overlap_norm": ov,
                "intersects": bool(hit),
            }
        )
    freq = hits / trials
    sigma = math.sqrt(freq * (1.0 - freq) / trials)
    rep = ExperimentReport(
        command="mc-intersect",
        inputs={
            "group": list(group.factors),
            "chars": list(chars),
            "k": dim_e,
            "trials": trials,
            "seed": seed,
            "tolerances": {"intersection": intersect_tol},
        },
        trials=records,
        summary={
            "intersection_frequency": freq,
            "binomial_sigma": sigma,
            "intersections": hits,
            "trials": trials,
        },
    )
    return rep


def sweep_eps_constant(
    group_specs: Sequence[Sequence[int]],
    dims: Sequence[int],
    k_fraction: float,
    seed: int,
) -> ExperimentReport:
    """Measure the excess ||QPQ|| - k/n across a family of instances.

    Each instance draws a seeded random character set of the given dimension,
    runs the one-sided selector at k = round(k_fraction * n), and records the
    excess and its ratio to sqrt(eps).  The summary reports the measured
    maximum ratio; it is a measurement, not an asserted constant.
    """
    if len(group_specs) != len(dims):
        raise ValidationError("group_specs and dims must have equal lengths")
    if not 0.0 <= k_fraction <= 1.0:
        raise ValidationError(f"k_fraction must be in [0, 1], got {k_fraction}")
    seeds = trial_seeds(seed, len(group_specs))
    records = []
    max_ratio = 0.0
    max_excess = 0.0
    for t, (factors, m, s) in enumerate(zip(group_specs, dims, seeds)):
        group = make_group(factors)
        basis = fourier_basis(group)
        n = group.order
        chars = random_index_set(m, s, n)
        frame = build_frame(FourierSubspace(basis, chars))
        k = round(k_fraction * n)
        result = select_onesided(frame, k)
        excess = result.achieved_one_sided - k / n
        sqrt_eps = math.sqrt(frame.epsilon)
        ratio = excess / sqrt_eps
        bound_excess = result.bound_one_sided - k / n
        max_ratio = max(max_ratio, ratio)
        max_excess = max(max_excess, excess)
        records.append(
            {
                "trial": t,
                "seed": s,
                "group": list(group.factors),
                "chars": list(chars),
                "k": k,
                "epsilon": frame.epsilon,
                "achieved": result.achieved_one_sided,
                "excess": excess,
                "ratio_to_sqrt_eps": ratio,
                "bound_excess": bound_excess,
            }
        )
    return ExperimentReport(
        command="sweep-eps",
        inputs={
            "groups": [list(g) for g in group_specs],
            "dims": list(dims),
            "k_fraction": k_fraction,
            "seed": seed,
        },
        trials=records,
        summary={
            "max_ratio_to_sqrt_eps": max_ratio,
            "max_excess": max_excess,
            "instances": len(records),
        },
    )


def half_split(
    factors: Sequence[int],
    chars: Sequence[int],
    use_oracle: bool,
    seed: int,
    cap: int | None = None,
) -> ExperimentReport:
    """Split the group in half and measure both overlap norms against 1/sqrt(2).

    With k = floor(n/2) both ||PQ|| and ||(I-P)Q|| should sit near 1/sqrt(2),
    i.e. the subspace and its complement are straddled at about 45 degrees.
    The oracle path enumerates all k-subsets minimizing the worse excess; the
    greedy path runs the one-sided selector and is labeled heuristic.
    """
    group = make_group(factors)
    basis = fourier_basis(group)
    frame = build_frame(FourierSubspace(basis, chars))
    n = group.order
    k = n // 2
    if use_oracle:
        S, _ = brute_force_best(frame, k, OBJECTIVE_TWO_SIDED, cap=cap)
        method = "exhaustive-oracle"
    else:
        S = select_onesided(frame, k).S
        method = "greedy-heuristic"
    ev = evaluate_twosided(frame, S)
    pq = math.sqrt(max(ev.qpq_norm, 0.0))
    ipq = math.sqrt(max(ev.complement_norm, 0.0))
    target = 1.0 / math.sqrt(2.0)
    dev_pq = abs(pq - target)
    dev_ipq = abs(ipq - target)
    sqrt_eps = math.sqrt(frame.epsilon)
    record = {
        "trial": 0,
        "seed": seed,
        "group": list(group.factors),
        "chars": list(chars),
        "k": k,
        "set": list(S),
        "method": method,
        "pq_norm": pq,
        "complement_pq_norm": ipq,
        "deviation_pq": dev_pq,
        "deviation_complement": dev_ipq,
        "half_offset": 0.5 - k / n,
    }
    return ExperimentReport(
        command="half-split",
        inputs={
            "group": list(group.factors),
            "chars": list(chars),
            "k": k,
            "seed": seed,
            "oracle": use_oracle,
        },
        trials=[record],
        summary={
            "target": target,
            "max_deviation": max(dev_pq, dev_ipq),
            "measured_c": max(dev_pq, dev_ipq) / sqrt_eps,
            "epsilon": frame.epsilon,
            "method": method,
        },
    )
