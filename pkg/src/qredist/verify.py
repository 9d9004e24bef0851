"""Randomized property suites over Haar-random pure states.

Every suite returns a plain dict summary (JSON-ready) with the extreme
values it observed, the tolerances it applied and an overall verdict.
Trial ``k`` of a suite run with ``seed`` always sees the same state.
"""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .entropy import RoleEntropies, RolePartition
from .linalg import random_pure_state
from .tasks import (
    composability_check,
    fqrs_corner,
    fqsw_corner,
    is_achievable,
    merging_costs,
    redistribution_corner,
    redistribution_region,
    time_reversal_dual,
)

__all__ = ["SUITES", "DEFAULT_TOLERANCES", "run_suite"]

DEFAULT_TOLERANCES = {
    "inequality": 1e-7,
    "pure_identity": 1e-7,
    "identity": 1e-9,
}


def _state(seed: int, trial: int, dims: Sequence[int], tag: int = 0):
    return random_pure_state(dims, np.random.SeedSequence([seed, tag, trial]))


def _ssa(trials, dims, seed, tol):
    min_qcmi = np.inf
    min_mi = np.inf
    used = set()
    for k in range(trials):
        if dims is None:
            rng = np.random.default_rng(np.random.SeedSequence([seed, 99, k]))
            d = tuple(int(x) for x in rng.integers(2, 5, size=4))
        else:
            d = tuple(dims)
        used.add(d)
        psi = _state(seed, k, d)
        n = len(d)
        ent = RoleEntropies(psi, RolePartition.from_labels("C" * n))
        # every assignment of three distinct subsystems to (C, R, B)
        for c, r, b in permutations(range(n), 3):
            labels = ["A"] * n
            labels[c], labels[r], labels[b] = "C", "R", "B"
            ent = ent.relabel(RolePartition.from_labels(labels))
            min_qcmi = min(min_qcmi, ent.cmi("C", "R", "B"))
            min_mi = min(min_mi, ent.mi("C", "R"))
    metrics = {"min_qcmi": min_qcmi, "min_mutual_information": min_mi,
               "dims_seen": sorted(used)}
    passed = min_qcmi >= -tol["inequality"] and min_mi >= -tol["inequality"]
    return metrics, passed


def _duality(trials, dims, seed, tol):
    d = tuple(dims or (2, 2, 2, 2))
    if len(d) != 4:
        raise ValueError("duality suite needs four subsystems (A, B, C, R)")
    part = RolePartition.from_labels("ABCR")
    max_id = max_q = max_e = 0.0
    min_q = np.inf
    membership_failures = 0
    for k in range(trials):
        psi = _state(seed, k, d)
        ent = RoleEntropies(psi, part)
        max_id = max(max_id, abs(ent.cmi("C", "R", "A") - ent.cmi("C", "R", "B")))
        fwd = redistribution_corner(psi, part)
        dual = time_reversal_dual(psi, part)
        max_q = max(max_q, abs(fwd.Q - dual.Q))
        max_e = max(max_e, abs(fwd.E + dual.E))
        min_q = min(min_q, fwd.Q)
        region = redistribution_region(psi, part)
        if not is_achievable(region, fwd.Q, fwd.E) or is_achievable(region, fwd.Q - 1e-3, fwd.E):
            membership_failures += 1
    metrics = {
        "max_pure_identity_gap": max_id,
        "max_Q_swap_gap": max_q,
        "max_E_plus_E_swap": max_e,
        "min_Q": min_q,
        "corner_membership_failures": membership_failures,
    }
    passed = (
        max_id <= tol["pure_identity"]
        and max_q <= tol["identity"]
        and max_e <= tol["identity"]
        and min_q >= -tol["inequality"]
        and membership_failures == 0
    )
    return metrics, passed


def _composability(trials, dims, seed, tol):
    d = tuple(dims or (2, 2, 2, 2, 2))
    if len(d) != 5:
        raise ValueError("composability suite needs five subsystems (A, B, C, D, R)")
    part = RolePartition.from_labels("ABCDR")
    max_dev = 0.0
    min_q = np.inf
    for k in range(trials):
        rec = composability_check(_state(seed, k, d), part)
        max_dev = max(max_dev, rec.max_deviation)
        min_q = min(min_q, rec.joint.Q, rec.sequential.Q)
    metrics = {"max_deviation": max_dev, "min_Q": min_q}
    return metrics, max_dev <= tol["identity"] and min_q >= -tol["inequality"]


def _special_cases(trials, dims, seed, tol):
    d = tuple(dims or (2, 2, 2))
    if len(d) != 3:
        raise ValueError("special-cases suite needs three subsystems")
    sw = RolePartition.from_labels("BCR")
    rs = RolePartition.from_labels("ACR")
    max_sw = max_rs = 0.0
    for k in range(trials):
        psi = _state(seed, k, d)
        a, b = redistribution_corner(psi, sw), fqsw_corner(psi, sw)
        max_sw = max(max_sw, abs(a.Q - b.Q), abs(a.E - b.E))
        psi = _state(seed, k, d, tag=1)
        a, b = redistribution_corner(psi, rs), fqrs_corner(psi, rs)
        max_rs = max(max_rs, abs(a.Q - b.Q), abs(a.E - b.E))
    metrics = {"max_fqsw_deviation": max_sw, "max_fqrs_deviation": max_rs}
    return metrics, max(max_sw, max_rs) <= tol["identity"]


def _merging(trials, dims, seed, tol):
    d = tuple(dims or (2, 2, 2, 2))
    if len(d) != 4:
        raise ValueError("merging suite needs four subsystems (A, B, C, R)")
    part = RolePartition.from_labels("ABCR")
    max_ebit_gap = 0.0
    max_excess = -np.inf
    min_cbits = np.inf
    for k in range(trials):
        psi = _state(seed, k, d)
        costs = merging_costs(psi, part)
        ent = RoleEntropies(psi, part)
        max_ebit_gap = max(max_ebit_gap, abs(costs.ebits - ent.cond("C", "B")))
        max_excess = max(max_excess, costs.cbits - ent.mi("RA", "C"))
        min_cbits = min(min_cbits, costs.cbits)
    metrics = {
        "max_ebits_gap": max_ebit_gap,
        "max_cbits_minus_I(RA;C)": max_excess,
        "min_cbits": min_cbits,
    }
    passed = (
        max_ebit_gap <= tol["identity"]
        and max_excess <= tol["identity"]
        and min_cbits >= -tol["inequality"]
    )
    return metrics, passed


SUITES: dict[str, Callable] = {
    "ssa": _ssa,
    "duality": _duality,
    "composability": _composability,
    "special-cases": _special_cases,
    "merging": _merging,
}


def run_suite(name: str, trials: int = 100, dims: Sequence[int] | None = None,
              seed: int = 0, tolerances: dict[str, float] | None = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tol = dict(DEFAULT_TOLERANCES)
    for key, value in (tolerances or {}).items():
        if key not in tol:
            raise KeyError(f"unknown tolerance {key!r}")
        if not value > 0:
            raise ValueError("tolerances must be positive")
        tol[key] = float(value)
    metrics, passed = SUITES[name](trials, dims, seed, tol)
    return {
        "suite": name,
        "trials": trials,
        "dims": list(dims) if dims else None,
        "seed": seed,
        "metrics": metrics,
        "tolerances": tol,
        "passed": bool(passed),
    }
