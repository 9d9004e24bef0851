"""Monte-Carlo decoupling on a bipartite pure state of C and R.

A Haar-random unitary scrambles C, which is then split as C1 (x) C2 with
C1 the most significant factor. C1 is sent away (traced out) and we measure
how far the kept ``C2 R`` is from the product ``pi_C2 (x) rho_R``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import log2

import numpy as np

from .entropy import mutual_information
from .errors import InvalidSplitError
from .linalg import (
    StateVector,
    _trusted_dm,
    check_dims,
    random_pure_state,
    random_unitary,
    trace_distance,
)

__all__ = [
    "DecoupleConfig",
    "DecoupleRow",
    "maximally_entangled",
    "trial_seed",
    "decouple_trial",
    "decouple_sweep",
    "rows_to_csv",
    "CSV_HEADER",
]

CSV_HEADER = ("d1", "log2_d1", "mean_distance", "std_distance", "half_ICR_bits")


@dataclass(frozen=True)
class DecoupleConfig:
    d_C: int
    d_R: int
    d1_values: tuple[int, ...]
    trials: int = 100
    master_seed: int = 0

    def __post_init__(self):
        d1s = tuple(int(d) for d in self.d1_values)
        if not d1s:
            raise InvalidSplitError("at least one split is required")
        if list(d1s) != sorted(d1s):
            raise InvalidSplitError(f"split list {d1s} must be ascending")
        for d1 in d1s:
            if d1 < 1 or self.d_C % d1:
                raise InvalidSplitError(f"invalid split: {d1} does not divide d_C = {self.d_C}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        check_dims((self.d_C, self.d_R))
        object.__setattr__(self, "d1_values", d1s)


@dataclass(frozen=True)
class DecoupleRow:
    d1: int
    mean_distance: float
    std_distance: float
    threshold: float

    @property
    def log2_d1(self) -> float:
        return log2(self.d1)


def maximally_entangled(d_C: int, d_R: int) -> StateVector:
    """``sum_k |k>|k> / sqrt(m)`` with ``m = min(d_C, d_R)``."""
    m = min(d_C, d_R)
    amps = np.zeros((d_C, d_R), dtype=complex)
    amps[np.arange(m), np.arange(m)] = 1 / np.sqrt(m)
    return StateVector(amps.reshape(-1), (d_C, d_R))


def trial_seed(master_seed: int, d1: int, trial: int) -> np.random.SeedSequence:
    """Per-trial seed; independent of how trials are scheduled."""
    return np.random.SeedSequence([int(master_seed), int(d1), int(trial)])


def decouple_trial(psi: StateVector, d1: int, seed=None) -> float:
    """Trace distance between ``rho_{C2 R}`` and ``pi_{C2} (x) rho_R`` after one
    random unitary on C (subsystem 0 of ``psi``)."""
    if psi.n != 2:
        raise InvalidSplitError("decoupling input must have exactly two subsystems (C, R)")
    d_C, d_R = psi.dims
    if d1 < 1 or d_C % d1:
        raise InvalidSplitError(f"invalid split: {d1} does not divide dim(C) = {d_C}")
    d2 = d_C // d1
    m = psi.amps.reshape(d_C, d_R)
    u = random_unitary(d_C, seed)
    t = (u @ m).reshape(d1, d2 * d_R)
    rho_c2r = t.T @ t.conj()
    rho_r = m.T @ m.conj()
    target = np.kron(np.eye(d2) / d2, rho_r)
    dims = (d2, d_R)
    return trace_distance(_trusted_dm(rho_c2r, dims), _trusted_dm(target, dims))


def decouple_sweep(config: DecoupleConfig, psi: StateVector | None = None) -> list[DecoupleRow]:
    """Aggregate ``config.trials`` decoupling samples for every split size.

    With ``psi`` omitted each trial draws a fresh Haar-random input, and
    the reported threshold ``I(C;R)/2`` is averaged over those inputs.
    """
    if psi is not None and psi.dims != (config.d_C, config.d_R):
        raise InvalidSplitError(f"input dims {psi.dims} do not match ({config.d_C}, {config.d_R})")
    rows = []
    for d1 in config.d1_values:
        dists = np.empty(config.trials)
        halves = np.empty(config.trials)
        for k in range(config.trials):
            ss = trial_seed(config.master_seed, d1, k)
            state_seed, unitary_seed = ss.spawn(2)
            state = psi if psi is not None else random_pure_state((config.d_C, config.d_R), state_seed)
            dists[k] = decouple_trial(state, d1, unitary_seed)
            halves[k] = 0.5 * mutual_information(state, [0], [1])
        rows.append(DecoupleRow(d1, float(dists.mean()), float(dists.std()), float(halves.mean())))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.d1, repr(r.log2_d1), repr(r.mean_distance), repr(r.std_distance), repr(r.threshold)])
    return buf.getvalue()
