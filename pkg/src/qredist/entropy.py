"""Von Neumann entropy and the quantities built from it.

All values are in bits. Subsystems are addressed either by index sets
(the free functions) or by role letters through :class:`RoleEntropies`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import log2, prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidPartitionError, RolesOverlapError
from .linalg import (
    StateVector,
    _check_subsystems,
    clip_eigenvalues,
    partial_trace,
)

__all__ = [
    "ROLES",
    "RolePartition",
    "EntropyReport",
    "RoleEntropies",
    "shannon_entropy",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "conditional_mutual_information",
    "full_report",
]

ROLES = "ABCDR"


def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    # a unit eigenvalue rounded just above 1 would give -1e-16
    return max(float(-np.sum(p * np.log2(p))), 0.0)


def _subset_spectrum(state, subset: tuple[int, ...]) -> np.ndarray:
    if isinstance(state, StateVector):
        rest = tuple(i for i in range(state.n) if i not in subset)
        rows = prod(state.dims[i] for i in subset)
        m = np.transpose(state.tensor(), subset + rest).reshape(rows, -1)
        # squared singular values are the nonzero spectrum of either reduction
        vals = np.linalg.svd(m, compute_uv=False) ** 2
        return clip_eigenvalues(vals)
    red = partial_trace(state, subset).entries
    return clip_eigenvalues(np.linalg.eigvalsh((red + red.conj().T) / 2))


def entropy(state, subset: Iterable[int]) -> float:
    """Von Neumann entropy of the reduction of ``state`` to ``subset``."""
    subset = _check_subsystems(subset, state.n)
    if not subset:
        return 0.0
    return shannon_entropy(_subset_spectrum(state, subset))


def _disjoint(*sets) -> list[frozenset[int]]:
    out = [frozenset(int(i) for i in s) for s in sets]
    for a, b in combinations(out, 2):
        if a & b:
            raise RolesOverlapError(f"roles overlap on subsystems {sorted(a & b)}")
    return out


def conditional_entropy(state, x, y) -> float:
    """H(X|Y) = H(XY) - H(Y); negative for entangled states."""
    x, y = _disjoint(x, y)
    return entropy(state, x | y) - entropy(state, y)


def mutual_information(state, x, y) -> float:
    x, y = _disjoint(x, y)
    return entropy(state, x) + entropy(state, y) - entropy(state, x | y)


def conditional_mutual_information(state, x, y, z=()) -> float:
    """I(X;Y|Z) = H(XZ) + H(YZ) - H(Z) - H(XYZ)."""
    x, y, z = _disjoint(x, y, z)
    return (
        entropy(state, x | z)
        + entropy(state, y | z)
        - entropy(state, z)
        - entropy(state, x | y | z)
    )


@dataclass(frozen=True)
class RolePartition:
    """Assignment of every subsystem to exactly one of A, B, C, D, R.

    Missing roles are empty. C must be non-empty; D is only used for
    successive redistribution.
    """

    assignment: Mapping[str, frozenset[int]]
    n: int

    def __post_init__(self):
        clean = {}
        for role, idx in self.assignment.items():
            if role not in ROLES:
                raise InvalidPartitionError(f"unknown role {role!r}")
            clean[role] = frozenset(int(i) for i in idx)
        for role in ROLES:
            clean.setdefault(role, frozenset())
        seen: set[int] = set()
        for role in ROLES:
            if clean[role] & seen:
                raise RolesOverlapError(f"role {role} overlaps another role")
            seen |= clean[role]
        if seen != set(range(self.n)):
            missing = sorted(set(range(self.n)) - seen)
            extra = sorted(seen - set(range(self.n)))
            raise InvalidPartitionError(
                f"partition must cover subsystems 0..{self.n - 1} exactly once "
                f"(missing {missing}, unknown {extra})"
            )
        if not clean["C"]:
            raise InvalidPartitionError("role C must hold at least one subsystem")
        object.__setattr__(self, "assignment", clean)

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> RolePartition:
        """Build from one role letter per subsystem, e.g. ``"ABCR"``."""
        groups: dict[str, set[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, set()).add(i)
        return cls({k: frozenset(v) for k, v in groups.items()}, len(labels))

    def __getitem__(self, role: str) -> frozenset[int]:
        return self.assignment[role]

    def indices(self, roles: str) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for r in roles:
            out |= self.assignment[r]
        return out

    def has(self, role: str) -> bool:
        return bool(self.assignment[role])

    def labels(self) -> list[str]:
        out = [""] * self.n
        for role, idx in self.assignment.items():
            for i in idx:
                out[i] = role
        return out

    def swapped(self, a: str = "A", b: str = "B") -> RolePartition:
        m = dict(self.assignment)
        m[a], m[b] = m[b], m[a]
        return RolePartition(m, self.n)

    def merged(self, into: str, other: str) -> RolePartition:
        """Fold role ``other`` into role ``into``."""
        m = dict(self.assignment)
        m[into] = m[into] | m[other]
        m[other] = frozenset()
        return RolePartition(m, self.n)

    def present_roles(self) -> str:
        return "".join(r for r in ROLES if self.assignment[r])


class RoleEntropies:
    """Entropies of role unions of one state, each subset diagonalized once.

    The cache lives on the instance; nothing is shared between instances.
    """

    def __init__(self, state, partition: RolePartition):
        if partition.n != state.n:
            raise InvalidPartitionError(
                f"partition covers {partition.n} subsystems, state has {state.n}"
            )
        self.state = state
        self.partition = partition
        self._cache: dict[frozenset[int], float] = {}

    def relabel(self, partition: RolePartition) -> RoleEntropies:
        """Same state under another partition, reusing computed entropies."""
        out = RoleEntropies(self.state, partition)
        out._cache = self._cache
        return out

    def H(self, roles: str) -> float:
        idx = self.partition.indices(roles)
        if idx not in self._cache:
            self._cache[idx] = entropy(self.state, idx)
        return self._cache[idx]

    def _check(self, *groups: str):
        letters = "".join(groups)
        if len(set(letters)) != len(letters):
            raise RolesOverlapError(f"roles overlap in {groups}")

    def cond(self, x: str, y: str) -> float:
        self._check(x, y)
        return self.H(x + y) - self.H(y)

    def mi(self, x: str, y: str) -> float:
        self._check(x, y)
        return self.H(x) + self.H(y) - self.H(x + y)

    def cmi(self, x: str, y: str, z: str = "") -> float:
        self._check(x, y, z)
        return self.H(x + z) + self.H(y + z) - self.H(z) - self.H(x + y + z)


@dataclass
class EntropyReport:
    entropies: dict[str, float] = field(default_factory=dict)
    derived: dict[str, float] = field(default_factory=dict)


def _dim_of(state, idx) -> int:
    return prod(state.dims[i] for i in idx)


def full_report(state, partition: RolePartition) -> EntropyReport:
    """Entropies of every non-empty role union plus the named quantities
    the redistribution tasks consume.

    Keys of ``entropies`` are role letters in ``ABCDR`` order (``"BC"`` is
    H(BC)); ``derived`` uses the usual notation, e.g. ``"I(C;R|B)"``.
    """
    ent = RoleEntropies(state, partition)
    present = partition.present_roles()
    report = EntropyReport()
    for k in range(1, len(present) + 1):
        for combo in combinations(present, k):
            key = "".join(combo)
            h = ent.H(key)
            bound = log2(_dim_of(state, partition.indices(key)))
            if not -1e-9 <= h <= bound + 1e-9:
                raise ArithmeticError(f"entropy H({key}) = {h} outside [0, {bound}]")
            report.entropies[key] = h
    d = report.derived
    d["H(C|B)"] = ent.cond("C", "B")
    d["I(C;A)"] = ent.mi("C", "A")
    d["I(C;B)"] = ent.mi("C", "B")
    d["I(C;R)"] = ent.mi("C", "R")
    d["I(C;R|A)"] = ent.cmi("C", "R", "A")
    d["I(C;R|B)"] = ent.cmi("C", "R", "B")
    d["I(R;C|A)"] = ent.cmi("R", "C", "A")
    d["I(RA;C)"] = ent.mi("RA", "C")
    if partition.has("D"):
        d["I(CD;R|B)"] = ent.cmi("CD", "R", "B")
        d["I(CD;A)"] = ent.mi("CD", "A")
        d["I(CD;B)"] = ent.mi("CD", "B")
        d["I(D;R|B)"] = ent.cmi("D", "R", "B")
        d["I(D;AC)"] = ent.mi("D", "AC")
        d["I(D;B)"] = ent.mi("D", "B")
        d["I(C;R|DB)"] = ent.cmi("C", "R", "DB")
        d["I(C;DB)"] = ent.mi("C", "DB")
    return report
