"""Resource accounting for quantum state redistribution.

Alice holds AC, Bob holds B, R purifies the rest. Costs are per copy:
``Q`` qubits sent from Alice to Bob and ``E`` ebits consumed (negative
``E`` means entanglement is generated).

When a partition also carries role D, Alice is taken to hold it next to A
for every single-step task; only :func:`composability_check` treats D as a
second transferred system.
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import RoleEntropies, RolePartition
from .errors import NotPureError, TaskMismatchError

__all__ = [
    "PURITY_TOL",
    "CostPair",
    "Constraint",
    "CostRegion",
    "MergingCosts",
    "CompositionRecord",
    "redistribution_region",
    "redistribution_corner",
    "is_achievable",
    "fqsw_region",
    "fqsw_corner",
    "fqrs_region",
    "fqrs_corner",
    "merging_costs",
    "time_reversal_dual",
    "composability_check",
]

PURITY_TOL = 1e-6
MEMBERSHIP_SLACK = 1e-9


@dataclass(frozen=True)
class CostPair:
    Q: float
    E: float

    def __iter__(self):
        return iter((self.Q, self.E))


@dataclass(frozen=True)
class Constraint:
    """Half-plane ``q_coeff*Q + e_coeff*E >= bound``."""

    q_coeff: float
    e_coeff: float
    bound: float

    def slack(self, Q: float, E: float) -> float:
        return self.q_coeff * Q + self.e_coeff * E - self.bound


@dataclass(frozen=True)
class CostRegion:
    constraints: tuple[Constraint, ...]

    def corner(self) -> CostPair:
        """Intersection of the two boundary lines."""
        (a1, b1, c1), (a2, b2, c2) = [(c.q_coeff, c.e_coeff, c.bound) for c in self.constraints]
        det = a1 * b2 - a2 * b1
        return CostPair((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


@dataclass(frozen=True)
class MergingCosts:
    ebits: float
    cbits: float


@dataclass(frozen=True)
class CompositionRecord:
    joint: CostPair
    sequential: CostPair
    max_deviation: float


def _entropies(state, partition: RolePartition, fold_d: bool = True) -> RoleEntropies:
    ent = RoleEntropies(state, partition)
    h_all = ent.H(partition.present_roles())
    if h_all > PURITY_TOL:
        raise NotPureError(f"global state must be pure (H = {h_all:.3g} bits)")
    if fold_d and partition.has("D"):
        ent = ent.relabel(partition.merged("A", "D"))
    return ent


def _region(q_bound: float, sum_bound: float) -> CostRegion:
    return CostRegion((Constraint(1.0, 0.0, q_bound), Constraint(1.0, 1.0, sum_bound)))


def redistribution_region(state, partition: RolePartition) -> CostRegion:
    """``Q >= I(C;R|B)/2`` and ``Q + E >= H(C|B)``."""
    ent = _entropies(state, partition)
    return _region(0.5 * ent.cmi("C", "R", "B"), ent.cond("C", "B"))


def _corner(ent: RoleEntropies) -> CostPair:
    return CostPair(0.5 * ent.cmi("C", "R", "B"), 0.5 * ent.mi("C", "A") - 0.5 * ent.mi("C", "B"))


def redistribution_corner(state, partition: RolePartition) -> CostPair:
    """Optimal pair ``Q = I(C;R|B)/2``, ``E = (I(C;A) - I(C;B))/2``."""
    return _corner(_entropies(state, partition))


def is_achievable(region: CostRegion, Q: float, E: float) -> bool:
    return all(c.slack(Q, E) >= -MEMBERSHIP_SLACK for c in region.constraints)


def fqsw_region(state, partition: RolePartition) -> CostRegion:
    ent = _fqsw_entropies(state, partition)
    return _region(0.5 * ent.mi("C", "R"), ent.cond("C", "B"))


def _fqsw_entropies(state, partition):
    if partition.has("A") or partition.has("D"):
        raise TaskMismatchError("not an FQSW instance: Alice must have no side information")
    return _entropies(state, partition)


def fqsw_corner(state, partition: RolePartition) -> CostPair:
    """Slepian-Wolf corner for empty A: ``Q = I(C;R)/2``, ``E = -I(C;B)/2``."""
    ent = _fqsw_entropies(state, partition)
    return CostPair(0.5 * ent.mi("C", "R"), -0.5 * ent.mi("C", "B"))


def _fqrs_entropies(state, partition):
    if partition.has("B"):
        raise TaskMismatchError("not an FQRS instance: Bob must have no side information")
    return _entropies(state, partition)


def fqrs_region(state, partition: RolePartition) -> CostRegion:
    ent = _fqrs_entropies(state, partition)
    return _region(0.5 * ent.mi("C", "R"), ent.H("C"))


def fqrs_corner(state, partition: RolePartition) -> CostPair:
    """Reverse-Shannon corner for empty B: ``Q = I(C;R)/2``, ``E = I(C;A)/2``."""
    ent = _fqrs_entropies(state, partition)
    return CostPair(0.5 * ent.mi("C", "R"), 0.5 * ent.mi("C", "A"))


def merging_costs(state, partition: RolePartition) -> MergingCosts:
    """Merging C into B with free classical communication.

    ``ebits = H(C|B)`` and ``cbits = I(R;C|A)``, which never exceeds the
    ``I(RA;C)`` bits needed when A is lumped into the reference.
    """
    ent = _entropies(state, partition)
    return MergingCosts(ent.cond("C", "B"), ent.cmi("R", "C", "A"))


def time_reversal_dual(state, partition: RolePartition) -> CostPair:
    """Corner with A and B exchanged: same Q, opposite E on pure states."""
    ent = _entropies(state, partition)
    return _corner(ent.relabel(ent.partition.swapped("A", "B")))


def composability_check(state, partition: RolePartition) -> CompositionRecord:
    """Compare sending CD at once with sending D first, then C."""
    if not partition.has("D"):
        raise TaskMismatchError("successive mode requires role D")
    ent = _entropies(state, partition, fold_d=False)
    joint = CostPair(
        0.5 * ent.cmi("CD", "R", "B"),
        0.5 * ent.mi("CD", "A") - 0.5 * ent.mi("CD", "B"),
    )
    q_d = 0.5 * ent.cmi("D", "R", "B")
    e_d = 0.5 * ent.mi("D", "AC") - 0.5 * ent.mi("D", "B")
    q_c = 0.5 * ent.cmi("C", "R", "DB")
    e_c = 0.5 * ent.mi("C", "A") - 0.5 * ent.mi("C", "DB")
    sequential = CostPair(q_c + q_d, e_c + e_d)
    dev = max(abs(joint.Q - sequential.Q), abs(joint.E - sequential.E))
    return CompositionRecord(joint, sequential, dev)
