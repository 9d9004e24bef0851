"""Named states and the ``.qsv`` text format.

A ``.qsv`` document looks like::

    # four-party cat state
    dims: 2 2 2 2
    roles: A B C R
    |0 0 0 0> = 1/sqrt(2)
    |1 1 1 1> = 1/sqrt(2)

Amplitudes are a real float, ``p/sqrt(q)``, either of those with an ``i``
suffix, a sum of one real and one imaginary part (``0.6 - 0.8i``) or a
bare ``RE IM`` pair. ``renormalize: true`` rescales the terms to unit norm.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .entropy import ROLES, RolePartition, entropy
from .errors import (
    DuplicateKetError,
    IndexRangeError,
    InvalidStateError,
    NormalizationError,
    ParseError,
    UnknownRoleError,
)
from .linalg import StateVector, check_dims, random_pure_state

__all__ = [
    "StateDocument",
    "HjpwBlock",
    "HjpwSpec",
    "singleton_roles",
    "make_cat",
    "make_w",
    "make_hjpw",
    "hjpw_demo_spec",
    "random_hjpw_spec",
    "hjpw_entanglement_sum",
    "parse_state",
    "format_state",
    "document_to_state",
    "state_to_document",
]

NORM_TOL = 1e-6
DROP_TOL = 1e-15

_SINGLETON_ROLES = {2: "CR", 3: "BCR", 4: "ABCR", 5: "ABCDR"}


def singleton_roles(n: int) -> str:
    """Default role labels for ``n`` parties; beyond five, A absorbs the extras."""
    if n < 2:
        raise ValueError(f"no default role labelling for {n} subsystems")
    return _SINGLETON_ROLES.get(n) or "A" * (n - 3) + "BCR"


def make_cat(n: int) -> StateVector:
    """``(|0...0> + |1...1>)/sqrt(2)`` on ``n`` qubits."""
    if n < 2:
        raise ValueError("cat state needs at least two qubits")
    dims = check_dims((2,) * n)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(amps, dims)


def make_w(n: int) -> StateVector:
    """Uniform superposition of the ``n`` single-excitation kets."""
    if n < 2:
        raise ValueError("W state needs at least two qubits")
    dims = check_dims((2,) * n)
    amps = np.zeros(2**n, dtype=complex)
    for k in range(n):
        amps[1 << k] = 1 / math.sqrt(n)
    return StateVector(amps, dims)


@dataclass(frozen=True)
class HjpwBlock:
    p: float
    phi: StateVector  # on A_C, B_C, C
    varphi: StateVector  # on A_R, B_R, R


@dataclass(frozen=True)
class HjpwSpec:
    """Blocks of a state with vanishing I(C;R|B).

    The assembled state is ``sum_x sqrt(p_x) |x>|x> |phi_x> |varphi_x>``
    with subsystem order ``A', B', A_C, B_C, C, A_R, B_R, R``.
    """

    blocks: tuple[HjpwBlock, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise InvalidStateError("HJPW spec needs at least one block")
        if abs(sum(b.p for b in blocks) - 1.0) > 1e-9 or any(b.p < 0 for b in blocks):
            raise InvalidStateError("block probabilities must be nonnegative and sum to 1")
        shapes = {(b.phi.dims, b.varphi.dims) for b in blocks}
        if len(shapes) != 1 or any(len(b.phi.dims) != 3 or len(b.varphi.dims) != 3 for b in blocks):
            raise InvalidStateError("inconsistent block shapes")
        object.__setattr__(self, "blocks", blocks)


HJPW_LABELS = "ABABCABR"


def make_hjpw(spec: HjpwSpec) -> tuple[StateVector, RolePartition]:
    k = len(spec.blocks)
    first = spec.blocks[0]
    dims = check_dims((k, k) + first.phi.dims + first.varphi.dims)
    amps = np.zeros(prod(dims), dtype=complex)
    eye = np.eye(k)
    for x, block in enumerate(spec.blocks):
        flag = np.kron(eye[x], eye[x])
        amps += math.sqrt(block.p) * np.kron(flag, np.kron(block.phi.amps, block.varphi.amps))
    return StateVector(amps, dims), RolePartition.from_labels(HJPW_LABELS)


def hjpw_entanglement_sum(spec: HjpwSpec) -> float:
    """``sum_x p_x (H(A_C) - H(B_C))`` over the blocks' ``phi_x``."""
    return sum(b.p * (entropy(b.phi, [0]) - entropy(b.phi, [1])) for b in spec.blocks)


def _basis(d, i):
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


def hjpw_demo_spec() -> HjpwSpec:
    """Two equiprobable blocks: a Bell pair on A_C C, then on C B_C."""
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    zero = _basis(2, 0)
    # phi_0 = Phi+ on (A_C, C) with B_C in |0>; reorder to (A_C, B_C, C)
    phi0 = np.kron(bell, zero).reshape(2, 2, 2).transpose(0, 2, 1).reshape(-1)
    phi1 = np.kron(zero, bell)
    return HjpwSpec((
        HjpwBlock(0.5, StateVector(phi0, (2, 2, 2)), StateVector(_basis(2, 0), (1, 1, 2))),
        HjpwBlock(0.5, StateVector(phi1, (2, 2, 2)), StateVector(_basis(2, 1), (1, 1, 2))),
    ))


def random_hjpw_spec(seed=None, max_blocks: int = 3, max_dim: int = 2) -> HjpwSpec:
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_blocks + 1))
    phi_dims = tuple(int(d) for d in rng.integers(1, max_dim + 1, size=3))
    var_dims = tuple(int(d) for d in rng.integers(1, max_dim + 1, size=3))
    p = rng.dirichlet(np.ones(k))
    return HjpwSpec(tuple(
        HjpwBlock(float(p[x]), random_pure_state(phi_dims, rng), random_pure_state(var_dims, rng))
        for x in range(k)
    ))


@dataclass(frozen=True)
class StateDocument:
    dims: tuple[int, ...]
    role_labels: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], complex], ...]


def document_to_state(doc: StateDocument) -> tuple[StateVector, RolePartition]:
    dims = check_dims(doc.dims)
    amps = np.zeros(prod(dims), dtype=complex)
    for ket, amp in doc.terms:
        amps[np.ravel_multi_index(ket, dims)] = amp
    return StateVector(amps, dims), RolePartition.from_labels(doc.role_labels)


def state_to_document(state: StateVector, labels: Sequence[str]) -> StateDocument:
    labels = tuple(labels)
    if len(labels) != state.n:
        raise InvalidStateError(f"{len(labels)} role labels for {state.n} subsystems")
    terms = []
    for flat in np.flatnonzero(np.abs(state.amps) >= DROP_TOL):
        ket = tuple(int(i) for i in np.unravel_index(flat, state.dims))
        terms.append((ket, complex(state.amps[flat])))
    return StateDocument(state.dims, labels, tuple(terms))


def _fmt(x: float) -> str:
    return f"{x + 0.0:.17g}"


def format_state(doc: StateDocument) -> str:
    """Canonical text: headers, then kets in lexicographic order."""
    lines = [
        "dims: " + " ".join(str(d) for d in doc.dims),
        "roles: " + " ".join(doc.role_labels),
    ]
    for ket, amp in sorted(doc.terms, key=lambda t: t[0]):
        if abs(amp) < DROP_TOL:
            continue
        lines.append(f"|{' '.join(str(i) for i in ket)}> = {_fmt(amp.real)} {_fmt(amp.imag)}")
    return "\n".join(lines) + "\n"


_NUM = r"(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
_COMPONENT = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<p>\d+)\s*/\s*sqrt\(\s*(?P<q>\d+)\s*\)|(?P<num>" + _NUM + r"))"
    r"(?P<imag>i)?(?![\w.])"
)
_KET = re.compile(r"\|(?P<idx>[^>|]*)>\s*=\s*")


def _parse_amplitude(expr: str, line: int, col0: int) -> complex:
    comps = []
    pos = 0
    while pos < len(expr) and expr[pos:].strip():
        m = _COMPONENT.match(expr, pos)
        if not m:
            offset = pos + len(expr[pos:]) - len(expr[pos:].lstrip())
            raise ParseError(f"cannot read amplitude near {expr[offset:offset + 12]!r}", line, col0 + offset)
        if m.group("p") is not None:
            q = int(m.group("q"))
            if q == 0:
                raise ParseError("sqrt(0) in amplitude denominator", line, col0 + m.start("q"))
            value = int(m.group("p")) / math.sqrt(q)
        else:
            value = float(m.group("num"))
        if m.group("sign") == "-":
            value = -value
        comps.append((value, m.group("imag") is not None, m.group("sign") is not None))
        pos = m.end()
    if not comps or len(comps) > 2:
        raise ParseError("amplitude needs one or two components", line, col0)
    if len(comps) == 1:
        value, imag, _ = comps[0]
        return complex(0, value) if imag else complex(value, 0)
    (v1, i1, _), (v2, i2, _) = comps
    if not i1 and not i2:
        return complex(v1, v2)  # bare "RE IM" pair
    if i1 == i2:
        raise ParseError("amplitude has two imaginary parts", line, col0)
    return complex(v2, v1) if i1 else complex(v1, v2)


def parse_state(text: str) -> StateDocument:
    """Read a ``.qsv`` document.

    Raises
    ------
    ParseError
        On malformed lines (with 1-based line and column), and through its
        subclasses on duplicate kets, out-of-range indices, unknown role
        labels, or a squared norm off by more than ``1e-6`` when
        ``renormalize: true`` is absent.
    """
    dims = None
    roles = None
    renormalize = False
    terms: dict[tuple[int, ...], complex] = {}
    first_term_line = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("|"):
            if dims is None or roles is None:
                raise ParseError("ket before 'dims:' and 'roles:' headers", lineno, indent + 1)
            m = _KET.match(body)
            if not m:
                raise ParseError("expected '|i1 ... ik> = amplitude'", lineno, indent + 1)
            ket = _parse_ket(m.group("idx"), dims, lineno, indent + 2)
            if ket in terms:
                raise DuplicateKetError(f"duplicate ket |{m.group('idx').strip()}>", lineno, indent + 1)
            terms[ket] = _parse_amplitude(body[m.end():], lineno, indent + m.end() + 1)
            first_term_line = first_term_line or lineno
            continue
        key, sep, value = body.partition(":")
        key = key.strip()
        vstart = indent + body.index(":") + 2  # column just past the colon
        vcol = vstart + len(value) - len(value.lstrip())
        if not sep:
            raise ParseError(f"unexpected line {body!r}", lineno, indent + 1)
        if key == "dims":
            if dims is not None:
                raise ParseError("repeated 'dims:' header", lineno, indent + 1)
            try:
                dims = tuple(int(tok) for tok in value.split())
            except ValueError:
                raise ParseError("dims must be positive integers", lineno, vcol) from None
            if not dims or any(d < 1 for d in dims):
                raise ParseError("dims must be positive integers", lineno, vcol)
        elif key == "roles":
            if dims is None:
                raise ParseError("'roles:' must follow 'dims:'", lineno, indent + 1)
            if roles is not None:
                raise ParseError("repeated 'roles:' header", lineno, indent + 1)
            labels = value.split()
            for lab in labels:
                if lab not in ROLES:
                    raise UnknownRoleError(f"unknown role label {lab!r}", lineno, vstart + value.find(lab))
            if len(labels) != len(dims):
                raise ParseError(f"expected {len(dims)} role labels, got {len(labels)}", lineno, vcol)
            roles = tuple(labels)
        elif key == "renormalize":
            flag = value.strip().lower()
            if flag not in ("true", "false"):
                raise ParseError("renormalize must be 'true' or 'false'", lineno, vcol)
            renormalize = flag == "true"
        else:
            raise ParseError(f"unknown header {key!r}", lineno, indent + 1)
    if dims is None or roles is None:
        raise ParseError("missing 'dims:' or 'roles:' header", lineno, 1)
    norm2 = sum(abs(a) ** 2 for a in terms.values())
    if renormalize:
        if norm2 == 0:
            raise NormalizationError("cannot renormalize a zero state", first_term_line or lineno, 1)
        scale = 1 / math.sqrt(norm2)
        terms = {k: a * scale for k, a in terms.items()}
    elif abs(norm2 - 1) > NORM_TOL:
        raise NormalizationError(
            f"squared norm {norm2:.9g} is not 1 (add 'renormalize: true')",
            first_term_line or lineno, 1,
        )
    kept = tuple((k, terms[k]) for k in sorted(terms) if abs(terms[k]) >= DROP_TOL)
    return StateDocument(dims, roles, kept)


def _parse_ket(idx_text: str, dims, line: int, col: int) -> tuple[int, ...]:
    toks = idx_text.split()
    if len(toks) != len(dims):
        raise ParseError(f"ket has {len(toks)} indices, expected {len(dims)}", line, col)
    ket = []
    search = 0
    for tok, d in zip(toks, dims):
        at = idx_text.find(tok, search)
        search = at + len(tok)
        if not tok.isdigit():
            raise ParseError(f"ket index {tok!r} is not a nonnegative integer", line, col + at)
        i = int(tok)
        if i >= d:
            raise IndexRangeError(f"ket index {i} out of range for dimension {d}", line, col + at)
        ket.append(i)
    return tuple(ket)
