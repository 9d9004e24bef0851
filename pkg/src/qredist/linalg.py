"""Dense complex linear algebra on small tensor-product spaces.

States are kept as flat numpy arrays plus a tuple of per-subsystem
dimensions; subsystem 0 is the most significant factor of the flat index.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionCapError,
    IncompatibleOperatorsError,
    InvalidStateError,
    NotPositiveSemidefiniteError,
    UnknownSubsystemError,
)

__all__ = [
    "DEFAULT_DIM_CAP",
    "StateVector",
    "DensityMatrix",
    "Spectrum",
    "get_dim_cap",
    "dim_cap",
    "check_dims",
    "tensor_product",
    "partial_trace",
    "eig_spectrum",
    "purify",
    "trace_distance",
    "random_pure_state",
    "random_unitary",
    "permute_subsystems",
]

DEFAULT_DIM_CAP = 4096

INPUT_NORM_TOL = 1e-6
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
ZERO_EIG_CLIP = 1e-12

_dim_cap = contextvars.ContextVar("qredist_dim_cap", default=DEFAULT_DIM_CAP)


def get_dim_cap() -> int:
    return _dim_cap.get()


@contextlib.contextmanager
def dim_cap(cap: int):
    """Temporarily change the global dimension cap (context-local)."""
    if cap < 1:
        raise ValueError("dimension cap must be positive")
    token = _dim_cap.set(int(cap))
    try:
        yield cap
    finally:
        _dim_cap.reset(token)


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise InvalidStateError(f"subsystem dimensions must be positive, got {dims}")
    total = prod(dims)
    cap = get_dim_cap()
    if total > cap:
        raise DimensionCapError(
            f"state too large: total dimension {total} exceeds cap {cap}"
        )
    return dims


def _check_subsystems(indices: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in indices)))
    for i in out:
        if not 0 <= i < n:
            raise UnknownSubsystemError(f"unknown subsystem {i} (state has {n})")
    return out


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on a tensor-product space.

    Amplitudes are renormalized on construction; inputs whose squared norm
    is off by more than ``1e-6`` are rejected.
    """

    amps: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise InvalidStateError(
                f"{amps.size} amplitudes do not match dims {dims}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > INPUT_NORM_TOL:
            raise InvalidStateError(f"state is not normalized (norm^2 = {norm2:.9g})")
        amps = amps / np.sqrt(norm2)
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amps.size

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def density(self) -> DensityMatrix:
        return _trusted_dm(np.outer(self.amps, self.amps.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = check_dims(self.dims)
        m = np.asarray(self.entries, dtype=complex)
        d = prod(dims)
        if m.shape != (d, d):
            raise InvalidStateError(f"matrix of shape {m.shape} does not match dims {dims}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"density matrix has trace {np.trace(m).real:.12g}")
        if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -NEGATIVE_EIG_TOL:
            raise NotPositiveSemidefiniteError("density matrix is not positive semidefinite")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _trusted_dm(entries: np.ndarray, dims: Sequence[int]) -> DensityMatrix:
    # results of trace-preserving operations on valid inputs skip re-validation
    out = object.__new__(DensityMatrix)
    entries = np.asarray(entries, dtype=complex)
    entries.flags.writeable = False
    object.__setattr__(out, "entries", entries)
    object.__setattr__(out, "dims", tuple(int(d) for d in dims))
    return out


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues of a density matrix."""

    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if abs(sum(self.values) - 1.0) > 1e-9:
            raise InvalidStateError(f"spectrum sums to {sum(self.values):.12g}")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def clip_eigenvalues(values: np.ndarray) -> np.ndarray:
    """Sort descending, reject genuinely negative values, zero the noise."""
    values = np.sort(np.asarray(values, dtype=float))[::-1]
    if values.size and values[-1] < -NEGATIVE_EIG_TOL:
        raise NotPositiveSemidefiniteError(
            f"eigenvalue {values[-1]:.3g} below -{NEGATIVE_EIG_TOL:g}"
        )
    values = np.where(values <= ZERO_EIG_CLIP, 0.0, values)
    return values


def tensor_product(a, b):
    """Kronecker product of two states of the same kind; dims concatenate."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps), check_dims(a.dims + b.dims))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        dims = check_dims(a.dims + b.dims)
        return _trusted_dm(np.kron(a.entries, b.entries), dims)
    raise TypeError("tensor_product needs two StateVectors or two DensityMatrices")


def _reduced_from_vector(state: StateVector, keep: tuple[int, ...]) -> np.ndarray:
    rest = tuple(i for i in range(state.n) if i not in keep)
    dk = prod(state.dims[i] for i in keep)
    m = np.transpose(state.tensor(), keep + rest).reshape(dk, -1)
    return m @ m.conj().T


def partial_trace(rho, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems in ``keep`` (kept in original order).

    Accepts a :class:`DensityMatrix` or a :class:`StateVector`. An empty
    ``keep`` gives the 1x1 matrix holding the trace.
    """
    keep = _check_subsystems(keep, rho.n)
    kdims = tuple(rho.dims[i] for i in keep)
    if isinstance(rho, StateVector):
        return _trusted_dm(_reduced_from_vector(rho, keep), kdims)
    n = rho.n
    t = rho.entries.reshape(rho.dims + rho.dims)
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    red = np.einsum(t, row + col, out)
    d = prod(kdims)
    return _trusted_dm(red.reshape(d, d), kdims)


def eig_spectrum(rho) -> Spectrum:
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return Spectrum(tuple(float(v) for v in clip_eigenvalues(vals)))


def purify(rho: DensityMatrix) -> StateVector:
    """Canonical purification ``sum_i sqrt(l_i) |e_i>|i>``.

    Eigenvectors are taken in descending eigenvalue order, each with its
    largest-magnitude component made real positive, so the output is
    reproducible. The appended reference has dimension ``rank(rho)``.
    """
    m = rho.entries
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    vals = clip_eigenvalues(vals)
    r = max(int(np.count_nonzero(vals > ZERO_EIG_CLIP)), 1)
    vecs = vecs[:, :r]
    pivots = np.argmax(np.abs(vecs), axis=0)
    phases = vecs[pivots, np.arange(r)]
    vecs = vecs * (np.abs(phases) / phases)
    psi = vecs * np.sqrt(vals[:r])
    return StateVector(psi.reshape(-1), rho.dims + (r,))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if tuple(a.dims) != tuple(b.dims):
        raise IncompatibleOperatorsError(f"incompatible operators: dims {a.dims} vs {b.dims}")
    # fixed operand order makes the result exactly symmetric in (a, b)
    if a.entries.tobytes() < b.entries.tobytes():
        a, b = b, a
    diff = a.entries - b.entries
    vals = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    return float(min(max(0.5 * np.sum(np.abs(vals)), 0.0), 1.0))


def random_pure_state(dims: Sequence[int], seed=None) -> StateVector:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    dims = check_dims(dims)
    rng = np.random.default_rng(seed)
    d = prod(dims)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector(z / np.linalg.norm(z), dims)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary from phase-corrected QR of a Ginibre matrix."""
    check_dims((dim,))
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def permute_subsystems(state: StateVector, order: Sequence[int]) -> StateVector:
    """Reorder tensor factors so that new subsystem ``k`` is old ``order[k]``."""
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(state.n)):
        raise UnknownSubsystemError(f"{order} is not a permutation of the subsystems")
    t = np.transpose(state.tensor(), order)
    return StateVector(t.reshape(-1), tuple(state.dims[i] for i in order))
