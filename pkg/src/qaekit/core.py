"""Dense complex linear algebra for small multi-qubit systems.

Bit convention used everywhere in this package: qubit 0 is the least
significant bit of the basis-state index, so the basis state
|b_{n-1} ... b_1 b_0> lives at index sum_q b_q * 2**q.

All operations are pure functions; the value types are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from string import ascii_letters

import numpy as np

NORM_ATOL = 1e-10
HERMITIAN_ATOL = 1e-10
# Eigenvalues of a valid density matrix may dip slightly below zero from
# round-off; anything below this floor is treated as corrupt input.
EIGENVALUE_FLOOR = -1e-9


@dataclass(frozen=True)
class StateVector:
    """Pure state of ``num_qubits`` qubits as 2**n complex amplitudes."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.num_qubits}")
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for "
                f"{self.num_qubits} qubits, got shape {amps.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)

    def require_normalized(self, atol: float = NORM_ATOL) -> "StateVector":
        if self.norm_error() > atol:
            raise ValueError(f"state not normalized (error {self.norm_error():.3e})")
        return self


def zero_state(num_qubits: int) -> StateVector:
    """|0...0> on ``num_qubits`` qubits."""
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def state_from_amplitudes(amplitudes) -> StateVector:
    amps = np.asarray(amplitudes, dtype=np.complex128)
    n = int(amps.shape[0]).bit_length() - 1
    if amps.shape[0] != 1 << n:
        raise ValueError(f"amplitude count {amps.shape[0]} is not a power of two")
    return StateVector(n, amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state of ``num_qubits`` qubits as a 2**n x 2**n matrix."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        d = 1 << self.num_qubits
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got shape {m.shape}")

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def validate(self, atol: float = HERMITIAN_ATOL) -> "DensityMatrix":
        """Check Hermiticity, unit trace, and positive semidefiniteness."""
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > atol or abs(np.trace(m).imag) > atol:
            raise ValueError(f"density matrix trace is {np.trace(m)}, expected 1")
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < EIGENVALUE_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {lo:.3e} < {EIGENVALUE_FLOOR}")
        return self

    def to_json_obj(self) -> list:
        """Nested row-major lists of [re, im] pairs."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.entries]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @staticmethod
    def from_json_obj(obj) -> "DensityMatrix":
        m = np.array([[complex(re, im) for re, im in row] for row in obj])
        n = int(m.shape[0]).bit_length() - 1
        return DensityMatrix(n, m)


@dataclass(frozen=True)
class QubitSubset:
    """Strictly increasing, non-empty set of qubit positions."""

    indices: tuple = field(default=())

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValueError("qubit subset must be non-empty")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate qubit indices in {idx}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, q) -> bool:
        return q in self.indices

    def check_range(self, num_qubits: int) -> "QubitSubset":
        for q in self.indices:
            if not 0 <= q < num_qubits:
                raise IndexError(f"qubit {q} out of range for {num_qubits} qubits")
        return self


def pure_density(state: StateVector) -> DensityMatrix:
    """Outer product |s><s| of a normalized state."""
    state.require_normalized()
    a = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(a, a.conj()))


def partial_trace(rho: DensityMatrix, traced_out: QubitSubset) -> DensityMatrix:
    """Trace out the given qubits, keeping the rest in their original order.

    The lowest-index kept qubit becomes qubit 0 of the result.
    """
    n = rho.num_qubits
    traced_out.check_range(n)
    traced = set(traced_out)
    keep = [q for q in range(n) if q not in traced]
    if not keep:
        raise ValueError("cannot trace out every qubit")

    # Reshape to one axis per bit: row axes first (most significant bit is
    # axis 0), then column axes in the same order.
    t = rho.entries.reshape((2,) * (2 * n))
    subs = [""] * (2 * n)
    letters = iter(ascii_letters)
    out_rows, out_cols = [], []
    for q in range(n):
        if q in traced:
            c = next(letters)
            subs[n - 1 - q] = c
            subs[2 * n - 1 - q] = c
        else:
            r, c = next(letters), next(letters)
            subs[n - 1 - q] = r
            subs[2 * n - 1 - q] = c
            out_rows.append(r)
            out_cols.append(c)
    # Most significant kept qubit first in the output axes.
    spec = "".join(subs) + "->" + "".join(reversed(out_rows)) + "".join(reversed(out_cols))
    k = len(keep)
    reduced = np.einsum(spec, t).reshape(1 << k, 1 << k)
    if __debug__:
        assert abs(np.trace(reduced) - np.trace(rho.entries)) < 1e-10, "partial trace lost trace"
        assert np.max(np.abs(reduced - reduced.conj().T)) < 1e-10, "partial trace broke Hermiticity"
    return DensityMatrix(k, reduced)


def purity(rho: DensityMatrix) -> float:
    """Tr[rho^2]; equals sum |rho_ij|^2 for Hermitian rho."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if float(w.min()) < EIGENVALUE_FLOOR:
        raise ValueError(f"matrix eigenvalue {w.min():.3e} below {EIGENVALUE_FLOOR}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1].

    Computed by Hermitian eigendecomposition; eigenvalues in
    [EIGENVALUE_FLOOR, 0) are clamped to zero before square roots.
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    s = _psd_sqrt(rho.entries)
    inner = s @ sigma.entries @ s
    # Symmetrize away round-off before the final eigendecomposition.
    inner = (inner + inner.conj().T) / 2.0
    w = np.linalg.eigvalsh(inner)
    if float(w.min()) < EIGENVALUE_FLOOR:
        raise ValueError(f"inner matrix eigenvalue {w.min():.3e} below {EIGENVALUE_FLOOR}")
    # Zero out eigenvalue noise: sqrt turns O(eps) round-off on exact zeros
    # into O(1e-8) trace error otherwise.
    w[w < 1e-14] = 0.0
    return float(min(1.0, np.sum(np.sqrt(w))))


def fidelity_pure(state: StateVector, sigma: DensityMatrix) -> float:
    """Fast path of :func:`fidelity` for a pure first argument.

    Equals sqrt(<s|sigma|s>) and agrees with the general path when the
    first argument is |s><s|.
    """
    if state.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {state.dim} vs {sigma.dim}")
    a = state.amplitudes
    val = float(np.real(a.conj() @ sigma.entries @ a))
    return float(min(1.0, np.sqrt(max(val, 0.0))))


def state_overlap(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 for two normalized states."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
