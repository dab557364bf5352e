"""Gate-level circuit IR, exact statevector execution, and resource counters.

Execution compiles a circuit into a flat plan: runs of single-qubit gates on
the same qubit are fused into one 2x2 matrix, and the permutation-like
two-qubit gates (CNOT, CZ, SWAP, CSWAP, CRZ, CRX) are applied as in-place
index updates. The plan runs on a batch of statevectors at once through
either the compiled kernel or the NumPy fallback (see :mod:`qaekit.kernels`).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import kernels
from .core import DensityMatrix, StateVector

SQRT2_INV = 1.0 / np.sqrt(2.0)


class GateKind(str, Enum):
    H = "H"
    X = "X"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    CZ = "CZ"
    CRZ = "CRZ"
    CRX = "CRX"
    SWAP = "SWAP"
    CSWAP = "CSWAP"


PARAMETERIZED_KINDS = {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CRZ, GateKind.CRX}
TWO_QUBIT_KINDS = {
    GateKind.CNOT,
    GateKind.CZ,
    GateKind.CRZ,
    GateKind.CRX,
    GateKind.SWAP,
    GateKind.CSWAP,
}
SINGLE_QUBIT_KINDS = {GateKind.H, GateKind.X, GateKind.RX, GateKind.RY, GateKind.RZ}
_TARGET_COUNT = {GateKind.SWAP: 2, GateKind.CSWAP: 2}
_CONTROLLED = {GateKind.CNOT, GateKind.CZ, GateKind.CRZ, GateKind.CRX, GateKind.CSWAP}


@dataclass(frozen=True)
class GateOp:
    """One gate: kind, target qubit(s), optional control, optional parameter.

    ``neg`` flips the sign of the bound rotation angle; adjoints use it so
    parameter slots stay shared with the forward circuit.
    """

    kind: GateKind
    targets: tuple
    control: int | None = None
    param_slot: int | None = None
    neg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        want = _TARGET_COUNT.get(self.kind, 1)
        if len(self.targets) != want:
            raise ValueError(f"{self.kind.value} takes {want} target(s), got {self.targets}")
        if (self.control is not None) != (self.kind in _CONTROLLED):
            raise ValueError(f"{self.kind.value}: control qubit mismatch")
        if self.control is not None and self.control in self.targets:
            raise ValueError(f"control {self.control} overlaps targets {self.targets}")
        if (self.param_slot is not None) != (self.kind in PARAMETERIZED_KINDS):
            raise ValueError(f"{self.kind.value}: parameter slot mismatch")

    @property
    def qubits(self) -> tuple:
        return self.targets if self.control is None else (self.control,) + self.targets


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``num_qubits`` qubits with ``num_params`` angles."""

    num_qubits: int
    ops: tuple
    num_params: int

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        seen_slots = set()
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit {q} out of range in {op}")
            if op.param_slot is not None:
                if not 0 <= op.param_slot < self.num_params:
                    raise ValueError(f"param slot {op.param_slot} out of range")
                if op.param_slot in seen_slots:
                    raise ValueError(f"param slot {op.param_slot} used more than once")
                seen_slots.add(op.param_slot)


@dataclass(frozen=True)
class ResourceCount:
    num_params: int
    two_qubit_gates: int
    depth: int


def resource_count(circuit: Circuit) -> ResourceCount:
    """Parameter count, two-qubit gate count, and layered depth.

    Depth uses greedy per-qubit layering: a gate's layer is one past the
    deepest layer already occupied on any of its qubits.
    """
    layer = [0] * circuit.num_qubits
    depth = 0
    two_q = 0
    for op in circuit.ops:
        if op.kind in TWO_QUBIT_KINDS:
            two_q += 1
        lvl = 1 + max(layer[q] for q in op.qubits)
        for q in op.qubits:
            layer[q] = lvl
        depth = max(depth, lvl)
    return ResourceCount(circuit.num_params, two_q, depth)


def adjoint(circuit: Circuit) -> Circuit:
    """Inverse circuit: reversed gate order, rotation angles sign-flipped.

    Parameter slots are preserved, so the adjoint binds the same theta
    vector as the forward circuit.
    """
    inv = []
    for op in reversed(circuit.ops):
        if op.kind in PARAMETERIZED_KINDS:
            inv.append(replace(op, neg=not op.neg))
        else:
            inv.append(op)  # H, X, CNOT, CZ, SWAP, CSWAP are self-inverse
    return Circuit(circuit.num_qubits, tuple(inv), circuit.num_params)


# ---------------------------------------------------------------------------
# Execution plan: fused single-qubit groups + permutation-style two-qubit ops.
# ---------------------------------------------------------------------------

# Matrix pool rows 0..2 are fixed; rotations are appended per plan.
_POOL_FIXED = np.array(
    [
        [[1, 0], [0, 1]],
        [[SQRT2_INV, SQRT2_INV], [SQRT2_INV, -SQRT2_INV]],
        [[0, 1], [1, 0]],
    ],
    dtype=np.complex128,
)
_POOL_I, _POOL_H, _POOL_X = 0, 1, 2
_ROT_CODE = {GateKind.RX: 0, GateKind.RY: 1, GateKind.RZ: 2}


@dataclass
class ExecPlan:
    num_qubits: int
    kinds: np.ndarray  # kernel op codes, see kernels module
    qa: np.ndarray
    qb: np.ndarray
    qc: np.ndarray
    aux: np.ndarray  # fused-matrix row or angle row, per op
    member_idx: np.ndarray  # (n_fused, max_run) rows into the matrix pool
    rot_kinds: np.ndarray  # (n_rot,) codes from _ROT_CODE
    rot_slots: np.ndarray
    rot_signs: np.ndarray
    ang_slots: np.ndarray  # (n_ang,) slots for CRZ/CRX ops
    ang_signs: np.ndarray
    num_params: int
    slot_fused_rows: dict = field(default_factory=dict)
    slot_ang_rows: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def _pool(self, theta: np.ndarray) -> np.ndarray:
        pool = np.empty((3 + len(self.rot_slots), 2, 2), dtype=np.complex128)
        pool[:3] = _POOL_FIXED
        if len(self.rot_slots):
            half = 0.5 * theta[self.rot_slots] * self.rot_signs
            c, s = np.cos(half), np.sin(half)
            rots = pool[3:]
            rx = self.rot_kinds == 0
            ry = self.rot_kinds == 1
            rz = self.rot_kinds == 2
            rots[rx, 0, 0] = c[rx]
            rots[rx, 0, 1] = -1j * s[rx]
            rots[rx, 1, 0] = -1j * s[rx]
            rots[rx, 1, 1] = c[rx]
            rots[ry, 0, 0] = c[ry]
            rots[ry, 0, 1] = -s[ry]
            rots[ry, 1, 0] = s[ry]
            rots[ry, 1, 1] = c[ry]
            rots[rz, 0, 0] = np.exp(-1j * half[rz])
            rots[rz, 0, 1] = 0.0
            rots[rz, 1, 0] = 0.0
            rots[rz, 1, 1] = np.exp(1j * half[rz])
        return pool

    def bind(self, theta) -> tuple:
        """Fold theta into per-op data: fused 2x2 matrices and raw angles."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.num_params,):
            raise ValueError(f"expected {self.num_params} parameters, got {theta.shape}")
        pool = self._pool(theta)
        if self.member_idx.shape[0]:
            mats = pool[self.member_idx[:, 0]]
            for k in range(1, self.member_idx.shape[1]):
                mats = pool[self.member_idx[:, k]] @ mats
            mats = np.ascontiguousarray(mats)
        else:
            mats = np.empty((0, 2, 2), dtype=np.complex128)
        angles = (
            theta[self.ang_slots] * self.ang_signs
            if len(self.ang_slots)
            else np.empty(0, dtype=np.float64)
        )
        return mats, np.ascontiguousarray(angles)

    def _member_matrix(self, pool_row: int, theta) -> np.ndarray:
        if pool_row < 3:
            return _POOL_FIXED[pool_row]
        r = pool_row - 3
        half = 0.5 * theta[self.rot_slots[r]] * self.rot_signs[r]
        c, s = np.cos(half), np.sin(half)
        kind = self.rot_kinds[r]
        if kind == 0:  # RX
            return np.array([[c, -1j * s], [-1j * s, c]])
        if kind == 1:  # RY
            return np.array([[c, -s], [s, c]], dtype=np.complex128)
        return np.array([[c - 1j * s, 0.0], [0.0, c + 1j * s]])  # RZ

    def rebind_slot(self, mats, angles, theta, slot) -> tuple:
        """Copy bound data, recomputing only what depends on one slot.

        Used by the parameter-shift gradient, where consecutive evaluations
        differ in a single angle.
        """
        mats = mats.copy()
        angles = angles.copy()
        for r in self.slot_fused_rows.get(slot, ()):
            m = self._member_matrix(self.member_idx[r, 0], theta)
            for k in range(1, self.member_idx.shape[1]):
                row = self.member_idx[r, k]
                if row != _POOL_I:
                    m = self._member_matrix(row, theta) @ m
            mats[r] = m
        for r in self.slot_ang_rows.get(slot, ()):
            angles[r] = theta[slot] * self.ang_signs[r]
        return mats, angles

    def run_bound(self, mats, angles, states: np.ndarray) -> None:
        """Apply the plan in place to ``states`` of shape (batch, 2**n)."""
        kernels.run_plan(
            self.num_qubits, self.kinds, self.qa, self.qb, self.qc, self.aux, mats, angles, states
        )

    def run(self, theta, states: np.ndarray) -> None:
        mats, angles = self.bind(theta)
        self.run_bound(mats, angles, states)

    def gradient_workspace(self, theta) -> "GradientWorkspace":
        return GradientWorkspace(self, theta)


def _mul2(a, b):
    """Flat 2x2 complex product (row-major tuples)."""
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


_ID2 = (1.0 + 0j, 0j, 0j, 1.0 + 0j)


def _rot2(kind: int, half: float):
    c, s = np.cos(half), np.sin(half)
    if kind == 0:  # RX
        return (c + 0j, -1j * s, -1j * s, c + 0j)
    if kind == 1:  # RY
        return (c + 0j, -s + 0j, s + 0j, c + 0j)
    return (complex(c, -s), 0j, 0j, complex(c, s))  # RZ


class GradientWorkspace:
    """Repeated single-slot shifts of one bound plan, without reallocation.

    The parameter-shift gradient evaluates the circuit 2 * num_params times
    with exactly one angle changed each time. Every slot sits in exactly one
    gate, so each shift touches one fused matrix (or one raw angle): the
    workspace caches the 2x2 products on either side of the shifted rotation
    and patches the bound matrix in place around each run.
    """

    def __init__(self, plan: ExecPlan, theta):
        self.plan = plan
        self.theta = np.asarray(theta, dtype=np.float64)
        pool = plan._pool(self.theta)
        self.mats, self.angles = plan.bind(self.theta)
        self.slot_info = {}
        for slot in range(plan.num_params):
            rows = plan.slot_fused_rows.get(slot, ())
            if rows:
                (row,) = rows
                members = plan.member_idx[row]
                pos = next(
                    k
                    for k, m in enumerate(members)
                    if m >= 3 and plan.rot_slots[m - 3] == slot
                )
                before = _ID2
                for k in range(pos):
                    before = _mul2(tuple(pool[members[k]].ravel()), before)
                after = _ID2
                for k in range(pos + 1, len(members)):
                    after = _mul2(tuple(pool[members[k]].ravel()), after)
                r = members[pos] - 3
                self.slot_info[slot] = (
                    "fused",
                    row,
                    before,
                    after,
                    int(plan.rot_kinds[r]),
                    float(plan.rot_signs[r]),
                )
            elif slot in plan.slot_ang_rows:
                (row,) = plan.slot_ang_rows[slot]
                self.slot_info[slot] = ("angle", row, None, None, None, float(plan.ang_signs[row]))
            else:
                # slot not referenced by any gate: shifts are no-ops
                self.slot_info[slot] = ("none", 0, None, None, None, 0.0)

    def run_shifted(self, slot: int, delta: float, states: np.ndarray) -> None:
        """Run the plan with theta[slot] shifted by delta, in place on states."""
        info = self.slot_info[slot]
        if info[0] == "none":
            self.plan.run_bound(self.mats, self.angles, states)
        elif info[0] == "fused":
            _, row, before, after, kind, sign = info
            half = 0.5 * sign * (self.theta[slot] + delta)
            m = _mul2(after, _mul2(_rot2(kind, half), before))
            mats = self.mats
            saved = (mats[row, 0, 0], mats[row, 0, 1], mats[row, 1, 0], mats[row, 1, 1])
            mats[row, 0, 0], mats[row, 0, 1], mats[row, 1, 0], mats[row, 1, 1] = m
            try:
                self.plan.run_bound(mats, self.angles, states)
            finally:
                mats[row, 0, 0], mats[row, 0, 1], mats[row, 1, 0], mats[row, 1, 1] = saved
        else:
            _, row, _, _, _, sign = info
            saved_angle = self.angles[row]
            self.angles[row] = sign * (self.theta[slot] + delta)
            try:
                self.plan.run_bound(self.mats, self.angles, states)
            finally:
                self.angles[row] = saved_angle


def compile_plan(circuit: Circuit) -> ExecPlan:
    kinds, qa, qb, qc, aux = [], [], [], [], []
    member_rows = []
    rot_kinds, rot_slots, rot_signs = [], [], []
    ang_slots, ang_signs = [], []
    slot_fused_rows: dict = {}
    slot_ang_rows: dict = {}
    pending: dict = {}  # qubit -> (list of pool rows, set of slots)

    def flush(qubits):
        for q in sorted(qubits):
            if q not in pending:
                continue
            members, slots = pending.pop(q)
            row = len(member_rows)
            member_rows.append(members)
            for s in slots:
                slot_fused_rows.setdefault(s, []).append(row)
            kinds.append(kernels.OP_FUSED1Q)
            qa.append(q)
            qb.append(0)
            qc.append(0)
            aux.append(row)

    for op in circuit.ops:
        if op.kind in SINGLE_QUBIT_KINDS:
            q = op.targets[0]
            members, slots = pending.setdefault(q, ([], []))
            if op.kind == GateKind.H:
                members.append(_POOL_H)
            elif op.kind == GateKind.X:
                members.append(_POOL_X)
            else:
                members.append(3 + len(rot_kinds))
                rot_kinds.append(_ROT_CODE[op.kind])
                rot_slots.append(op.param_slot)
                rot_signs.append(-1.0 if op.neg else 1.0)
                slots.append(op.param_slot)
        else:
            flush(op.qubits)
            if op.kind == GateKind.CNOT:
                kinds.append(kernels.OP_CNOT)
                qa.append(op.control)
                qb.append(op.targets[0])
                qc.append(0)
                aux.append(0)
            elif op.kind == GateKind.CZ:
                kinds.append(kernels.OP_CZ)
                qa.append(op.control)
                qb.append(op.targets[0])
                qc.append(0)
                aux.append(0)
            elif op.kind == GateKind.SWAP:
                kinds.append(kernels.OP_SWAP)
                qa.append(op.targets[0])
                qb.append(op.targets[1])
                qc.append(0)
                aux.append(0)
            elif op.kind == GateKind.CSWAP:
                kinds.append(kernels.OP_CSWAP)
                qa.append(op.control)
                qb.append(op.targets[0])
                qc.append(op.targets[1])
                aux.append(0)
            elif op.kind in (GateKind.CRZ, GateKind.CRX):
                row = len(ang_slots)
                ang_slots.append(op.param_slot)
                ang_signs.append(-1.0 if op.neg else 1.0)
                slot_ang_rows.setdefault(op.param_slot, []).append(row)
                kinds.append(kernels.OP_CRZ if op.kind == GateKind.CRZ else kernels.OP_CRX)
                qa.append(op.control)
                qb.append(op.targets[0])
                qc.append(0)
                aux.append(row)
            else:  # pragma: no cover - exhaustive over GateKind
                raise AssertionError(op.kind)
    flush(list(pending.keys()))

    max_run = max((len(m) for m in member_rows), default=1)
    member_idx = np.full((len(member_rows), max_run), _POOL_I, dtype=np.int32)
    for r, members in enumerate(member_rows):
        member_idx[r, : len(members)] = members

    return ExecPlan(
        num_qubits=circuit.num_qubits,
        kinds=np.asarray(kinds, dtype=np.int32),
        qa=np.asarray(qa, dtype=np.int32),
        qb=np.asarray(qb, dtype=np.int32),
        qc=np.asarray(qc, dtype=np.int32),
        aux=np.asarray(aux, dtype=np.int32),
        member_idx=member_idx,
        rot_kinds=np.asarray(rot_kinds, dtype=np.int8),
        rot_slots=np.asarray(rot_slots, dtype=np.int64),
        rot_signs=np.asarray(rot_signs, dtype=np.float64),
        ang_slots=np.asarray(ang_slots, dtype=np.int64),
        ang_signs=np.asarray(ang_signs, dtype=np.float64),
        num_params=circuit.num_params,
        slot_fused_rows={k: tuple(v) for k, v in slot_fused_rows.items()},
        slot_ang_rows={k: tuple(v) for k, v in slot_ang_rows.items()},
    )


def apply(circuit: Circuit, theta, input_state: StateVector) -> StateVector:
    """Run the circuit on a pure state and return the output state."""
    if input_state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"state has {input_state.num_qubits} qubits, circuit {circuit.num_qubits}"
        )
    plan = compile_plan(circuit)
    buf = input_state.amplitudes[None, :].copy()
    plan.run(theta, buf)
    return StateVector(circuit.num_qubits, buf[0])


def circuit_unitary(circuit: Circuit, theta) -> np.ndarray:
    """Full 2**n x 2**n unitary, built by running the plan on every basis state."""
    plan = compile_plan(circuit)
    basis = np.eye(plan.dim, dtype=np.complex128)
    plan.run(theta, basis)
    return basis.T.copy()  # row k of the batch is U|k>, so columns of U are rows here


def apply_to_density(circuit: Circuit, theta, rho: DensityMatrix) -> DensityMatrix:
    """Conjugate a density matrix: U rho U^dagger."""
    if rho.num_qubits != circuit.num_qubits:
        raise ValueError(f"density on {rho.num_qubits} qubits, circuit {circuit.num_qubits}")
    u = circuit_unitary(circuit, theta)
    return DensityMatrix(circuit.num_qubits, u @ rho.entries @ u.conj().T)


def measure_qubit(state: StateVector, qubit: int, shots: int, seed: int) -> tuple:
    """Sample one qubit ``shots`` times from the exact marginal distribution.

    Returns (count0, count1); deterministic for a fixed seed.
    """
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit {qubit} out of range")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.abs(state.amplitudes) ** 2
    idx = np.arange(state.dim)
    p1 = float(np.sum(probs[(idx >> qubit) & 1 == 1]))
    p1 = min(max(p1, 0.0), 1.0)
    rng = np.random.default_rng(seed)
    count1 = int(rng.binomial(shots, p1))
    return shots - count1, count1


# ---------------------------------------------------------------------------
# Text serialization: header line, then one gate per line.
# ---------------------------------------------------------------------------


def to_text(circuit: Circuit) -> str:
    """Line format: ``KIND q0[,q1[,q2]] [slot=k] [neg]``; control listed first."""
    lines = [f"qubits={circuit.num_qubits} params={circuit.num_params}"]
    for op in circuit.ops:
        parts = [op.kind.value, ",".join(str(q) for q in op.qubits)]
        if op.param_slot is not None:
            parts.append(f"slot={op.param_slot}")
        if op.neg:
            parts.append("neg")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty circuit text")
    header = lines[0].split()
    try:
        num_qubits = int(header[0].removeprefix("qubits="))
        num_params = int(header[1].removeprefix("params="))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad header line: {lines[0]!r}") from exc
    ops = []
    for ln in lines[1:]:
        fields = ln.split()
        kind = GateKind(fields[0])
        qubits = tuple(int(q) for q in fields[1].split(","))
        slot = None
        neg = False
        for f in fields[2:]:
            if f.startswith("slot="):
                slot = int(f.removeprefix("slot="))
            elif f == "neg":
                neg = True
            else:
                raise ValueError(f"bad gate field {f!r} in line {ln!r}")
        if kind in _CONTROLLED:
            ops.append(GateOp(kind, qubits[1:], control=qubits[0], param_slot=slot, neg=neg))
        else:
            ops.append(GateOp(kind, qubits, param_slot=slot, neg=neg))
    return Circuit(num_qubits, tuple(ops), num_params)
