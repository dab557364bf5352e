"""Builders for the parameterized compression circuits.

Three scalable families plus a 3-qubit device-oriented variant of the first.
Resource-count contracts per layer count L and qubit count n:

    circuit1       params n(L+1)   two-qubit nL       depth (n+1)L + 1
    circuit2       params 4(n-1)L  two-qubit (n-1)L   depth 6L
    circuit3       params 3nL      two-qubit nL       depth (n+3)L
    circuit1-dev3q params 3(L+1)   (n fixed at 3; linear entangler chain)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, GateKind, GateOp

FAMILIES = ("circuit1", "circuit2", "circuit3", "circuit1-dev3q")


@dataclass(frozen=True)
class AnsatzSpec:
    family: str
    num_qubits: int
    layers: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.num_qubits < 2:
            raise ValueError("need at least 2 qubits")
        if self.layers < 1:
            raise ValueError("need at least 1 layer")
        if self.family == "circuit1-dev3q" and self.num_qubits != 3:
            raise ValueError("circuit1-dev3q is defined for exactly 3 qubits")


def _rot(kind: GateKind, qubit: int, slot: int) -> GateOp:
    return GateOp(kind, (qubit,), param_slot=slot)


def _cnot(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CNOT, (target,), control=control)


def _build_circuit1(n: int, layers: int, axis: GateKind = GateKind.RY) -> Circuit:
    """One rotation per qubit then a ring of CNOTs, with a closing rotation layer."""
    ops = []
    slot = 0
    for _ in range(layers):
        for q in range(n):
            ops.append(_rot(axis, q, slot))
            slot += 1
        for q in range(n):
            ops.append(_cnot(q, (q + 1) % n))
    for q in range(n):
        ops.append(_rot(axis, q, slot))
        slot += 1
    return Circuit(n, tuple(ops), slot)


def _build_circuit2(n: int, layers: int) -> Circuit:
    """Paired rotation/entangler blocks: full-width RY+RZ with CNOTs on even
    pairs, then RY+RZ on the interior qubits with CNOTs on odd pairs.

    The two-qubit layout degenerates at n=2, where a serial single-qubit
    chain keeps the per-layer costs at 4 parameters, 1 CNOT, depth 6.
    """
    ops = []
    slot = 0
    if n == 2:
        for _ in range(layers):
            ops.append(_rot(GateKind.RY, 0, slot))
            slot += 1
            ops.append(_rot(GateKind.RZ, 0, slot))
            slot += 1
            ops.append(_cnot(1, 0))
            ops.append(_rot(GateKind.RY, 0, slot))
            slot += 1
            ops.append(_rot(GateKind.RZ, 0, slot))
            slot += 1
            ops.append(GateOp(GateKind.H, (0,)))
        return Circuit(n, tuple(ops), slot)
    for _ in range(layers):
        for q in range(n):
            ops.append(_rot(GateKind.RY, q, slot))
            slot += 1
        for q in range(n):
            ops.append(_rot(GateKind.RZ, q, slot))
            slot += 1
        for a in range(0, n - 1, 2):
            ops.append(_cnot(a + 1, a))
        for q in range(1, n - 1):
            ops.append(_rot(GateKind.RY, q, slot))
            slot += 1
        for q in range(1, n - 1):
            ops.append(_rot(GateKind.RZ, q, slot))
            slot += 1
        for a in range(1, n - 1, 2):
            ops.append(_cnot(a + 1, a))
    return Circuit(n, tuple(ops), slot)


def _build_circuit3(
    n: int,
    layers: int,
    axes: tuple = (GateKind.RX, GateKind.RY, GateKind.RZ),
) -> Circuit:
    """Three full-width rotation sublayers followed by a ring of CNOTs."""
    ops = []
    slot = 0
    for _ in range(layers):
        for axis in axes:
            for q in range(n):
                ops.append(_rot(axis, q, slot))
                slot += 1
        for q in range(n):
            ops.append(_cnot(q, (q + 1) % n))
    return Circuit(n, tuple(ops), slot)


def _build_circuit1_dev3q(layers: int, axis: GateKind = GateKind.RY) -> Circuit:
    """circuit1 reshaped for a linear 3-qubit device: chain entangler, no ring."""
    n = 3
    ops = []
    slot = 0
    for _ in range(layers):
        for q in range(n):
            ops.append(_rot(axis, q, slot))
            slot += 1
        ops.append(_cnot(0, 1))
        ops.append(_cnot(1, 2))
    for q in range(n):
        ops.append(_rot(axis, q, slot))
        slot += 1
    return Circuit(n, tuple(ops), slot)


def build(spec: AnsatzSpec) -> Circuit:
    """Deterministically build the circuit for a family/(n, L) combination."""
    if spec.family == "circuit1":
        return _build_circuit1(spec.num_qubits, spec.layers)
    if spec.family == "circuit2":
        return _build_circuit2(spec.num_qubits, spec.layers)
    if spec.family == "circuit3":
        return _build_circuit3(spec.num_qubits, spec.layers)
    return _build_circuit1_dev3q(spec.layers)


def expected_resources(spec: AnsatzSpec) -> tuple:
    """Closed-form (num_params, two_qubit_gates, depth) for the scalable families."""
    n, L = spec.num_qubits, spec.layers
    if spec.family == "circuit1":
        return n * (L + 1), n * L, (n + 1) * L + 1
    if spec.family == "circuit2":
        return 4 * (n - 1) * L, (n - 1) * L, 6 * L
    if spec.family == "circuit3":
        return 3 * n * L, n * L, (n + 3) * L
    raise ValueError(f"no closed-form resource contract for {spec.family}")


def init_params(circuit: Circuit, seed: int) -> np.ndarray:
    """I.i.d. uniform [0, 2pi) initialization for every parameter slot."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=circuit.num_params)
