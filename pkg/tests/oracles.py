"""Independent reference implementations used to cross-check the package.

These deliberately avoid the execution plan / kernel machinery: unitaries
are assembled from Kronecker products and Pauli identities, and the partial
trace is a nested loop over basis indices.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def rx(t):
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * X


def ry(t):
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * Y


def rz(t):
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * Z


def embed(factors: dict, n: int) -> np.ndarray:
    """Kron product placing 2x2 factors on chosen qubits (qubit 0 = LSB)."""
    m = np.array([[1.0 + 0j]])
    for q in range(n - 1, -1, -1):
        m = np.kron(m, factors.get(q, I2))
    return m


def swap_matrix(a: int, b: int, n: int) -> np.ndarray:
    """SWAP via the Pauli identity (II + XX + YY + ZZ) / 2."""
    return 0.5 * (
        embed({}, n)
        + embed({a: X, b: X}, n)
        + embed({a: Y, b: Y}, n)
        + embed({a: Z, b: Z}, n)
    )


def op_matrix(op, theta, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of one GateOp, built from kron products."""
    kind = op.kind.value
    sign = -1.0 if op.neg else 1.0
    angle = sign * theta[op.param_slot] if op.param_slot is not None else None
    t = op.targets[0]
    if kind == "H":
        return embed({t: H}, n)
    if kind == "X":
        return embed({t: X}, n)
    if kind == "RX":
        return embed({t: rx(angle)}, n)
    if kind == "RY":
        return embed({t: ry(angle)}, n)
    if kind == "RZ":
        return embed({t: rz(angle)}, n)
    c = op.control
    if kind == "CNOT":
        return embed({c: P0}, n) + embed({c: P1, t: X}, n)
    if kind == "CZ":
        return embed({c: P0}, n) + embed({c: P1, t: Z}, n)
    if kind == "CRZ":
        return embed({c: P0}, n) + embed({c: P1, t: rz(angle)}, n)
    if kind == "CRX":
        return embed({c: P0}, n) + embed({c: P1, t: rx(angle)}, n)
    if kind == "SWAP":
        return swap_matrix(op.targets[0], op.targets[1], n)
    if kind == "CSWAP":
        full_swap = swap_matrix(op.targets[0], op.targets[1], n)
        return embed({c: P0}, n) + embed({c: P1}, n) @ full_swap
    raise AssertionError(kind)


def circuit_matrix(circuit, theta) -> np.ndarray:
    """Matrix-product oracle for a whole circuit."""
    theta = np.asarray(theta, dtype=float)
    u = np.eye(1 << circuit.num_qubits, dtype=complex)
    for op in circuit.ops:
        u = op_matrix(op, theta, circuit.num_qubits) @ u
    return u


def partial_trace_loops(entries: np.ndarray, n: int, traced) -> np.ndarray:
    """Sequential index contraction with explicit nested loops."""
    traced = sorted(traced)
    keep = [q for q in range(n) if q not in traced]
    k = len(keep)
    out = np.zeros((1 << k, 1 << k), dtype=complex)
    for i in range(1 << n):
        for j in range(1 << n):
            if any((i >> q) & 1 != (j >> q) & 1 for q in traced):
                continue
            oi = sum((((i >> q) & 1) << a) for a, q in enumerate(keep))
            oj = sum((((j >> q) & 1) << a) for a, q in enumerate(keep))
            out[oi, oj] += entries[i, j]
    return out


def random_state(n: int, rng) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_density(n: int, rng, mix: int = 3) -> np.ndarray:
    """Random mixture of a few random pure states."""
    probs = rng.dirichlet(np.ones(mix))
    m = np.zeros((1 << n, 1 << n), dtype=complex)
    for p in probs:
        v = random_state(n, rng)
        m += p * np.outer(v, v.conj())
    return m


def random_circuit(n: int, rng, n_ops: int = 12):
    """Random circuit over the full gate vocabulary, slots in draw order."""
    from qaekit.circuits import Circuit, GateKind, GateOp

    one_q = [GateKind.H, GateKind.X, GateKind.RX, GateKind.RY, GateKind.RZ]
    two_q = [GateKind.CNOT, GateKind.CZ, GateKind.CRZ, GateKind.CRX, GateKind.SWAP]
    if n >= 3:
        two_q.append(GateKind.CSWAP)
    ops = []
    slot = 0
    for _ in range(n_ops):
        if n == 1 or rng.random() < 0.5:
            kind = one_q[rng.integers(len(one_q))]
            q = int(rng.integers(n))
            if kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
                ops.append(GateOp(kind, (q,), param_slot=slot, neg=bool(rng.random() < 0.2)))
                slot += 1
            else:
                ops.append(GateOp(kind, (q,)))
        else:
            kind = two_q[rng.integers(len(two_q))]
            qs = rng.choice(n, size=3 if kind == GateKind.CSWAP else 2, replace=False)
            if kind == GateKind.CSWAP:
                ops.append(GateOp(kind, (int(qs[1]), int(qs[2])), control=int(qs[0])))
            elif kind == GateKind.SWAP:
                ops.append(GateOp(kind, (int(qs[0]), int(qs[1]))))
            elif kind in (GateKind.CRZ, GateKind.CRX):
                ops.append(GateOp(kind, (int(qs[1]),), control=int(qs[0]), param_slot=slot))
                slot += 1
            else:
                ops.append(GateOp(kind, (int(qs[1]),), control=int(qs[0])))
    return Circuit(n, tuple(ops), slot)
