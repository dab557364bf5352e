"""Pure-NumPy implementation of the plan kernel.

Index arrays for the permutation-style two-qubit ops are memoized per
(dim, op, qubits) since the same plans run millions of times during
training.
"""

from __future__ import annotations

import numpy as np

_OP_FUSED1Q, _OP_CNOT, _OP_CZ, _OP_SWAP, _OP_CSWAP, _OP_CRZ, _OP_CRX = range(7)

_index_cache: dict = {}


def _indices(dim: int, kind: int, a: int, b: int, c: int):
    key = (dim, kind, a, b, c)
    hit = _index_cache.get(key)
    if hit is not None:
        return hit
    i = np.arange(dim)
    bit = lambda q: (i >> q) & 1  # noqa: E731
    if kind == _OP_CNOT:
        src = i[(bit(a) == 1) & (bit(b) == 0)]
        hit = (src, src | (1 << b))
    elif kind == _OP_CZ:
        hit = (i[(bit(a) == 1) & (bit(b) == 1)],)
    elif kind == _OP_SWAP:
        src = i[(bit(a) == 1) & (bit(b) == 0)]
        hit = (src, src ^ ((1 << a) | (1 << b)))
    elif kind == _OP_CSWAP:
        src = i[(bit(a) == 1) & (bit(b) == 1) & (bit(c) == 0)]
        hit = (src, src ^ ((1 << b) | (1 << c)))
    elif kind == _OP_CRZ:
        hit = (i[(bit(a) == 1) & (bit(b) == 0)], i[(bit(a) == 1) & (bit(b) == 1)])
    elif kind == _OP_CRX:
        src = i[(bit(a) == 1) & (bit(b) == 0)]
        hit = (src, src | (1 << b))
    else:  # pragma: no cover
        raise AssertionError(kind)
    _index_cache[key] = hit
    return hit


def _apply_fused(states: np.ndarray, q: int, m: np.ndarray) -> None:
    batch, dim = states.shape
    v = states.reshape(batch, dim >> (q + 1), 2, 1 << q)
    s0 = v[:, :, 0, :].copy()
    s1 = v[:, :, 1, :]
    v[:, :, 0, :] = m[0, 0] * s0 + m[0, 1] * s1
    v[:, :, 1, :] = m[1, 0] * s0 + m[1, 1] * s1


def run_plan(num_qubits, kinds, qa, qb, qc, aux, mats, angles, states) -> None:
    dim = states.shape[1]
    for op in range(len(kinds)):
        kind = int(kinds[op])
        a, b, c = int(qa[op]), int(qb[op]), int(qc[op])
        if kind == _OP_FUSED1Q:
            _apply_fused(states, a, mats[int(aux[op])])
        elif kind in (_OP_CNOT, _OP_SWAP, _OP_CSWAP):
            src, dst = _indices(dim, kind, a, b, c)
            tmp = states[:, src].copy()
            states[:, src] = states[:, dst]
            states[:, dst] = tmp
        elif kind == _OP_CZ:
            (idx,) = _indices(dim, kind, a, b, c)
            states[:, idx] *= -1.0
        elif kind == _OP_CRZ:
            lo, hi = _indices(dim, kind, a, b, c)
            half = 0.5 * float(angles[int(aux[op])])
            states[:, lo] *= complex(np.cos(half), -np.sin(half))
            states[:, hi] *= complex(np.cos(half), np.sin(half))
        elif kind == _OP_CRX:
            src, dst = _indices(dim, kind, a, b, c)
            half = 0.5 * float(angles[int(aux[op])])
            ch, sh = np.cos(half), np.sin(half)
            t0 = states[:, src].copy()
            t1 = states[:, dst]
            states[:, src] = ch * t0 - 1j * sh * t1
            states[:, dst] = -1j * sh * t0 + ch * t1
        else:  # pragma: no cover
            raise AssertionError(kind)
