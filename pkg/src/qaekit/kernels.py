"""Kernel backend selection for plan execution.

The compiled Cython kernel is used when its extension module built; the
pure-NumPy fallback is behaviorally identical (covered by the backend-parity
tests). Set ``QAEKIT_PURE_PYTHON=1`` to force the fallback, e.g. for the
kernel benchmark.
"""

from __future__ import annotations

import os

# Plan op codes, shared with both backends. The Cython source hardcodes the
# same numbering; change them together.
OP_FUSED1Q = 0  # qa = qubit, aux = row into the fused-matrix array
OP_CNOT = 1  # qa = control, qb = target
OP_CZ = 2  # qa, qb
OP_SWAP = 3  # qa, qb
OP_CSWAP = 4  # qa = control, qb/qc = targets
OP_CRZ = 5  # qa = control, qb = target, aux = row into the angle array
OP_CRX = 6

if os.environ.get("QAEKIT_PURE_PYTHON"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"


def run_plan(num_qubits, kinds, qa, qb, qc, aux, mats, angles, states) -> None:
    """Apply a compiled plan in place to ``states`` of shape (batch, 2**n)."""
    _impl.run_plan(num_qubits, kinds, qa, qb, qc, aux, mats, angles, states)


def backend_name() -> str:
    return BACKEND
