"""Quantum-autoencoder image compression toolkit.

Encodes black/white pixel images as signed superposition states, trains
parameterized compression circuits against a swap-test cost with
parameter-shift gradient descent, and scores ansatz families with
expressibility and entangling-capability descriptors.
"""

from .ansatz import AnsatzSpec, build, init_params
from .circuits import Circuit, GateKind, GateOp, adjoint, apply, measure_qubit, resource_count
from .core import (
    DensityMatrix,
    QubitSubset,
    StateVector,
    fidelity,
    partial_trace,
    pure_density,
    purity,
    state_overlap,
)
from .datasets import bars_and_stripes_2x4, encode, framed_4x4_dataset, make_split
from .descriptors import DescriptorConfig, entangling_capability, expressibility, haar_bin_mass
from .kernels import backend_name
from .trainer import CompressionConfig, EvalMode, cost, decompress, evaluate, gradient, train

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "Circuit",
    "CompressionConfig",
    "DensityMatrix",
    "DescriptorConfig",
    "EvalMode",
    "GateKind",
    "GateOp",
    "QubitSubset",
    "StateVector",
    "adjoint",
    "apply",
    "backend_name",
    "bars_and_stripes_2x4",
    "build",
    "cost",
    "decompress",
    "encode",
    "entangling_capability",
    "evaluate",
    "expressibility",
    "fidelity",
    "framed_4x4_dataset",
    "gradient",
    "haar_bin_mass",
    "init_params",
    "make_split",
    "measure_qubit",
    "partial_trace",
    "pure_density",
    "purity",
    "resource_count",
    "state_overlap",
    "train",
    "__version__",
]
