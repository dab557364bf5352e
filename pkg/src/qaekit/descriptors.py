"""Circuit descriptors: expressibility and entangling capability.

Expressibility is the KL divergence (log base 2) between the sampled
state-fidelity histogram of a parameterized circuit and the analytic
fidelity distribution of Haar-random pure states. Entangling capability is
the sampled mean of the Meyer-Wallach measure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, compile_plan


@dataclass(frozen=True)
class DescriptorConfig:
    num_samples: int = 5000
    num_bins: int = 75
    seed: int = 0

    def __post_init__(self):
        if self.num_samples < 100:
            raise ValueError("num_samples must be >= 100")
        if self.num_bins < 10:
            raise ValueError("num_bins must be >= 10")


@dataclass(frozen=True)
class DescriptorReport:
    family: str
    num_qubits: int
    layers: int
    expressibility: float
    expressibility_nats: float
    entangling_capability: float
    expressibility_samples: int
    entangling_samples: int
    num_bins: int
    seed: int

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2)


def haar_bin_mass(bin_low: float, bin_high: float, dimension: int) -> float:
    """Probability that a Haar fidelity sample lands in [bin_low, bin_high].

    The fidelity density for dimension N is (N-1)(1-F)^(N-2), whose integral
    over the bin is (1-low)^(N-1) - (1-high)^(N-1).
    """
    if not 0.0 <= bin_low < bin_high <= 1.0:
        raise ValueError(f"invalid fidelity interval [{bin_low}, {bin_high}]")
    n = dimension
    return float((1.0 - bin_low) ** (n - 1) - (1.0 - bin_high) ** (n - 1))


def _sample_states(circuit: Circuit, thetas: np.ndarray) -> np.ndarray:
    """Output states from the all-zeros input, one row per theta draw."""
    plan = compile_plan(circuit)
    states = np.zeros((thetas.shape[0], plan.dim), dtype=np.complex128)
    states[:, 0] = 1.0
    for i in range(thetas.shape[0]):
        plan.run(thetas[i], states[i : i + 1])
    return states


def fidelity_samples(circuit: Circuit, config: DescriptorConfig) -> np.ndarray:
    """|<psi_theta|psi_phi>|^2 for i.i.d. uniform [0, 2pi) parameter pairs."""
    rng = np.random.default_rng(config.seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=(2 * config.num_samples, circuit.num_params))
    states = _sample_states(circuit, thetas)
    a, b = states[0::2], states[1::2]
    return np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2


def expressibility_from_fidelities(
    fids: np.ndarray, num_qubits: int, num_bins: int, base: float = 2.0
) -> float:
    """D_KL(sampled histogram || Haar bin masses), zero-count bins contribute 0."""
    counts, edges = np.histogram(fids, bins=num_bins, range=(0.0, 1.0))
    p = counts / counts.sum()
    q = np.array(
        [haar_bin_mass(edges[i], edges[i + 1], 1 << num_qubits) for i in range(num_bins)]
    )
    nz = p > 0
    return float(np.sum(p[nz] * np.log(p[nz] / q[nz])) / np.log(base))


def expressibility(circuit: Circuit, config: DescriptorConfig) -> float:
    fids = fidelity_samples(circuit, config)
    return expressibility_from_fidelities(fids, circuit.num_qubits, config.num_bins)


def _single_qubit_purities(states: np.ndarray, num_qubits: int) -> np.ndarray:
    """Tr[rho_k^2] for every qubit k; shape (samples, num_qubits)."""
    s = states.shape[0]
    out = np.empty((s, num_qubits))
    for k in range(num_qubits):
        v = states.reshape(s, states.shape[1] >> (k + 1), 2, 1 << k)
        rho = np.einsum("saib,sajb->sij", v, v.conj())
        out[:, k] = np.sum(np.abs(rho) ** 2, axis=(1, 2))
    return out


def entangling_capability(circuit: Circuit, config: DescriptorConfig) -> float:
    """Mean Meyer-Wallach measure Q = (2/n) sum_k (1 - Tr[rho_k^2]) over draws."""
    if circuit.num_qubits < 2:
        raise ValueError("entangling capability needs at least 2 qubits")
    rng = np.random.default_rng(config.seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=(config.num_samples, circuit.num_params))
    states = _sample_states(circuit, thetas)
    purities = _single_qubit_purities(states, circuit.num_qubits)
    q = 2.0 * (1.0 - purities.mean(axis=1))
    return float(q.mean())


def histogram_rows(circuit: Circuit, config: DescriptorConfig) -> list:
    """Rows of (bin_low, bin_high, count, haar_mass) for the fidelity histogram."""
    fids = fidelity_samples(circuit, config)
    counts, edges = np.histogram(fids, bins=config.num_bins, range=(0.0, 1.0))
    dim = 1 << circuit.num_qubits
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i]), haar_bin_mass(edges[i], edges[i + 1], dim))
        for i in range(config.num_bins)
    ]
