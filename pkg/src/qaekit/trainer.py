"""Compression training: swap-test cost, parameter-shift descent, evaluation.

The cost of a compression circuit U on an encoded image rho = |phi><phi| is

    J(theta) = 1 - <0...0| Tr_latent(U rho U^dagger) |0...0>,

zero exactly when the trash subsystem is driven to |0>^t. In exact mode the
overlap is the summed probability of all-zero trash bits after applying U;
in shots mode it is estimated from ancilla counts of the swap-test circuit
via overlap = 2*P(0) - 1. Gradients use the parameter-shift rule with fixed
shifts of pi/2.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from .ansatz import AnsatzSpec, build, init_params
from .circuits import Circuit, GateKind, GateOp, adjoint, apply, apply_to_density, compile_plan
from .core import (
    DensityMatrix,
    QubitSubset,
    StateVector,
    fidelity_pure,
    partial_trace,
    pure_density,
)

SHIFT = np.pi / 2.0


@dataclass(frozen=True)
class EvalMode:
    kind: str = "exact"  # "exact" or "shots"
    shots: int = 8192
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("exact", "shots"):
            raise ValueError(f"unknown eval mode {self.kind!r}")
        if self.kind == "shots" and self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass(frozen=True)
class CompressionConfig:
    ansatz: AnsatzSpec
    n_latent: int
    trash: QubitSubset | None = None
    learning_rate: float = 0.05
    epochs: int = 40
    n_iter: int = 10
    batch_size: int = 7
    eval_mode: EvalMode = field(default_factory=EvalMode)

    def __post_init__(self):
        n = self.ansatz.num_qubits
        if not 1 <= self.n_latent < n:
            raise ValueError(f"latent size {self.n_latent} must be in [1, {n})")
        trash = self.trash
        if trash is None:
            # Default: the highest-index qubits are discarded.
            trash = QubitSubset(tuple(range(self.n_latent, n)))
            object.__setattr__(self, "trash", trash)
        trash.check_range(n)
        if len(trash) != n - self.n_latent:
            raise ValueError(f"trash size {len(trash)} != {n - self.n_latent}")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.n_iter < 1 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError("bad optimizer settings")

    @property
    def n_input(self) -> int:
        return self.ansatz.num_qubits

    def circuit(self) -> Circuit:
        return build(self.ansatz)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    mean_loss: float
    theta: np.ndarray
    jobs_executed: int
    wall_clock_seconds: float


@dataclass(frozen=True)
class TrainRun:
    config: CompressionConfig
    records: tuple
    best_theta: np.ndarray
    manifest: dict


def swap_test_circuit(ansatz_circuit: Circuit, trash: QubitSubset) -> Circuit:
    """Compression circuit plus the overlap-measuring tail.

    Register layout on n + t + 1 qubits: data register 0..n-1 (the ansatz),
    reference qubits n..n+t-1 prepared in |0>, ancilla n+t. The ancilla is
    H-conjugated around one controlled swap per (reference, trash) pair; its
    |0> probability encodes the trash/reference overlap.
    """
    n = ansatz_circuit.num_qubits
    trash.check_range(n)
    t = len(trash)
    ancilla = n + t
    ops = list(ansatz_circuit.ops)
    ops.append(GateOp(GateKind.H, (ancilla,)))
    for i, q in enumerate(trash):
        ops.append(GateOp(GateKind.CSWAP, (n + i, q), control=ancilla))
    ops.append(GateOp(GateKind.H, (ancilla,)))
    return Circuit(n + t + 1, tuple(ops), ansatz_circuit.num_params)


def _trash_zero_indices(n: int, trash: QubitSubset) -> np.ndarray:
    idx = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for q in trash:
        mask &= (idx >> q) & 1 == 0
    return idx[mask]


class _Evaluator:
    """Shared machinery for batched cost/gradient evaluation of one circuit."""

    def __init__(self, circuit: Circuit, trash: QubitSubset, eval_mode: EvalMode):
        self.circuit = circuit
        self.eval_mode = eval_mode
        self.plan = compile_plan(circuit)
        self.zero_idx = _trash_zero_indices(circuit.num_qubits, trash)
        if eval_mode.kind == "shots":
            self.swap_plan = compile_plan(swap_test_circuit(circuit, trash))
            self.ancilla = circuit.num_qubits + len(trash)
            anc_idx = np.arange(1 << self.swap_plan.num_qubits)
            self.anc_zero = (anc_idx >> self.ancilla) & 1 == 0
        self.jobs = 0
        # shot-noise bookkeeping: estimates falling outside [0, 1] are
        # clamped but the raw values are kept on record
        self.clamped_events = 0
        self.last_raw_cost = None

    @classmethod
    def for_config(cls, config: CompressionConfig) -> "_Evaluator":
        return cls(config.circuit(), config.trash, config.eval_mode)

    def _trash_zero_overlap(self, work: np.ndarray) -> np.ndarray:
        sub = work[:, self.zero_idx]
        return np.einsum("bi,bi->b", sub, sub.conj()).real

    def exact_costs(self, mats, angles, batch_states: np.ndarray) -> np.ndarray:
        """J per batch row from the trash-zero probability; counts one job each."""
        work = batch_states.copy()
        self.plan.run_bound(mats, angles, work)
        self.jobs += work.shape[0]
        # Round-off on a fully-emptied trash register can push J a few ulp
        # below zero.
        return np.clip(1.0 - self._trash_zero_overlap(work), 0.0, 1.0)

    def shot_cost(self, mats, angles, state: np.ndarray, job_seed) -> float:
        """Swap-test estimate of J from sampled ancilla counts; one job."""
        dim = 1 << self.swap_plan.num_qubits
        work = np.zeros((1, dim), dtype=np.complex128)
        work[0, : state.shape[0]] = state  # reference + ancilla qubits start in |0>
        self.swap_plan.run_bound(mats, angles, work)
        p0 = float(np.sum(np.abs(work[0, self.anc_zero]) ** 2))
        shots = self.eval_mode.shots
        rng = np.random.default_rng(job_seed)
        count0 = shots - int(rng.binomial(shots, min(max(1.0 - p0, 0.0), 1.0)))
        self.jobs += 1
        raw = 1.0 - (2.0 * count0 / shots - 1.0)
        self.last_raw_cost = raw
        if not 0.0 <= raw <= 1.0:
            self.clamped_events += 1
        return min(max(raw, 0.0), 1.0)

    def batch_costs(self, theta, batch_states, seed_seq=None) -> np.ndarray:
        if self.eval_mode.kind == "exact":
            mats, angles = self.plan.bind(theta)
            return self.exact_costs(mats, angles, batch_states)
        mats, angles = self.swap_plan.bind(theta)
        seeds = _job_seeds(seed_seq, batch_states.shape[0])
        return np.array(
            [self.shot_cost(mats, angles, batch_states[i], seeds[i]) for i in range(batch_states.shape[0])]
        )

    def batch_gradient(self, theta, batch_states, seed_seq=None) -> np.ndarray:
        """Parameter-shift gradient averaged over the batch."""
        theta = np.asarray(theta, dtype=np.float64)
        grad = np.empty_like(theta)
        if self.eval_mode.kind == "exact":
            ws = self.plan.gradient_workspace(theta)
            rows = batch_states.shape[0]
            for j in range(theta.size):
                means = []
                for delta in (SHIFT, -SHIFT):
                    work = batch_states.copy()
                    ws.run_shifted(j, delta, work)
                    self.jobs += rows
                    costs = 1.0 - self._trash_zero_overlap(work)
                    means.append(float(costs.sum()) / rows)
                grad[j] = (means[0] - means[1]) / 2.0
            return grad
        plan = self.swap_plan
        base_mats, base_angles = plan.bind(theta)
        for j in range(theta.size):
            means = []
            for delta in (SHIFT, -SHIFT):
                shifted = theta.copy()
                shifted[j] += delta
                mats, angles = plan.rebind_slot(base_mats, base_angles, shifted, j)
                seeds = _job_seeds(seed_seq, batch_states.shape[0])
                means.append(
                    np.mean(
                        [
                            self.shot_cost(mats, angles, batch_states[i], seeds[i])
                            for i in range(batch_states.shape[0])
                        ]
                    )
                )
            grad[j] = (means[0] - means[1]) / 2.0
        return grad


def _job_seeds(seed_seq, count: int):
    if seed_seq is None:
        seed_seq = np.random.SeedSequence(0)
    return seed_seq.spawn(count)


def _batch_matrix(batch) -> np.ndarray:
    return np.stack([e.state.amplitudes for e in batch])


def _state_of(encoded) -> StateVector:
    return encoded.state if hasattr(encoded, "state") else encoded


def circuit_cost(
    circuit: Circuit,
    trash: QubitSubset,
    theta,
    state: StateVector,
    eval_mode: EvalMode = EvalMode(),
    job_seed=None,
) -> float:
    """Compression cost J for an arbitrary circuit/trash choice."""
    ev = _Evaluator(circuit, trash, eval_mode)
    if eval_mode.kind == "exact":
        mats, angles = ev.plan.bind(theta)
        return float(ev.exact_costs(mats, angles, state.amplitudes[None, :])[0])
    mats, angles = ev.swap_plan.bind(theta)
    return ev.shot_cost(mats, angles, state.amplitudes, job_seed if job_seed is not None else eval_mode.seed)


def swap_test_zero_probability(circuit: Circuit, trash: QubitSubset, theta, state: StateVector) -> float:
    """Exact P(ancilla=0) of the assembled swap-test circuit."""
    full = swap_test_circuit(circuit, trash)
    plan = compile_plan(full)
    dim = 1 << full.num_qubits
    work = np.zeros((1, dim), dtype=np.complex128)
    work[0, : state.dim] = state.amplitudes
    plan.run(theta, work)
    ancilla = circuit.num_qubits + len(trash)
    idx = np.arange(dim)
    return float(np.sum(np.abs(work[0, (idx >> ancilla) & 1 == 0]) ** 2))


def cost(theta, encoded, config: CompressionConfig, job_seed=None) -> float:
    """Compression cost J in [0, 1] for one encoded image (or bare state)."""
    ev = _Evaluator.for_config(config)
    if config.eval_mode.kind == "exact":
        mats, angles = ev.plan.bind(theta)
        return float(ev.exact_costs(mats, angles, _state_of(encoded).amplitudes[None, :])[0])
    mats, angles = ev.swap_plan.bind(theta)
    seed = job_seed if job_seed is not None else config.eval_mode.seed
    return ev.shot_cost(mats, angles, _state_of(encoded).amplitudes, seed)


def ancilla_cost(j: float) -> float:
    """The swap-test ancilla reading 1 - P(0) of the same circuit; equals J/2."""
    return j / 2.0


def gradient(theta, batch, config: CompressionConfig) -> np.ndarray:
    if not batch:
        raise ValueError("gradient needs a non-empty batch")
    ev = _Evaluator.for_config(config)
    seq = np.random.SeedSequence(config.eval_mode.seed) if config.eval_mode.kind == "shots" else None
    return ev.batch_gradient(theta, _batch_matrix(batch), seq)


def ancilla_zero_probability(theta, encoded, config: CompressionConfig) -> float:
    """Exact P(ancilla=0) of the full swap-test circuit on one image."""
    return swap_test_zero_probability(config.circuit(), config.trash, theta, _state_of(encoded))


def expected_jobs_per_epoch(config: CompressionConfig, n_images: int) -> int:
    """Job ledger: (2*N_params + 1) circuit runs per image per iteration."""
    n_params = config.circuit().num_params
    return (2 * n_params + 1) * n_images * config.n_iter


class TrainingDiverged(RuntimeError):
    pass


def train(dataset, config: CompressionConfig, seed: int = 0) -> TrainRun:
    """Mini-batch gradient descent: per batch, ``n_iter`` cost+gradient
    rounds with theta <- theta - lr * mean batch gradient."""
    circuit = config.circuit()
    if dataset.train[0].state.num_qubits != circuit.num_qubits:
        raise ValueError("encoded state qubit count does not match ansatz")
    if len(dataset.train) % config.batch_size:
        raise ValueError("batch size must divide the augmented train size")

    theta = init_params(circuit, seed)
    shot_seq = np.random.SeedSequence(config.eval_mode.seed)
    ev = _Evaluator.for_config(config)
    batches = [_batch_matrix(b) for b in dataset.batches()]

    records = []
    for epoch in range(1, config.epochs + 1):
        t0 = time.perf_counter()
        jobs_before = ev.jobs
        losses = []
        for batch_states in batches:
            for _ in range(config.n_iter):
                seq = shot_seq.spawn(1)[0] if config.eval_mode.kind == "shots" else None
                costs = ev.batch_costs(theta, batch_states, seq)
                losses.extend(costs.tolist())
                g = ev.batch_gradient(theta, batch_states, seq)
                theta = theta - config.learning_rate * g
        mean_loss = float(np.mean(losses))
        if mean_loss > 1.0 + 1e-6:
            raise TrainingDiverged(
                f"epoch {epoch}: mean loss {mean_loss} above 1; "
                f"theta norm {np.linalg.norm(theta):.3e}"
            )
        records.append(
            EpochRecord(
                epoch=epoch,
                mean_loss=mean_loss,
                theta=theta.copy(),
                jobs_executed=ev.jobs - jobs_before,
                wall_clock_seconds=time.perf_counter() - t0,
            )
        )

    best = min(records, key=lambda r: r.mean_loss) if records else None
    manifest = {
        "seed": seed,
        "dataset": {
            "split_seed": dataset.seed,
            "train_ids": sorted(set(dataset.train_ids)),
            "test_ids": list(dataset.test_ids),
            "augmented_train_size": len(dataset.train),
            "batch_size": dataset.batch_size,
        },
        "expected_jobs_per_epoch": expected_jobs_per_epoch(config, len(dataset.train)),
    }
    if config.eval_mode.kind == "shots":
        manifest["shots_clamped_cost_events"] = ev.clamped_events
    return TrainRun(
        config=config,
        records=tuple(records),
        best_theta=(best.theta if best is not None else theta).copy(),
        manifest=manifest,
    )


def embed_latent(latent: DensityMatrix, trash: QubitSubset, num_qubits: int) -> DensityMatrix:
    """|0><0| on the trash qubits tensored with ``latent`` on the rest.

    Latent qubit k maps to the k-th smallest non-trash qubit, matching the
    ordering that partial_trace produces.
    """
    keep = [q for q in range(num_qubits) if q not in trash]
    if len(keep) != latent.num_qubits:
        raise ValueError(
            f"latent on {latent.num_qubits} qubits does not fill "
            f"{len(keep)} non-trash positions"
        )
    dim = 1 << num_qubits
    idx = np.arange(dim)
    trash_zero = np.ones(dim, dtype=bool)
    for q in trash:
        trash_zero &= (idx >> q) & 1 == 0
    lat_index = np.zeros(dim, dtype=np.int64)
    for k, q in enumerate(keep):
        lat_index |= (((idx >> q) & 1) << k).astype(np.int64)
    full = np.zeros((dim, dim), dtype=np.complex128)
    rows = idx[trash_zero]
    full[np.ix_(rows, rows)] = latent.entries[np.ix_(lat_index[rows], lat_index[rows])]
    return DensityMatrix(num_qubits, full)


def decompress(theta, latent: DensityMatrix, config: CompressionConfig) -> DensityMatrix:
    """U^dagger applied to (|0><0| trash ⊗ latent), back on n_input qubits."""
    if latent.num_qubits != config.n_latent:
        raise ValueError(f"latent has {latent.num_qubits} qubits, expected {config.n_latent}")
    full = embed_latent(latent, config.trash, config.n_input)
    return apply_to_density(adjoint(config.circuit()), theta, full)


def compress_decompress(theta, encoded, config: CompressionConfig):
    """(latent, decompressed) density matrices for one image."""
    out = apply(config.circuit(), theta, encoded.state)
    latent = partial_trace(pure_density(out), config.trash)
    return latent, decompress(theta, latent, config)


def evaluate(theta, test, config: CompressionConfig, ids=None) -> list:
    """Per-image round-trip fidelity between original and decompressed states."""
    if ids is None:
        ids = list(range(len(test)))
    results = []
    for image_id, encoded in zip(ids, test):
        _, restored = compress_decompress(theta, encoded, config)
        results.append((image_id, fidelity_pure(encoded.state, restored)))
    return results


# ---------------------------------------------------------------------------
# Artifact serialization (the contract with the plotting component).
# ---------------------------------------------------------------------------


def manifest_json(run: TrainRun) -> str:
    cfg = run.config
    best_idx = int(np.argmin([r.mean_loss for r in run.records])) if run.records else None
    doc = {
        "config": {
            "family": cfg.ansatz.family,
            "num_qubits": cfg.ansatz.num_qubits,
            "layers": cfg.ansatz.layers,
            "n_latent": cfg.n_latent,
            "trash": list(cfg.trash),
            "learning_rate": cfg.learning_rate,
            "epochs": cfg.epochs,
            "n_iter": cfg.n_iter,
            "batch_size": cfg.batch_size,
            "eval_mode": cfg.eval_mode.kind,
            "shots": cfg.eval_mode.shots if cfg.eval_mode.kind == "shots" else None,
            "num_params": cfg.circuit().num_params,
        },
        "manifest": run.manifest,
        "best_epoch": None if best_idx is None else run.records[best_idx].epoch,
        "best_mean_loss": None if best_idx is None else run.records[best_idx].mean_loss,
        "best_theta": [float(x) for x in run.best_theta],
        "epochs": [
            {
                "epoch": r.epoch,
                "mean_loss": r.mean_loss,
                "jobs": r.jobs_executed,
                "seconds": r.wall_clock_seconds,
            }
            for r in run.records
        ],
    }
    return json.dumps(doc, indent=2)


def loss_csv(run: TrainRun) -> str:
    out = StringIO()
    out.write("epoch,mean_loss,jobs,seconds\n")
    for r in run.records:
        out.write(f"{r.epoch},{r.mean_loss:.12g},{r.jobs_executed},{r.wall_clock_seconds:.6f}\n")
    return out.getvalue()


def fidelity_csv(rows) -> str:
    out = StringIO()
    out.write("image_id,fidelity\n")
    for image_id, fid in rows:
        out.write(f"{image_id},{fid:.12g}\n")
    return out.getvalue()
