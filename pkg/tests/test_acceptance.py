"""Acceptance suite: one test per primary criterion, at pinned tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line
per criterion with the measured values.

Training-based criteria use fixed seeds and the best-of-3-seeds policy.
Expressibility targets are asserted in natural-log units (the published
descriptor table's values match the natural-log reading; the bits reading
is provably unattainable for the only transcription whose entangling
capability matches — see the log-base note in the README).
"""

import time

import numpy as np
import pytest

from qaekit.ansatz import AnsatzSpec, build, expected_resources
from qaekit.circuits import apply, resource_count
from qaekit.core import QubitSubset, partial_trace, pure_density
from qaekit.datasets import bars_and_stripes_2x4, encode, framed_4x4_dataset, make_split
from qaekit.descriptors import DescriptorConfig, entangling_capability, expressibility
from qaekit.trainer import (
    CompressionConfig,
    EvalMode,
    ancilla_zero_probability,
    cost,
    evaluate,
    expected_jobs_per_epoch,
    gradient,
    train,
)

LN2 = np.log(2.0)
SEEDS = (5, 6, 7)
EPS_SEED, ENT_SEED = 11, 12


def report(name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"{name}: {detail}"


def best_of_seeds(split, config, seeds=SEEDS):
    """Best run by minimum epoch loss, per the best-of-3 policy."""
    runs = [train(split, config, seed=s) for s in seeds]
    return min(runs, key=lambda r: min(rec.mean_loss for rec in r.records))


@pytest.fixture(scope="module")
def framed_split():
    return make_split(framed_4x4_dataset(), 14, 3, 7, seed=11)


@pytest.fixture(scope="module")
def reduced_grid(framed_split):
    """Best-of-3 runs for all 3 circuits at L=3, ratios 4->3 and 4->2,
    plus circuit3 4->1 for the trend criterion."""
    cells = {}
    t0 = time.perf_counter()
    for family in ("circuit1", "circuit2", "circuit3"):
        for n_latent in (3, 2):
            cfg = CompressionConfig(
                AnsatzSpec(family, 4, 3), n_latent=n_latent, learning_rate=0.05,
                epochs=40, n_iter=10, batch_size=7,
            )
            runs = [train(framed_split, cfg, seed=s) for s in SEEDS]
            best = min(runs, key=lambda r: min(rec.mean_loss for rec in r.records))
            fids = [f for _, f in evaluate(best.best_theta, framed_split.test, cfg, framed_split.test_ids)]
            cells[(family, n_latent)] = {"runs": runs, "best": best, "fids": fids, "config": cfg}
    cfg1 = CompressionConfig(
        AnsatzSpec("circuit3", 4, 3), n_latent=1, learning_rate=0.05,
        epochs=40, n_iter=10, batch_size=7,
    )
    runs1 = [train(framed_split, cfg1, seed=s) for s in SEEDS]
    best1 = min(runs1, key=lambda r: min(rec.mean_loss for rec in r.records))
    fids1 = [f for _, f in evaluate(best1.best_theta, framed_split.test, cfg1, framed_split.test_ids)]
    cells[("circuit3", 1)] = {"runs": runs1, "best": best1, "fids": fids1, "config": cfg1}
    cells["elapsed"] = time.perf_counter() - t0
    return cells


def test_resource_counts_exact():
    t0 = time.perf_counter()
    mismatches = []
    for family in ("circuit1", "circuit2", "circuit3"):
        for n in range(2, 7):
            for layers in range(1, 9):
                spec = AnsatzSpec(family, n, layers)
                rc = resource_count(build(spec))
                got = (rc.num_params, rc.two_qubit_gates, rc.depth)
                if got != expected_resources(spec):
                    mismatches.append((family, n, layers, got))
    elapsed = time.perf_counter() - t0
    report(
        "resource-counts",
        not mismatches and elapsed < 1.0,
        f"120 (family, n, L) combinations exact, {elapsed:.2f}s (< 1s)"
        + (f"; mismatches: {mismatches[:3]}" if mismatches else ""),
    )


def test_descriptor_reproduction():
    targets = {
        "circuit1": (0.130, 0.03, 0.800),
        "circuit2": (0.008, 0.01, 0.743),
        "circuit3": (0.005, 0.01, 0.826),
    }
    t0 = time.perf_counter()
    lines, ok = [], True
    for family, (eps_t, eps_tol, ent_t) in targets.items():
        circuit = build(AnsatzSpec(family, 4, 3))
        eps_bits = expressibility(circuit, DescriptorConfig(5000, 75, EPS_SEED))
        eps_nats = eps_bits * LN2
        ent = entangling_capability(circuit, DescriptorConfig(2000, 75, ENT_SEED))
        this_ok = abs(eps_nats - eps_t) <= eps_tol and abs(ent - ent_t) <= 0.02
        ok &= this_ok
        lines.append(
            f"{family}: eps {eps_nats:.4f} nats ({eps_bits:.4f} bits) vs {eps_t}±{eps_tol}, "
            f"E {ent:.4f} vs {ent_t}±0.02"
        )
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120.0
    report("descriptors-table", ok, "; ".join(lines) + f"; {elapsed:.1f}s (< 120s)")


def test_swap_test_law():
    rng = np.random.default_rng(17)
    images = framed_4x4_dataset()
    worst = 0.0
    for _ in range(200):
        family = ("circuit1", "circuit2", "circuit3")[rng.integers(3)]
        layers = int(rng.integers(1, 4))
        n_latent = int(rng.integers(1, 4))
        cfg = CompressionConfig(AnsatzSpec(family, 4, layers), n_latent=n_latent, epochs=1)
        circuit = cfg.circuit()
        theta = rng.uniform(0, 2 * np.pi, circuit.num_params)
        enc = encode(images[rng.integers(32)])
        p0 = ancilla_zero_probability(theta, enc, cfg)
        out = apply(circuit, theta, enc.state)
        latent_qubits = QubitSubset(tuple(q for q in range(4) if q not in cfg.trash))
        overlap = partial_trace(pure_density(out), latent_qubits).entries[0, 0].real
        worst = max(worst, abs(p0 - (0.5 + overlap / 2.0)))
    report("swap-test-law", worst < 1e-9, f"200 instances, max |P(0) - (1+<psi|rho_A|psi>)/2| = {worst:.2e} (< 1e-9)")


def test_gradient_parameter_shift_vs_finite_differences():
    rng = np.random.default_rng(23)
    images = framed_4x4_dataset()
    h = 1e-5
    worst = 0.0
    for _ in range(50):
        family = ("circuit1", "circuit2", "circuit3")[rng.integers(3)]
        cfg = CompressionConfig(
            AnsatzSpec(family, 4, int(rng.integers(1, 3))), n_latent=int(rng.integers(1, 4)), epochs=1
        )
        circuit = cfg.circuit()
        theta = rng.uniform(0, 2 * np.pi, circuit.num_params)
        enc = encode(images[rng.integers(32)])
        g = gradient(theta, [enc], cfg)
        for j in rng.choice(circuit.num_params, size=min(4, circuit.num_params), replace=False):
            tp, tm = theta.copy(), theta.copy()
            tp[j] += h
            tm[j] -= h
            fd = (cost(tp, enc, cfg) - cost(tm, enc, cfg)) / (2 * h)
            worst = max(worst, abs(g[j] - fd))
    report("parameter-shift-gradient", worst < 1e-4, f"50 triples, max |shift - fd| = {worst:.2e} (< 1e-4)")


def test_job_accounting_device_scale():
    split = make_split(bars_and_stripes_2x4(), 10, 2, 5, seed=7)
    details = []
    ok = True
    for n_iter in (1, 10):
        cfg = CompressionConfig(
            AnsatzSpec("circuit1-dev3q", 3, 3), n_latent=2, epochs=1, n_iter=n_iter, batch_size=5
        )
        assert cfg.circuit().num_params == 12
        expected = expected_jobs_per_epoch(cfg, len(split.train))
        run = train(split, cfg, seed=1)
        actual = run.records[0].jobs_executed
        ok &= expected == 500 * n_iter == actual
        details.append(f"N_iter={n_iter}: {actual} jobs/epoch (= 500*{n_iter})")
    report("job-accounting", ok, "; ".join(details))


def test_training_3to2_bars_and_stripes():
    split = make_split(bars_and_stripes_2x4(), 10, 2, 5, seed=7)
    cfg = CompressionConfig(
        AnsatzSpec("circuit1-dev3q", 3, 3), n_latent=2, learning_rate=0.05,
        epochs=40, n_iter=10, batch_size=5,
    )
    t0 = time.perf_counter()
    finals = [train(split, cfg, seed=s).records[-1].mean_loss for s in SEEDS]
    elapsed = time.perf_counter() - t0
    best = min(finals)
    report(
        "training-3to2",
        best <= 0.08 and elapsed < 300,
        f"final losses {[f'{f:.4f}' for f in finals]}, best {best:.4f} (<= 0.08), {elapsed:.0f}s (< 300s)",
    )


def test_training_4to3_circuit3_L7(framed_split):
    cfg = CompressionConfig(
        AnsatzSpec("circuit3", 4, 7), n_latent=3, learning_rate=0.05,
        epochs=40, n_iter=10, batch_size=7,
    )
    finals = [train(framed_split, cfg, seed=s).records[-1].mean_loss for s in SEEDS]
    best = min(finals)
    report(
        "training-4to3-L7",
        best <= 0.05,
        f"final losses {[f'{f:.4f}' for f in finals]}, best {best:.4f} (<= 0.05)",
    )


def test_reduced_grid_runtime(reduced_grid):
    elapsed = reduced_grid["elapsed"]
    report("reduced-grid-runtime", elapsed < 300, f"7 cells x 3 seeds trained in {elapsed:.0f}s (< 300s)")


def test_fidelity_spread(reduced_grid):
    fids = []
    for family in ("circuit1", "circuit2", "circuit3"):
        for n_latent in (3, 2):
            fids += reduced_grid[(family, n_latent)]["fids"]
    report(
        "fidelity-spread",
        max(fids) >= 0.90 and min(fids) >= 0.55,
        f"reduced grid: max {max(fids):.3f} (>= 0.90), min {min(fids):.3f} (>= 0.55), n={len(fids)}",
    )


def test_compression_trend(reduced_grid):
    med = {nl: float(np.median(reduced_grid[("circuit3", nl)]["fids"])) for nl in (3, 2, 1)}
    ok = med[3] >= med[2] >= med[1]
    report(
        "compression-trend",
        ok,
        f"circuit3 L=3 median fidelity: 4->3 {med[3]:.3f} >= 4->2 {med[2]:.3f} >= 4->1 {med[1]:.3f}",
    )


def test_timing_ordering(reduced_grid):
    means = {}
    for family in ("circuit1", "circuit2", "circuit3"):
        secs = []
        for n_latent in (3, 2):
            for run in reduced_grid[(family, n_latent)]["runs"]:
                secs += [r.wall_clock_seconds for r in run.records]
        means[family] = float(np.mean(secs))
    ok = means["circuit1"] < means["circuit3"] < means["circuit2"]
    report(
        "timing-ordering",
        ok,
        "mean epoch seconds at L=3: "
        + ", ".join(f"{f} {means[f]*1000:.1f}ms" for f in ("circuit1", "circuit3", "circuit2"))
        + " (circuit1 < circuit3 < circuit2)",
    )


def test_shots_mode_consistency():
    # Device-results substitute: shots-mode cost agrees with exact within
    # 5 sigma binomial error at 8192 shots.
    rng = np.random.default_rng(31)
    images = bars_and_stripes_2x4()
    shots = 8192
    worst_ratio = 0.0
    for k in range(60):
        cfg_exact = CompressionConfig(AnsatzSpec("circuit1-dev3q", 3, 3), n_latent=2, epochs=1)
        cfg_shots = CompressionConfig(
            AnsatzSpec("circuit1-dev3q", 3, 3), n_latent=2, epochs=1,
            eval_mode=EvalMode("shots", shots, seed=1000 + k),
        )
        theta = rng.uniform(0, 2 * np.pi, 12)
        enc = encode(images[rng.integers(18)])
        j_exact = cost(theta, enc, cfg_exact)
        j_shots = cost(theta, enc, cfg_shots, job_seed=1000 + k)
        p0 = 1.0 - j_exact / 2.0
        sigma = 2.0 * np.sqrt(max(p0 * (1.0 - p0), 1e-12) / shots)
        worst_ratio = max(worst_ratio, abs(j_shots - j_exact) / (5.0 * sigma))
    report(
        "shots-vs-exact",
        worst_ratio <= 1.0,
        f"60 instances at 8192 shots, worst |Delta|/(5 sigma) = {worst_ratio:.2f} (<= 1)",
    )
