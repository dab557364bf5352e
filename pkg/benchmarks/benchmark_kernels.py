"""Benchmark: compiled Cython kernel vs pure-NumPy fallback.

Runs the training hot loop (parameter-shift gradient of the swap-test cost)
and a raw plan-execution microbenchmark under both backends.

Usage:
    python benchmarks/benchmark_kernels.py [--epochs 4]

The backend is chosen at import time, so each arm runs in a subprocess with
QAEKIT_PURE_PYTHON set accordingly.
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _measure(epochs: int) -> dict:
    import numpy as np

    from qaekit import backend_name
    from qaekit.ansatz import AnsatzSpec, build
    from qaekit.circuits import compile_plan
    from qaekit.datasets import framed_4x4_dataset, make_split
    from qaekit.trainer import CompressionConfig, train

    # Raw plan throughput: circuit3 L=7 on a batch of 7 states.
    circuit = build(AnsatzSpec("circuit3", 4, 7))
    plan = compile_plan(circuit)
    rng = np.random.default_rng(0)
    theta = rng.uniform(0, 2 * np.pi, circuit.num_params)
    mats, angles = plan.bind(theta)
    states = np.zeros((7, 16), dtype=np.complex128)
    states[:, 0] = 1.0
    reps = 20000
    work = states.copy()
    t0 = time.perf_counter()
    for _ in range(reps):
        plan.run_bound(mats, angles, work)
    plan_secs = time.perf_counter() - t0

    # Training hot loop: gradient-descent epochs on the 4x4 dataset.
    split = make_split(framed_4x4_dataset(), 14, 3, 7, seed=11)
    cfg = CompressionConfig(
        AnsatzSpec("circuit3", 4, 7), n_latent=3, epochs=epochs, n_iter=10, batch_size=7
    )
    t0 = time.perf_counter()
    run = train(split, cfg, seed=1)
    train_secs = time.perf_counter() - t0
    jobs = sum(r.jobs_executed for r in run.records)
    return {
        "backend": backend_name(),
        "plan_runs_per_sec": reps / plan_secs,
        "train_seconds": train_secs,
        "train_jobs_per_sec": jobs / train_secs,
    }


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--epochs", type=int, default=4)
    parser.add_argument("--_measure", action="store_true", help="internal: run one arm")
    args = parser.parse_args()

    if args._measure:
        print(json.dumps(_measure(args.epochs)))
        return 0

    results = {}
    for label, env_val in (("cython", None), ("python", "1")):
        env = dict(os.environ)
        env.pop("QAEKIT_PURE_PYTHON", None)
        if env_val:
            env["QAEKIT_PURE_PYTHON"] = env_val
        proc = subprocess.run(
            [sys.executable, __file__, "--epochs", str(args.epochs), "--_measure"],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(f"{label} arm failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        results[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    for label, r in results.items():
        print(
            f"{r['backend']:>7}: plan {r['plan_runs_per_sec']:>10.0f} runs/s | "
            f"training {r['train_seconds']:.2f}s ({r['train_jobs_per_sec']:.0f} jobs/s)"
        )
    if results["cython"]["backend"] == "cython":
        speed = results["python"]["train_seconds"] / results["cython"]["train_seconds"]
        plan_speed = results["cython"]["plan_runs_per_sec"] / results["python"]["plan_runs_per_sec"]
        print(f"speedup: {plan_speed:.1f}x raw plan execution, {speed:.1f}x end-to-end training")
    else:
        print("compiled kernel unavailable; both arms ran the NumPy fallback")
    return 0


if __name__ == "__main__":
    sys.exit(main())
