"""Command-line front end: grid runs, descriptor reports, timing summaries.

Exit codes: 0 success, 1 mid-run failure (completed cells kept), 2 invalid
configuration or arguments.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from .ansatz import FAMILIES, AnsatzSpec, build
from .descriptors import (
    DescriptorConfig,
    DescriptorReport,
    entangling_capability,
    expressibility,
    histogram_rows,
)
from .experiment import ConfigError, parse_grid_config, run_grid, timing_summary

LN2 = 0.6931471805599453


def _cmd_run(args) -> int:
    try:
        cfg = parse_grid_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        root = run_grid(cfg)
    except KeyboardInterrupt:
        print("interrupted; completed cells kept", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"run failed: {exc}; completed cells kept", file=sys.stderr)
        return 1
    print(f"grid complete under {root}")
    return 0


def _cmd_descriptors(args) -> int:
    if args.family not in FAMILIES:
        print(f"unknown family {args.family!r}; expected one of {FAMILIES}", file=sys.stderr)
        return 2
    try:
        spec = AnsatzSpec(args.family, args.qubits, args.layers)
    except ValueError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return 2
    circuit = build(spec)
    e_cfg = DescriptorConfig(args.samples, args.bins, args.seed)
    q_cfg = DescriptorConfig(args.e_samples, args.bins, args.seed + 1)
    eps_bits = expressibility(circuit, e_cfg)
    report = DescriptorReport(
        family=args.family,
        num_qubits=args.qubits,
        layers=args.layers,
        expressibility=eps_bits,
        expressibility_nats=eps_bits * LN2,
        entangling_capability=entangling_capability(circuit, q_cfg),
        expressibility_samples=args.samples,
        entangling_samples=args.e_samples,
        num_bins=args.bins,
        seed=args.seed,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"descriptors_{args.family}_n{args.qubits}_L{args.layers}"
    (out_dir / f"{stem}.json").write_text(report.to_json())
    hist_lines = ["bin_low,bin_high,count,haar_mass"]
    for low, high, count, mass in histogram_rows(circuit, e_cfg):
        hist_lines.append(f"{low:.8f},{high:.8f},{count},{mass:.12g}")
    (out_dir / f"{stem}_histogram.csv").write_text("\n".join(hist_lines) + "\n")
    print(
        f"{args.family} n={args.qubits} L={args.layers}: "
        f"expressibility {report.expressibility:.4f} bits "
        f"({report.expressibility_nats:.4f} nats), "
        f"entangling capability {report.entangling_capability:.4f}"
    )
    return 0


def _cmd_timing(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"no such directory: {root}", file=sys.stderr)
        return 2
    dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if (root / "manifest.json").exists():
        dirs = [root]
    csv = timing_summary(dirs)
    if args.out:
        Path(args.out).write_text(csv)
        print(f"wrote {args.out}")
    else:
        print(csv, end="")
    return 0


def _find_render_cli() -> Path | None:
    import os

    override = os.environ.get("QAEKIT_RENDER_CLI")
    if override:
        path = Path(override)
        return path if path.exists() else None
    candidates = [
        Path.cwd() / "frontend" / "dist" / "cli.js",
        Path(__file__).resolve().parents[2] / "frontend" / "dist" / "cli.js",
    ]
    for c in candidates:
        if c.exists():
            return c
    return None


def _cmd_report(args) -> int:
    """Render plots for every completed cell via the plotting component."""
    cli = _find_render_cli()
    if cli is None:
        print(
            "plot renderer not found; build it with `npm install && npm run build` "
            "inside frontend/ (or set QAEKIT_RENDER_CLI)",
            file=sys.stderr,
        )
        return 1
    root = Path(args.dir)
    cells = [p for p in sorted(root.iterdir()) if (p / "manifest.json").exists()] if root.is_dir() else []
    if (root / "manifest.json").exists():
        cells = [root]
    if not cells:
        print(f"no completed cells under {root}", file=sys.stderr)
        return 2
    jobs = []
    for cell in cells:
        jobs.append(("loss_curves", [cell / "loss.csv"], cell / "loss.svg"))
        jobs.append(("fidelity_box", [cell / "fidelity.csv"], cell / "fidelity.svg"))
        jobs.append(("dm_heatmap", [cell / "density_matrices.json"], cell / "density_matrices.svg"))
        jobs.append(("image_tiles", [cell / "density_matrices.json"], cell / "image.svg"))
    for kind, inputs, out in jobs:
        cmd = ["node", str(cli), "render", "--kind", kind, "--out", str(out), "--in"]
        cmd += [str(p) for p in inputs]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"render {kind} failed for {out}: {proc.stderr.strip()}", file=sys.stderr)
            return 1
        print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qaekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid from a config file")
    p_run.add_argument("--config", required=True)
    p_run.set_defaults(func=_cmd_run)

    p_desc = sub.add_parser("descriptors", help="compute circuit descriptors")
    p_desc.add_argument("--family", required=True)
    p_desc.add_argument("--qubits", type=int, required=True)
    p_desc.add_argument("--layers", type=int, required=True)
    p_desc.add_argument("--samples", type=int, default=5000)
    p_desc.add_argument("--e-samples", type=int, default=2000)
    p_desc.add_argument("--bins", type=int, default=75)
    p_desc.add_argument("--seed", type=int, default=11)
    p_desc.add_argument("--out", default="descriptors")
    p_desc.set_defaults(func=_cmd_descriptors)

    p_tim = sub.add_parser("timing", help="summarize timing across run directories")
    p_tim.add_argument("--dir", required=True)
    p_tim.add_argument("--out", default=None)
    p_tim.set_defaults(func=_cmd_timing)

    p_rep = sub.add_parser("report", help="render plots for completed runs")
    p_rep.add_argument("--dir", required=True)
    p_rep.set_defaults(func=_cmd_report)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
