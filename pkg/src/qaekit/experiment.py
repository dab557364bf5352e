"""Config-driven experiment grids: parsing, cell execution, artifacts.

A grid config is an INI file (see README for the documented grammar) naming
one dataset plus lists of ansatz families, layer counts, and compression
ratios. Every (family, layers, ratio) cell trains once and writes five
artifacts into its own directory:

    manifest.json           full config echo, seeds, per-epoch records
    loss.csv                epoch,mean_loss,jobs,seconds
    fidelity.csv            image_id,fidelity   (test set, best theta)
    density_matrices.json   original/latent/decompressed for the showcase image
    timing.csv              epoch,seconds,jobs,seconds_per_job + total row
"""

from __future__ import annotations

import configparser
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ansatz import FAMILIES, AnsatzSpec
from .core import pure_density
from .datasets import DatasetSplit, bars_and_stripes_2x4, framed_4x4_dataset, make_split
from .trainer import (
    CompressionConfig,
    EvalMode,
    TrainRun,
    compress_decompress,
    evaluate,
    fidelity_csv,
    loss_csv,
    manifest_json,
    train,
)

OUTPUT_ROOT_ENV = "QAEKIT_OUTPUT_ROOT"

DATASETS = {
    "framed4x4": {
        "build": framed_4x4_dataset,
        "qubits": 4,
        "train_count": 14,
        "replication": 3,
        "batch_size": 7,
        "split_seed": 11,
    },
    "bars2x4": {
        "build": bars_and_stripes_2x4,
        "qubits": 3,
        "train_count": 10,
        "replication": 2,
        "batch_size": 5,
        "split_seed": 7,
    },
}


class ConfigError(ValueError):
    """Invalid experiment config; carries section/field diagnostics."""

    def __init__(self, section: str, field: str, message: str):
        self.section = section
        self.field = field
        super().__init__(f"[{section}] {field}: {message}")


@dataclass(frozen=True)
class GridConfig:
    dataset: str
    families: tuple
    layers: tuple
    ratios: tuple  # (n_input, n_latent) pairs
    learning_rate: float
    epochs: int
    n_iter: int
    batch_size: int
    train_count: int
    replication: int
    split_seed: int
    train_ids: tuple | None
    eval_kind: str
    shots: int
    init_seed: int
    shot_seed: int
    output_dir: str

    def cells(self):
        for family in self.families:
            for layers in self.layers:
                for n_input, n_latent in self.ratios:
                    yield family, layers, n_input, n_latent

    def cell_name(self, family, layers, n_input, n_latent) -> str:
        return f"{self.dataset}_{family}_L{layers}_{n_input}to{n_latent}"


def _get(cp, section, field, default=None, required=False):
    if cp.has_option(section, field):
        return cp.get(section, field)
    if required:
        raise ConfigError(section, field, "missing required field")
    return default


def _parse_int(section, field, raw):
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ConfigError(section, field, f"expected integer, got {raw!r}") from None


def _parse_float(section, field, raw):
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(section, field, f"expected number, got {raw!r}") from None


def _parse_list(raw):
    return [x.strip() for x in raw.split(",") if x.strip()]


def parse_grid_config(path) -> GridConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError("experiment", "file", f"cannot read config at {path}")

    dataset = _get(cp, "experiment", "dataset", required=True)
    if dataset not in DATASETS:
        raise ConfigError("experiment", "dataset", f"unknown dataset {dataset!r}, expected one of {sorted(DATASETS)}")
    ds = DATASETS[dataset]

    families = tuple(_parse_list(_get(cp, "experiment", "families", required=True)))
    for f in families:
        if f not in FAMILIES:
            raise ConfigError("experiment", "families", f"unknown family {f!r}, expected one of {FAMILIES}")

    layers = tuple(
        _parse_int("experiment", "layers", x)
        for x in _parse_list(_get(cp, "experiment", "layers", required=True))
    )
    if any(l < 1 for l in layers):
        raise ConfigError("experiment", "layers", "layer counts must be >= 1")

    ratios = []
    for item in _parse_list(_get(cp, "experiment", "ratios", required=True)):
        parts = item.split(":")
        if len(parts) != 2:
            raise ConfigError("experiment", "ratios", f"expected N:M, got {item!r}")
        n_in = _parse_int("experiment", "ratios", parts[0])
        n_lat = _parse_int("experiment", "ratios", parts[1])
        if n_in != ds["qubits"]:
            raise ConfigError(
                "experiment", "ratios", f"ratio {item!r} input size must be {ds['qubits']} for {dataset}"
            )
        if not 1 <= n_lat < n_in:
            raise ConfigError("experiment", "ratios", f"latent size in {item!r} must be in [1, {n_in})")
        ratios.append((n_in, n_lat))

    for f in families:
        if f == "circuit1-dev3q" and ds["qubits"] != 3:
            raise ConfigError("experiment", "families", "circuit1-dev3q requires a 3-qubit dataset")

    raw_ids = _get(cp, "data", "train_ids", default="")
    train_ids = tuple(_parse_int("data", "train_ids", x) for x in _parse_list(raw_ids)) or None

    eval_kind = _get(cp, "eval", "mode", default="exact")
    if eval_kind not in ("exact", "shots"):
        raise ConfigError("eval", "mode", f"expected exact or shots, got {eval_kind!r}")

    cfg = GridConfig(
        dataset=dataset,
        families=families,
        layers=layers,
        ratios=tuple(ratios),
        learning_rate=_parse_float("optimizer", "learning_rate", _get(cp, "optimizer", "learning_rate", "0.05")),
        epochs=_parse_int("optimizer", "epochs", _get(cp, "optimizer", "epochs", "40")),
        n_iter=_parse_int("optimizer", "n_iter", _get(cp, "optimizer", "n_iter", "10")),
        batch_size=_parse_int("optimizer", "batch_size", _get(cp, "optimizer", "batch_size", str(ds["batch_size"]))),
        train_count=_parse_int("data", "train_count", _get(cp, "data", "train_count", str(ds["train_count"]))),
        replication=_parse_int("data", "replication", _get(cp, "data", "replication", str(ds["replication"]))),
        split_seed=_parse_int("data", "split_seed", _get(cp, "data", "split_seed", str(ds["split_seed"]))),
        train_ids=train_ids,
        eval_kind=eval_kind,
        shots=_parse_int("eval", "shots", _get(cp, "eval", "shots", "8192")),
        init_seed=_parse_int("seeds", "init", _get(cp, "seeds", "init", "1")),
        shot_seed=_parse_int("seeds", "shot", _get(cp, "seeds", "shot", "0")),
        output_dir=_get(cp, "output", "dir", "runs"),
    )
    if cfg.learning_rate <= 0:
        raise ConfigError("optimizer", "learning_rate", "must be positive")
    if cfg.epochs < 0 or cfg.n_iter < 1 or cfg.batch_size < 1:
        raise ConfigError("optimizer", "epochs", "epochs >= 0, n_iter >= 1, batch_size >= 1 required")
    augmented = cfg.train_count * cfg.replication
    if augmented % cfg.batch_size:
        raise ConfigError(
            "optimizer", "batch_size", f"{cfg.batch_size} does not divide augmented train size {augmented}"
        )
    return cfg


def output_root(cfg: GridConfig) -> Path:
    root = os.environ.get(OUTPUT_ROOT_ENV, "")
    return (Path(root) / cfg.output_dir) if root else Path(cfg.output_dir)


def build_split(cfg: GridConfig) -> DatasetSplit:
    images = DATASETS[cfg.dataset]["build"]()
    return make_split(
        images,
        train_count=cfg.train_count,
        replication=cfg.replication,
        batch_size=cfg.batch_size,
        seed=cfg.split_seed,
        train_ids=cfg.train_ids,
    )


def timing_csv(run: TrainRun) -> str:
    lines = ["epoch,seconds,jobs,seconds_per_job"]
    total_s, total_j = 0.0, 0
    for r in run.records:
        per_job = r.wall_clock_seconds / r.jobs_executed if r.jobs_executed else 0.0
        lines.append(f"{r.epoch},{r.wall_clock_seconds:.6f},{r.jobs_executed},{per_job:.9f}")
        total_s += r.wall_clock_seconds
        total_j += r.jobs_executed
    per_job = total_s / total_j if total_j else 0.0
    lines.append(f"total,{total_s:.6f},{total_j},{per_job:.9f}")
    return "\n".join(lines) + "\n"


def run_cell(cfg: GridConfig, split: DatasetSplit, family, layers, n_input, n_latent, cell_index, out_dir: Path) -> None:
    spec = AnsatzSpec(family, n_input, layers)
    comp = CompressionConfig(
        ansatz=spec,
        n_latent=n_latent,
        learning_rate=cfg.learning_rate,
        epochs=cfg.epochs,
        n_iter=cfg.n_iter,
        batch_size=cfg.batch_size,
        eval_mode=EvalMode("exact") if cfg.eval_kind == "exact" else EvalMode("shots", cfg.shots, cfg.shot_seed),
    )
    run = train(split, comp, seed=cfg.init_seed + cell_index)
    rows = evaluate(run.best_theta, split.test, comp, split.test_ids)

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(manifest_json(run))
    (out_dir / "loss.csv").write_text(loss_csv(run))
    (out_dir / "fidelity.csv").write_text(fidelity_csv(rows))
    (out_dir / "timing.csv").write_text(timing_csv(run))

    showcase_pos = int(np.argmin(split.test_ids))  # first test image by dataset order
    encoded = split.test[showcase_pos]
    latent, restored = compress_decompress(run.best_theta, encoded, comp)
    doc = {
        "image_id": split.test_ids[showcase_pos],
        "width": encoded.image.width,
        "height": encoded.image.height,
        "pixels": list(encoded.image.pixels),
        "original": pure_density(encoded.state).to_json_obj(),
        "latent": latent.to_json_obj(),
        "decompressed": restored.to_json_obj(),
    }
    (out_dir / "density_matrices.json").write_text(json.dumps(doc, indent=2))


def run_grid(cfg: GridConfig, log=print) -> Path:
    """Execute every grid cell; completed cell directories survive failures."""
    root = output_root(cfg)
    split = build_split(cfg)
    for cell_index, (family, layers, n_input, n_latent) in enumerate(cfg.cells()):
        name = cfg.cell_name(family, layers, n_input, n_latent)
        log(f"[{cell_index + 1}] {name} ...")
        run_cell(cfg, split, family, layers, n_input, n_latent, cell_index, root / name)
    return root


def timing_summary(run_dirs) -> str:
    """Aggregate per-(family, layers) timing over completed cell directories."""
    cells = []
    for d in run_dirs:
        d = Path(d)
        manifest = d / "manifest.json"
        if not manifest.exists():
            continue
        doc = json.loads(manifest.read_text())
        epochs = doc["epochs"]
        if not epochs:
            continue
        mean_epoch = float(np.mean([e["seconds"] for e in epochs]))
        total_jobs = sum(e["jobs"] for e in epochs)
        total_secs = sum(e["seconds"] for e in epochs)
        cells.append(
            {
                "family": doc["config"]["family"],
                "layers": doc["config"]["layers"],
                "mean_epoch": mean_epoch,
                "job_secs": total_secs / total_jobs if total_jobs else 0.0,
            }
        )
    groups: dict = {}
    for c in cells:
        groups.setdefault((c["family"], c["layers"]), []).append(c)
    rows = []
    for (family, layers), group in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        rows.append(
            {
                "family": family,
                "layers": layers,
                "mean_epoch_seconds": float(np.mean([g["mean_epoch"] for g in group])),
                "mean_job_seconds": float(np.mean([g["job_secs"] for g in group])),
            }
        )
    lines = ["family,layers,mean_epoch_seconds,mean_job_seconds,rel_to_circuit1"]
    base = {r["layers"]: r["mean_epoch_seconds"] for r in rows if r["family"] == "circuit1"}
    for r in rows:
        rel = r["mean_epoch_seconds"] / base[r["layers"]] if r["layers"] in base else ""
        rel_s = f"{rel:.4f}" if rel != "" else ""
        lines.append(
            f"{r['family']},{r['layers']},{r['mean_epoch_seconds']:.6f},{r['mean_job_seconds']:.9f},{rel_s}"
        )
    return "\n".join(lines) + "\n"
