"""MLE vs RF-MLE benchmark over simulated sequence batches.

Layout of an output directory::

    run.json                         version, config hash, master seed
    sequences/<GEN>/T<h>/seq<k>.txt  simulated sequences
    T<h>/per_sequence.csv            one row per (sequence, fitted family, method, eps)
    T<h>/summary.csv                 mean/std llh per (generator, fitted, method, eps)
    T<h>/improvement.csv             share of sequences where RF-MLE beat MLE

All numbers are written with ``repr`` so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import __version__
from .events import EventSequence, read_sequence, write_sequence
from .exceptions import FitError
from .fit import FitResult, WindowRule, mle_fit, select_renormalized
from .kernels import Family, HawkesModel
from .optim import OptimConfig
from .simulate import PRESETS, SimulationConfig, simulate

log = logging.getLogger(__name__)

IMPROVEMENT_MARGIN = 1e-9
PARAM_COLUMNS = ("alpha", "beta", "K", "c", "p", "a", "q", "gamma", "eta")
FIT_COLUMNS = (
    "sequence_id",
    "generator_family",
    "fitted_family",
    "method",
    "epsilon",
    "mu",
    *PARAM_COLUMNS,
    "branching_ratio",
    "llh",
    "strategy",
    "converged",
    "iterations",
)
SUMMARY_COLUMNS = (
    "generator_family",
    "fitted_family",
    "method",
    "epsilon",
    "n_sequences",
    "n_failed",
    "mean_llh",
    "std_llh",
)
IMPROVEMENT_COLUMNS = (
    "fitted_family",
    "epsilon",
    "generator_family",
    "n_sequences",
    "n_improved",
    "improvement_ratio",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def horizon_label(horizon: float) -> str:
    return f"T{int(horizon)}" if float(horizon).is_integer() else f"T{horizon!r}"


def fit_row(result: FitResult, sequence_id: str, generator_family: str = "") -> dict:
    """CSV row for one fit; kernel parameter columns of other families are blank."""
    params = result.model.kernel.to_dict()["params"]
    row = {
        "sequence_id": sequence_id,
        "generator_family": generator_family,
        "fitted_family": result.family.value,
        "method": result.method,
        "epsilon": _fmt(result.epsilon),
        "mu": _fmt(result.model.mu),
        **{name: _fmt(params.get(name)) for name in PARAM_COLUMNS},
        "branching_ratio": _fmt(result.branching_ratio),
        "llh": _fmt(result.llh),
        "strategy": result.strategy.value if result.strategy is not None else "none",
        "converged": _fmt(result.converged),
        "iterations": str(result.iterations),
    }
    return row


def _failed_row(sequence_id, generator, fitted, method, epsilon, reason) -> dict:
    row = dict.fromkeys(FIT_COLUMNS, "")
    row.update(
        sequence_id=sequence_id,
        generator_family=generator,
        fitted_family=fitted,
        method=method,
        epsilon=_fmt(epsilon),
        llh="nan",
        strategy="FAILED",
        converged="false",
        iterations="0",
    )
    log.warning("fit failed for %s (%s, %s): %s", sequence_id, fitted, method, reason)
    return row


@dataclass
class BenchmarkConfig:
    horizons: list = field(default_factory=lambda: [1000.0, 5000.0, 10000.0, 30000.0])
    sequences_per_cell: int = 10
    epsilons: list = field(default_factory=lambda: [0.1, 0.01, 0.001])
    generators: dict = field(default_factory=lambda: dict(PRESETS))
    fitted_families: list = field(default_factory=lambda: list(Family))
    seed: int = 0
    out_dir: str = "bench_out"
    workers: int = 1
    tail_mass: float | None = 1e-10
    max_window: float | None = 100.0
    optimizer: OptimConfig = field(default_factory=OptimConfig)

    def __post_init__(self):
        self.horizons = [float(h) for h in self.horizons]
        self.epsilons = [float(e) for e in self.epsilons]
        self.generators = {Family.parse(f): m for f, m in self.generators.items()}
        self.fitted_families = [Family.parse(f) for f in self.fitted_families]
        if not (self.horizons and self.epsilons and self.generators and self.fitted_families):
            raise ValueError("horizons, epsilons, generators and fitted_families must be non-empty")
        if any(h <= 0 for h in self.horizons):
            raise ValueError("horizons must be positive")
        if any(e <= 0 for e in self.epsilons):
            raise ValueError("epsilons must be positive")
        if self.sequences_per_cell < 1:
            raise ValueError("sequences_per_cell must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def window_rule(self) -> WindowRule:
        return WindowRule(self.tail_mass, self.max_window)

    def to_dict(self) -> dict:
        return {
            "horizons": self.horizons,
            "sequences_per_cell": self.sequences_per_cell,
            "epsilons": self.epsilons,
            "generators": {f.value: m.to_dict() for f, m in self.generators.items()},
            "fitted_families": [f.value for f in self.fitted_families],
            "seed": self.seed,
            "out_dir": self.out_dir,
            "workers": self.workers,
            "likelihood_window": {"tail_mass": self.tail_mass, "max_window": self.max_window},
            "optimizer": asdict(self.optimizer),
        }

    @classmethod
    def from_dict(cls, record: dict) -> "BenchmarkConfig":
        record = dict(record)
        kwargs = {}
        for key in ("horizons", "sequences_per_cell", "epsilons", "fitted_families", "seed", "out_dir", "workers"):
            if key in record:
                kwargs[key] = record.pop(key)
        if "generators" in record:
            kwargs["generators"] = {
                Family.parse(name): HawkesModel.from_dict({"family": name, **spec})
                for name, spec in record.pop("generators").items()
            }
        if "likelihood_window" in record:
            window = record.pop("likelihood_window")
            kwargs["tail_mass"] = window.get("tail_mass")
            kwargs["max_window"] = window.get("max_window")
        if "optimizer" in record:
            kwargs["optimizer"] = OptimConfig(**record.pop("optimizer"))
        if record:
            raise ValueError(f"unknown config fields: {sorted(record)}")
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "BenchmarkConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def config_hash(self) -> str:
        """Digest of everything that affects results (the output path and worker count do not)."""
        payload = self.to_dict()
        del payload["out_dir"], payload["workers"]
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def sequence_id(family: Family, horizon: float, k: int) -> str:
    return f"{family.value}/{horizon_label(horizon)}/seq{k}"


def sequence_path(out_dir, family: Family, horizon: float, k: int) -> Path:
    return Path(out_dir) / "sequences" / family.value / horizon_label(horizon) / f"seq{k}.txt"


def simulation_config(config: BenchmarkConfig, family: Family, horizon: float, k: int) -> SimulationConfig:
    # Stream key depends only on (family, horizon, index), so subsets of a grid reuse its sequences.
    return SimulationConfig(
        config.generators[family], horizon, config.seed, stream=(family.code, int(round(horizon)), k)
    )


def _write_run_metadata(config: BenchmarkConfig) -> None:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {"version": __version__, "config_hash": config.config_hash(), "seed": config.seed}
    (out / "run.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def cmd_simulate(config: BenchmarkConfig) -> list[Path]:
    """Write every sequence of the grid; returns the file paths."""
    paths = []
    for horizon in config.horizons:
        for family in config.generators:
            for k in range(config.sequences_per_cell):
                seq = simulate(simulation_config(config, family, horizon, k))
                path = sequence_path(config.out_dir, family, horizon, k)
                write_sequence(seq, path)
                paths.append(path)
    _write_run_metadata(config)
    return paths


def _load_or_simulate(config, family, horizon, k) -> EventSequence:
    path = sequence_path(config.out_dir, family, horizon, k)
    if path.exists():
        seq = read_sequence(path)
        if seq.horizon == horizon:
            return seq
    seq = simulate(simulation_config(config, family, horizon, k))
    write_sequence(seq, path)
    return seq


def fit_sequence(seq, seq_id, generator, fitted, epsilons, optimizer, rule) -> list[dict]:
    """MLE plus one RF-MLE selection per epsilon for a single sequence."""
    try:
        mle = mle_fit(seq, fitted, config=optimizer, rule=rule)
    except (FitError, ValueError) as exc:
        rows = [_failed_row(seq_id, generator.value, fitted.value, "MLE", None, exc)]
        rows += [_failed_row(seq_id, generator.value, fitted.value, "RF-MLE", e, exc) for e in epsilons]
        return rows
    rows = [fit_row(mle, seq_id, generator.value)]
    for eps in epsilons:
        rf = select_renormalized(seq, mle, eps, rule)
        rows.append(fit_row(rf, seq_id, generator.value))
    return rows


def _task(args):
    times, horizon, seq_id, generator, fitted, epsilons, optimizer, rule = args
    return fit_sequence(EventSequence(times, horizon), seq_id, generator, fitted, epsilons, optimizer, rule)


def write_csv(path, columns, rows) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def summarize(rows: list[dict]) -> tuple[list[dict], list[dict]]:
    """Per-cell summary and improvement-ratio rows from per-sequence rows."""
    cells = {}
    for row in rows:
        key = (row["generator_family"], row["fitted_family"], row["method"], row["epsilon"])
        cells.setdefault(key, []).append(row)

    summary = []
    for (gen, fitted, method, eps), members in cells.items():
        values = [float(r["llh"]) for r in members if r["strategy"] != "FAILED"]
        summary.append(
            {
                "generator_family": gen,
                "fitted_family": fitted,
                "method": method,
                "epsilon": eps,
                "n_sequences": str(len(members)),
                "n_failed": str(len(members) - len(values)),
                "mean_llh": _fmt(statistics.fmean(values)) if values else "nan",
                "std_llh": _fmt(statistics.stdev(values)) if len(values) > 1 else _fmt(0.0),
            }
        )

    mle_llh = {
        (r["sequence_id"], r["fitted_family"]): float(r["llh"])
        for r in rows
        if r["method"] == "MLE" and r["strategy"] != "FAILED"
    }
    improvement = {}
    for row in rows:
        if row["method"] != "RF-MLE":
            continue
        key = (row["fitted_family"], row["epsilon"], row["generator_family"])
        n, improved = improvement.get(key, (0, 0))
        base = mle_llh.get((row["sequence_id"], row["fitted_family"]))
        better = row["strategy"] != "FAILED" and base is not None and float(row["llh"]) > base + IMPROVEMENT_MARGIN
        improvement[key] = (n + 1, improved + int(better))
    improvement_rows = [
        {
            "fitted_family": fitted,
            "epsilon": eps,
            "generator_family": gen,
            "n_sequences": str(n),
            "n_improved": str(improved),
            "improvement_ratio": _fmt(improved / n),
        }
        for (fitted, eps, gen), (n, improved) in sorted(improvement.items(), key=lambda kv: (kv[0][0], -float(kv[0][1]), kv[0][2]))
    ]
    return summary, improvement_rows


def write_reports(horizon_dir) -> None:
    """(Re)generate summary.csv and improvement.csv from per_sequence.csv."""
    horizon_dir = Path(horizon_dir)
    rows = read_csv(horizon_dir / "per_sequence.csv")
    summary, improvement = summarize(rows)
    write_csv(horizon_dir / "summary.csv", SUMMARY_COLUMNS, summary)
    write_csv(horizon_dir / "improvement.csv", IMPROVEMENT_COLUMNS, improvement)


def run_horizon(config: BenchmarkConfig, horizon: float) -> Path:
    """Fit every (generator, sequence, fitted family) at one horizon and write its reports."""
    tasks = []
    for generator in config.generators:
        for k in range(config.sequences_per_cell):
            seq = _load_or_simulate(config, generator, horizon, k)
            seq_id = sequence_id(generator, horizon, k)
            for fitted in config.fitted_families:
                tasks.append(
                    (seq.times, seq.horizon, seq_id, generator, fitted, config.epsilons, config.optimizer, config.window_rule)
                )
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = []
        for i, task in enumerate(tasks):
            log.info("[%s] %d/%d %s -> %s", horizon_label(horizon), i + 1, len(tasks), task[2], task[4].value)
            results.append(_task(task))
    rows = [row for group in results for row in group]
    horizon_dir = Path(config.out_dir) / horizon_label(horizon)
    write_csv(horizon_dir / "per_sequence.csv", FIT_COLUMNS, rows)
    write_reports(horizon_dir)
    return horizon_dir


def cmd_benchmark(config: BenchmarkConfig) -> list[Path]:
    """Run the whole grid; returns the per-horizon report directories."""
    _write_run_metadata(config)
    return [run_horizon(config, h) for h in config.horizons]


def with_overrides(config: BenchmarkConfig, **overrides) -> BenchmarkConfig:
    """Copy of ``config`` with the non-None overrides applied."""
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})

