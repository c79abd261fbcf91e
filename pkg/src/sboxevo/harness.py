"""Multi-run experiments: seeding, record files, summaries and exports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .encodings import get_encoding
from .search import RunRecord, SearchConfig, nsga2, random_search, steady_state_ea

log = logging.getLogger(__name__)

ALGORITHMS = ("ea", "rs", "nsga2")
FULL_BUDGET = 500_000
DESK_BUDGET = 100_000  # default for n >= 7 unless paper_budget is set
SUMMARY_COLUMNS = ("size", "encoding", "algorithm", "min", "avg", "std", "balanced_runs")


@dataclass
class ExperimentConfig:
    sizes: list[int] = field(default_factory=lambda: [4])
    encodings: list[str] = field(default_factory=lambda: ["permutation"])
    algorithms: list[str] = field(default_factory=lambda: ["ea"])
    runs: int = 30
    base_seed: int = 0
    budget: Optional[int] = None
    pop_size: int = 500
    mutation_prob: float = 0.7
    output_dir: Optional[str] = None
    paper_budget: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        self.encodings = [get_encoding(e).name for e in self.encodings]
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")

    def budget_for(self, n: int) -> int:
        if self.budget is not None:
            return self.budget
        return FULL_BUDGET if self.paper_budget or n < 7 else DESK_BUDGET


def hash64(*parts) -> int:
    digest = hashlib.blake2b("|".join(map(str, parts)).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def run_seed(base_seed: int, n: int, encoding: str, algorithm: str, k: int) -> int:
    return (base_seed ^ hash64(n, encoding, algorithm)) + k


@dataclass(frozen=True)
class RunSpec:
    algorithm: str
    run: int
    search: SearchConfig


def expand(cfg: ExperimentConfig) -> list[RunSpec]:
    specs = []
    for n in cfg.sizes:
        for enc in cfg.encodings:
            for algo in cfg.algorithms:
                for k in range(cfg.runs):
                    sc = SearchConfig(
                        encoding=enc, n=n, pop_size=cfg.pop_size,
                        mutation_prob=cfg.mutation_prob, budget=cfg.budget_for(n),
                        seed=run_seed(cfg.base_seed, n, enc, algo, k),
                        objective="multi" if algo == "nsga2" else "single",
                    )
                    specs.append(RunSpec(algo, k, sc))
    return specs


def run_one(spec: RunSpec) -> RunRecord:
    if spec.algorithm == "ea":
        rec = steady_state_ea(spec.search)
    elif spec.algorithm == "rs":
        rec = random_search(spec.search)
    elif spec.algorithm == "nsga2":
        rec = nsga2(spec.search)[1]
    else:
        raise ValueError(f"unknown algorithm {spec.algorithm!r}")
    rec.config["run"] = spec.run
    return rec


def record_filename(rec: RunRecord) -> str:
    c = rec.config
    return f"{c['n']}_{c['encoding']}_{rec.algorithm}_{c['run']:03d}.json"


def dump_record(rec: RunRecord) -> str:
    return json.dumps(rec.to_dict(), sort_keys=True, indent=1) + "\n"


def load_record(text: str) -> RunRecord:
    return RunRecord.from_dict(json.loads(text))


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[RunRecord]:
    """Run every expanded configuration; records come back in expansion order.

    With ``output_dir`` set, each record is written to ``<output_dir>/runs/``.
    """
    specs = expand(cfg)
    run_dir = None
    if cfg.output_dir is not None:
        run_dir = Path(cfg.output_dir) / "runs"
        run_dir.mkdir(parents=True, exist_ok=True)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_one, specs))
    else:
        records = []
        for spec in specs:
            records.append(run_one(spec))
            log.info("%s n=%d %s run %d: best %s (%.1fs)", spec.algorithm, spec.search.n,
                     spec.search.encoding, spec.run, records[-1].best_fitness,
                     records[-1].wall_time)
    if run_dir is not None:
        for rec in records:
            (run_dir / record_filename(rec)).write_text(dump_record(rec))
    return records


def load_records(directory: str | Path) -> list[RunRecord]:
    directory = Path(directory)
    run_dir = directory / "runs" if (directory / "runs").is_dir() else directory
    return [load_record(p.read_text()) for p in sorted(run_dir.glob("*.json"))]


# -- summaries ---------------------------------------------------------------


@dataclass(frozen=True)
class SummaryRow:
    """Min/avg/sample-std of the best fitness over runs that ended balanced.

    The statistics are None (printed as '-') when no run found a balanced
    S-box.
    """

    size: int
    encoding: str
    algorithm: str
    min: Optional[float]
    avg: Optional[float]
    std: Optional[float]
    balanced_runs: int


def _triple(rec: RunRecord) -> tuple[int, str, str]:
    return rec.config["n"], rec.config["encoding"], rec.algorithm


def summarize(records: Iterable[RunRecord]) -> list[SummaryRow]:
    groups: dict[tuple[int, str, str], list[int]] = {}
    for rec in records:
        vals = groups.setdefault(_triple(rec), [])
        if rec.bal == 0:
            vals.append(rec.best_fitness)
    rows = []
    for (n, enc, algo), vals in sorted(groups.items()):
        if not vals:
            rows.append(SummaryRow(n, enc, algo, None, None, None, 0))
            continue
        std = statistics.stdev(vals) if len(vals) > 1 else 0.0
        rows.append(SummaryRow(n, enc, algo, min(vals), statistics.fmean(vals), std, len(vals)))
    return rows


def pareto_union(records: Iterable[RunRecord]) -> list[tuple[int, int, str]]:
    """Distinct (beta, delta, encoding) points over all final fronts.

    Deliberately not filtered for dominance across runs.
    """
    points = set()
    for rec in records:
        for beta, delta, _ in rec.front:
            points.add((beta, delta, rec.config["encoding"]))
    return sorted(points)


def convergence_rows(records: Iterable[RunRecord]) -> list[tuple]:
    rows = []
    for rec in records:
        n, enc, algo = _triple(rec)
        for evaluation, fitness in rec.convergence:
            rows.append((n, enc, algo, rec.config["run"], evaluation, fitness))
    return rows


def _best_at(series: Sequence[tuple[int, int]], evaluation: int) -> Optional[int]:
    best = None
    for e, f in series:
        if e > evaluation:
            break
        best = f
    return best


def median_convergence(records: Iterable[RunRecord], stride: int = 1000) -> list[tuple]:
    """Per-triple median of the best-so-far fitness on a grid of evaluations."""
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault(_triple(rec), []).append(rec)
    rows = []
    for key, recs in sorted(groups.items()):
        last = max(r.evaluations for r in recs)
        grid = list(range(stride, last + 1, stride))
        if not grid or grid[-1] != last:
            grid.append(last)
        for e in grid:
            vals = [v for v in (_best_at(r.convergence, e) for r in recs) if v is not None]
            if vals:
                rows.append((*key, e, statistics.median(vals)))
    return rows


# -- export ------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def summary_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def summary_json(rows: Iterable[SummaryRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


def parse_summary_json(text: str) -> list[SummaryRow]:
    return [SummaryRow(**d) for d in json.loads(text)]


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def pareto_csv(points: Iterable[tuple[int, int, str]]) -> str:
    return _csv(("beta", "delta", "encoding"), points)


def convergence_csv(records: Iterable[RunRecord]) -> str:
    return _csv(("size", "encoding", "algorithm", "run", "evaluation", "fitness"),
                convergence_rows(records))


def median_convergence_csv(records: Iterable[RunRecord]) -> str:
    return _csv(("size", "encoding", "algorithm", "evaluation", "median_fitness"),
                median_convergence(records))


def records_json(records: Iterable[RunRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], sort_keys=True, indent=1) + "\n"


def parse_records_json(text: str) -> list[RunRecord]:
    return [RunRecord.from_dict(d) for d in json.loads(text)]


def write_outputs(records: Sequence[RunRecord], out_dir: str | Path) -> dict[str, Path]:
    """Summary, convergence and (for NSGA-II runs) Pareto-union files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = summarize(records)
    files = {
        "summary.csv": summary_csv(rows),
        "summary.json": summary_json(rows),
        "convergence.csv": convergence_csv(records),
        "convergence_median.csv": median_convergence_csv(records),
    }
    multi = [r for r in records if r.algorithm == "nsga2"]
    if multi:
        files["pareto_union.csv"] = pareto_csv(pareto_union(multi))
    written = {}
    for name, text in files.items():
        (out / name).write_text(text)
        written[name] = out / name
    return written


# -- config files ------------------------------------------------------------

_LIST_KEYS = {"sizes": int, "encodings": str, "algorithms": str}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; lists are comma separated, '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _LIST_KEYS:
            values[key] = [_LIST_KEYS[key](v.strip()) for v in val.split(",") if v.strip()]
        elif key in ("runs", "base_seed", "pop_size", "budget"):
            values[key] = int(val)
        elif key == "mutation_prob":
            values[key] = float(val)
        elif key == "paper_budget":
            values[key] = val.lower() in ("1", "true", "yes", "on")
        elif key == "output_dir":
            values[key] = val
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return values
