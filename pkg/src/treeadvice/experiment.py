"""Experiment harness: learning settings S1-S6, metrics rows, summaries.

======  ===================  ==========================
setting teacher              advice checks
======  ===================  ==========================
S1      exact                none
S2      exact                exact
S3      approximate          none
S4      approximate          exact
S5      approximate          sampled state vectors
S6      approximate          counting heuristic, then exact
======  ===================  ==========================

The metrics CSV holds only deterministic columns; wall-clock figures go to a
separate timings file so the CSV is byte-identical across repeated runs.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .advice import APPROX, COUNTING, EXACT, AdviceConfig
from .datagen import Instance, advice_for, read_dataset
from .dfta import equivalent
from .learner import learn
from .oracle import ApproximateTeacher, ExactTeacher, SamplerConfig, make_rng
from .terms import Trs, load_trs

SETTINGS = ("S1", "S2", "S3", "S4", "S5", "S6")
BASELINE = {"S1": "S1", "S2": "S1", "S3": "S3", "S4": "S3", "S5": "S3", "S6": "S3"}
_APPROX_TEACHER = {"S3", "S4", "S5", "S6"}
_CHECK_MODE = {"S2": EXACT, "S4": EXACT, "S5": APPROX, "S6": COUNTING}

CSV_VERSION = 1
CSV_COLUMNS = (
    "instance",
    "setting",
    "repetition",
    "target_states",
    "equivalence_queries",
    "inferred",
    "hypotheses",
    "membership_queries",
    "cache_hits",
    "tokens",
    "learned_states",
    "correct",
    "heuristic_calls",
    "heuristic_rejections",
    "heuristic_unsound",
    "error",
)
TIMING_COLUMNS = ("instance", "setting", "repetition", "wall_time", "simulated_cost")


@dataclass
class ExperimentConfig:
    settings: Tuple[str, ...] = ("S1", "S2")
    dataset: Optional[str] = None
    advice_full: Optional[str] = None
    advice_pos: Optional[str] = None
    advice_neg: Optional[str] = None
    mem_trs: Optional[str] = None
    use_family_advice: bool = True
    cache_modulo_advice: bool = False  # key the membership cache by advice normal forms
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    seed: int = 0
    membership_cost_per_token: float = 0.0  # milliseconds
    repetitions: int = 1
    jobs: int = 1

    def __post_init__(self):
        if isinstance(self.settings, str):
            self.settings = (self.settings,)
        self.settings = tuple(self.settings)
        bad = [s for s in self.settings if s not in SETTINGS]
        if bad:
            raise ValueError(f"unknown settings {bad}; expected a subset of {SETTINGS}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")

    @classmethod
    def from_dict(cls, d: Dict) -> "ExperimentConfig":
        d = dict(d)
        if "setting" in d:
            d["settings"] = (d.pop("setting"),)
        if "sampler" in d and isinstance(d["sampler"], dict):
            d["sampler"] = SamplerConfig(**d["sampler"])
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        cfg = cls.from_dict(json.loads(Path(path).read_text()))
        base = Path(path).parent
        # relative paths in a config file are relative to the file
        for name in ("dataset", "advice_full", "advice_pos", "advice_neg", "mem_trs"):
            value = getattr(cfg, name)
            if value is not None and not Path(value).is_absolute():
                setattr(cfg, name, str(base / value))
        return cfg


@dataclass(frozen=True)
class AdviceFiles:
    full: Optional[Trs] = None
    positive: Optional[Trs] = None
    negative: Optional[Trs] = None
    mem: Optional[Trs] = None


def resolve_advice(cfg: ExperimentConfig, family: str, sig) -> AdviceFiles:
    load = lambda p: load_trs(p, sig) if p else None
    full = load(cfg.advice_full)
    if full is None and cfg.use_family_advice and not (cfg.advice_pos or cfg.advice_neg):
        full = advice_for(family, sig)
    mem = load(cfg.mem_trs)
    if mem is None and cfg.cache_modulo_advice:
        mem = full
    return AdviceFiles(full, load(cfg.advice_pos), load(cfg.advice_neg), mem)


def _run_one(args) -> Tuple[Dict, Dict]:
    inst, setting, rep, cfg, advice = args
    target = inst.dfta
    row = {c: 0 for c in CSV_COLUMNS}
    row.update(instance=inst.id, setting=setting, repetition=rep, target_states=target.n_states, error="")
    start = time.monotonic()
    try:
        if setting in _APPROX_TEACHER:
            teacher = ApproximateTeacher(target, cfg.sampler, make_rng(cfg.seed, inst.id, rep))
        else:
            teacher = ExactTeacher(target)
        config = None
        if setting in _CHECK_MODE:
            config = AdviceConfig(
                full=advice.full,
                positive=advice.positive,
                negative=advice.negative,
                mem=advice.mem,
                check_mode=_CHECK_MODE[setting],
                seed=(cfg.seed, inst.id, rep),
            )
        learned, stats = learn(teacher, config)
        row.update(
            equivalence_queries=stats.equivalence_queries,
            inferred=stats.inferred,
            hypotheses=stats.hypotheses,
            membership_queries=stats.membership_queries,
            cache_hits=stats.cache_hits,
            tokens=stats.tokens,
            learned_states=stats.learned_states,
            correct=int(equivalent(learned, target)),
            heuristic_calls=stats.heuristic_calls,
            heuristic_rejections=stats.heuristic_rejections,
            heuristic_unsound=stats.heuristic_unsound,
        )
    except Exception as exc:  # reported per instance, the batch goes on
        row["error"] = f"{type(exc).__name__}: {exc}".replace("\n", " ")
    wall = time.monotonic() - start
    timing = {
        "instance": inst.id,
        "setting": setting,
        "repetition": rep,
        "wall_time": wall,
        "simulated_cost": wall + row["tokens"] * cfg.membership_cost_per_token / 1000.0,
    }
    return row, timing


def _tasks(instances: Sequence[Instance], cfg: ExperimentConfig, advice: Dict[Tuple, AdviceFiles]):
    for setting in cfg.settings:
        for inst in instances:
            for rep in range(cfg.repetitions):
                yield inst, setting, rep, cfg, advice[inst.family, inst.dfta.signature]


def run_experiment(cfg: ExperimentConfig, instances: Optional[Sequence[Instance]] = None) -> Tuple[List[Dict], List[Dict]]:
    """Metrics rows and timing rows, ordered by setting, instance, repetition.

    The advice-free settings ignore membership-cache rules: the cache rules
    must be part of the full advice, which those settings do not have.
    """
    if instances is None:
        if cfg.dataset is None:
            raise ValueError("no dataset given")
        _, instances = read_dataset(cfg.dataset)
    advice = {}
    for inst in instances:
        key = inst.family, inst.dfta.signature
        if key not in advice:
            advice[key] = resolve_advice(cfg, inst.family, inst.dfta.signature)
    tasks = list(_tasks(instances, cfg, advice))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=4))
    else:
        results = [_run_one(t) for t in tasks]
    rows = [r for r, _ in results]
    timings = [t for _, t in results]
    return rows, timings


def metrics_csv(rows: Iterable[Dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r[c] for c in CSV_COLUMNS})
    return buf.getvalue()


def timings_csv(timings: Iterable[Dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TIMING_COLUMNS, lineterminator="\n")
    w.writeheader()
    for t in timings:
        w.writerow({c: (f"{t[c]:.6f}" if isinstance(t[c], float) else t[c]) for c in TIMING_COLUMNS})
    return buf.getvalue()


# -- aggregation ----------------------------------------------------------------------


def _by_setting(rows: Iterable[Dict]) -> Dict[str, Dict[Tuple[int, int], Dict]]:
    out: Dict[str, Dict[Tuple[int, int], Dict]] = {}
    for r in rows:
        out.setdefault(r["setting"], {})[int(r["instance"]), int(r["repetition"])] = r
    return out


def reductions(base: Dict[Tuple[int, int], Dict], other: Dict[Tuple[int, int], Dict], key: str = "equivalence_queries") -> List[float]:
    """Per-run relative reduction ``1 - other/base`` on runs present in both."""
    out = []
    for k in sorted(base.keys() & other.keys()):
        b, o = base[k], other[k]
        if b["error"] or o["error"] or float(b[key]) == 0:
            continue
        out.append(1.0 - float(o[key]) / float(b[key]))
    return out


def break_even(adv_wall: float, adv_tokens: float, base_wall: float, base_tokens: float) -> Optional[float]:
    """Smallest cost per token (seconds) from which advice has lower mean cost.

    ``None`` if advice never wins.
    """
    saved_tokens = base_tokens - adv_tokens
    extra_wall = adv_wall - base_wall
    if saved_tokens > 0:
        return max(0.0, extra_wall / saved_tokens)
    return 0.0 if extra_wall < 0 else None


def _mean(xs):
    return statistics.fmean(xs) if xs else float("nan")


def summarize(rows: Sequence[Dict], timings: Optional[Sequence[Dict]] = None) -> Dict[str, Dict]:
    groups = _by_setting(rows)
    walls: Dict[str, Dict[Tuple[int, int], float]] = {}
    for t in timings or ():
        walls.setdefault(t["setting"], {})[int(t["instance"]), int(t["repetition"])] = float(t["wall_time"])
    summary = {}
    for setting in sorted(groups):
        runs = groups[setting]
        ok = [r for r in runs.values() if not r["error"]]
        entry = {
            "runs": len(runs),
            "errors": len(runs) - len(ok),
            "accuracy": _mean([int(r["correct"]) for r in runs.values()]),
            "mean_equivalence_queries": _mean([int(r["equivalence_queries"]) for r in ok]),
            "mean_membership_queries": _mean([int(r["membership_queries"]) for r in ok]),
            "mean_tokens": _mean([int(r["tokens"]) for r in ok]),
            "heuristic_unsound": sum(int(r["heuristic_unsound"]) for r in runs.values()),
        }
        if setting in walls:
            entry["mean_wall_time"] = _mean(list(walls[setting].values()))
        base_name = BASELINE[setting]
        if base_name != setting and base_name in groups:
            base = groups[base_name]
            red = reductions(base, runs)
            shared = sorted(base.keys() & runs.keys())
            mb = _mean([int(base[k]["equivalence_queries"]) for k in shared])
            mo = _mean([int(runs[k]["equivalence_queries"]) for k in shared])
            entry.update(
                baseline=base_name,
                mean_reduction=_mean(red),
                median_reduction=statistics.median(red) if red else float("nan"),
                reduction_of_means=1.0 - mo / mb if mb else float("nan"),
            )
            if setting in walls and base_name in walls:
                keys = sorted(walls[setting].keys() & walls[base_name].keys())
                if keys:
                    cost = break_even(
                        _mean([walls[setting][k] for k in keys]),
                        _mean([int(runs[k]["tokens"]) for k in keys]),
                        _mean([walls[base_name][k] for k in keys]),
                        _mean([int(base[k]["tokens"]) for k in keys]),
                    )
                    entry["break_even_ms_per_token"] = None if cost is None else cost * 1000.0
        summary[setting] = entry
    return summary


def write_results(out_dir, cfg: ExperimentConfig, rows: Sequence[Dict], timings: Sequence[Dict]) -> Dict[str, Path]:
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    paths = {
        "metrics": root / "metrics.csv",
        "timings": root / "timings.csv",
        "json": root / "results.json",
    }
    paths["metrics"].write_text(metrics_csv(rows))
    paths["timings"].write_text(timings_csv(timings))
    cfg_dict = asdict(cfg)
    doc = {
        "csv_version": CSV_VERSION,
        "config": cfg_dict,
        "rows": [dict(r, **{k: t[k] for k in ("wall_time", "simulated_cost")}) for r, t in zip(rows, timings)],
        "summary": summarize(rows, timings),
    }
    paths["json"].write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return paths


def read_rows(path) -> Tuple[List[Dict], List[Dict]]:
    """Rows (and timings, when present) from a results JSON or a metrics CSV."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        rows = doc["rows"]
        timings = [{k: r[k] for k in TIMING_COLUMNS} for r in rows if "wall_time" in r]
        return rows, timings
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    timings_path = path.with_name("timings.csv")
    timings = []
    if timings_path.exists():
        with timings_path.open(newline="") as fh:
            timings = list(csv.DictReader(fh))
    return rows, timings


def dataset_of(path) -> Optional[str]:
    """Dataset recorded next to a results file, if any."""
    path = Path(path)
    doc_path = path if path.suffix == ".json" else path.with_name("results.json")
    if not doc_path.exists():
        return None
    return json.loads(doc_path.read_text()).get("config", {}).get("dataset")


def format_summary(summary: Dict[str, Dict]) -> str:
    lines = []
    for setting, e in summary.items():
        parts = [f"{setting}: runs={e['runs']} errors={e['errors']} accuracy={e['accuracy']:.3f}"]
        parts.append(f"eq={e['mean_equivalence_queries']:.2f} mq={e['mean_membership_queries']:.1f} tokens={e['mean_tokens']:.1f}")
        if "mean_reduction" in e:
            parts.append(
                f"vs {e['baseline']}: mean reduction={e['mean_reduction']:.1%} median={e['median_reduction']:.1%}"
                f" of-means={e['reduction_of_means']:.1%}"
            )
        if "break_even_ms_per_token" in e:
            be = e["break_even_ms_per_token"]
            parts.append("break-even=never" if be is None else f"break-even={be:.4f} ms/token")
        lines.append("  ".join(parts))
    return "\n".join(lines)
