"""Command line interface: ``treeadvice gen|learn|check|synth|experiment|report``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .advice import CHECK_MODES, AdviceConfig
from .consistency import FULL, MODES, check, heuristic_filter, violation_to_tree_pair
from .datagen import FAMILIES, default_spec, generate_dataset, write_dataset
from .dfta import equivalent, load_dfta, minimize, save_dfta
from .experiment import SETTINGS, ExperimentConfig, dataset_of, format_summary, read_rows, run_experiment, summarize, write_results
from .learner import learn
from .oracle import ApproximateTeacher, ExactTeacher, SamplerConfig, make_rng
from .synthesis import context_rule_exists, ground_characterization
from .terms import Trs, dump_trs, load_trs


def _gen(args) -> int:
    overrides = json.loads(Path(args.spec).read_text()) if args.spec else {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.count is not None:
        overrides["count"] = args.count
    for name in ("alphabet_size", "state_count"):
        if name in overrides:
            overrides[name] = tuple(overrides[name])
    spec = default_spec(args.family, **overrides)
    instances, info = generate_dataset(args.family, spec, drop_trivial=not args.keep_trivial)
    manifest = write_dataset(args.out, args.family, spec, instances, info)
    print(f"wrote {len(instances)} instances to {manifest.parent} ({info['attempts']} attempts)")
    return 0


def _load_advice(args, sig) -> AdviceConfig:
    load = lambda p: load_trs(p, sig) if p else None
    return AdviceConfig(
        full=load(args.advice_full),
        positive=load(args.advice_pos),
        negative=load(args.advice_neg),
        mem=load(args.mem_trs),
        check_mode=args.check_mode,
        seed=args.seed,
    )


def _learn(args) -> int:
    target = minimize(load_dfta(args.dfta))
    advice = _load_advice(args, target.signature)
    if args.approx:
        sampler = SamplerConfig(sample_count=args.samples, max_tree_size=args.max_tree_size, seed=args.seed)
        teacher = ApproximateTeacher(target, sampler, make_rng(args.seed))
    else:
        teacher = ExactTeacher(target)
    learned, stats = learn(teacher, advice)
    for name, value in vars(stats).items():
        print(f"{name}: {value}")
    print(f"correct: {int(equivalent(learned, target))}")
    if args.out:
        save_dfta(learned, args.out)
    return 0


def _check(args) -> int:
    a = minimize(load_dfta(args.dfta))
    trs = load_trs(args.trs, a.signature)
    if args.heuristic:
        for rule in trs:
            if rule.linear:
                verdict = heuristic_filter(a, rule, args.mode)
                print(f"{rule}: {verdict.value}")
            else:
                print(f"{rule}: non-linear, exact check only")
    v = check(a, trs, args.mode)
    if v is None:
        print(f"consistent ({args.mode})")
        return 0
    s, t = violation_to_tree_pair(a, v)
    names = [a.state_names[q] for q in v.witness]
    print(f"inconsistent ({args.mode}): rule {v.rule} at states {names}")
    print(f"  lhs state {a.state_names[v.lhs_state]}, rhs state {a.state_names[v.rhs_state]}")
    print(f"  {s} ({'accepted' if a.accepts(s) else 'rejected'}) -> {t} ({'accepted' if a.accepts(t) else 'rejected'})")
    return 1


def _synth(args) -> int:
    a = minimize(load_dfta(args.dfta))
    if args.context_rule:
        rule = context_rule_exists(a)
        if rule is None:
            print("# no consistent context rule exists")
            return 1
        print(dump_trs(Trs([rule], a.signature)), end="")
        return 0
    print(dump_trs(ground_characterization(a)), end="")
    return 0


def _experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.dataset:
        cfg.dataset = args.dataset
    if args.settings:
        cfg.settings = tuple(args.settings.split(","))
        cfg.__post_init__()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.jobs is not None:
        cfg.jobs = args.jobs
    rows, timings = run_experiment(cfg)
    paths = write_results(args.out, cfg, rows, timings)
    print(format_summary(summarize(rows, timings)))
    print(f"metrics: {paths['metrics']}")
    return 0


def _report(args) -> int:
    datasets = {dataset_of(p) for p in args.files} - {None}
    if len(datasets) > 1:
        print(f"error: results come from different datasets: {sorted(datasets)}", file=sys.stderr)
        return 2
    rows, timings = [], []
    for path in args.files:
        r, t = read_rows(path)
        rows.extend(r)
        timings.extend(t)
    summary = summarize(rows, timings)
    print(format_summary(summary))
    if args.json:
        Path(args.json).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treeadvice", description="Tree automata learning with rewrite-system advice.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a dataset")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--spec", help="JSON file with generator parameters")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--keep-trivial", action="store_true")
    g.set_defaults(func=_gen)

    l = sub.add_parser("learn", help="learn a target DFTA from a file")
    l.add_argument("--dfta", required=True)
    l.add_argument("--advice-full")
    l.add_argument("--advice-pos")
    l.add_argument("--advice-neg")
    l.add_argument("--mem-trs")
    l.add_argument("--check-mode", choices=CHECK_MODES, default="exact")
    l.add_argument("--approx", action="store_true", help="sampled equivalence queries")
    l.add_argument("--samples", type=int, default=SamplerConfig.sample_count)
    l.add_argument("--max-tree-size", type=int, default=SamplerConfig.max_tree_size)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--out", help="write the learned DFTA here")
    l.set_defaults(func=_learn)

    c = sub.add_parser("check", help="check a TRS against a DFTA")
    c.add_argument("--dfta", required=True)
    c.add_argument("--trs", required=True)
    c.add_argument("--mode", choices=MODES, default=FULL)
    c.add_argument("--heuristic", action="store_true")
    c.set_defaults(func=_check)

    s = sub.add_parser("synth", help="synthesize advice from a DFTA")
    s.add_argument("--dfta", required=True)
    how = s.add_mutually_exclusive_group()
    how.add_argument("--ground", action="store_true", help="ground characterization (default)")
    how.add_argument("--context-rule", action="store_true")
    s.set_defaults(func=_synth)

    e = sub.add_parser("experiment", help="run learning settings on a dataset")
    e.add_argument("--config", help="JSON experiment config")
    e.add_argument("--dataset")
    e.add_argument("--settings", help=f"comma separated subset of {','.join(SETTINGS)}")
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int)
    e.add_argument("--jobs", type=int)
    e.set_defaults(func=_experiment)

    r = sub.add_parser("report", help="summarize result files")
    r.add_argument("files", nargs="+")
    r.add_argument("--json", help="also write the summary as JSON")
    r.set_defaults(func=_report)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
