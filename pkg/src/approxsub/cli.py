"""Command-line driver.

Subcommands: verify, distinguish, sweep, trap, sample, bench, generate.
Exit codes: 0 = pass, 1 = counterexample or violated bound, 2 = rejected
preconditions or bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import experiments
from .adversarial import (
    build_coverage_pair,
    build_greedy_trap,
    build_monotone_pair,
    build_sandwich,
    draw_hidden_set,
    gap_bound,
    power_law_params,
)
from .functions import instance_from_dict
from .noise import noise_from_dict
from .verify import check_concentration, check_monotone, check_sandwich, check_submodular

EXIT_PASS = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_REJECTED = 2


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(rows, args, default_stdout=False):
    if args.out:
        experiments.emit_report(rows, args.out, args.format)
        print(f"wrote {len(rows)} rows to {args.out}")
    elif default_stdout:
        for row in rows:
            print(json.dumps({k: experiments._json_cell(v) for k, v in row.items()},
                             sort_keys=True))


def _cmd_verify(args) -> int:
    prop = args.property
    if prop == "concentration":
        if None in (args.n, args.h, args.set_size, args.epsilon):
            raise ValueError("concentration needs --n, --h, --set-size, --epsilon")
        report = check_concentration(
            args.n, args.h, args.set_size, args.epsilon,
            method=args.mode if args.mode in ("exact", "mc") else "exact",
            trials=args.trials, seed=args.seed,
        )
        print(f"concentration n={report.n} h={report.h} |S|={report.set_size} "
              f"eps={report.epsilon}: measured={report.measured:.6f} "
              f"reference={report.reference:.6f} "
              f"[{'pass' if report.passed else 'FAIL'}]")
        return EXIT_PASS if report.passed else EXIT_COUNTEREXAMPLE

    if prop in ("submodular", "monotone"):
        if args.instance:
            inst = instance_from_dict(_load_json(args.instance))
        else:
            raise ValueError("--instance required for submodular/monotone checks")
        check = check_submodular if prop == "submodular" else check_monotone
        report = check(inst, inst.n)
        print(f"{report.property_name} {report.instance}: "
              f"{'pass' if report.passed else 'FAIL'} "
              f"({report.examined} checks)"
              + ("" if report.passed else f"; counterexample: {report.counterexample}"))
        return EXIT_PASS if report.passed else EXIT_COUNTEREXAMPLE

    if prop == "sandwich":
        if not args.config:
            raise ValueError("--config required for the sandwich check")
        cfg = _load_json(args.config)
        if "construction" in cfg:
            c = cfg["construction"]
            from .adversarial import HardPairParams

            params = HardPairParams(
                n=c["n"], h=c["h"], alpha=c["alpha"], k=c["k"], epsilon=c["epsilon"],
            )
            hidden = draw_hidden_set(params.n, params.h, cfg.get("seed", args.seed))
            pair = (build_coverage_pair if c.get("family") == "coverage"
                    else build_monotone_pair)(params, hidden)
            F = build_sandwich(pair)
            f = pair.fh
            epsilon = params.epsilon
            n = params.n
        else:
            f = instance_from_dict(cfg["instance"])
            F = noise_from_dict(f, cfg["noise"])
            epsilon = cfg["noise"]["epsilon"]
            n = f.n
        mode = cfg.get("mode", args.mode or "exhaustive")
        report = check_sandwich(
            F, f, epsilon, n, mode=mode,
            trials=cfg.get("trials", args.trials), seed=cfg.get("seed", args.seed),
        )
        print(f"sandwich {report.instance}: {'pass' if report.passed else 'FAIL'} "
              f"({report.examined} sets)")
        return EXIT_PASS if report.passed else EXIT_COUNTEREXAMPLE

    raise ValueError(f"unknown property {prop!r}")


def _cmd_distinguish(args) -> int:
    rows, summary = experiments.run_distinguishability(
        args.n, args.beta, args.trials, args.seed, threads=args.threads,
    )
    _emit(rows, args)
    print(json.dumps({"summary": summary}, sort_keys=True, default=str))
    bound = summary["gap_bound"]
    bad = [r for r in rows if r["band_escapes"] == 0 and r["ratio"] > bound + 1e-12]
    return EXIT_COUNTEREXAMPLE if bad else EXIT_PASS


def _cmd_sweep(args) -> int:
    cfg = _load_json(args.config) if args.config else {}
    k = cfg.get("k", 4)
    delta_grid = cfg.get("delta_grid", [0.0, 0.5, 1.0 - 1e-9])
    seeds = cfg.get("seeds", list(range(10)))
    if "instances" in cfg:
        instances = [instance_from_dict(d) for d in cfg["instances"]]
    else:
        corpus = experiments.instance_corpus(
            cfg.get("corpus_seed", args.seed), sizes=tuple(cfg.get("sizes", (8, 10))),
        )
        instances = corpus[: cfg.get("count", len(corpus))]
    rows = experiments.run_noise_sweep(instances, k, delta_grid, seeds,
                                       threads=args.threads)
    _emit(rows, args)
    bad = [r for r in rows if not r.get("ok", True)]
    print(f"sweep: {len(rows)} runs, {len(bad)} below the guarantee")
    return EXIT_COUNTEREXAMPLE if bad else EXIT_PASS


def _cmd_trap(args) -> int:
    if args.curve:
        rows = experiments.run_trap_curve(args.curve, args.beta)
        _emit(rows, args, default_stdout=True)
        return EXIT_PASS
    rows, summary = experiments.run_trap(args.k, args.beta, args.n)
    _emit(rows, args)
    print(f"trap k={args.k} beta={args.beta} n={args.n}: "
          f"claimed greedy value = {summary['claimed_greedy_value']:.6f}, "
          f"measured greedy value = {summary['measured_greedy_value']:.6f}")
    if summary["discrepancy"]:
        print(f"DISCREPANCY: {summary['note']}")
    return EXIT_PASS


def _cmd_sample(args) -> int:
    cfg = _load_json(args.config) if args.config else {}
    if "instance" in cfg:
        f = instance_from_dict(cfg["instance"])
    else:
        # Default fixture: every element covers the same shared block, so the
        # value range over nonempty sets is a single point.
        from .functions import CoverageFunction

        n = cfg.get("n", 12)
        shared = list(range(cfg.get("alpha", 5)))
        f = CoverageFunction(cfg.get("alpha", 5), [shared] * n)
    rows, summary = experiments.run_sampling_validation(
        f,
        epsilon=cfg.get("epsilon", 0.1),
        confidence_constant=cfg.get("confidence_constant", 3.0),
        trials=cfg.get("trials", 100),
        seed=cfg.get("seed", args.seed),
        k=cfg.get("k", 4),
        width=cfg.get("width", 0.5),
        family=cfg.get("family", "uniform-relative"),
    )
    _emit(rows, args)
    print(json.dumps({"summary": summary}, sort_keys=True))
    ok = summary["violating_fraction"] <= summary["prediction"] + 1e-12
    return EXIT_PASS if ok else EXIT_COUNTEREXAMPLE


def _cmd_bench(args) -> int:
    rows = experiments.run_bench(args.seed)
    _emit(rows, args, default_stdout=True)
    return EXIT_PASS


def _cmd_generate(args) -> int:
    meta: dict
    if args.construction == "trap":
        trap = build_greedy_trap(args.k, args.beta, args.n)
        meta = {
            "construction": "trap", "n": trap.n, "k": trap.k, "beta": trap.beta,
            "epsilon": float(trap.epsilon),
            "blocks": {"A": trap.a_elements, "B": trap.b_elements, "C": trap.c_elements},
            "override_value": float(trap.override_value),
            "override_sets": len(trap.c_elements),
        }
    else:
        params = power_law_params(args.n, args.beta)
        hidden = draw_hidden_set(params.n, params.h, args.seed)
        if args.construction == "coverage":
            build_coverage_pair(params, hidden)
        else:
            build_monotone_pair(params, hidden)
        meta = {
            "construction": args.construction, "n": params.n, "h": params.h,
            "alpha": params.alpha, "k": params.k, "epsilon": params.epsilon,
            "beta": args.beta, "seed": args.seed,
            "gap_bound": float(gap_bound(params)),
            "hidden": hidden.subset.elements(),
        }
    text = json.dumps(meta, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote instance metadata to {args.out}")
    else:
        print(text)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approxsub",
        description="Maximize approximately submodular functions; generate and "
                    "verify adversarial instances.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON config path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="report output path")
    common.add_argument("--format", choices=("csv", "structured"), default="csv")
    common.add_argument(
        "--threads", type=int,
        default=int(os.environ.get("APPROXSUB_THREADS", "1")),
        help="trial parallelism (env APPROXSUB_THREADS)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="property checks")
    p.add_argument("--property", required=True,
                   choices=("submodular", "monotone", "sandwich", "concentration"))
    p.add_argument("--instance", default=None, help="instance JSON path")
    p.add_argument("--mode", default=None, help="exhaustive|sampled|exact|mc")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--h", type=int, default=None)
    p.add_argument("--set-size", type=int, dest="set_size", default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("distinguish", parents=[common],
                       help="decoy-following experiment at scale")
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--beta", type=float, default=0.25)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_distinguish)

    p = sub.add_parser("sweep", parents=[common], help="greedy noise sweep")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("trap", parents=[common], help="greedy trap reproduction")
    p.add_argument("--k", type=int, default=16)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--curve", type=int, nargs="*", default=None,
                   help="budgets for a ratio-vs-budget curve")
    p.set_defaults(func=_cmd_trap)

    p = sub.add_parser("sample", parents=[common], help="sampling-rule validation")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bench", parents=[common], help="timing of core operations")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("generate", parents=[common],
                       help="emit adversarial instance metadata")
    p.add_argument("--construction", required=True,
                   choices=("monotone", "coverage", "trap"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--k", type=int, default=16, help="budget (trap only)")
    p.set_defaults(func=_cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
