"""Command line: ``ordsec gen|run|verify|lower-bound``.

Exit codes: 0 success, 1 a property check failed, 2 invalid config,
3 infeasible algorithm output, 4 oracle capability exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .errors import CapabilityError, ContractError, FeasibilityError, ParameterError

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_FEASIBILITY, EXIT_CAPABILITY = 0, 1, 2, 3, 4


def _params(pairs):
    from .harness import _number

    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise ParameterError(f"--param expects key=value, got {item!r}")
        out[key] = _number(val)
    return out


def _cmd_gen(args):
    from .harness import ExperimentConfig, make_instance
    from .instances import dump_instance

    if not args.problem or not args.n:
        raise ParameterError("gen needs --problem and --n")
    cfg = ExperimentConfig(args.problem, args.n, seed=args.seed, params=_params(args.param))
    text = None
    for i in range(args.instances):
        inst = make_instance(cfg, i)
        note = f"problem={args.problem} n={args.n} seed={args.seed} instance={i}"
        if args.out:
            path = args.out if args.instances == 1 else f"{args.out}.{i}"
            dump_instance(inst, path, comment=note)
        else:
            text = dump_instance(inst, comment=note)
            sys.stdout.write(text)
    return EXIT_OK


def _cmd_run(args):
    from .harness import ExperimentConfig, load_config, run_experiment

    if args.config:
        cfg = load_config(args.config)
    elif args.problem and args.n:
        cfg = ExperimentConfig(args.problem, args.n)
    else:
        raise ParameterError("run needs a config file or --problem and --n")
    overrides = {"seed": args.seed_given, "trials": args.trials, "p": args.p, "out": args.out,
                 "algorithm": args.algorithm, "instances": args.instances_given, "transform": args.transform}
    kw = {k: v for k, v in vars(cfg).items()}
    kw.update({k: v for k, v in overrides.items() if v is not None})
    if args.problem:
        kw["problem"] = args.problem
    if args.n:
        kw["n"] = args.n
    kw["params"] = {**cfg.params, **_params(args.param)}
    cfg = ExperimentConfig(**kw)
    result = run_experiment(cfg)
    if args.format == "csv" and not cfg.out:
        sys.stdout.write(result.csv_text())
    else:
        sys.stdout.write(result.summary_text())
    return EXIT_OK


def _cmd_verify(args):
    from .verify import run_all

    checks = run_all(args.seed)
    for c in checks:
        print(f"[{'PASS' if c.ok else 'FAIL'}] {c.name}: {c.detail}")
    return EXIT_OK if all(c.ok for c in checks) else EXIT_CHECK


def _cmd_lower_bound(args):
    from .matroid import best_deterministic_threshold, lower_bound_formula

    sizes = args.sizes or ([args.n] if args.n else [100, 400, 2500])
    trials = args.trials or 200
    rows = []
    for n in sizes:
        sw = best_deterministic_threshold(n, trials=trials, seed=args.seed)
        bound = lower_bound_formula(n, sw.k)
        rows.append((n, sw.k, sw.position, sw.value, sw.stderr, sw.ratio, bound, sw.ratio >= 0.9 * bound))
    if args.format == "csv":
        print("n,k,threshold,mean_value,se,ratio,formula,meets_0.9_formula")
        for r in rows:
            print(",".join(repr(x) if isinstance(x, float) else str(int(x) if isinstance(x, bool) else x)
                           for x in r))
    else:
        for n, k, t, v, se, ratio, bound, ok in rows:
            print(f"n={n:5d} k={k:3d} best threshold={t:5d} E[value]={v:.4f}±{se:.4f} "
                  f"ratio={ratio:.4f} formula={bound:.4f} 0.9*formula={'met' if ok else 'not met'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ordsec", description="Ordinal secretary algorithms and experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, trials=True):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--problem", default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "summary"), default="summary")
        p.add_argument("--param", action="append", metavar="KEY=VALUE")
        if trials:
            p.add_argument("--trials", type=int, default=None)
            p.add_argument("--p", type=float, default=None)

    g = sub.add_parser("gen", help="emit instance files")
    common(g, trials=False)
    g.add_argument("--instances", type=int, default=1)

    r = sub.add_parser("run", help="run an experiment from a config file")
    r.add_argument("config", nargs="?")
    common(r)
    r.add_argument("--algorithm", default=None)
    r.add_argument("--instances", type=int, default=None)
    r.add_argument("--transform", choices=("none", "cubic"), default=None)

    v = sub.add_parser("verify", help="run the property suites")
    common(v)

    lb = sub.add_parser("lower-bound", help="best deterministic threshold on the lower-bound family")
    common(lb)
    lb.add_argument("--sizes", type=int, nargs="*")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.seed_given = args.seed
    args.instances_given = getattr(args, "instances", None)
    if args.seed is None:
        args.seed = 0
    handler = {"gen": _cmd_gen, "run": _cmd_run, "verify": _cmd_verify, "lower-bound": _cmd_lower_bound}
    try:
        return handler[args.command](args)
    except FeasibilityError as exc:
        print(f"feasibility violation: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except CapabilityError as exc:
        print(f"capability exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ParameterError, ContractError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
