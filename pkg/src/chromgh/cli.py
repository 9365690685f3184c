"""Command-line interface.

Exit codes: 0 success, 1 computational error (validation, budgets, missing
constrained maps reported as values, etc.), 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import io
from .cech import cech_filtration, chromatic_filtration
from .constraints import ConstraintSet, compare_strength, sigma_family, topology
from .errors import BudgetExceeded, ChromghError, ParseError
from .examples import EXAMPLE_NAMES, gen_example
from .gh import chromatic_invariants, gh_exact, gh_lower, gh_upper
from .persistence import bottleneck, sixpack
from .stability import RunConfig, stability_trial


def _real(x):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


def _parse_colorset(text):
    return sorted({int(c) for c in text.split(",") if c.strip() != ""})


def _cmd_validate(args):
    pair = io.parse_pair(args.pair, metric=args.metric)
    print(io.dump_json({
        "ok": True,
        "points": pair.n,
        "colored": len(pair.coloring),
        "pseudo": pair.ambient.pseudo,
    }))
    return 0


def _cmd_constraints(args):
    C = io.parse_constraints(args.C)
    out = {
        "constraints": io.constraints_to_dict(C),
        "sigma": {str(n): sorted(s) for n, s in sigma_family(C).items()} if not C.ambient_only else {},
    }
    if not C.ambient_only:
        out["topology"] = sorted([sorted(s) for s in topology(C).opens])
    if args.compare:
        other = io.parse_constraints(args.compare)
        out["comparison"] = compare_strength(C, other)
    print(io.dump_json(out))
    return 0


def _cmd_invariants(args):
    pair = io.parse_pair(args.pair, metric=args.metric)
    rec = chromatic_invariants(pair, _parse_colorset(args.sigma), _parse_colorset(args.tau))
    print(io.dump_json({
        "sigma": sorted(rec.sigma),
        "tau": sorted(rec.tau),
        "local": {str(x): list(v) for x, v in sorted(rec.local.items())},
        "distance_set": list(rec.distance_set),
        "ecc": {str(x): v for x, v in sorted(rec.ecc.items())},
        "sep": {str(x): v for x, v in sorted(rec.sep.items())},
        "ecc_set": list(rec.ecc_set),
        "sep_set": list(rec.sep_set),
        "radius": rec.radius,
        "dist": rec.dist,
    }))
    return 0


def _cmd_gh(args):
    p1 = io.parse_pair(args.pair1, metric=args.metric)
    p2 = io.parse_pair(args.pair2, metric=args.metric)
    C = io.parse_constraints(args.C) if args.C else ConstraintSet.trivial(())
    lower = gh_lower(p1, p2, C)
    out = {"lower": _real(lower)}
    try:
        value, witness = gh_exact(p1, p2, C, budget=args.budget, return_witness=True)
        out["exact"] = _real(value)
        if witness is None:
            out["upper"] = _real(value)
        else:
            out["upper"] = _real(gh_upper(witness[0], witness[1], C))
        out["certified"] = True
    except BudgetExceeded as exc:
        out["exact"] = None
        out["upper"] = _real(exc.upper)
        out["certified"] = False
    print(io.dump_json(out))
    return 0


def _cmd_cech(args):
    pair = io.parse_pair(args.pair, metric=args.metric)
    if args.gamma:
        filt = chromatic_filtration(pair, io.parse_complex(args.gamma), args.max_dim)
    else:
        filt = cech_filtration(pair, args.max_dim)
    payload = io.filtration_to_dict(filt)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        io.dump_json(payload, outdir / "filtration.json")
        print(str(outdir / "filtration.json"))
    else:
        print(io.dump_json(payload))
    return 0


def _cmd_sixpack(args):
    pair = io.parse_pair(args.pair, metric=args.metric)
    lam = io.parse_complex(args.lambda_file)
    gam = io.parse_complex(args.gamma)
    six = sixpack(pair, lam, gam, args.degree)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for kind, diagram in six.as_dict().items():
        path = outdir / f"{kind}.json"
        io.dump_json(io.diagram_to_dict(diagram), path)
        written.append(str(path))
    print(io.dump_json({"written": written}))
    return 0


def _cmd_bottleneck(args):
    d1 = io.parse_diagram(args.diagram1)
    d2 = io.parse_diagram(args.diagram2)
    print(io.dump_json({"bottleneck": _real(bottleneck(d1, d2))}))
    return 0


def _cmd_gen_example(args):
    pair = gen_example(
        args.name, r=args.r, step=args.step, eps=args.eps, n=args.n, a=args.a, b=args.b
    )
    payload = io.pair_to_dict(pair)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"{args.name}.json"
        io.dump_json(payload, path)
        print(str(path))
    else:
        print(io.dump_json(payload))
    return 0


def _cmd_stability_test(args):
    cfg = RunConfig(
        seed=args.seed,
        trials=args.trials,
        step=args.step,
        node_budget=args.budget,
        eta=args.eta,
    )
    report = stability_trial(cfg)
    text = io.dump_json(report)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "stability-report.json").write_text(text + "\n")
    print(text)
    return 0 if report["failures"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromgh",
        description="Constrained Gromov-Hausdorff distances and six-pack persistence "
        "for colored metric data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_metric(p):
        p.add_argument("--metric", default="euclidean", choices=["euclidean", "l1", "linf"],
                       help="metric for coordinate inputs (ignored for distance matrices)")

    p = sub.add_parser("validate", help="validate a pair file")
    p.add_argument("pair")
    add_metric(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("constraints", help="sigma family, topology, strength comparison")
    p.add_argument("--C", required=True, help="constraint set JSON")
    p.add_argument("--compare", help="second constraint set JSON to compare against")
    p.set_defaults(fn=_cmd_constraints)

    p = sub.add_parser("invariants", help="color-class invariants of a pair")
    p.add_argument("pair")
    p.add_argument("--sigma", required=True, help="comma-separated colors")
    p.add_argument("--tau", required=True, help="comma-separated colors")
    add_metric(p)
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("gh", help="constrained GH distance: lower/exact/upper")
    p.add_argument("pair1")
    p.add_argument("pair2")
    p.add_argument("--C", help="constraint set JSON (default: trivial)")
    p.add_argument("--budget", type=int, default=10**8)
    add_metric(p)
    p.set_defaults(fn=_cmd_gh)

    p = sub.add_parser("cech", help="ambient (or pattern-restricted) Cech filtration")
    p.add_argument("pair")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--gamma", help="pattern complex JSON")
    p.add_argument("--out", help="output directory")
    add_metric(p)
    p.set_defaults(fn=_cmd_cech)

    p = sub.add_parser("sixpack", help="six persistence diagrams of a pattern inclusion")
    p.add_argument("pair")
    p.add_argument("--lambda", dest="lambda_file", required=True, help="sub-pattern complex JSON")
    p.add_argument("--gamma", required=True, help="pattern complex JSON")
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--out", help="output directory (default .)")
    add_metric(p)
    p.set_defaults(fn=_cmd_sixpack)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two diagrams")
    p.add_argument("diagram1")
    p.add_argument("diagram2")
    p.set_defaults(fn=_cmd_bottleneck)

    p = sub.add_parser("gen-example", help="emit a built-in example pair")
    p.add_argument("name", choices=list(EXAMPLE_NAMES))
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--out", help="output directory")
    p.set_defaults(fn=_cmd_gen_example)

    p = sub.add_parser("stability-test", help="seeded six-pack stability suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--out", help="directory for the report JSON")
    p.set_defaults(fn=_cmd_stability_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChromghError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
