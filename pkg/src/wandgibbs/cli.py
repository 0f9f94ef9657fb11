"""Command-line front end.

    python -m wandgibbs critical --k 3
    python -m wandgibbs solve --k 2 --lambda 0.75
    python -m wandgibbs curves --which phi,psi --range 0.05:10:2000

Exit status is 0 on success, 1 when an argument is outside an operation's
domain and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys

from . import critical, extremality, oracle, solvers
from .errors import WandError
from .model import FiniteTree
from .recursion import PeriodicState
from .serialize import dumps, to_csv

MEASURES = ("mu1", "mu2", "nu0")


def _range(text: str) -> tuple[float, float, int]:
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None


def _which(text: str) -> list[str]:
    names = [w.strip() for w in text.split(",") if w.strip()]
    bad = [w for w in names if w not in ("phi", "psi")]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"--which takes a comma list of phi, psi; got {text!r}")
    return names


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wandgibbs", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, *flags, fmt="json"):
        p = sub.add_parser(name, help=help)
        for flag in flags:
            flag(p)
        p.add_argument("--format", choices=("json", "csv"), default=fmt)
        return p

    k = lambda p: p.add_argument("--k", type=int, required=True)  # noqa: E731
    lam = lambda p: p.add_argument("--lambda", dest="lam", type=float, required=True)  # noqa: E731
    depth = lambda p: p.add_argument("--depth", type=int, default=2)  # noqa: E731
    measure = lambda p: p.add_argument("--measure", choices=MEASURES)  # noqa: E731
    psi = lambda p: p.add_argument(  # noqa: E731
        "--psi-variant", choices=[v.value for v in critical.PsiVariant], default="corrected")

    add("solve", "laws on t1=t2, z1=z2 at (k, lambda)", k, lam)
    add("critical", "critical activity lambda_cr(k)", k)
    add("curves", "phi^3 and psi^3 samples at k=3", psi,
        lambda p: p.add_argument("--which", type=_which, default=["phi", "psi"]),
        lambda p: p.add_argument("--range", dest="range_", type=_range, default=(0.05, 10.0, 2000)),
        fmt="csv")
    add("intersections", "abscissae where phi = psi", psi)
    add("extremality", "Kesten-Stigum and kappa-gamma tests", k, lam, measure)
    add("verify", "finite-tree consistency of a solved law", k, lam, depth, measure)
    add("sample", "tree-indexed chain Monte Carlo marginals", k, lam, depth, measure,
        lambda p: p.add_argument("--reps", type=int, default=10_000),
        lambda p: p.add_argument("--seed", type=_seed, default=0),
        fmt="csv")
    return parser


def _law(k: int, lam: float, measure: str | None) -> tuple[str, PeriodicState]:
    measure = measure or "mu1"
    if measure == "nu0":
        xi = solvers.solve_ti_symmetric(solvers.ScalarMapSpec(k, lam))
        return measure, PeriodicState.uniform(xi)
    cycles, _ = solvers.two_cycles(k, lam)
    if not cycles:
        raise WandError(f"no two-periodic law at k={k}, lambda={lam}; use --measure nu0")
    z, t = cycles[0]
    return measure, PeriodicState.two_cycle(z, t) if measure == "mu1" else PeriodicState.two_cycle(t, z)


def _records_csv(records, header):
    return to_csv(header, ([r[h] for h in header] for r in records))


def run(args: argparse.Namespace) -> str:
    cmd = args.command
    if cmd == "solve":
        records = [r.to_dict() for r in solvers.solve_on_I2(args.k, args.lam)]
        if args.format == "json":
            return dumps(records)
        flat = [{**r["state"], **{key: v for key, v in r.items() if key != "state"}} for r in records]
        return _records_csv(flat, ["t1", "t2", "z1", "z2", "tag", "kind", "k", "lambda", "residual", "method"])

    if cmd == "critical":
        cv = critical.critical_value(args.k).to_dict()
        return dumps(cv) if args.format == "json" else _records_csv([cv], list(cv))

    if cmd == "curves":
        lo, hi, n = args.range_
        data = critical.curve_samples(lo, hi, n, args.psi_variant)
        cols = ["x"] + [f"{w}_cubed" for w in args.which]
        if args.format == "json":
            return dumps({c: data[c] for c in cols})
        return to_csv(cols, zip(*(data[c] for c in cols)))

    if cmd == "intersections":
        roots = critical.find_curve_intersections(args.psi_variant)
        x_max, phi_max = critical.find_phi_maximum()
        out = {"psi_variant": args.psi_variant, "intersections": roots,
               "phi_max": {"x": x_max, "phi": phi_max, "lambda_cr": phi_max ** 3}}
        if args.format == "json":
            return dumps(out)
        return to_csv(["x"], ([r] for r in roots))

    if cmd == "extremality":
        if args.measure == "nu0":
            reports = [extremality.analyze_ti(args.k, args.lam)]
        else:
            reports = extremality.analyze(args.k, args.lam)
            if args.measure:
                reports = reports[(0 if args.measure == "mu1" else 1)::2]
        rows = [r.to_dict() for r in reports]
        if args.format == "json":
            return dumps(rows)
        return _records_csv(rows, list(extremality.ExtremalityReport._FIELDS))

    if cmd == "verify":
        name, law = _law(args.k, args.lam, args.measure)
        res = oracle.consistency_residual(FiniteTree(args.k, args.depth), args.lam, law)
        out = {"k": args.k, "lambda": args.lam, "depth": args.depth, "measure": name,
               "law": {"t1": law.t1, "t2": law.t2, "z1": law.z1, "z2": law.z2}, **res.to_dict()}
        if args.format == "json":
            return dumps(out)
        return to_csv(["max_abs", "config_count"], [[res.max_abs, res.config_count]])

    if cmd == "sample":
        name, law = _law(args.k, args.lam, args.measure)
        if law.z1 != law.z2 or law.t1 != law.t2:
            raise WandError("the chain sampler needs a spin-symmetric law")
        table = oracle.sample_chain(args.k, args.depth, law.z1, law.t1,
                                    oracle.root_law(args.k, args.lam, law), args.reps, args.seed)
        rows = list(table.rows())
        if args.format == "json":
            return dumps([{"level": m, "spin": s, "probability": p, "stderr": e} for m, s, p, e in rows])
        return to_csv(["level", "spin", "probability", "stderr"], rows)

    raise AssertionError(cmd)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = run(args)
    except WandError as exc:
        print(f"wandgibbs {args.command}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
