"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical violation was found,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import bounds, extremal, lif, verify
from .errors import PluriharmError
from .mapfile import load_map
from .report import fmt17
from .sampling import SampleConfig


class UsageError(Exception):
    pass


def _parse_n_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or any(n < 1 for n in out):
        raise UsageError(f"--n needs positive integers, got {text!r}")
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_out(rows: list[dict], fmt: str, output: str | None, meta: dict | None = None) -> None:
    if fmt == "json":
        _emit(json.dumps({**(meta or {}), "rows": rows}, indent=2) + "\n", output)
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = list(rows[0]) if rows else []
    writer.writerow(cols)
    for row in rows:
        writer.writerow([fmt17(v) if isinstance(v, float) else v for v in row.values()])
    _emit(buf.getvalue(), output)


def cmd_kn(args) -> int:
    rows = []
    for n in _parse_n_list(args.n):
        res = bounds.solve_kn(n)
        rows.append({"n": n, "k_n": res.k_n, "k_n_6sig": res.table_value, "residual": res.residual,
                     "iterations": res.iterations})
    if args.format == "text":
        lines = [f"{'n':>3}  {'k_n':>10}  residual"]
        lines += [f"{r['n']:>3}  {r['k_n_6sig']:>10}  {r['residual']:.3e}" for r in rows]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _rows_out(rows, args.format, args.output)
    return 0


def _params(args, **overrides) -> bounds.BoundParams:
    kw = dict(n=args.n, alpha=args.alpha, k=args.k, norm_dh0_inv=args.norm_dh0_inv,
              norm_dh0=args.norm_dh0, det_dh0=args.det_dh0)
    kw.update(overrides)
    return bounds.BoundParams(**kw)


def cmd_bounds(args) -> int:
    if args.r_count < 1 or not 0 <= args.r_start <= args.r_stop < 1:
        raise UsageError("need 0 <= r-start <= r-stop < 1 and r-count >= 1")
    p = _params(args)
    rows = bounds.bound_curves(p, np.linspace(args.r_start, args.r_stop, args.r_count))
    _rows_out(rows, args.format, args.output, {"params": p.to_dict()})
    return 0


def cmd_cover(args) -> int:
    det_dh0 = args.det_dh0
    norm_dh0 = args.norm_dh0
    if args.n == 1:
        # n = 1 bridge: |det Dh(0)| at its minimum modulus 1/(1+k)
        det_dh0 = 1 / (1 + args.k) if det_dh0 is None else det_dh0
        norm_dh0 = 1 / (1 + args.k) if norm_dh0 is None else norm_dh0
    p = _params(args, det_dh0=1.0 if det_dh0 is None else det_dh0, norm_dh0=1.0 if norm_dh0 is None else norm_dh0)
    quad = bounds.covering_radius(args.r, p)
    out = {"params": p.to_dict(), "r": args.r, "quadrature": quad}
    if args.n == 1:
        closed = bounds.covering_radius_n1_closed_form(args.r, args.alpha, args.k)
        out.update(closed_form=closed, difference=abs(quad - closed), method="quadrature+closed_form")
    else:
        out["method"] = "quadrature only (closed form exists for n = 1)"
    if args.format == "json":
        _emit(json.dumps(out, indent=2) + "\n", args.output)
    else:
        lines = [f"quadrature  {fmt17(quad)}"]
        if args.n == 1:
            lines += [f"closed_form {fmt17(out['closed_form'])}", f"difference  {out['difference']:.3e}"]
        lines.append(f"method      {out['method']}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    f = load_map(args.map)
    config = SampleConfig(seed=args.seed, points_per_radius=args.points, directions_per_point=args.directions)
    suites = tuple(s.strip() for s in args.suite.split(",")) if args.suite else verify.SUITES
    bad = set(suites) - set(verify.SUITES)
    if bad:
        raise UsageError(f"unknown suites {sorted(bad)}; choose from {verify.SUITES}")
    budget = lif.OrderBudget(directions=args.order_directions)
    rep = verify.run_suite(f, args.alpha, args.k, config, suites, budget)
    text = rep.to_csv() if args.format == "csv" else rep.to_json() + "\n"
    _emit(text, args.output)
    s = rep.summary()
    print(f"{rep.verdict}: {s['passed']}/{s['total']} checks passed, worst margin {s['worst_margin']}",
          file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_order(args) -> int:
    f = load_map(args.map)
    h = lif.normalized_holomorphic_part(f) if args.normalize else f.h
    est = lif.norm_order_estimate(h, lif.OrderBudget(directions=args.directions))
    out = {"estimate": est.value, "samples_used": est.samples_used, "directions": args.directions,
           "attained_at": {"a": est.max_attained_at[0], "theta": est.max_attained_at[1]}}
    if args.format == "json":
        _emit(json.dumps(out, indent=2) + "\n", args.output)
    else:
        _emit(f"estimate     {fmt17(est.value)}\nsamples_used {est.samples_used}\n"
              f"a            {est.max_attained_at[0]}\ntheta        {est.max_attained_at[1]}\n", args.output)
    return 0


def cmd_qr(args) -> int:
    res = bounds.solve_kn(args.n)
    out = {"n": args.n, "c": args.c, "K": args.K, "k_n": res.k_n, "k_n_6sig": res.table_value,
           "K2": bounds.qr_constant_forward(args.K, args.c, args.n), "m": bounds.M_CONSTANT,
           "radius": bounds.qr_ball_radius(args.n, args.c, args.K)}
    if args.format == "json":
        _emit(json.dumps(out, indent=2) + "\n", args.output)
    else:
        _emit("".join(f"{key:<9}{fmt17(v) if isinstance(v, float) else v}\n" for key, v in out.items()), args.output)
    return 0


def cmd_extremal(args) -> int:
    spec = extremal.ExtremalSpec(args.family, args.alpha, args.k, args.t, args.sign)
    f = extremal.build_extremal(spec)
    zero = np.zeros(1)
    out = {
        "spec": spec.to_dict(),
        "map": f.describe(),
        "h_prime_0": [float(f.h.jacobian(zero)[0, 0].real), float(f.h.jacobian(zero)[0, 0].imag)],
        "normalization": float(abs(f.h.jacobian(zero)[0, 0] + np.conj(f.g.jacobian(zero)[0, 0]))),
    }
    radii = np.linspace(0.1, 0.9, 9)
    if args.family == "upper_thm2":
        out["gaps"] = [{"r": float(r), "gap": extremal.sharpness_gap_upper(args.alpha, args.k, r, args.t)}
                       for r in radii]
    elif args.family == "lower_thm2":
        out["gaps"] = [{"r": float(r), "gap": extremal.sharpness_gap_lower(args.alpha, args.k, r, args.t)}
                       for r in radii]
    elif args.family.startswith("covering"):
        entries = [extremal.covering_sharpness_check(args.alpha, args.k, float(r), args.sign,
                                                     literal=args.family.endswith("literal")) for r in radii]
        out["covering"] = [{"r": e.radius, "distance": e.lhs, "sharp_radius": e.rhs, "passed": e.passed}
                           for e in entries]
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pluriharm", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv"), default="csv"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--output", help="write to this file instead of stdout")

    def params(p):
        p.add_argument("--n", type=int, default=1, help="dimension (default 1)")
        p.add_argument("--alpha", type=float, default=1.0, help="norm order (default 1)")
        p.add_argument("--k", type=float, default=0.0, help="dilatation bound in [0, 1) (default 0)")
        p.add_argument("--norm-dh0-inv", type=float, default=1.0, help="||[Dh(0)]^-1|| (default 1)")

    p = sub.add_parser("kn", help="roots k_n of the quasiregular radius equation")
    p.add_argument("--n", default="1..5", help="list such as 1..5 or 1,3 (default 1..5)")
    common(p, ("text", "json", "csv"), "text")
    p.set_defaults(func=cmd_kn)

    p = sub.add_parser("bounds", help="distortion, growth and Jacobian bound curves")
    params(p)
    p.add_argument("--norm-dh0", type=float, default=1.0, help="||Dh(0)|| (default 1)")
    p.add_argument("--det-dh0", type=float, default=1.0, help="|det Dh(0)| (default 1)")
    p.add_argument("--r-start", type=float, default=0.0)
    p.add_argument("--r-stop", type=float, default=0.99)
    p.add_argument("--r-count", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cover", help="covering radius by quadrature (and closed form at n = 1)")
    params(p)
    p.add_argument("--norm-dh0", type=float, default=None, help="||Dh(0)|| (default 1, or 1/(1+k) at n = 1)")
    p.add_argument("--det-dh0", type=float, default=None, help="|det Dh(0)| (default 1, or 1/(1+k) at n = 1)")
    p.add_argument("--r", type=float, default=1.0, help="radius in (0, 1] (default 1)")
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="run the sampled verification suite on a map")
    p.add_argument("--map", required=True, help="map JSON file or builtin:<family>?alpha=..&k=..")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--suite", default=None, help=f"comma list from {','.join(verify.SUITES)} (default all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=32, help="points per radius (default 32)")
    p.add_argument("--directions", type=int, default=4, help="directions per point (default 4)")
    p.add_argument("--order-directions", type=int, default=16, help="rays for the order estimate (default 16)")
    common(p, ("json", "csv"), "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("order", help="norm-order estimate of a normalized holomorphic part")
    p.add_argument("--map", required=True)
    p.add_argument("--directions", type=int, default=16, help="rays of automorphism centers (default 16)")
    p.add_argument("--normalize", action="store_true", help="apply [Dh(0)]^-1 first")
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("qr", help="univalent-ball radius for quasiregular maps")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--K", type=float, default=1.0)
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_qr)

    p = sub.add_parser("extremal", help="build an extremal map and report its sharpness data")
    p.add_argument("--family", required=True, choices=extremal.FAMILIES)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--sign", type=int, default=1, choices=(1, -1))
    p.add_argument("--output")
    p.set_defaults(func=cmd_extremal)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (UsageError, PluriharmError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # malformed input must not surface as a traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
