"""Command-line front end: ``covbounds {bounds,witness,standardize,verify}``.

Results go to stdout as JSON, errors to stderr as a JSON object. Exit codes:
0 success, 1 verification failure, 2 usage error or infeasible input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .bounds import comparison_bounds, covariance_bounds
from .domain import BoxDomain, DomainError, MomentSpec
from .extremal import witness
from .joint import DiscreteJoint
from .oracle import sweeps
from .standardize import measures

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    # Python's float repr is the shortest string that round-trips exactly
    return json.dumps(obj, allow_nan=False)


def _pair(lo, hi):
    return None if lo is None else [lo, hi]


def _box(args) -> BoxDomain:
    return BoxDomain(args.a, args.b, args.c, args.d)


def _spec(args) -> MomentSpec:
    return MomentSpec(args.mean_x, args.mean_y, args.var_x, args.var_y)


def cmd_bounds(args) -> int:
    box, spec = _box(args), _spec(args)
    iv = covariance_bounds(box, spec)
    comparison = {"cs": None, "csbd": None, "bd04": None, "bd04_reduced": None}
    if spec.has_means:
        cb = comparison_bounds(box, spec)
        comparison = {
            "cs": _pair(cb.cs_lower, cb.cs_upper),
            "csbd": [cb.csbd_lower, cb.csbd_upper],
            "bd04": [cb.bd04_lower, cb.bd04_upper],
            "bd04_reduced": [cb.bd04_reduced_lower, cb.bd04_reduced_upper],
        }
    elif spec.has_variances:
        cs = iv.upper
        comparison["cs"] = [-cs, cs]
    out = {
        "regime": spec.regime,
        "lower": iv.lower,
        "upper": iv.upper,
        "active_lower": sorted(t.value for t in iv.lower_active),
        "active_upper": sorted(t.value for t in iv.upper_active),
        "comparison": comparison,
    }
    print(_dump(out))
    return EXIT_OK


def _moments_dict(joint: DiscreteJoint) -> dict:
    return {"mean_x": joint.mean_x, "mean_y": joint.mean_y, "var_x": joint.var_x, "var_y": joint.var_y}


def cmd_witness(args) -> int:
    box, spec = _box(args), _spec(args)
    iv = covariance_bounds(box, spec)
    joint = witness(box, spec, args.side)
    out = {
        "side": args.side,
        "regime": spec.regime,
        "atoms": [{"x": x, "y": y, "p": p} for x, y, p in joint.atoms],
        "moments": _moments_dict(joint),
        "cov": joint.cov,
        "bound": iv.lower if args.side == "lower" else iv.upper,
        "oracle_witness": joint.oracle_witness,
    }
    print(_dump(out))
    return EXIT_OK


@dataclass
class SampleDataset:
    """Rows read from CSV; ``rejected`` holds ``(line, reason)`` for dropped rows."""

    rows: np.ndarray
    weights: np.ndarray
    source: str
    rejected: list = field(default_factory=list)


def read_dataset(path: str, box: BoxDomain) -> SampleDataset:
    """Read ``x,y`` (optionally ``x,y,p``) rows; rows outside ``box`` are rejected.

    Unweighted rows each count once. A ``p`` column gives explicit weights,
    which are normalized to sum to one.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DomainError("MALFORMED_CSV", f"cannot read {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DomainError("EMPTY_DATASET", f"{path} is empty")
        header = [h.strip() for h in header]
        if header not in (["x", "y"], ["x", "y", "p"]):
            raise DomainError("MALFORMED_CSV", f"header must be 'x,y' or 'x,y,p', got {','.join(header)!r}")
        width = len(header)
        rows, weights, rejected = [], [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != width:
                raise DomainError("MALFORMED_CSV", f"line {line_no}: expected {width} fields, got {len(row)}")
            try:
                vals = [float(cell) for cell in row]
            except ValueError:
                raise DomainError("MALFORMED_CSV", f"line {line_no}: non-numeric field") from None
            if not all(np.isfinite(vals)):
                raise DomainError("MALFORMED_CSV", f"line {line_no}: non-finite field")
            x, y = vals[0], vals[1]
            w = vals[2] if width == 3 else 1.0
            if w < 0:
                raise DomainError("MALFORMED_CSV", f"line {line_no}: negative weight")
            if not (box.a <= x <= box.b and box.c <= y <= box.d):
                rejected.append((line_no, "OUTSIDE_BOX"))
                continue
            rows.append((x, y))
            weights.append(w)
    if not rows or sum(weights) <= 0:
        raise DomainError("EMPTY_DATASET", f"{path} has no usable rows")
    w = np.array(weights)
    return SampleDataset(np.array(rows), w / w.sum(), path, rejected)


def _measure_out(m) -> dict:
    names = ("d", "r", "d_prime", "d_second")
    return {
        **{n: getattr(m, n).value for n in names},
        "defined_flags": {n: getattr(m, n).defined for n in names},
        "reasons": {n: (getattr(m, n).reason.value if getattr(m, n).reason else None) for n in names},
    }


def cmd_standardize(args) -> int:
    box = _box(args)
    if args.data:
        if args.cov is not None or any(v is not None for v in (args.mean_x, args.mean_y, args.var_x, args.var_y)):
            raise UsageError("--data cannot be combined with --cov or explicit moments")
        ds = read_dataset(args.data, box)
        joint = DiscreteJoint(ds.rows[:, 0], ds.rows[:, 1], ds.weights)
        spec = joint.moments()
        cov = joint.cov
        out = _measure_out(measures(box, spec, cov))
        out["moments"] = {**_moments_dict(joint), "cov": cov}
        out["diagnostics"] = {
            "source": ds.source,
            "rows_used": int(len(ds.rows)),
            "rejected": [{"line": ln, "reason": why} for ln, why in ds.rejected],
        }
    else:
        if args.cov is None:
            raise UsageError("either --cov or --data is required")
        out = _measure_out(measures(box, _spec(args), args.cov))
    print(_dump(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed
    suites = ["lp", "three-point", "beta"] if args.suite == "all" else [args.suite]
    ok = True
    for suite in suites:
        if suite == "lp":
            recs = sweeps.lp_suite(args.cases or 100, args.resolution, seed)
        elif suite == "three-point":
            recs = sweeps.three_point_suite(args.cases or 100, seed)
        else:
            configs = sweeps.DEFAULT_BETA_CONFIGS
            if args.cases:
                rng = np.random.default_rng(seed)
                configs = [tuple(float(v) for v in rng.uniform(0.05, 0.95, 4)) for _ in range(args.cases)]
            recs = sweeps.sweep_beta_family(args.samples, seed, configs)
        for rec in recs:
            ok &= rec["pass"]
            sys.stdout.write(sweeps.to_json_line(rec) + "\n")
    sys.stdout.flush()
    return EXIT_OK if ok else EXIT_FAILED


def _add_box(p):
    for name in ("a", "b", "c", "d"):
        p.add_argument(f"--{name}", type=float, required=True)


def _add_moments(p):
    p.add_argument("--mean-x", type=float)
    p.add_argument("--mean-y", type=float)
    p.add_argument("--var-x", type=float)
    p.add_argument("--var-y", type=float)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="sharp covariance bounds for the known moments")
    _add_box(p)
    _add_moments(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", help="a joint distribution attaining one bound")
    _add_box(p)
    _add_moments(p)
    p.add_argument("--side", choices=("lower", "upper"), required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("standardize", help="standardized covariation measures")
    _add_box(p)
    _add_moments(p)
    p.add_argument("--cov", type=float)
    p.add_argument("--data", help="CSV with header x,y (or x,y,p for weighted rows)")
    p.set_defaults(func=cmd_standardize)

    p = sub.add_parser("verify", help="run oracle verification suites (JSON lines)")
    p.add_argument("--suite", choices=("lp", "three-point", "beta", "all"), required=True)
    p.add_argument("--resolution", type=_positive_int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=_positive_int)
    p.add_argument("--samples", type=_positive_int, default=100_000, help="draws per beta configuration")
    p.set_defaults(func=cmd_verify)
    return parser


def _fail(code: str, message: str, extra: dict | None = None) -> int:
    err = {"error": code, "message": message, **(extra or {})}
    sys.stderr.write(_dump(err) + "\n")
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "resolution", 2) < 2:
            raise UsageError("--resolution must be at least 2")
        return args.func(args)
    except UsageError as exc:
        return _fail("USAGE", str(exc))
    except DomainError as exc:
        d = exc.to_dict()
        return _fail(d.pop("error"), d.pop("message"), d)


if __name__ == "__main__":
    sys.exit(main())
