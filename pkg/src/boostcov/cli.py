"""Command-line runner: ``boostcov {verify,matrix,order-scan,twin-phase}``.

Exit codes: 0 pass, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from itertools import combinations
from typing import Optional, Sequence

from . import __version__
from .covariance import (
    extended_momentum_error,
    extended_truncation_gap,
    lorentz_reference_gap,
    order_scan,
    verify_suite,
)
from .noninertial import parse_trajectory, twin_phase
from .spacetime import (
    BoostKind,
    BoostSpec,
    Event,
    Vec3,
    boost_matrix,
    inverse_residual,
    inverse_residual_closed_form,
)
from .states import PlaneWave

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SCAN_DEFAULTS = {
    "inverse-entry": {"v": (1.0, 0.0, 0.0)},
    "lorentz-gap": {"v": (0.1, 0.0, 0.0)},
    "truncation-gap": {"v": (0.2, 0.0, 0.0)},
    "momentum-shift": {"v": (0.2, 0.0, 0.0)},
}
GAP_EXPONENT = -2.0
MIN_FIT_QUALITY = 0.999


class UsageError(Exception):
    pass


def _vector(text: str) -> Vec3:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated triple: {text!r}")
    if len(parts) != 3 or not all(math.isfinite(x) for x in parts):
        raise argparse.ArgumentTypeError(f"need three finite components, got {text!r}")
    return Vec3(*parts)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}")


def _entry(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"entry must be 'i,j', got {text!r}")
    if not (0 <= i < 4 and 0 <= j < 4):
        raise argparse.ArgumentTypeError("entry indices must be in 0..3")
    return i, j


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _dump(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_verify(args) -> tuple[int, str]:
    if args.m <= 0 or args.c <= 0 or args.batch < 0:
        raise UsageError("--m and --c must be positive, --batch non-negative")
    report = verify_suite(
        m=args.m, p=args.p, v=args.v, c=args.c, seed=args.seed, batch=args.batch,
        drop_c2_terms=args.sabotage == "drop-c2-terms",
    )
    code = EXIT_OK if report.overall else EXIT_FAIL
    if args.format == "json":
        payload = {
            "suite": "covariance",
            "inputs": report.inputs,
            "verdicts": [v.as_dict() for v in report.verdicts],
            "overall": report.overall,
            "seed": args.seed,
            "version": __version__,
        }
        return code, _dump(payload)
    if args.format == "csv":
        rows = [(v.name, repr(v.residual), repr(v.threshold), v.passed) for v in report.verdicts]
        return code, _csv(rows, ["name", "residual", "threshold", "passed"])
    lines = [f"{'check':<38} {'residual':>12} {'threshold':>12}  status"]
    for v in report.verdicts:
        status = "inconclusive" if v.inconclusive else ("pass" if v.passed else "FAIL")
        lines.append(f"{v.name:<38} {v.residual:>12.4g} {v.threshold:>12.4g}  {status}")
    lines.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return code, "\n".join(lines) + "\n"


def cmd_matrix(args) -> tuple[int, str]:
    kind = BoostKind(args.kind)
    try:
        spec = BoostSpec(args.v, args.c, kind)
    except ValueError as exc:
        raise UsageError(str(exc))
    m = boost_matrix(spec).m
    if args.format == "json":
        payload = {"kind": kind.value, "v": list(spec.v), "c": spec.c, "matrix": m.tolist()}
        return EXIT_OK, _dump(payload)
    if args.format == "csv":
        return EXIT_OK, _csv([[repr(float(x)) for x in row] for row in m], ["t", "x", "y", "z"])
    lines = [" ".join(f"{float(x):>12.6g}" for x in row) for row in m]
    return EXIT_OK, "\n".join(lines) + "\n"


def _scan_setup(args):
    """Residual function of ``c``, expected exponent and whether the bound is two-sided."""
    v = args.v if args.v is not None else Vec3.of(SCAN_DEFAULTS[args.scan]["v"])
    m, p = args.m, args.p
    if args.scan == "inverse-entry":
        i, j = args.entry
        if inverse_residual_closed_form(BoostSpec(v, args.c[0]))[i, j] == 0.0:
            # structurally zero for this v: must stay at the floor
            return (lambda c: inverse_residual(BoostSpec(v, c))[i, j]), None, True
        # entries (0,0) and (0,j) carry v^4/c^4 and v^3/c^4; (i,0), (i,j) carry 1/c^2
        expected = -4.0 if i == 0 else -2.0
        return (lambda c: inverse_residual(BoostSpec(v, c))[i, j]), expected, True
    if args.scan == "lorentz-gap":
        return (lambda c: lorentz_reference_gap(PlaneWave(m, p, True, c), v, c)), GAP_EXPONENT, False
    if args.scan == "truncation-gap":
        return (lambda c: extended_truncation_gap(PlaneWave(m, p, True, c), BoostSpec(v, c))), \
            GAP_EXPONENT, False
    probe = Event(0.5, (0.5, 0.0, 0.0))
    return (lambda c: extended_momentum_error(PlaneWave(m, p, True, c), BoostSpec(v, c), probe)), \
        GAP_EXPONENT, False


def cmd_order_scan(args) -> tuple[int, str]:
    cs = args.c
    if len(cs) < 4:
        raise UsageError(f"order-scan needs at least 4 c values, got {len(cs)}")
    if any(b <= a for a, b in zip(cs, cs[1:])) or cs[0] <= 0:
        raise UsageError("c values must be positive and strictly increasing")
    if args.m <= 0:
        raise UsageError("--m must be positive")
    residual, expected, two_sided = _scan_setup(args)
    tol = args.tol if args.tol is not None else (0.01 if two_sided else 0.1)
    try:
        result = order_scan(residual, cs)
    except ValueError as exc:
        raise UsageError(str(exc))
    k = result.fitted_exponent
    if expected is None:
        ok = result.converged_to_zero
    else:
        ok = (
            not result.converged_to_zero
            and result.fit_quality >= MIN_FIT_QUALITY
            and (abs(k - expected) <= tol if two_sided else k <= expected + tol)
        )
    code = EXIT_OK if ok else EXIT_FAIL
    summary = {"scan": args.scan, "expected_exponent": expected, "tolerance": tol,
               "two_sided": two_sided, "passed": ok}
    if args.format == "json":
        return code, _dump({**summary, **result.as_dict()})
    if args.format == "csv":
        rows = [("sample", repr(c), repr(r)) for c, r in result.samples]
        rows += [("fitted_exponent", "", repr(k)), ("fit_quality", "", repr(result.fit_quality))]
        return code, _csv(rows, ["kind", "c", "value"])
    lines = [f"{'c':>12} {'residual':>14}"]
    lines += [f"{c:>12.6g} {r:>14.6g}" for c, r in result.samples]
    verdict = "PASS" if ok else "FAIL"
    if expected is None:
        lines.append(f"entry is identically zero for this v, residual at floor: {verdict}")
    else:
        lines.append(f"fitted exponent {k:.4f} (expected {expected:+.2f}, tol {tol}), "
                     f"fit quality {result.fit_quality:.6f}: {verdict}")
    return code, "\n".join(lines) + "\n"


def cmd_twin_phase(args) -> tuple[int, str]:
    if args.m <= 0:
        raise UsageError("--m must be positive")
    specs = args.traj or []
    if not specs:
        raise UsageError("give at least one --traj")
    try:
        trajs = [parse_trajectory(s) for s in specs]
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc))
    results = [twin_phase(t, args.m) for t in trajs]
    diffs = [(i, j, results[i].phi - results[j].phi) for i, j in combinations(range(len(specs)), 2)]
    if args.format == "json":
        payload = {
            "m": args.m,
            "trajectories": [
                {"spec": s, "phi": r.phi, "estimated_error": r.estimated_error, "evaluations": r.evaluations}
                for s, r in zip(specs, results)
            ],
            "differences": [{"a": specs[i], "b": specs[j], "delta_phi": d} for i, j, d in diffs],
        }
        return EXIT_OK, _dump(payload)
    if args.format == "csv":
        rows = [(s, repr(r.phi), repr(r.estimated_error)) for s, r in zip(specs, results)]
        rows += [(f"{specs[i]} - {specs[j]}", repr(d), "") for i, j, d in diffs]
        return EXIT_OK, _csv(rows, ["trajectory", "phi", "estimated_error"])
    lines = [f"{s:<28} phi = {r.phi:.9f}  (err {r.estimated_error:.1e})" for s, r in zip(specs, results)]
    lines += [f"{specs[i]} - {specs[j]}: {d:.9f}" for i, j, d in diffs]
    return EXIT_OK, "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boostcov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    sp = sub.add_parser("verify", help="run every covariance check")
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--p", type=_vector, default=Vec3(1.0, 0.0, 0.0))
    sp.add_argument("--v", type=_vector, default=Vec3(0.2, 0.0, 0.0))
    sp.add_argument("--c", type=float, default=10.0)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--batch", type=int, default=100)
    sp.add_argument("--sabotage", choices=("drop-c2-terms",), default=None,
                    help="test hook: zero the 1/c^2 boost entries")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("matrix", help="print a boost matrix")
    sp.add_argument("--kind", choices=[k.value for k in BoostKind], default="extended")
    sp.add_argument("--v", type=_vector, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    common(sp)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("order-scan", help="fit the 1/c exponent of a residual")
    sp.add_argument("--scan", choices=tuple(SCAN_DEFAULTS), default="lorentz-gap")
    sp.add_argument("--entry", type=_entry, default=(0, 0))
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--p", type=_vector, default=Vec3(1.0, 0.0, 0.0))
    sp.add_argument("--v", type=_vector, default=None)
    sp.add_argument("--c", type=_float_list, default=[10.0, 20.0, 40.0, 80.0])
    sp.add_argument("--tol", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_order_scan)

    sp = sub.add_parser("twin-phase", help="accumulated phase of non-inertial histories")
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--traj", action="append",
                    help="rest | quad:a=A,t1=T | bump:amp=A,t1=T | file:PATH (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_twin_phase)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        code, text = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"boostcov: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
