"""Command-line front end and the JSON/CSV interchange formats.

Instance files are JSON with a "kind" discriminator:

  toric: {"kind": "toric", "dim": d,
          "lattice_generators": [["p/q", ...], ...],
          "rays": [["p/q", ...], ...],
          "max_cones": [[ray indices], ...]}

  mfs:   {"kind": "mfs", "m": m, "n": n,
          "fiber_rays": [[int, ...], ...],
          "base_multiples": [int, ...],
          "extra_generators": [["p/q", ...], ...],
          optional "rays" / "max_cones" overriding the derived fan}

Rationals are serialized as strings ("2/17", "3") so round-trips are
bit-exact; decimal output appears only in the explicitly approximate CSV
columns.  stdout carries data, stderr carries diagnostics.

Exit codes: 0 success, 1 parse/validation/runtime error, 2 oracle mismatch
(mld --brute-force), 3 witness precondition violated, 4 threshold inequality
violated (check).  The environment variable TORICMLD_GUARD overrides the
brute-force enumeration guard (default 10^7 points).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import Lattice
from .mfs import (
    BadParameterError,
    FamilySweepRow,
    ToricMfs,
    example_family,
    loglog_slope,
    make_mfs,
    sweep_family,
    validate,
)
from .mld import DEFAULT_GUARD, mld, mld_bruteforce
from .toric import Fan, ToricVariety
from .witness import PreconditionFailedError, check_eps_delta, find_witness

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ORACLE_MISMATCH = 2
EXIT_PRECONDITION = 3
EXIT_INEQUALITY = 4


class InstanceParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.json_path = path


def _parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise InstanceParseError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceParseError(path, f"bad rational string {value!r}: {exc}")
    raise InstanceParseError(path, f"expected an integer or 'p/q' string, got {type(value).__name__}")


def _parse_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceParseError(path, f"expected an integer, got {value!r}")
    return value


def _parse_vector(value, path: str, parse=_parse_rational) -> tuple:
    if not isinstance(value, list):
        raise InstanceParseError(path, "expected a list")
    return tuple(parse(x, f"{path}[{i}]") for i, x in enumerate(value))


def _parse_matrix(value, path: str, parse=_parse_rational) -> list:
    if not isinstance(value, list):
        raise InstanceParseError(path, "expected a list of vectors")
    return [_parse_vector(row, f"{path}[{i}]", parse) for i, row in enumerate(value)]


def _get(doc: dict, key: str, path: str = "$"):
    if key not in doc:
        raise InstanceParseError(f"{path}.{key}", "missing field")
    return doc[key]


def fraction_str(x: Fraction) -> str:
    return str(x)


def serialize_toric(variety: ToricVariety) -> dict:
    return {
        "kind": "toric",
        "dim": variety.dim,
        "lattice_generators": [
            [fraction_str(x) for x in row] for row in variety.lattice.basis
        ],
        "rays": [[fraction_str(x) for x in r] for r in variety.fan.rays],
        "max_cones": [list(c.ray_indices) for c in variety.fan.max_cones],
    }


def serialize_mfs(m: int, n: int, fiber_rays, base_multiples, extra_generators) -> dict:
    return {
        "kind": "mfs",
        "m": m,
        "n": n,
        "fiber_rays": [[int(c) for c in v] for v in fiber_rays],
        "base_multiples": [int(c) for c in base_multiples],
        "extra_generators": [
            [fraction_str(Fraction(x)) for x in g] for g in extra_generators
        ],
    }


def parse_toric(doc: dict) -> ToricVariety:
    dim = _parse_int(_get(doc, "dim"), "$.dim")
    gens = _parse_matrix(doc.get("lattice_generators", []), "$.lattice_generators")
    rays = _parse_matrix(_get(doc, "rays"), "$.rays")
    cones = _parse_matrix(_get(doc, "max_cones"), "$.max_cones", parse=_parse_int)
    try:
        lattice = Lattice.from_generators(dim, gens)
        fan = Fan.build(rays, [list(c) for c in cones])
        return ToricVariety(lattice, fan)
    except ValueError as exc:
        raise InstanceParseError("$", str(exc))


def _assemble_mfs(doc: dict, strict: bool) -> ToricMfs:
    m = _parse_int(_get(doc, "m"), "$.m")
    n = _parse_int(_get(doc, "n"), "$.n")
    fiber_rays = _parse_matrix(_get(doc, "fiber_rays"), "$.fiber_rays", parse=_parse_int)
    base_multiples = _parse_vector(
        _get(doc, "base_multiples"), "$.base_multiples", parse=_parse_int
    )
    extras = _parse_matrix(doc.get("extra_generators", []), "$.extra_generators")
    if strict and "rays" not in doc and "max_cones" not in doc:
        return make_mfs(m, n, fiber_rays, base_multiples, extras)
    # lenient assembly: build the pieces without constructor gating so that
    # validate() can report exactly which structural check fails
    try:
        x_lattice = Lattice.from_generators(m + n, extras)
        y_lattice = Lattice.from_generators(
            n,
            [
                tuple(
                    Fraction(int(j == l), int(base_multiples[l])) for j in range(n)
                )
                for l in range(n)
            ]
            + [g[m:] for g in extras],
        )
        if "rays" in doc:
            rays = _parse_matrix(doc["rays"], "$.rays")
        else:
            rays = [
                x_lattice.primitivize(tuple(Fraction(c) for c in v) + (Fraction(0),) * n)
                for v in fiber_rays
            ] + [
                x_lattice.primitivize(
                    tuple(Fraction(int(j == m + l)) for j in range(m + n))
                )
                for l in range(n)
            ]
        if "max_cones" in doc:
            cone_indices = [
                list(c)
                for c in _parse_matrix(doc["max_cones"], "$.max_cones", parse=_parse_int)
            ]
        else:
            cone_indices = [
                [i for i in range(len(rays)) if i != j] for j in range(m + 1)
            ]
        x_var = ToricVariety(x_lattice, Fan.build(rays, cone_indices))
        y_rays = [
            y_lattice.primitivize(tuple(Fraction(int(j == l)) for j in range(n)))
            for l in range(n)
        ]
        y_var = ToricVariety(y_lattice, Fan.build(y_rays, [list(range(n))]))
        f_matrix = tuple(
            tuple(0 if j < m else int(j - m == l) for j in range(m + n)) for l in range(n)
        )
        mfs = ToricMfs(x=x_var, y=y_var, f_matrix=f_matrix, m=m, n=n)
    except ValueError as exc:
        raise InstanceParseError("$", str(exc))
    if strict:
        report = validate(mfs)
        if not report.overall:
            failed = [c.name for c in report.checks if not c.passed]
            raise InstanceParseError("$", f"instance fails validation: {failed}")
    return mfs


def load_instance(path: str, strict: bool = True):
    """Parse an instance file into a ToricVariety or ToricMfs."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceParseError("$", f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InstanceParseError("$", f"malformed JSON: {exc}")
    if not isinstance(doc, dict):
        raise InstanceParseError("$", "top level must be an object")
    kind = _get(doc, "kind")
    if kind == "toric":
        return parse_toric(doc)
    if kind == "mfs":
        return _assemble_mfs(doc, strict=strict)
    raise InstanceParseError("$.kind", f"unknown kind {kind!r}")


def _guard() -> int:
    raw = os.environ.get("TORICMLD_GUARD")
    if raw is None:
        return DEFAULT_GUARD
    try:
        return int(raw)
    except ValueError:
        print(f"warning: ignoring bad TORICMLD_GUARD={raw!r}", file=sys.stderr)
        return DEFAULT_GUARD


def _variety_for_mld(instance) -> ToricVariety:
    return instance.x if isinstance(instance, ToricMfs) else instance


def cmd_mld(args) -> int:
    instance = load_instance(args.path)
    variety = _variety_for_mld(instance)
    result = mld(variety)
    if args.brute_force:
        oracle = mld_bruteforce(variety, guard=_guard())
        if oracle.value != result.value or oracle.witness != result.witness:
            print(
                "oracle mismatch:\n"
                f"  parallelepiped: {result.value} at {tuple(map(str, result.witness))}\n"
                f"  bruteforce:     {oracle.value} at {tuple(map(str, oracle.witness))}",
                file=sys.stderr,
            )
            return EXIT_ORACLE_MISMATCH
    if args.json:
        print(
            json.dumps(
                {
                    "mld": fraction_str(result.value),
                    "witness": [fraction_str(x) for x in result.witness],
                    "cone_index": result.cone_index,
                    "method": result.method,
                }
            )
        )
    else:
        print(f"mld = {result.value}")
        print(f"witness = ({', '.join(str(x) for x in result.witness)})")
        print(f"cone = {result.cone_index}")
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = load_instance(args.path, strict=False)
    if not isinstance(instance, ToricMfs):
        raise InstanceParseError("$.kind", "validate needs an mfs instance")
    report = validate(instance)
    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<{width}}  {c.detail}")
    print(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return EXIT_OK if report.overall else EXIT_ERROR


def cmd_family(args) -> int:
    fam = example_family(args.l)
    r = args.l**4 + 1
    if args.emit == "json":
        doc = serialize_mfs(
            m=2,
            n=2,
            fiber_rays=[(1, 0), (-(args.l - 1), 1), (-(args.l - 1), -1)],
            base_multiples=(1, 1),
            extra_generators=[
                (
                    Fraction(args.l, r),
                    Fraction(args.l**2, r),
                    Fraction(1, r),
                    Fraction(1, r),
                )
            ],
        )
        print(json.dumps(doc, indent=2))
    else:
        mx = mld(fam.x)
        my = mld(fam.y)
        print(f"l = {args.l}")
        print(f"r = {r}")
        print(f"rays = {len(fam.x.fan.rays)}")
        print(f"max_cones = {len(fam.x.fan.max_cones)}")
        print(f"mld_X = {mx.value}")
        print(f"mld_Y = {my.value}")
    return EXIT_OK


SWEEP_HEADER = ["l", "r", "mld_X", "mld_Y", "ratio_y_over_x4", "slope_running"]


def write_sweep_csv(rows: Sequence[FamilySweepRow], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    history: list[tuple[Fraction, Fraction]] = []
    for row in rows:
        history.append((row.mld_x, row.mld_y))
        slope = loglog_slope(history)
        writer.writerow(
            [
                row.l,
                row.r,
                fraction_str(row.mld_x),
                fraction_str(row.mld_y),
                repr(row.ratio_approx),
                "" if slope is None else repr(slope),
            ]
        )


def cmd_sweep(args) -> int:
    rows = sweep_family(args.l_min, args.l_max)
    if args.out == "-":
        write_sweep_csv(rows, sys.stdout)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                write_sweep_csv(rows, fh)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_witness(args) -> int:
    instance = load_instance(args.path)
    if not isinstance(instance, ToricMfs):
        raise InstanceParseError("$.kind", "witness needs an mfs instance")
    delta = None if args.delta == "auto" else Fraction(args.delta)
    try:
        report = find_witness(instance, delta)
    except PreconditionFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    vec = lambda v: "(" + ", ".join(str(x) for x in v) + ")"
    m = instance.m
    print(f"A = {vec(report.base_point)}")
    print(f"P = {vec(report.lift)}")
    print(f"t = {report.t}")
    print(f"pair = (i={report.pair[0]}, j={report.pair[1]})")
    print(f"Q = {vec(report.q)}")
    print(f"Q_fiber = {vec(report.q_fiber)}")
    print(f"cone = {report.cone_index}")
    print(f"ld(Q) = {report.ld_q}")
    print(
        f"bound = {report.bound_coefficient} * delta^(1/{m + 1})"
        f" ~ {report.bound_approx:.6g}"
    )
    print(
        f"bound check (exact powers): ld(Q)^{m + 1} = {report.ld_q ** (m + 1)}"
        f" vs {report.bound_power}"
    )
    print(f"bound_satisfied = {str(report.bound_satisfied).lower()}")
    return EXIT_OK


def cmd_check(args) -> int:
    instance = load_instance(args.path)
    if not isinstance(instance, ToricMfs):
        raise InstanceParseError("$.kind", "check needs an mfs instance")
    cert = check_eps_delta(instance)
    m = instance.m
    print(f"mld_X = {cert.mld_x.value}")
    print(f"mld_Y = {cert.mld_y.value}")
    print(f"C = {cert.c_z}")
    print(
        f"inequality: mld_X^{m + 1} = {cert.lhs} <= (C+1)^{m + 1} * mld_Y = {cert.rhs}: "
        f"{'holds' if cert.holds else 'VIOLATED'}"
    )
    if not cert.holds:
        print(
            "error: threshold inequality violated; this indicates a bug or a"
            " genuine counterexample",
            file=sys.stderr,
        )
        return EXIT_INEQUALITY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricmld",
        description="Exact minimal log discrepancies of simplicial toric varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mld", help="compute the minimal log discrepancy of an instance")
    p.add_argument("path")
    p.add_argument("--brute-force", action="store_true", help="cross-check with the box-scan oracle")
    p.add_argument("--json", action="store_true", help="emit the result as JSON")
    p.set_defaults(func=cmd_mld)

    p = sub.add_parser("validate", help="run the fibration normal-form checks")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("family", help="emit a member of the quartic-gap family")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--emit", choices=["json", "summary"], default="summary")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("sweep", help="sweep the family and emit CSV")
    p.add_argument("--l-min", type=int, required=True)
    p.add_argument("--l-max", type=int, required=True)
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("witness", help="run the box-principle witness construction")
    p.add_argument("path")
    p.add_argument("--delta", default="auto", help="'auto' (= base mld) or an exact 'p/q'")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("check", help="exact threshold inequality certificate")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (BadParameterError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
