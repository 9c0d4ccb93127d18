"""Command-line front end: tables as CSV or JSON, plus the verification suites.

Exit status: 0 when every check passes, 1 when a mathematical check fails,
2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import HermiteSobolevError, UncoveredCase, UnsupportedCase
from .hermite_core import hermite_at_zero_exact, hermite_coefficients, hermite_norm_sq, hermite_norm_sq_exact
from .mehler_heine import FINAL_SUP_THRESHOLD, ScaledFamily, Source, conjecture_probe, mh_report, select_limit
from .qlambda import TREND_SLACK, coeff_limit_report, coerce_case, is_decreasing
from .real import MIN_PRECISION, fmt, resolve_precision, to_real
from .suites import SUITES, run_suite
from .zeros import APPROACH_TOLERANCE, family_zeros, hermite_zeros, interlace_check, zero_asymptotics_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision_bits: int
    n_list: list[int]
    grid_max: Fraction = Fraction(121, 10)
    grid_points: int = 121
    output_format: str = "csv"
    output_path: str | None = None
    slack: float = TREND_SLACK
    sup_threshold: float = FINAL_SUP_THRESHOLD
    approach_tolerance: float = APPROACH_TOLERANCE

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise UsageError(f"--prec must be at least {MIN_PRECISION}")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise UsageError("--nlist must be strictly ascending")
        if any(n < 1 for n in self.n_list):
            raise UsageError("--nlist entries must be positive")
        if self.grid_max <= 0 or self.grid_points < 1:
            raise UsageError("the grid needs --grid-max > 0 and --grid-points >= 1")

    @property
    def grid(self) -> list[Fraction]:
        """``grid_points`` equispaced points ending at ``grid_max``, excluding the origin."""
        return [k * self.grid_max / self.grid_points for k in range(1, self.grid_points + 1)]


@dataclass
class Table:
    fields: list[str]
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, **values) -> None:
        self.records.append({k: _cell(values.get(k)) for k in self.fields})


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (str, int)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    return fmt(value)


def render(table: Table, fmt_name: str) -> str:
    if fmt_name == "json":
        summary = {k: _cell(v) for k, v in table.summary.items()}
        return json.dumps({"records": table.records, "summary": summary}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=table.fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(table.records)
    return buf.getvalue()


def emit(table: Table, config: RunConfig) -> None:
    text = render(table, config.output_format)
    if config.output_path:
        try:
            with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {config.output_path}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)
    if config.output_format == "csv":
        for key, value in table.summary.items():
            print(f"# {key}: {_cell(value)}", file=sys.stderr)


# ---------------------------------------------------------------- argument parsing


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction(t) for t in text.split(",") if t.strip()]


def _common(p: argparse.ArgumentParser, n_list: str = "25,50,100,200") -> None:
    p.add_argument("--prec", type=int, default=None, help="working precision in bits (default 256 or $HERMITE_SOBOLEV_PREC)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="output_format")
    p.add_argument("--output", default=None, help="write the table here instead of stdout")
    p.add_argument("--nlist", type=_int_list, default=_int_list(n_list))
    p.add_argument("--slack", type=float, default=TREND_SLACK, help="relative slack of the decreasing-trend test")


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("hermite", "q", "s"), default="hermite")
    p.add_argument("--M0", type=_fraction, default=Fraction(0), help="2x2 family: mass on P(0)Q(0)")
    p.add_argument("--M1", type=_fraction, default=Fraction(0), help="2x2 family: mass on P'(0)Q'(0)")
    p.add_argument("--lam", type=_fraction, default=Fraction(0), help="2x2 family: off-diagonal mass")
    p.add_argument("--masses", type=_fraction_list, default=None, help="diagonal family: M_0,...,M_{2r-1}")
    p.add_argument("--parity", choices=("even", "odd"), default="even")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermite-sobolev", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hermite", help="coefficients, squared norm and value at 0 of the monic H_n")
    p.add_argument("--n", type=int, required=True)
    _common(p)

    p = sub.add_parser("mh", help="sup-error of a scaled family against its Bessel-type limit")
    _family_args(p)
    _common(p)
    p.add_argument("--grid-max", type=_fraction, default=Fraction(121, 10))
    p.add_argument("--grid-points", type=int, default=121)
    p.add_argument("--sup-threshold", type=float, default=FINAL_SUP_THRESHOLD)

    p = sub.add_parser("zeros", help="scaled positive zeros and their limits")
    _family_args(p)
    _common(p)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--approach-tol", type=float, default=APPROACH_TOLERANCE)

    p = sub.add_parser("coeffs", help="scaled connection coefficients of a 2x2 family and their limits")
    p.add_argument("--M0", type=_fraction, default=Fraction(1))
    p.add_argument("--M1", type=_fraction, default=Fraction(0))
    p.add_argument("--lam", type=_fraction, default=Fraction(0))
    _common(p)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=tuple(SUITES))
    _common(p)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        precision_bits=resolve_precision(args.prec),
        n_list=list(args.nlist),
        grid_max=getattr(args, "grid_max", Fraction(121, 10)),
        grid_points=getattr(args, "grid_points", 121),
        output_format=args.output_format,
        output_path=args.output,
        slack=args.slack,
        sup_threshold=getattr(args, "sup_threshold", FINAL_SUP_THRESHOLD),
        approach_tolerance=getattr(args, "approach_tol", APPROACH_TOLERANCE),
    )


def make_family(args: argparse.Namespace) -> ScaledFamily:
    if args.family == "hermite":
        return ScaledFamily.hermite(args.parity)
    if args.family == "q":
        return ScaledFamily.qlambda(coerce_case(args.M0, args.M1, args.lam), args.parity)
    if not args.masses:
        raise UsageError("--family s needs --masses")
    return ScaledFamily.diagonal(args.masses, args.parity)


# ---------------------------------------------------------------- commands


def cmd_hermite(n: int, config: RunConfig) -> int:
    if n < 0:
        raise UsageError("--n must be nonnegative")
    bits = config.precision_bits
    table = Table(["n", "coefficients", "norm_sq", "norm_sq_exact", "value_at_0", "value_at_0_exact"])
    h0 = hermite_at_zero_exact(n)
    table.add(
        n=n,
        coefficients=" ".join(str(c) for c in hermite_coefficients(n)),
        norm_sq=hermite_norm_sq(n, bits),
        norm_sq_exact=f"{hermite_norm_sq_exact(n)}*sqrt(pi)",
        value_at_0=to_real(h0),
        value_at_0_exact=h0,
    )
    emit(table, config)
    return EXIT_OK


MH_FIELDS = ["family", "parity", "limit_id", "n", "sup_error", "argmax", "sign_x", "value_at_sign_x", "limit_at_sign_x"]


def _mh_rows(table: Table, report, label: str, parity: str) -> None:
    for n, sup, where, sign in zip(report.n_list, report.sup_errors, report.argmax, report.sign_values):
        table.add(
            family=label,
            parity=parity,
            limit_id=report.limit_id.label,
            n=n,
            sup_error=sup,
            argmax=where,
            sign_x=report.sign_x,
            value_at_sign_x=sign,
            limit_at_sign_x=report.sign_limit,
        )


def cmd_mh(fam: ScaledFamily, config: RunConfig) -> int:
    bits = config.precision_bits
    table = Table(MH_FIELDS)
    conjecture = fam.source is Source.DIAGONAL_S and fam.r >= 3
    if conjecture:
        if any(m <= 0 for m in fam.masses):
            raise UncoveredCase(f"no limit is known for {fam.r} mass pairs with a zero mass")
        probe = conjecture_probe(fam.r, fam.masses, config.n_list, config.grid, bits)
        for parity, rep in probe.reports.items():
            _mh_rows(table, rep, rep.family.label(), parity)
            table.summary[f"{parity}_decreasing"] = is_decreasing(rep.sup_errors, config.slack)
        table.summary["status"] = "conjecture probe: trend recorded, not asserted"
        emit(table, config)
        return EXIT_OK
    report = mh_report(fam, config.n_list, config.grid, bits)
    _mh_rows(table, report, fam.label(), fam.parity)
    decreasing = is_decreasing(report.sup_errors, config.slack)
    final_ok = report.sup_errors[-1] < config.sup_threshold
    passed = report.check(config.sup_threshold, config.slack)
    table.summary.update(
        limit_id=report.limit_id.label,
        decreasing=decreasing,
        final_below_threshold=final_ok,
        sign_ok=report.sign_ok,
        passed=passed,
    )
    emit(table, config)
    return EXIT_OK if passed else EXIT_FAIL


ZERO_FIELDS = ["family", "parity", "limit_id", "n", "kind", "k", "xi", "two_sqrt_n_xi", "sqrt_n_xi", "target", "relative_error"]


def _interlacing(fam: ScaledFamily, config: RunConfig) -> bool | None:
    """Zeros of the family against the same-degree Hermite zeros; ``None`` when not applicable."""
    if fam.source is not Source.QLAMBDA:
        return None
    bits = config.precision_bits
    case = fam.case
    hermite_like = (case.M0 == 0) if fam.parity == "even" else (case.M1 == 0)
    ok = True
    for n in config.n_list:
        degree = fam.degree(n)
        ours, ref = family_zeros(fam, degree, bits), hermite_zeros(degree, bits)
        if hermite_like:
            ok &= ours.positive_zeros == ref.positive_zeros
        else:
            ok &= interlace_check(ours, ref)
    return ok


def cmd_zeros(fam: ScaledFamily, k_max: int, config: RunConfig) -> int:
    bits = config.precision_bits
    report = zero_asymptotics_report(fam, config.n_list, k_max, bits)
    table = Table(ZERO_FIELDS)
    base = dict(family=fam.label(), parity=fam.parity, limit_id=report.limit_id.label)
    for n in report.n_list:
        for row in (r for r in report.rows if r.n == n):
            table.add(
                **base,
                n=n,
                kind="accelerated" if row.target is None else "bessel",
                k=row.k,
                xi=row.xi,
                two_sqrt_n_xi=row.scaled2sqrt,
                sqrt_n_xi=row.scaledsqrt,
                target=row.target,
                relative_error=row.relative_error,
            )
        for i, s in enumerate(report.imaginary.get(n, ()), start=1):
            table.add(**base, n=n, kind="imaginary", k=i, sqrt_n_xi=s)
    trends = report.trends(config.slack, config.approach_tolerance)
    interlacing = _interlacing(fam, config)
    passed = all(trends.values()) and interlacing is not False
    table.summary.update({f"trend_k{k}": ok for k, ok in trends.items()})
    table.summary.update(
        accelerated=report.accelerated,
        interlacing="n/a" if interlacing is None else interlacing,
        complete=all(report.complete.values()),
        passed=passed,
    )
    emit(table, config)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_coeffs(m0: Fraction, m1: Fraction, lam: Fraction, config: RunConfig) -> int:
    case = coerce_case(m0, m1, lam)
    report = coeff_limit_report(case, config.n_list, config.precision_bits)
    table = Table(["case", "n", "quantity", "raw", "scaled", "predicted", "distance", "relative"])
    for row in report.rows:
        table.add(
            case=case.label(),
            n=row.n,
            quantity=row.quantity,
            raw=row.raw,
            scaled=row.scaled,
            predicted=row.predicted,
            distance=row.distance,
            relative=row.relative,
        )
    trends = {q: report.decreasing(q, config.slack) for q in report.quantities()}
    table.summary.update({f"{q}_decreasing": ok for q, ok in trends.items()})
    table.summary["passed"] = all(trends.values())
    emit(table, config)
    return EXIT_OK if all(trends.values()) else EXIT_FAIL


def cmd_verify(suite: str, config: RunConfig) -> int:
    result = run_suite(suite, config.precision_bits)
    table = Table(["suite", "check", "passed", "value", "limit"])
    for c in result.checks:
        table.add(suite=suite, check=c.name, passed=c.passed, value=c.value, limit=c.limit)
    table.summary.update(passed=result.passed, failed=len(result.failed), total=len(result.checks))
    emit(table, config)
    for c in result.failed:
        print(f"FAILED {suite}: {c.name} value={c.value} limit={c.limit}", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        if args.command == "hermite":
            return cmd_hermite(args.n, config)
        if args.command == "mh":
            return cmd_mh(make_family(args), config)
        if args.command == "zeros":
            return cmd_zeros(make_family(args), args.kmax, config)
        if args.command == "coeffs":
            return cmd_coeffs(args.M0, args.M1, args.lam, config)
        return cmd_verify(args.suite, config)
    except (UsageError, UncoveredCase, UnsupportedCase, ValueError) as exc:
        print(f"hermite-sobolev: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HermiteSobolevError as exc:
        print(f"hermite-sobolev: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
