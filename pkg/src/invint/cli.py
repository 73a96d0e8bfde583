"""Batch command-line surface.

Subcommands::

    invint integrate-inverse --f EXPR --domain A B --from Y1 --to Y2
                             [--F EXPR] [--H EXPR] [--tol T] [--verify]
                             [--json] [--grid N]
    invint verify --corpus FILE [--tol T] [--grid N] [--json]
    invint stieltjes --g EXPR --phi EXPR --from U --to V
                     [--tol T] [--bv] [--grid N] [--json]

Exit codes: 0 pass, 2 input or hypothesis error, 3 verification failure,
4 no convergence.  INVINT_DEFAULT_TOL overrides the default tolerance.

Corpus files are line-oriented ``key=value`` records separated by blank
lines; recognized keys are ``f``, ``domain`` (two bounds), ``from``,
``to``, ``F``, ``H`` and ``tol``.  ``#`` starts a comment line.  Bound
literals may use ``e`` and ``pi``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    BVRequired,
    DomainError,
    InvalidAntiderivative,
    InvintError,
    MaxSubdivision,
    NoConvergence,
    NonMonotone,
    OutOfCodomain,
    ParseError,
    UnboundVariable,
    UnknownVariable,
)
from .expr import Expression, parse
from .laisant import (
    InverseAntiderivative,
    VerificationReport,
    definite_inverse_integral,
    generalized_inverse_integral,
    verify,
)
from .monotone import DEFAULT_GRID_SIZE, IntervalDomain, build
from .stieltjes import RefinementScheme, rs_integral_detailed

ENV_DEFAULT_TOL = "INVINT_DEFAULT_TOL"
_DATA_DIR = Path(__file__).resolve().parent / "data"

_INPUT_ERRORS = (
    ParseError,
    UnknownVariable,
    UnboundVariable,
    DomainError,
    NonMonotone,
    OutOfCodomain,
    BVRequired,
    InvalidAntiderivative,
    ValueError,
)


def bundled_corpus_path() -> Path:
    """Path of the corpus of reference tasks shipped with the package."""
    return _DATA_DIR / "corpus.txt"


@dataclass(frozen=True)
class TaskSpec:
    """One verification task, as read from flags or a corpus file."""

    f_text: str
    domain: tuple[float, float]
    bounds: tuple[float, float]
    antiderivative_text: str | None = None
    h_text: str | None = None
    tolerances: dict[str, float] = field(default_factory=dict)

    def description(self) -> str:
        a, b = self.domain
        y1, y2 = self.bounds
        return f"f={self.f_text} on [{a:g}, {b:g}], bounds ({y1:g}, {y2:g})"


def parse_bound(text: str) -> float:
    """A bound literal: any constant expression, so 'e', 'pi', '2*pi' work."""
    return float(parse(text, ()).evaluate({}))


def load_corpus(path: str | Path) -> list[TaskSpec]:
    """Read blank-line-separated key=value task records."""
    tasks: list[TaskSpec] = []
    record: dict[str, str] = {}
    lines = Path(path).read_text().splitlines()
    for raw in [*lines, ""]:
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if record:
                tasks.append(_task_from_record(record))
                record = {}
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"corpus line is not key=value: {raw!r}")
        record[key.strip()] = value.strip()
    return tasks


def _task_from_record(record: dict[str, str]) -> TaskSpec:
    missing = {"f", "domain", "from", "to"} - set(record)
    if missing:
        raise ValueError(f"corpus record missing keys: {sorted(missing)}")
    unknown = set(record) - {"f", "domain", "from", "to", "F", "H", "tol"}
    if unknown:
        raise ValueError(f"corpus record has unknown keys: {sorted(unknown)}")
    parts = record["domain"].split()
    if len(parts) != 2:
        raise ValueError(f"domain needs two bounds, got {record['domain']!r}")
    tolerances = {}
    if "tol" in record:
        tolerances["tol"] = float(record["tol"])
    return TaskSpec(
        f_text=record["f"],
        domain=(parse_bound(parts[0]), parse_bound(parts[1])),
        bounds=(parse_bound(record["from"]), parse_bound(record["to"])),
        antiderivative_text=record.get("F"),
        h_text=record.get("H"),
        tolerances=tolerances,
    )


def run_task(
    task: TaskSpec, default_tol: float, grid_size: int = DEFAULT_GRID_SIZE
) -> VerificationReport:
    """Build the function named by ``task`` and verify it end to end."""
    f = build(parse(task.f_text, ("x",)), IntervalDomain(*task.domain), grid_size)
    F_expr = (
        parse(task.antiderivative_text, ("x",)) if task.antiderivative_text else None
    )
    H_expr = parse(task.h_text, ("y", "u")) if task.h_text else None
    quad_tol = task.tolerances.get("tol", default_tol)
    return verify(
        f,
        task.bounds[0],
        task.bounds[1],
        exact_antiderivative=F_expr,
        H=H_expr,
        quad_tol=quad_tol,
        description=task.description(),
    )


def report_json(report: VerificationReport) -> dict:
    payload: dict = {
        "task": report.task,
        "values": {
            "formula": report.formula_value,
            "oracle": report.oracle_value,
            "fubini": [report.fubini_lhs, report.fubini_rhs],
            "stieltjes": [report.stieltjes_lhs, report.stieltjes_rhs],
        },
        "residuals": dict(report.residuals),
        "pass": report.passed,
    }
    if report.generalized_formula is not None or report.generalized_oracle is not None:
        payload["values"]["generalized"] = [
            report.generalized_formula,
            report.generalized_oracle,
        ]
    if report.errors:
        payload["errors"] = dict(report.errors)
    return payload


def _print_report(report: VerificationReport, stream=sys.stdout) -> None:
    def fmt(x: float | None) -> str:
        return "n/a" if x is None else repr(x)

    print(f"task: {report.task}", file=stream)
    print(f"  formula    {fmt(report.formula_value)}", file=stream)
    rows = [
        ("oracle", fmt(report.oracle_value), "formula_vs_oracle"),
        (
            "fubini",
            f"lhs {fmt(report.fubini_lhs)}  rhs {fmt(report.fubini_rhs)}",
            "fubini",
        ),
        (
            "stieltjes",
            f"lhs {fmt(report.stieltjes_lhs)}  rhs {fmt(report.stieltjes_rhs)}",
            "stieltjes",
        ),
    ]
    if report.generalized_formula is not None:
        rows.append(
            (
                "generalized",
                f"formula {fmt(report.generalized_formula)}  "
                f"oracle {fmt(report.generalized_oracle)}",
                "generalized",
            )
        )
    for label, body, key in rows:
        tail = ""
        if key in report.residuals:
            tail = (
                f"  residual {report.residuals[key]:.3e}"
                f" (tol {report.tolerances[key]:.3e})"
            )
        print(f"  {label:<11}{body}{tail}", file=stream)
    for method, message in report.errors.items():
        print(f"  error      {method}: {message}", file=stream)
    print(f"  screening  {report.screening}", file=stream)
    print(f"  result     {'pass' if report.passed else 'FAIL'}", file=stream)


def _default_tol(args: argparse.Namespace, fallback: float) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(ENV_DEFAULT_TOL)
    if env is not None:
        return float(env)
    return fallback


def cmd_integrate_inverse(args: argparse.Namespace) -> int:
    tol = _default_tol(args, 1e-10)
    f = build(
        parse(args.f_text, ("x",)),
        IntervalDomain(parse_bound(args.domain[0]), parse_bound(args.domain[1])),
        args.grid,
    )
    y1, y2 = parse_bound(args.y_from), parse_bound(args.y_to)
    F_expr = parse(args.F_text, ("x",)) if args.F_text else None
    H_expr = parse(args.H_text, ("y", "u")) if args.H_text else None

    if args.verify:
        report = verify(f, y1, y2, F_expr, H_expr, quad_tol=tol)
        if args.json:
            print(json.dumps(report_json(report)))
        else:
            _print_report(report)
        return 0 if report.passed else 3

    ia = InverseAntiderivative.for_function(f, F_expr, tol)
    value = definite_inverse_integral(ia, y1, y2, min(tol, 1e-12))
    payload: dict = {"task": f"f={args.f_text}, bounds ({y1:g}, {y2:g})", "value": value}
    if H_expr is not None:
        formula, oracle = generalized_inverse_integral(
            H_expr, f, y1, y2, assume_bv=args.bv, quad_tol=tol
        )
        payload["generalized"] = [formula, oracle]
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"value {value!r}")
        if H_expr is not None:
            print(f"generalized formula {formula!r}  oracle {oracle!r}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    tol = _default_tol(args, 1e-10)
    tasks = load_corpus(args.corpus)
    entries = []
    passed = 0
    for task in tasks:
        try:
            report = run_task(task, tol, args.grid)
        except InvintError as exc:
            entries.append(
                {"task": task.description(), "error": str(exc), "pass": False}
            )
            continue
        if report.passed:
            passed += 1
        entries.append(report_json(report))
    total = len(tasks)
    if args.json:
        print(json.dumps({"tasks": entries, "passed": passed, "total": total}))
    else:
        for entry in entries:
            status = "ok  " if entry["pass"] else "FAIL"
            detail = entry.get("error")
            if detail is None:
                residuals = entry["residuals"]
                worst = max(residuals.values()) if residuals else float("nan")
                detail = f"worst residual {worst:.3e}"
            print(f"{status} {entry['task']}: {detail}")
        print(f"passed {passed}/{total}")
    return 0 if passed == total else 3


def cmd_stieltjes(args: argparse.Namespace) -> int:
    tol = _default_tol(args, 1e-8)
    g = parse(args.g_text, ("x",)).as_function_of("x")
    phi = parse(args.phi_text, ("x",)).as_function_of("x")
    u, v = parse_bound(args.y_from), parse_bound(args.y_to)
    scheme = RefinementScheme(tol=tol)
    result = rs_integral_detailed(g, phi, (u, v), scheme, assume_bv=args.bv)
    if args.json:
        payload = {
            "value": result.value,
            "levels": result.levels,
            "panels": result.panels,
        }
        if result.total_variation is not None:
            payload["total_variation"] = result.total_variation
        print(json.dumps(payload))
    else:
        print(f"value {result.value!r} (level {result.levels}, {result.panels} panels)")
        if result.total_variation is not None:
            print(f"total variation on finest grid {result.total_variation!r}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invint",
        description="Integrate inverse functions in closed form and verify the result.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="working tolerance")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE,
                       help="monotonicity screening grid size")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("integrate-inverse",
                       help="definite integral of the inverse of f")
    p.add_argument("--f", dest="f_text", required=True, help="expression for f(x)")
    p.add_argument("--domain", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--from", dest="y_from", required=True, help="lower bound y1")
    p.add_argument("--to", dest="y_to", required=True, help="upper bound y2")
    p.add_argument("--F", dest="F_text", default=None,
                   help="exact antiderivative of f (optional)")
    p.add_argument("--H", dest="H_text", default=None,
                   help="bivariate H(y, u) for the generalized integral")
    p.add_argument("--verify", action="store_true",
                   help="run all verification methods and report residuals")
    p.add_argument("--bv", action="store_true",
                   help="declare H(f(x), x) of bounded variation")
    common(p)
    p.set_defaults(func=cmd_integrate_inverse)

    p = sub.add_parser("verify", help="run a corpus of verification tasks")
    p.add_argument("--corpus", required=True, help="corpus file of task records")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stieltjes", help="Stieltjes integral of g against phi")
    p.add_argument("--g", dest="g_text", required=True)
    p.add_argument("--phi", dest="phi_text", required=True)
    p.add_argument("--from", dest="y_from", required=True)
    p.add_argument("--to", dest="y_to", required=True)
    p.add_argument("--bv", action="store_true",
                   help="declare phi of bounded variation (skip the screen)")
    common(p)
    p.set_defaults(func=cmd_stieltjes)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, MaxSubdivision) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
