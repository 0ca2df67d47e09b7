"""Command-line interface: chart files in, bit-stable JSON reports out.

Exit codes: 0 all checks passed, 1 a check failed, 2 malformed input or
violated preconditions.  Machine-readable error objects go to stderr;
every command is a thin wrapper over library calls.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .chartfile import (
    ChartDocument,
    chart_to_document_dict,
    parse_chart_document,
    parse_point_document,
    point_tensor_to_nested,
)
from .charts import (
    functional_dims,
    random_fedosov_chart,
    random_symmetric_pi,
    random_closed_omega,
    preserving_from_symmetric,
    symmetric_part,
    validate,
    ChartSpec,
)
from .curvature import curvature, ricci, sectional_classify
from .errors import ConditionError, ChartParseError, SympjetError, ValidationFailure
from .jets import jet_str
from .normal import (
    a_from_curvature,
    covariant_derivative,
    derivative_identity_report,
    normal_tensors,
    to_normal_chart,
)
from .curvature import identity_report
from .rationals import rat
from .reconstruct import realize_curvature, realize_curvature_derivative


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _emit_error(kind: str, message: str, **extra) -> None:
    body = {"type": kind, "message": message}
    body.update(extra)
    sys.stderr.write(json.dumps({"error": body}, indent=2) + "\n")


def _report_json(report) -> list:
    out = []
    for check in report.checks:
        witness = None
        if check.witness is not None:
            witness = {
                "index": list(check.witness["index"]),
                "multidegree": (
                    list(check.witness["multidegree"])
                    if check.witness.get("multidegree") is not None
                    else None
                ),
            }
        out.append({"name": check.name, "passed": check.passed, "witness": witness})
    return out


def _jet_tensor_nested(tensor, names):
    n = tensor.dim

    def build(prefix):
        if len(prefix) == tensor.rank:
            return jet_str(tensor[tuple(prefix)], names)
        return [build(prefix + (i,)) for i in range(n)]

    return build(())


def _load_document(path: str, order: int | None) -> ChartDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_chart_document(handle.read(), order_override=order)


def _parse_vector(text: str, n: int):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ChartParseError(f"expected {n} comma-separated rationals, got {len(parts)}")
    return [rat(p) for p in parts]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_check(args) -> int:
    try:
        doc = _load_document(args.file, args.order)
    except ValidationFailure as err:
        _emit({
            "validate": _report_json(err.report),
            "curvature_identities": None,
            "derivative_identities": None,
            "all_passed": False,
        })
        return 1
    chart = doc.chart
    v = validate(chart)
    cd = curvature(chart)
    idr = identity_report(chart, cd)
    _, ricci_rep = ricci(chart, cd)
    sections = {
        "validate": _report_json(v),
        "curvature_identities": _report_json(idr) + _report_json(ricci_rep),
    }
    if cd.r_low.order >= 1:
        ddr = derivative_identity_report(chart, cd)
        sections["derivative_identities"] = _report_json(ddr)
        passed = v.passed and idr.passed and ricci_rep.passed and ddr.passed
    else:
        sections["derivative_identities"] = None
        passed = v.passed and idr.passed and ricci_rep.passed
    sections["all_passed"] = passed
    _emit(sections)
    return 0 if passed else 1


def _cmd_curvature(args) -> int:
    doc = _load_document(args.file, args.order)
    cd = curvature(doc.chart)
    if args.at_base:
        _emit({"R_low_origin": point_tensor_to_nested(cd.r_low.at_origin())})
    else:
        _emit({"order": cd.order, "R_low": _jet_tensor_nested(cd.r_low, list(doc.coordinates))})
    return 0


def _cmd_ricci(args) -> int:
    doc = _load_document(args.file, args.order)
    K, report = ricci(doc.chart)
    _emit({
        "K": _jet_tensor_nested(K, list(doc.coordinates)),
        "checks": _report_json(report),
        "einstein": K.is_zero(),
    })
    return 0 if report.passed else 1


def _cmd_sectional(args) -> int:
    doc = _load_document(args.file, args.order)
    chart = doc.chart
    x = _parse_vector(args.x, chart.dim)
    y = _parse_vector(args.y, chart.dim)
    cd = curvature(chart)
    result = sectional_classify(cd.r_low.at_origin(), chart.omega.at_origin(), x, y)
    _emit(result.to_json_dict())
    return 0


def _cmd_normal_tensors(args) -> int:
    doc = _load_document(args.file, args.order)
    family = normal_tensors(doc.chart, args.rmax)
    _emit({
        "r_max": family.r_max,
        "A": {str(r): point_tensor_to_nested(t) for r, t in sorted(family.a.items())},
        "omega_ext": {
            str(r): point_tensor_to_nested(t) for r, t in sorted(family.omega_ext.items())
        },
    })
    return 0


def _cmd_realize(args) -> int:
    with open(args.pointfile, "r", encoding="utf-8") as handle:
        pd = parse_point_document(handle.read())
    if pd.r1 is None:
        chart = realize_curvature(pd.r0, pd.omega0, pd.order if pd.order else 3)
    else:
        chart = realize_curvature_derivative(
            pd.r0, pd.r1, pd.omega0, pd.order if pd.order else 4
        )
    _emit(chart_to_document_dict(chart))
    return 0


def _cmd_dims(args) -> int:
    _emit(functional_dims(args.n))
    return 0


def _selftest_identities(rng: random.Random, count: int) -> tuple[int, int]:
    passed = 0
    combos = [(2, 3), (2, 4), (4, 3), (4, 4)]
    for i in range(count):
        n, order = combos[i % len(combos)]
        chart = random_fedosov_chart(rng.randrange(1 << 30), n, order)
        cd = curvature(chart)
        _, ricci_rep = ricci(chart, cd)
        ok = (
            validate(chart).passed
            and identity_report(chart, cd).passed
            and ricci_rep.passed
            and derivative_identity_report(chart, cd).passed
        )
        passed += ok
    return passed, count


def _selftest_bijection(rng: random.Random, count: int) -> tuple[int, int]:
    passed = 0
    for i in range(count):
        n = 2 if i % 2 else 4
        omega = random_closed_omega(rng, n, 3)
        pi = random_symmetric_pi(rng, n, 3)
        gamma = preserving_from_symmetric(pi, omega)
        chart = ChartSpec(n, 2, omega.truncate(2), gamma.truncate(2))
        pi_back, _ = symmetric_part(chart)
        ok = pi_back == pi.truncate(pi_back.order)
        gamma2 = preserving_from_symmetric(pi_back, chart.omega)
        ok = ok and gamma2 == chart.gamma_lower.truncate(gamma2.order)
        passed += ok
    return passed, count


def _selftest_normal(rng: random.Random, count: int) -> tuple[int, int]:
    passed = 0
    for i in range(count):
        n, order = (2, 4) if i % 2 else (4, 4)
        chart = random_fedosov_chart(rng.randrange(1 << 30), n, order)
        cd = curvature(chart)
        nc = to_normal_chart(chart)
        family = normal_tensors(chart, min(2, nc.gamma_lower.order), normal_chart=nc)
        ok = family.a[1] == a_from_curvature(cd.r_low.at_origin(), 1)
        if 2 in family.a:
            r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
            ok = ok and family.a[2] == a_from_curvature(r1, 2)
        passed += ok
    return passed, count


def _selftest_realization(rng: random.Random, count: int) -> tuple[int, int]:
    passed = 0
    for i in range(count):
        n = 2 if i % 2 else 4
        chart = random_fedosov_chart(rng.randrange(1 << 30), n, 4)
        cd = curvature(chart)
        r0 = cd.r_low.at_origin()
        r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
        omega0 = chart.omega.at_origin()
        try:
            realize_curvature(r0, omega0)
            realize_curvature_derivative(r0, r1, omega0)
            passed += 1
        except (SympjetError, AssertionError):
            pass
    return passed, count


def _cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    suites = [
        ("chart_identities", _selftest_identities, args.charts),
        ("affine_bijection", _selftest_bijection, args.charts),
        ("normal_closed_forms", _selftest_normal, min(args.charts, 8)),
        ("realization_round_trips", _selftest_realization, min(args.charts, 8)),
    ]
    all_ok = True
    for name, fn, count in suites:
        passed, total = fn(rng, count)
        sys.stdout.write(f"{name}: {passed}/{total} passed\n")
        all_ok = all_ok and passed == total
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sympjet",
        description="Exact local computations for symplectic connections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_chart_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="chart file (JSON)")
        p.add_argument("--order", type=int, default=None, help="override the truncation order")
        p.set_defaults(func=func)
        return p

    add_chart_command("check", _cmd_check, "validate a chart and run the identity suites")
    p = add_chart_command("curvature", _cmd_curvature, "curvature tensor of a chart")
    p.add_argument("--at-base", action="store_true", help="point values at the base point")
    add_chart_command("ricci", _cmd_ricci, "Ricci tensor, its checks, and the Einstein flag")
    p = add_chart_command("sectional", _cmd_sectional, "classify a tangent 2-plane")
    p.add_argument("--x", required=True, help="first plane vector, comma-separated rationals")
    p.add_argument("--y", required=True, help="second plane vector, comma-separated rationals")
    p = add_chart_command("normal-tensors", _cmd_normal_tensors, "normal tensors and form extensions")
    p.add_argument("--rmax", type=int, required=True, help="highest normal-tensor order")

    p = sub.add_parser("realize", help="build a chart from prescribed point curvature data")
    p.add_argument("pointfile", help="point data file (JSON)")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("dims", help="functional dimensions of the connection families")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("selftest", help="randomized property suites")
    p.add_argument("--charts", type=int, default=10, help="sample count per suite")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConditionError as err:
        _emit_error("condition", str(err), conditions=err.conditions)
        return 2
    except ChartParseError as err:
        _emit_error("parse", str(err), line=err.line, col=err.col)
        return 2
    except ValidationFailure as err:
        _emit_error("validation", str(err), report=_report_json(err.report))
        return 2
    except FileNotFoundError as err:
        _emit_error("io", str(err))
        return 2
    except SympjetError as err:
        _emit_error(type(err).__name__.lower(), str(err))
        return 2


if __name__ == "__main__":
    sys.exit(main())
