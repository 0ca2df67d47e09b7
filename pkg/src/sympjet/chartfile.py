"""Chart files: JSON documents describing a chart around a base point.

Schema (all expressions follow the grammar in expr.py):

    {
      "dimension": 2,
      "order": 4,
      "coordinates": ["x", "y"],
      "base_point": ["0", "1"],
      "omega": [[null, "1/y^2"], [null, null]],
      "connection": {"kind": "levi_civita",
                     "metric": [["1/y^2", "0"], ["0", "1/y^2"]]}
    }

A null omega entry is filled by antisymmetric completion (negated mirror
entry, zero diagonal).  Connection kinds: "flat", "explicit" (gamma_lower,
n^3 expressions), "levi_civita" (metric, n x n expressions), and
"from_symmetric" (pi_lower, n^3 expressions run through the affine
bijection).  Unknown fields are rejected; expressions are recentered at
the base point before jet extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .charts import (
    EXPLICIT,
    FLAT,
    ChartSpec,
    chart_from_metric,
    darboux_flat,
    preserving_from_symmetric,
    validate,
)
from .errors import ChartParseError, ValidationFailure
from .expr import jet_from_expression
from .jets import Jet, jet_str
from .rationals import rat, rat_str
from .tensors import DOWN, JetTensor, PointTensor, all_indices

_TOP_FIELDS = {"dimension", "order", "coordinates", "base_point", "omega", "connection"}
_CONNECTION_FIELDS = {
    "flat": set(),
    "explicit": {"gamma_lower"},
    "levi_civita": {"metric"},
    "from_symmetric": {"pi_lower"},
}


@dataclass(frozen=True)
class ChartDocument:
    chart: ChartSpec
    coordinates: tuple
    base_point: tuple


def _require(condition: bool, message: str):
    if not condition:
        raise ChartParseError(message)


def _rational(value, what: str):
    try:
        return rat(value if not isinstance(value, bool) else None)
    except (TypeError, ValueError):
        raise ChartParseError(f"{what} is not a rational: {value!r}") from None


def _nested_expressions(data, shape, names, base_point, order, what):
    """Parse a nested list of expression strings into jets."""
    if not shape:
        _require(isinstance(data, str), f"{what} must be an expression string")
        return jet_from_expression(data, names, base_point, order)
    _require(
        isinstance(data, list) and len(data) == shape[0],
        f"{what} must be a list of length {shape[0]}",
    )
    return [
        _nested_expressions(part, shape[1:], names, base_point, order, f"{what}[{i}]")
        for i, part in enumerate(data)
    ]


def parse_chart_document(text: str, order_override: int | None = None) -> ChartDocument:
    """Parse, recenter, build and validate a chart from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ChartParseError(f"invalid JSON: {err.msg}", err.lineno, err.colno) from None
    _require(isinstance(data, dict), "chart file must be a JSON object")
    unknown = set(data) - _TOP_FIELDS
    _require(not unknown, f"unknown fields: {sorted(unknown)}")
    for field in _TOP_FIELDS:
        _require(field in data, f"missing field {field!r}")

    n = data["dimension"]
    _require(isinstance(n, int) and n >= 2 and n % 2 == 0, "dimension must be an even integer >= 2")
    order = order_override if order_override is not None else data["order"]
    _require(isinstance(order, int) and order >= 2, "order must be an integer >= 2")
    names = data["coordinates"]
    _require(
        isinstance(names, list) and len(names) == n and len(set(names)) == n
        and all(isinstance(s, str) and s.isidentifier() for s in names),
        "coordinates must be n distinct identifiers",
    )
    base = data["base_point"]
    _require(isinstance(base, list) and len(base) == n, "base_point must have n entries")
    base = [_rational(b, f"base_point[{i}]") for i, b in enumerate(base)]

    omega_rows = data["omega"]
    _require(
        isinstance(omega_rows, list) and len(omega_rows) == n
        and all(isinstance(row, list) and len(row) == n for row in omega_rows),
        "omega must be an n x n array",
    )
    omega_entries = {}
    for i, j in all_indices(n, 2):
        raw = omega_rows[i][j]
        if raw is None:
            continue
        _require(isinstance(raw, str), f"omega[{i}][{j}] must be an expression or null")
        omega_entries[(i, j)] = jet_from_expression(raw, names, base, order)
    filled = {}
    for i, j in all_indices(n, 2):
        if (i, j) in omega_entries:
            filled[(i, j)] = omega_entries[(i, j)]
        elif (j, i) in omega_entries:
            filled[(i, j)] = -omega_entries[(j, i)]
        else:
            filled[(i, j)] = Jet.zero(n, order)
    omega = JetTensor(n, (DOWN, DOWN), [filled[idx] for idx in all_indices(n, 2)], check=False)

    conn = data["connection"]
    _require(isinstance(conn, dict) and "kind" in conn, "connection must carry a kind")
    kind = conn["kind"]
    _require(kind in _CONNECTION_FIELDS, f"unknown connection kind {kind!r}")
    extra = set(conn) - {"kind"} - _CONNECTION_FIELDS[kind]
    _require(not extra, f"unknown connection fields: {sorted(extra)}")
    for field in _CONNECTION_FIELDS[kind]:
        _require(field in conn, f"connection kind {kind!r} needs field {field!r}")

    if kind == "flat":
        chart = darboux_flat(n, order)
        omega_given = any((i, j) in omega_entries for i, j in all_indices(n, 2))
        if omega_given:
            chart = ChartSpec(n, order, omega, chart.gamma_lower, FLAT)
    elif kind == "explicit":
        jets = _nested_expressions(conn["gamma_lower"], (n, n, n), names, base, order, "gamma_lower")
        gamma = JetTensor(
            n, (DOWN, DOWN, DOWN),
            [jets[i][j][k] for i, j, k in all_indices(n, 3)], check=False,
        )
        chart = ChartSpec(n, order, omega, gamma, EXPLICIT)
    elif kind == "levi_civita":
        jets = _nested_expressions(conn["metric"], (n, n), names, base, order, "metric")
        metric = JetTensor(
            n, (DOWN, DOWN), [jets[i][j] for i, j in all_indices(n, 2)], check=False,
        )
        chart = chart_from_metric(metric, omega, order)
    else:  # from_symmetric
        jets = _nested_expressions(conn["pi_lower"], (n, n, n), names, base, order, "pi_lower")
        pi = JetTensor(
            n, (DOWN, DOWN, DOWN),
            [jets[i][j][k] for i, j, k in all_indices(n, 3)], check=False,
        )
        gamma = preserving_from_symmetric(pi, omega)
        chart = ChartSpec(n, order, omega, gamma, EXPLICIT)

    report = validate(chart)
    if not report.passed:
        raise ValidationFailure(report)
    return ChartDocument(chart, tuple(names), tuple(base))


def chart_to_document_dict(chart: ChartSpec, coordinates=None) -> dict:
    """Serialize a chart as a chart file with explicit polynomial symbols."""
    n = chart.dim
    names = list(coordinates) if coordinates else [f"x{i + 1}" for i in range(n)]
    return {
        "dimension": n,
        "order": chart.order,
        "coordinates": names,
        "base_point": ["0"] * n,
        "omega": [
            [jet_str(chart.omega[(i, j)], names) for j in range(n)] for i in range(n)
        ],
        "connection": {
            "kind": "explicit",
            "gamma_lower": [
                [
                    [jet_str(chart.gamma_lower[(i, j, k)], names) for k in range(n)]
                    for j in range(n)
                ]
                for i in range(n)
            ],
        },
    }


# ---------------------------------------------------------------------------
# point files (input to the realization commands)
# ---------------------------------------------------------------------------

_POINT_FIELDS = {"dimension", "order", "omega0", "R0", "R1"}


def _nested_rationals(data, shape, what):
    if not shape:
        return _rational(data, what)
    _require(
        isinstance(data, list) and len(data) == shape[0],
        f"{what} must be a list of length {shape[0]}",
    )
    return [
        _nested_rationals(part, shape[1:], f"{what}[{i}]") for i, part in enumerate(data)
    ]


def _point_tensor(data, n, rank, what) -> PointTensor:
    nested = _nested_rationals(data, (n,) * rank, what)

    def fetch(idx):
        node = nested
        for i in idx:
            node = node[i]
        return node

    return PointTensor.build(n, (DOWN,) * rank, fetch)


@dataclass(frozen=True)
class PointDocument:
    dimension: int
    order: int | None
    omega0: PointTensor
    r0: PointTensor | None
    r1: PointTensor | None


def parse_point_document(text: str) -> PointDocument:
    """Parse prescribed point data (form origin value, curvature, derivative)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ChartParseError(f"invalid JSON: {err.msg}", err.lineno, err.colno) from None
    _require(isinstance(data, dict), "point file must be a JSON object")
    unknown = set(data) - _POINT_FIELDS
    _require(not unknown, f"unknown fields: {sorted(unknown)}")
    for field in ("dimension", "omega0"):
        _require(field in data, f"missing field {field!r}")
    n = data["dimension"]
    _require(isinstance(n, int) and n >= 2 and n % 2 == 0, "dimension must be an even integer >= 2")
    order = data.get("order")
    _require(order is None or (isinstance(order, int) and order >= 2), "order must be an integer >= 2")
    omega0 = _point_tensor(data["omega0"], n, 2, "omega0")
    r0 = _point_tensor(data["R0"], n, 4, "R0") if "R0" in data else None
    r1 = _point_tensor(data["R1"], n, 5, "R1") if "R1" in data else None
    _require(r0 is not None or r1 is not None, "point file needs R0 or R1")
    return PointDocument(n, order, omega0, r0, r1)


def point_tensor_to_nested(tensor: PointTensor):
    """Nested lists of canonical rational strings, index order row-major."""
    n = tensor.dim

    def build(prefix):
        if len(prefix) == tensor.rank:
            return rat_str(tensor[tuple(prefix)])
        return [build(prefix + (i,)) for i in range(n)]

    return build(())
