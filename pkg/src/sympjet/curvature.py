"""Curvature of a chart: tensors, identity suite, Ricci, sectional classes.

The curvature is computed twice on every call: once from the raised symbols
by the standard formula and once directly in lowered form, and the two
results must coincide exactly.  The identity suite checks the symmetry
relations (antisymmetry in the last pair, symmetry in the first pair, the
cyclic identities, vanishing first-pair trace) as exact jet equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .charts import ChartSpec, CheckResult, ValidationReport, _first_nonzero
from .errors import DomainError, ShapeError
from .jets import Jet
from .rationals import Q, QZERO, rat, rat_str
from .tensors import (
    CYCLIC_SUM,
    DOWN,
    UP,
    JetTensor,
    PointTensor,
    all_indices,
    omega_lower,
    sym_project,
)


@dataclass(frozen=True)
class CurvatureData:
    r_up: JetTensor  # R^m_ijk, slots (up m | down i j k), plane pair (j, k)
    r_low: JetTensor  # R_ijkl = w_im R^m_jkl
    order: int


def curvature(chart: ChartSpec) -> CurvatureData:
    """Curvature tensors of a valid chart, with the two-route cross-check."""
    n = chart.dim
    gup = chart.gamma_up

    def up_entry(idx):
        l, i, j, k = idx
        total = gup[(l, k, i)].partial(j) - gup[(l, i, j)].partial(k)
        for m in range(n):
            total = total + gup[(m, k, i)] * gup[(l, j, m)]
            total = total - gup[(m, i, j)] * gup[(l, k, m)]
        return total

    r_up = JetTensor.build(n, (UP, DOWN, DOWN, DOWN), up_entry)
    r_low = omega_lower(r_up, 0, chart.omega)
    direct = _curvature_lowered_direct(chart)
    if r_low != direct.truncate(r_low.order):
        raise AssertionError("raised-then-lowered and direct lowered curvature disagree")
    return CurvatureData(r_up, r_low, r_low.order)


def _curvature_lowered_direct(chart: ChartSpec) -> JetTensor:
    """Lowered curvature evaluated without forming R^m first.

    R_ijkl = w_is d_k(w^sp G_pjl) - w_is d_l(w^sp G_pjk)
             + w^mp G_pjl G_ikm - w^mp G_pjk G_ilm
    (the signs of the quadratic terms are fixed to agree with the raised
    formula; see the Darboux specialization used for the Ricci tensor).
    """
    n = chart.dim
    omega, omega_inv, gamma = chart.omega, chart.omega_inv, chart.gamma_lower

    raised = {}
    for s, j, l in all_indices(n, 3):
        total = None
        for p in range(n):
            term = omega_inv[(s, p)] * gamma[(p, j, l)]
            total = term if total is None else total + term
        raised[(s, j, l)] = total

    def entry(idx):
        i, j, k, l = idx
        total = None
        for s in range(n):
            term = omega[(i, s)] * (raised[(s, j, l)].partial(k) - raised[(s, j, k)].partial(l))
            total = term if total is None else total + term
        for m in range(n):
            total = total + raised[(m, j, l)] * gamma[(i, k, m)]
            total = total - raised[(m, j, k)] * gamma[(i, l, m)]
        return total

    return JetTensor.build(n, (DOWN, DOWN, DOWN, DOWN), entry)


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


def _zero_check(name: str, tensor) -> CheckResult:
    for idx in all_indices(tensor.dim, tensor.rank):
        e = tensor[idx]
        zero = e.is_zero() if isinstance(e, Jet) else not e
        if not zero:
            multidegree = _first_nonzero(e) if isinstance(e, Jet) else None
            return CheckResult(name, False, {"index": idx, "multidegree": multidegree})
    return CheckResult(name, True, None)


def identity_report(chart: ChartSpec, cd: CurvatureData | None = None) -> ValidationReport:
    """Exact curvature identities as a report.

    Checks, in order: antisymmetry in the last index pair, symmetry in the
    first pair, the cyclic identity over the last three indices, the cyclic
    identity over all four, and the vanishing of the first-pair trace
    w^kl R_lkij.
    """
    if cd is None:
        cd = curvature(chart)
    r = cd.r_low
    n = chart.dim
    omega_inv = chart.omega_inv
    checks = []

    anti = JetTensor.build(
        n, r.variances, lambda idx: r[idx] + r[(idx[0], idx[1], idx[3], idx[2])]
    )
    checks.append(_zero_check("curvature_antisymmetric_last_pair", anti))

    sym = JetTensor.build(
        n, r.variances, lambda idx: r[idx] - r[(idx[1], idx[0], idx[2], idx[3])]
    )
    checks.append(_zero_check("curvature_symmetric_first_pair", sym))

    checks.append(
        _zero_check("first_bianchi_cyclic", sym_project(r, (1, 2, 3), CYCLIC_SUM))
    )
    checks.append(
        _zero_check("four_index_cyclic", sym_project(r, (0, 1, 2, 3), CYCLIC_SUM))
    )

    def trace_entry(idx):
        i, j = idx
        total = None
        for k, l in all_indices(n, 2):
            term = omega_inv[(k, l)] * r[(l, k, i, j)]
            total = term if total is None else total + term
        return total

    trace = JetTensor.build(n, (DOWN, DOWN), trace_entry)
    checks.append(_zero_check("first_pair_trace_vanishes", trace))

    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# Ricci tensor
# ---------------------------------------------------------------------------


def ricci(chart: ChartSpec, cd: CurvatureData | None = None) -> tuple[JetTensor, ValidationReport]:
    """Ricci tensor K_ij = w^kl R_likj with its postcondition report.

    The report carries: symmetry of K, vanishing of the w-trace w^ji K_ij,
    and the second-contraction identity w^kl R_ijkl = 2 K_ij.
    """
    if cd is None:
        cd = curvature(chart)
    n = chart.dim
    r = cd.r_low
    omega_inv = chart.omega_inv

    def k_entry(idx):
        i, j = idx
        total = None
        for k, l in all_indices(n, 2):
            term = omega_inv[(k, l)] * r[(l, i, k, j)]
            total = term if total is None else total + term
        return total

    K = JetTensor.build(n, (DOWN, DOWN), k_entry)
    checks = []

    sym = JetTensor.build(n, (DOWN, DOWN), lambda idx: K[idx] - K[(idx[1], idx[0])])
    checks.append(_zero_check("ricci_symmetric", sym))

    trace = None
    for i, j in all_indices(n, 2):
        term = omega_inv[(j, i)] * K[(i, j)]
        trace = term if trace is None else trace + term
    checks.append(
        CheckResult(
            "ricci_omega_trace_vanishes",
            trace.is_zero(),
            None if trace.is_zero() else {"index": (), "multidegree": _first_nonzero(trace)},
        )
    )

    def second_entry(idx):
        i, j = idx
        total = None
        for k, l in all_indices(n, 2):
            term = omega_inv[(k, l)] * r[(i, j, k, l)]
            total = term if total is None else total + term
        return total - (K[idx] + K[idx])

    second = JetTensor.build(n, (DOWN, DOWN), second_entry)
    checks.append(_zero_check("second_contraction_is_twice_ricci", second))

    return K, ValidationReport(tuple(checks))


def einstein_residual(chart: ChartSpec, cd: CurvatureData | None = None) -> tuple[JetTensor, bool]:
    """Ricci tensor plus the flag 'K vanishes to the available order'."""
    K, _ = ricci(chart, cd)
    return K, K.is_zero()


# ---------------------------------------------------------------------------
# the order-zero operator  L = w^ij nabla_i nabla_j  on vector fields
# ---------------------------------------------------------------------------


def operator_L(chart: ChartSpec, X: JetTensor, cd: CurvatureData | None = None) -> JetTensor:
    """Apply L to a vector field, with the order-zero assertion built in.

    L is the composition of two covariant derivative operators contracted
    with w^ij; the result must equal w^ik K_kj X^j exactly at the common
    order, which is the assertable content of 'L has order zero'.
    """
    if X.variances != (UP,) or X.dim != chart.dim:
        raise ShapeError("X must be a rank-1 up tensor over the chart dimension")
    n = chart.dim
    gup = chart.gamma_up
    omega_inv = chart.omega_inv

    def covariant_vector(field, j, k):
        total = field[(k,)].partial(j)
        for s in range(n):
            total = total + gup[(k, j, s)] * field[(s,)]
        return total

    # first derivative: Y[j] is the vector field nabla_j X
    Y = [
        JetTensor(n, (UP,), [covariant_vector(X, j, k) for k in range(n)], check=False)
        for j in range(n)
    ]

    def L_entry(idx):
        (k,) = idx
        total = None
        for i, j in all_indices(n, 2):
            inner = Y[j][(k,)].partial(i)
            for s in range(n):
                inner = inner + gup[(k, i, s)] * Y[j][(s,)]
            term = omega_inv[(i, j)] * inner
            total = term if total is None else total + term
        return total

    LX = JetTensor.build(n, (UP,), L_entry)

    K, _ = ricci(chart, cd)

    def ricci_route(idx):
        (i,) = idx
        total = None
        for k, j in all_indices(n, 2):
            term = omega_inv[(i, k)] * (K[(k, j)] * X[(j,)])
            total = term if total is None else total + term
        return total

    other = JetTensor.build(n, (UP,), ricci_route)
    common = min(LX.order, other.order)
    if LX.truncate(common) != other.truncate(common):
        raise AssertionError("operator L disagrees with the Ricci route")
    return LX


# ---------------------------------------------------------------------------
# sectional classification
# ---------------------------------------------------------------------------

ELLIPTIC = "elliptic"
HYPERBOLIC = "hyperbolic"
DEGENERATE = "degenerate"
FLAT_CLASS = "flat"


@dataclass(frozen=True)
class SectionalClass:
    """Canonical form of the plane quadratic form Z -> R(Z, Z, X, Y).

    ``det_invariant`` is the exact determinant of the 2x2 form matrix in a
    basis with w(X, Y) = 1: r^2 for the elliptic class, -r^2 for the
    hyperbolic one, 0 otherwise.  ``sign`` is the sign of r for the elliptic
    class and the sign of the rank-1 form for the degenerate class (the
    canonical-form list writes only +Z1^2; real unimodular changes of basis
    preserve this sign, so it is recorded).  ``r_numeric`` is a float
    approximation of r, present only for the elliptic/hyperbolic classes.
    """

    kind: str
    det_invariant: object
    sign: int | None
    r_numeric: float | None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "det_invariant": rat_str(self.det_invariant),
            "sign": self.sign,
            "r_numeric": self.r_numeric,
        }


def sectional_classify(r_low0: PointTensor, omega0: PointTensor, x, y) -> SectionalClass:
    """Classify the non-isotropic 2-plane spanned by rational vectors x, y.

    After rescaling so that w(X, Y) = 1 the quadratic form
    E(Z) = w(R(X, Y)Z, Z) is formed on the plane; it depends only on the
    plane, and its canonical form (elliptic / hyperbolic / degenerate /
    flat, with the invariant r) is returned with the exact determinant.
    """
    n = omega0.dim
    if r_low0.variances != (DOWN,) * 4 or r_low0.dim != n:
        raise ShapeError("curvature point tensor must be (0,4) over the form dimension")
    x = [rat(c) for c in x]
    y = [rat(c) for c in y]
    if len(x) != n or len(y) != n:
        raise ShapeError("plane vectors must match the chart dimension")
    pairing = QZERO
    for i, j in all_indices(n, 2):
        pairing = pairing + omega0[(i, j)] * x[i] * y[j]
    if not pairing:
        raise DomainError("isotropic plane: w(X, Y) = 0")
    y = [c / pairing for c in y]

    def form(u, v):
        # pairing order w(R(X,Y)u, v) = -R(u, v, X, Y); this is the order
        # that makes the round sphere elliptic with positive r and the
        # hyperbolic plane elliptic with negative r
        total = QZERO
        for i, j, k, l in all_indices(n, 4):
            c = r_low0[(i, j, k, l)]
            if c:
                total = total - c * u[i] * v[j] * x[k] * y[l]
        return total

    e11 = form(x, x)
    e12 = form(x, y)
    e22 = form(y, y)
    det = e11 * e22 - e12 * e12

    if det > 0:
        sign = 1 if e11 > 0 else -1
        return SectionalClass(ELLIPTIC, det, sign, sign * math.sqrt(float(det)))
    if det < 0:
        return SectionalClass(HYPERBOLIC, det, None, math.sqrt(float(-det)))
    if e11 or e12 or e22:
        sign = 1 if (e11 if e11 else e22) > 0 else -1
        return SectionalClass(DEGENERATE, QZERO, sign, None)
    return SectionalClass(FLAT_CLASS, QZERO, None, None)
