"""Constructive inverse problems: charts from prescribed point data.

Builds truncated charts whose normal tensors, curvature tensor, or first
covariant curvature derivative at the origin match prescribed values; the
admissibility conditions are checked exactly and every violated condition
is reported by name with a witness index.
"""

from __future__ import annotations

from math import factorial

from .charts import RECONSTRUCTED, ChartSpec, validate
from .curvature import curvature
from .errors import (
    ConditionError,
    IntegrabilityError,
    OrderError,
    ShapeError,
    ValidationFailure,
)
from .jets import Jet, radial_antiderivative
from .normal import (
    _pair_exchange_witness,
    a_from_curvature,
    covariant_derivative,
    curvature_point_failures,
    derivative_point_failures,
    normal_tensors,
)
from .rationals import Q
from .tensors import (
    CYCLIC_SUM,
    DOWN,
    JetTensor,
    PointTensor,
    all_indices,
    rat_det,
    sym_project,
    veblen_sum,
)


def _form_failures(omega0: PointTensor) -> list:
    failures = []
    if omega0.variances != (DOWN, DOWN):
        raise ShapeError("omega0 must be a (0,2) point tensor")
    n = omega0.dim
    witness = next(
        (idx for idx in all_indices(n, 2) if omega0[idx] + omega0[(idx[1], idx[0])]),
        None,
    )
    if witness is not None:
        failures.append(("form_antisymmetric", witness))
    rows = [[omega0[(i, j)] for j in range(n)] for i in range(n)]
    if not rat_det(rows):
        failures.append(("form_nondegenerate", None))
    return failures


def _normal_tensor_failures(a: dict) -> list:
    failures = []
    for r in sorted(a):
        t = a[r]
        rank = 3 + r
        if t.variances != (DOWN,) * rank:
            raise ShapeError(f"A_{r} must be a (0,{rank}) point tensor")
        if r == 0:
            if not t.is_zero():
                failures.append(("a0_vanishes", next(
                    idx for idx in all_indices(t.dim, 3) if t[idx]
                )))
            continue
        w = t.symmetry_witness((1, 2), "symmetric")
        if w is not None:
            failures.append((f"a{r}_symmetric_pair", w))
        if r >= 2:
            w = t.symmetry_witness(tuple(range(3, rank)), "symmetric")
            if w is not None:
                failures.append((f"a{r}_symmetric_trailing", w))
        if any(name.startswith(f"a{r}_symmetric") for name, _ in failures):
            continue  # the remaining checks presuppose the symmetries
        vs = veblen_sum(t)
        w = next((idx for idx in all_indices(t.dim, rank) if vs[idx]), None)
        if w is not None:
            failures.append((f"a{r}_pair_substitution_sum", w))
        w = _pair_exchange_witness(t)
        if w is not None:
            failures.append((f"a{r}_pair_exchange", w))
    return failures


def _series_from_derivatives(n: int, order: int, coeff_at) -> Jet:
    """Jet whose degree-r parts are 1/r! times prescribed derivative values.

    ``coeff_at(key)`` returns the derivative value for the multidegree key
    (trailing-block symmetric data), so the series coefficient is the value
    divided by the multidegree factorial.
    """
    coeffs = {}
    from .jets import monomials_upto

    for key in monomials_upto(n, order):
        value = coeff_at(key)
        if value:
            fact = 1
            for e in key:
                fact *= factorial(e)
            coeffs[key] = Q(value) / fact
    return Jet(n, order, coeffs)


def _rep(key) -> tuple:
    """Multidegree -> canonical trailing index tuple (sorted repetitions)."""
    out = []
    for var, count in enumerate(key):
        out.extend([var] * count)
    return tuple(out)


def chart_from_normal_tensors(a: dict, omega0: PointTensor, order: int,
                              verify: bool = True) -> ChartSpec:
    """Chart in normal (and, for totally symmetric data, Darboux) form.

    ``a`` maps r to the prescribed order-r normal tensor (r = 0 optional
    and zero); the symbols are assembled from the Taylor series with these
    derivatives, the form from its extensions derived through the
    preserved-form link, and all higher normal tensors are implicitly zero.
    The output validates, is already in normal coordinates, and (when
    ``verify``) its recomputed normal tensors reproduce the inputs.
    """
    if not a:
        raise ShapeError("no normal tensors given")
    n = omega0.dim
    r_max = max(a)
    if order > r_max + 2:
        raise OrderError(
            f"truncation order {order} exceeds r_max + 2 = {r_max + 2}"
        )
    failures = _form_failures(omega0)
    failures.extend(_normal_tensor_failures(a))
    if failures:
        raise ConditionError(failures)

    def gamma_entry(idx):
        i, j, k = idx

        def coeff_at(key):
            r = sum(key)
            a_r = a.get(r) if r >= 1 else None
            if a_r is None:
                return Q(0)
            return a_r[(i, j, k) + _rep(key)]

        return _series_from_derivatives(n, order, coeff_at)

    gamma = JetTensor.build(n, (DOWN, DOWN, DOWN), gamma_entry)

    def omega_entry(idx):
        i, j = idx

        def coeff_at(key):
            r = sum(key)
            if r == 0:
                return omega0[(i, j)]
            a_prev = a.get(r - 1) if r >= 2 else None
            if a_prev is None:
                return Q(0)
            rep = _rep(key)
            k, alphas = rep[0], rep[1:]
            return a_prev[(i, k, j) + alphas] - a_prev[(j, k, i) + alphas]

        return _series_from_derivatives(n, order, coeff_at)

    omega = JetTensor.build(n, (DOWN, DOWN), omega_entry)
    chart = ChartSpec(n, order, omega, gamma, RECONSTRUCTED)
    report = validate(chart)
    if not report.passed:
        raise ValidationFailure(report)
    if verify:
        r_check = min(r_max, order - 2)
        family = normal_tensors(chart, r_check)
        for r in range(1, r_check + 1):
            expected = a.get(r)
            reproduced = (
                family.a[r].is_zero() if expected is None else family.a[r] == expected
            )
            if not reproduced:
                raise AssertionError(
                    f"reconstructed chart does not reproduce A_{r}"
                )
    return chart


def omega_from_connection(gamma: JetTensor, omega0: PointTensor) -> JetTensor:
    """Form jets preserved by a given symmetric connection.

    Integrates d_k w_ij = G_ikj - G_jki radially per component pair from
    the prescribed origin value; the cross-derivative compatibility of the
    right-hand side is required and reported with a full witness.
    """
    if gamma.variances != (DOWN,) * 3:
        raise ShapeError("gamma must be a (0,3) jet tensor")
    n = gamma.dim
    failures = _form_failures(omega0)
    w = gamma.symmetry_witness((1, 2), "symmetric")
    if w is not None:
        failures.append(("gamma_symmetric_pair", w))
    if failures:
        raise ConditionError(failures)

    entries = {}
    for i in range(n):
        entries[(i, i)] = Jet.zero(n, gamma.order + 1)
    for i in range(n):
        for j in range(i + 1, n):
            fs = [gamma[(i, k, j)] - gamma[(j, k, i)] for k in range(n)]
            try:
                entries[(i, j)] = radial_antiderivative(fs, omega0[(i, j)])
            except IntegrabilityError as err:
                k, l, multidegree = err.witness
                raise IntegrabilityError(
                    f"preservation data for w_{i}{j} is not integrable",
                    witness=(k, l, i, j, multidegree),
                ) from None
            entries[(j, i)] = -entries[(i, j)]
    omega = JetTensor(
        n, (DOWN, DOWN), [entries[idx] for idx in all_indices(n, 2)], check=False
    )
    chart = ChartSpec(n, max(gamma.order, 2), omega, gamma, RECONSTRUCTED)
    report = validate(chart)
    if not report.passed:
        raise ValidationFailure(report)
    return omega


def realize_curvature(r0: PointTensor, omega0: PointTensor, order: int = 3) -> ChartSpec:
    """Chart whose curvature tensor at the origin is the prescribed one.

    Checks the three admissibility conditions exactly, derives the order-1
    normal tensor, asserts its induced symmetries (which follow from the
    conditions and cannot fail), assembles the chart with all higher normal
    tensors zero, and verifies the exact curvature round trip.
    """
    failures = curvature_point_failures(r0)
    failures.extend(_form_failures(omega0))
    if failures:
        raise ConditionError(failures)
    a1 = a_from_curvature(r0, 1)
    if a1.symmetry_witness((1, 2), "symmetric") is not None:
        raise AssertionError("derived A_1 lost its pair symmetry")
    if not sym_project(a1, (1, 2, 3), CYCLIC_SUM).is_zero():
        raise AssertionError("derived A_1 violates the cyclic identity")
    if _pair_exchange_witness(a1) is not None:
        raise AssertionError("derived A_1 violates the pair-exchange symmetry")
    chart = chart_from_normal_tensors({1: a1}, omega0, order)
    realized = curvature(chart).r_low.at_origin()
    if realized != r0.with_symmetries([]):
        raise AssertionError("realized curvature does not match the input")
    return chart


def realize_curvature_derivative(r0: PointTensor | None, r1: PointTensor,
                                 omega0: PointTensor, order: int = 4) -> ChartSpec:
    """Chart with prescribed curvature derivative (and optionally curvature).

    The derivative data must satisfy the five admissibility conditions; the
    optional curvature tensor its three.  Both point tensors are realized
    jointly and recovered exactly from the constructed chart.
    """
    failures = derivative_point_failures(r1)
    if r0 is not None:
        failures.extend(curvature_point_failures(r0))
    failures.extend(_form_failures(omega0))
    if failures:
        raise ConditionError(failures)
    n = omega0.dim
    a1 = (
        a_from_curvature(r0, 1)
        if r0 is not None
        else PointTensor.zeros(n, (DOWN,) * 4)
    )
    a2 = a_from_curvature(r1, 2)
    for slots in ((1, 2), (3, 4)):
        if a2.symmetry_witness(slots, "symmetric") is not None:
            raise AssertionError(f"derived A_2 lost its {slots} symmetry")
    if not veblen_sum(a2.with_symmetries(
        [((1, 2), "symmetric"), ((3, 4), "symmetric")]
    )).is_zero():
        raise AssertionError("derived A_2 violates the pair-substitution sum")
    if _pair_exchange_witness(a2) is not None:
        raise AssertionError("derived A_2 violates the pair-exchange symmetry")
    chart = chart_from_normal_tensors({1: a1, 2: a2}, omega0, order)
    cd = curvature(chart)
    realized0 = cd.r_low.at_origin()
    expected0 = r0.with_symmetries([]) if r0 is not None else PointTensor.zeros(n, (DOWN,) * 4)
    if realized0 != expected0:
        raise AssertionError("realized curvature does not match the input")
    realized1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
    if realized1 != r1.with_symmetries([]):
        raise AssertionError("realized curvature derivative does not match the input")
    return chart
