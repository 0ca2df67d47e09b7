import random

import pytest

from conftest import hyperbolic_chart, random_jet
from sympjet.charts import (
    ChartSpec,
    chart_from_metric,
    darboux_flat,
    functional_dims,
    levi_civita,
    preserving_from_symmetric,
    random_closed_omega,
    random_fedosov_chart,
    random_symmetric_pi,
    symmetric_part,
    validate,
)
from sympjet.errors import ShapeError, SingularityError
from sympjet.jets import Jet
from sympjet.rationals import Q
from sympjet.tensors import DOWN, JetTensor, all_indices, omega_lower


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def test_flat_darboux_validates():
    chart = darboux_flat(2, 3)
    report = validate(chart)
    assert report.passed
    assert [c.name for c in report.checks] == [
        "omega_antisymmetric",
        "omega_nondegenerate_origin",
        "omega_closed",
        "gamma_symmetric",
        "omega_preserved",
    ]


def test_hyperbolic_chart_validates():
    assert validate(hyperbolic_chart()).passed


def test_closedness_violation_located():
    # n=4: take the canonical constant form and disturb w_01 by x3 only,
    # leaving antisymmetry intact; dw then has a located nonzero component
    n, order = 4, 3
    flat = darboux_flat(n, order)
    x3 = Jet.variable(n, order, 3)
    entries = list(flat.omega.entries)
    entries[0 * n + 1] = entries[0 * n + 1] + x3
    entries[1 * n + 0] = entries[1 * n + 0] - x3
    omega = JetTensor(n, (DOWN, DOWN), entries)
    chart = ChartSpec(n, order, omega, flat.gamma_lower)
    report = validate(chart)
    closed = report["omega_closed"]
    assert not closed.passed
    assert closed.witness["index"] == (0, 1, 3)
    assert closed.witness["multidegree"] == (0, 0, 0, 0)
    assert not report["omega_preserved"].passed


def test_darboux_characterization_total_symmetry():
    # with a constant form, validity is exactly total symmetry of the symbols
    n, order = 2, 3
    flat = darboux_flat(n, order)
    rng = random.Random(1)
    entries = [random_jet(rng, n, order, density=0.7) for _ in range(n**3)]
    gamma = JetTensor(n, (DOWN,) * 3, entries)
    chart = ChartSpec(n, order, flat.omega, gamma)
    report = validate(chart)
    totally_symmetric = all(
        gamma[idx] == gamma[perm]
        for idx in all_indices(n, 3)
        for perm in [(idx[1], idx[0], idx[2]), (idx[0], idx[2], idx[1])]
    )
    assert report.passed == totally_symmetric
    assert not report.passed  # a random draw is essentially never symmetric
    sym_chart = random_fedosov_chart(2, n, order)
    assert validate(sym_chart).passed


# ---------------------------------------------------------------------------
# symmetric part and torsion
# ---------------------------------------------------------------------------


def test_symmetric_connection_has_zero_torsion():
    chart = random_fedosov_chart(5, 2, 3)
    pi, torsion = symmetric_part(chart)
    assert torsion.is_zero()
    assert pi == chart.gamma_lower


def test_pure_antisymmetric_part_gives_zero_pi():
    n, order = 2, 3
    flat = darboux_flat(n, order)
    rng = random.Random(7)
    anti = random_jet(rng, n, order)
    entries = {}
    for idx in all_indices(n, 3):
        k, i, j = idx
        if i < j:
            entries[idx] = anti * (k + 1)
        elif i > j:
            entries[idx] = -(anti * (k + 1))
        else:
            entries[idx] = Jet.zero(n, order)
    gamma = JetTensor(n, (DOWN,) * 3, [entries[idx] for idx in all_indices(n, 3)])
    chart = ChartSpec(n, order, flat.omega, gamma)
    pi, torsion = symmetric_part(chart)
    assert pi.is_zero()
    assert not torsion.is_zero()


def test_gamma_reassembles_from_parts():
    rng = random.Random(9)
    n, order = 2, 3
    omega = random_closed_omega(rng, n, order)
    rng2 = random.Random(10)
    gamma_entries = [random_jet(rng2, n, order, density=0.6) for _ in range(n**3)]
    gamma = JetTensor(n, (DOWN,) * 3, gamma_entries)
    chart = ChartSpec(n, order, omega, gamma)
    pi, torsion = symmetric_part(chart)
    half_t = omega_lower(torsion, 0, chart.omega)
    rebuilt = JetTensor.build(
        n, (DOWN,) * 3, lambda idx: pi[idx] + half_t[idx] * Q(1, 2)
    )
    assert rebuilt == chart.gamma_lower.truncate(rebuilt.order)


# ---------------------------------------------------------------------------
# the affine bijection
# ---------------------------------------------------------------------------


def test_constant_form_symmetric_pi_is_fixed_point():
    n, order = 2, 3
    flat = darboux_flat(n, order)
    chart = random_fedosov_chart(11, n, order)  # totally symmetric symbols
    gamma = preserving_from_symmetric(chart.gamma_lower, flat.omega)
    assert gamma == chart.gamma_lower.truncate(gamma.order)


def test_zero_pi_gives_gamma_from_form_derivatives():
    rng = random.Random(13)
    n, order = 2, 4
    omega = random_closed_omega(rng, n, order)
    zero_pi = JetTensor(n, (DOWN,) * 3, [Jet.zero(n, order)] * n**3)
    gamma = preserving_from_symmetric(zero_pi, omega)
    for k, i, j in all_indices(n, 3):
        assert gamma[(k, i, j)] == omega[(i, j)].partial(k)
    chart = ChartSpec(n, order, omega, gamma)
    assert validate(chart)["omega_preserved"].passed


def test_bijection_round_trips_random():
    rng = random.Random(17)
    for trial in range(10):
        n = 2 if trial % 2 else 4
        order = 3
        omega = random_closed_omega(rng, n, order)
        pi = random_symmetric_pi(rng, n, order)
        gamma = preserving_from_symmetric(pi, omega)
        chart = ChartSpec(n, 2, omega, gamma)
        assert validate(chart)["omega_preserved"].passed
        pi_back, _ = symmetric_part(chart)
        assert pi_back == pi.truncate(pi_back.order)
        gamma_back = preserving_from_symmetric(pi_back, chart.omega)
        assert gamma_back == chart.gamma_lower.truncate(gamma_back.order)


def test_symmetric_iff_symmetric_part_preserves():
    # for a form-preserving connection: symbols symmetric in the last pair
    # exactly when the symmetric part also preserves the form
    rng = random.Random(19)
    n, order = 2, 3
    omega = random_closed_omega(rng, n, order)
    pi = random_symmetric_pi(rng, n, order)
    gamma = preserving_from_symmetric(pi, omega)
    chart = ChartSpec(n, 2, omega, gamma)
    gamma_is_symmetric = validate(chart)["gamma_symmetric"].passed
    pi_chart = ChartSpec(n, 2, chart.omega, symmetric_part(chart)[0])
    pi_preserves = validate(pi_chart)["omega_preserved"].passed
    assert gamma_is_symmetric == pi_preserves
    assert not gamma_is_symmetric  # generic closed form: the two differ
    fedosov = hyperbolic_chart()
    assert validate(fedosov)["gamma_symmetric"].passed
    pi_f, _ = symmetric_part(fedosov)
    pi_f_chart = ChartSpec(2, fedosov.order, fedosov.omega, pi_f)
    assert validate(pi_f_chart)["omega_preserved"].passed


def test_preserving_from_symmetric_requires_symmetric_pi():
    n, order = 2, 3
    flat = darboux_flat(n, order)
    x = Jet.variable(n, order, 0)
    entries = [Jet.zero(n, order)] * n**3
    entries[0 * 4 + 0 * 2 + 1] = x  # pi_{0,0,1} != pi_{0,1,0}
    pi = JetTensor(n, (DOWN,) * 3, entries)
    with pytest.raises(ShapeError):
        preserving_from_symmetric(pi, flat.omega)


# ---------------------------------------------------------------------------
# metric connections
# ---------------------------------------------------------------------------


def test_levi_civita_constant_metric_vanishes():
    n, order = 2, 3
    g = JetTensor(
        n, (DOWN, DOWN),
        [Jet.const(n, order, v) for v in (2, 0, 0, 3)],
    )
    assert levi_civita(g).is_zero()


def _finite_difference_symbols(metric_fn, point, n, h=1e-6):
    """Float oracle: G_kij = (d_i g_jk + d_j g_ik - d_k g_ij)/2 by central differences."""

    def dg(k, i, j):
        up = [p + (h if t == k else 0) for t, p in enumerate(point)]
        down = [p - (h if t == k else 0) for t, p in enumerate(point)]
        return (metric_fn(up)[i][j] - metric_fn(down)[i][j]) / (2 * h)

    return [
        [
            [(dg(i, j, k) + dg(j, i, k) - dg(k, i, j)) / 2 for j in range(n)]
            for i in range(n)
        ]
        for k in range(n)
    ]


def test_levi_civita_hyperbolic_matches_finite_differences():
    order = 3
    base = (Q(0), Q(1))
    y = Jet.variable(2, order, 1) + Jet.const(2, order, 1)
    lam = (y * y).reciprocal()
    zero = Jet.zero(2, order)
    g = JetTensor(2, (DOWN, DOWN), [lam, zero, zero, lam])
    lc = levi_civita(g)

    def metric_fn(p):
        lam = 1.0 / float(p[1]) ** 2
        return [[lam, 0.0], [0.0, lam]]

    oracle = _finite_difference_symbols(metric_fn, [0.0, 1.0], 2)
    for k, i, j in all_indices(2, 3):
        exact = float(lc[(k, i, j)].constant_term())
        assert abs(exact - oracle[k][i][j]) < 1e-6


def test_metric_connection_preserves_metric():
    # nabla g = 0: d_k g_ij = G^g_{jki} + G^g_{ikj}, exact to the jets' order
    chart = hyperbolic_chart(order=4)
    y = Jet.variable(2, 4, 1) + Jet.const(2, 4, 1)
    lam = (y * y).reciprocal()
    zero = Jet.zero(2, 4)
    g = JetTensor(2, (DOWN, DOWN), [lam, zero, zero, lam])
    lc = levi_civita(g)
    for k, i, j in all_indices(2, 3):
        diff = g[(i, j)].partial(k) - (lc[(j, k, i)] + lc[(i, k, j)])
        assert diff.is_zero()
    assert validate(chart).passed


def test_levi_civita_rejects_degenerate_metric():
    n, order = 2, 2
    g = JetTensor(n, (DOWN, DOWN), [Jet.const(n, order, v) for v in (1, 1, 1, 1)])
    with pytest.raises(SingularityError):
        levi_civita(g)


# ---------------------------------------------------------------------------
# counting and canonical charts
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n,expected",
    [
        (1, {"C": 1, "S": 1, "C_omega": 1, "S_omega": 1, "Lambda3": 0, "residual": 0}),
        (2, {"C": 8, "S": 6, "C_omega": 6, "S_omega": 4, "Lambda3": 0, "residual": 0}),
        (3, {"C": 27, "S": 18, "C_omega": 18, "S_omega": 10, "Lambda3": 1, "residual": 0}),
    ],
)
def test_functional_dims_values(n, expected):
    assert functional_dims(n) == expected


def test_darboux_flat_form():
    chart = darboux_flat(2, 2)
    assert chart.omega[(0, 1)] == Jet.const(2, 2, 1)
    assert chart.omega[(1, 0)] == Jet.const(2, 2, -1)
    assert chart.gamma_lower.is_zero()
    with pytest.raises(ShapeError):
        darboux_flat(3, 2)


def test_random_chart_generator_is_deterministic():
    a = random_fedosov_chart(123, 4, 3)
    b = random_fedosov_chart(123, 4, 3)
    assert a.gamma_lower == b.gamma_lower
    assert validate(a).passed


def test_chart_from_metric_provenance():
    chart = hyperbolic_chart(order=3)
    assert chart.provenance == "levi_civita"
    assert validate(chart).passed
