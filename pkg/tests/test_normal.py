import random

import numpy as np
import pytest

from conftest import random_jet, sphere_chart
from sympjet.charts import darboux_flat, random_fedosov_chart
from sympjet.curvature import curvature
from sympjet.errors import ConditionError, OrderError, ShapeError
from sympjet.jets import Jet, identity_map
from sympjet.normal import (
    _Pullback,
    a_from_curvature,
    covariant_derivative,
    curvature_point_failures,
    derivative_identity_report,
    derivative_point_failures,
    derivative_point_report,
    exponential_jets,
    extension,
    normal_tensor_via_triads,
    normal_tensors,
    to_normal_chart,
    triad_sequence,
)
from sympjet.numeric import exponential_endpoints, geodesic_endpoints
from sympjet.rationals import Q
from sympjet.tensors import DOWN, UP, JetTensor, PointTensor, all_indices


# ---------------------------------------------------------------------------
# exponential map
# ---------------------------------------------------------------------------


def test_flat_exponential_is_identity():
    chart = darboux_flat(2, 4)
    assert exponential_jets(chart) == identity_map(2, 4)


def test_constant_symbols_quadratic_term():
    # with constant symbols the degree-2 part is -G^i_jk v^j v^k / 2
    chart = random_fedosov_chart(61, 2, 4, max_degree=0, density=0.9)
    phi = exponential_jets(chart)
    gup = chart.gamma_up
    for i in range(2):
        quad = phi[i].homogeneous_part(2)
        expected = Jet.zero(2, 4)
        for j, k in all_indices(2, 2):
            mono = tuple((1 if t == j else 0) + (1 if t == k else 0) for t in range(2))
            expected = expected + gup[(i, j, k)].truncate(0).mul_monomial(mono) * Q(-1, 2)
        assert quad.truncate(expected.order) == expected


def test_exponential_linear_part_is_identity():
    chart = random_fedosov_chart(62, 4, 3)
    phi = exponential_jets(chart)
    for i in range(4):
        lin = phi[i].homogeneous_part(1)
        assert lin == Jet.variable(4, 3, i).truncate(lin.order)
        assert not phi[i].constant_term()


@pytest.mark.parametrize("seed,n,order", [(63, 2, 4), (64, 4, 3), (65, 4, 4)])
def test_exponential_matches_geodesic_integration(seed, n, order):
    chart = random_fedosov_chart(seed, n, order)
    phi = exponential_jets(chart)
    rng = np.random.default_rng(seed)
    velocities = rng.uniform(-1.0, 1.0, size=(10, n)) / 512.0
    ode = geodesic_endpoints(chart, velocities, steps=128)
    formal = exponential_endpoints(phi, velocities)
    scale = np.maximum(np.abs(ode).max(axis=1, keepdims=True), 1e-12)
    assert float(np.abs(ode - formal).max() / scale.min()) < 1e-6


def test_sphere_exponential_matches_integration():
    chart = sphere_chart(1, ("0", "0"))
    phi = exponential_jets(chart)
    rng = np.random.default_rng(7)
    velocities = rng.uniform(-1.0, 1.0, size=(6, 2)) / 256.0
    ode = geodesic_endpoints(chart, velocities, steps=256)
    formal = exponential_endpoints(phi, velocities)
    assert float(np.abs(ode - formal).max()) < 1e-6 * float(np.abs(ode).max())


# ---------------------------------------------------------------------------
# normal chart
# ---------------------------------------------------------------------------


def test_flat_chart_unchanged():
    chart = darboux_flat(2, 4)
    nc = to_normal_chart(chart)
    assert nc.gamma_lower.is_zero()
    common = min(nc.omega.order, chart.omega.order)
    assert nc.omega.truncate(common) == chart.omega.truncate(common)


@pytest.mark.parametrize("seed,n,order", [(71, 2, 3), (72, 2, 4), (73, 4, 4)])
def test_normal_chart_postconditions(seed, n, order):
    # the vanishing of the symbols at 0 and of the radial contraction are
    # asserted inside; here we re-check the contraction explicitly
    chart = random_fedosov_chart(seed, n, order)
    nc = to_normal_chart(chart)
    for idx in all_indices(n, 3):
        assert not nc.gamma_lower[idx].constant_term()
    for i in range(n):
        residual = None
        for j, k in all_indices(n, 2):
            mono = tuple((1 if t == j else 0) + (1 if t == k else 0) for t in range(n))
            term = nc.gamma_lower[(i, j, k)].mul_monomial(mono)
            residual = term if residual is None else residual + term
        assert residual.is_zero()
        assert residual.order >= order


def test_normal_chart_origin_form_unchanged():
    chart = sphere_chart(1, ("1/3", "-1/2"))
    nc = to_normal_chart(chart)
    assert nc.omega.at_origin() == chart.omega.at_origin()


# ---------------------------------------------------------------------------
# normal tensors
# ---------------------------------------------------------------------------


def test_flat_normal_tensors_vanish():
    family = normal_tensors(darboux_flat(2, 4), 2)
    assert all(t.is_zero() for t in family.a.values())
    for r in range(1, 4):
        assert family.omega_ext[r].is_zero()
    assert family.omega_ext[0] == darboux_flat(2, 4).omega.at_origin()


@pytest.mark.parametrize("seed,n", [(81, 2), (82, 4)])
def test_second_form_extension_is_third_of_curvature(seed, n):
    chart = random_fedosov_chart(seed, n, 4)
    cd = curvature(chart)
    r0 = cd.r_low.at_origin()
    family = normal_tensors(chart, 2)
    ext2 = family.omega_ext[2]
    third = Q(1, 3)
    for i, j, k, l in all_indices(n, 4):
        assert ext2[(i, j, k, l)] == third * r0[(k, l, i, j)]


@pytest.mark.parametrize("seed,n,order", [(83, 2, 4), (84, 4, 4), (85, 2, 3)])
def test_pipeline_matches_closed_forms(seed, n, order):
    chart = random_fedosov_chart(seed, n, order)
    cd = curvature(chart)
    nc = to_normal_chart(chart)
    r_max = min(2, nc.gamma_lower.order)
    family = normal_tensors(chart, r_max, normal_chart=nc)
    a1 = a_from_curvature(cd.r_low.at_origin(), 1)
    assert family.a[1] == a1
    if r_max >= 2:
        r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
        a2 = a_from_curvature(r1, 2)
        assert family.a[2] == a2


def test_normal_tensors_order_guard():
    chart = random_fedosov_chart(86, 2, 3)
    with pytest.raises(OrderError):
        normal_tensors(chart, 2)  # K-2 = 1 < 2


def test_a_from_curvature_recovers_input():
    chart = random_fedosov_chart(87, 2, 4)
    cd = curvature(chart)
    r0 = cd.r_low.at_origin()
    a1 = a_from_curvature(r0, 1)
    rebuilt = PointTensor.build(
        2, (DOWN,) * 4, lambda x: a1[(x[0], x[1], x[3], x[2])] - a1[x]
    )
    assert rebuilt == r0
    r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
    a2 = a_from_curvature(r1, 2)
    rebuilt1 = PointTensor.build(
        2, (DOWN,) * 5, lambda x: a2[(x[0], x[1], x[3], x[2], x[4])] - a2[x]
    )
    assert rebuilt1 == r1


def test_a_from_curvature_zero():
    zero4 = PointTensor.zeros(2, (DOWN,) * 4)
    assert a_from_curvature(zero4, 1).is_zero()
    zero5 = PointTensor.zeros(2, (DOWN,) * 5)
    assert a_from_curvature(zero5, 2).is_zero()


def test_a_from_curvature_rejects_bad_symmetry():
    bad = PointTensor.build(2, (DOWN,) * 4, lambda idx: Q(1))
    with pytest.raises(ConditionError) as err:
        a_from_curvature(bad, 1)
    assert "antisymmetric_last_pair" in err.value.conditions


# ---------------------------------------------------------------------------
# extensions and covariant derivatives
# ---------------------------------------------------------------------------


def test_form_extension_r1_vanishes():
    chart = random_fedosov_chart(91, 2, 3)
    assert extension(chart, chart.omega, 1).is_zero()


def test_extension_r1_equals_covariant_derivative():
    rng = random.Random(92)
    chart = random_fedosov_chart(92, 2, 4)
    tensor = JetTensor(
        2, (UP, DOWN), [random_jet(rng, 2, 4, max_degree=2) for _ in range(4)]
    )
    pb = _Pullback(chart)
    ext1 = extension(chart, tensor, 1, pullback=pb)
    cov1 = covariant_derivative(chart, tensor, 1).at_origin()
    assert ext1 == cov1


def test_extension_r0_is_origin_value():
    chart = random_fedosov_chart(93, 2, 3)
    ext0 = extension(chart, chart.omega, 0)
    assert ext0 == chart.omega.at_origin()


def test_form_extension_r2_is_third_of_curvature():
    chart = random_fedosov_chart(99, 2, 4)
    r0 = curvature(chart).r_low.at_origin()
    ext2 = extension(chart, chart.omega, 2)
    for i, j, k, l in all_indices(2, 4):
        assert ext2[(i, j, k, l)] == Q(1, 3) * r0[(k, l, i, j)]


def test_covariant_derivative_of_form_vanishes():
    chart = random_fedosov_chart(94, 4, 3)
    assert covariant_derivative(chart, chart.omega, 1).is_zero()


def test_covariant_derivative_of_scalar_is_partials():
    rng = random.Random(95)
    chart = random_fedosov_chart(95, 2, 4)
    f = random_jet(rng, 2, 4)
    scalar = JetTensor(2, (), [f])
    nabla = covariant_derivative(chart, scalar, 1)
    for a in range(2):
        assert nabla[(a,)] == f.partial(a)


def test_second_bianchi_as_jets():
    chart = random_fedosov_chart(96, 2, 4)
    cd = curvature(chart)
    nabla_r = covariant_derivative(chart, cd.r_low, 1)
    for i, j, k, l, m in all_indices(2, 5):
        total = (
            nabla_r[(i, j, k, l, m)]
            + nabla_r[(i, j, l, m, k)]
            + nabla_r[(i, j, m, k, l)]
        )
        assert total.is_zero()


def test_covariant_derivative_order_exhaustion():
    chart = random_fedosov_chart(97, 2, 3)
    cd = curvature(chart)
    with pytest.raises(OrderError):
        covariant_derivative(chart, cd.r_low, cd.r_low.order + 1)


# ---------------------------------------------------------------------------
# triad sequences
# ---------------------------------------------------------------------------


def test_triads_three_symbols():
    ts = triad_sequence(("j1", "j2", "j3"))
    assert ts.triads == (("j1", "j2", "j3"), ("j3", "j1", "j2"))


def test_triads_four_symbols():
    ts = triad_sequence((1, 2, 3, 4))
    assert ts.triads == ((1, 2, 3), (1, 3, 4), (4, 1, 2), (2, 4, 3), (3, 2, 4))


@pytest.mark.parametrize("m,count", [(2, 0), (3, 2), (4, 5), (5, 9), (6, 14), (7, 20), (8, 27)])
def test_triad_counts(m, count):
    ts = triad_sequence(tuple(range(m)))
    assert len(ts.triads) == count  # the overlap property is checked on build


def test_triads_need_two_symbols():
    with pytest.raises(ShapeError):
        triad_sequence((1,))


def test_triad_route_equals_closed_forms():
    chart = random_fedosov_chart(98, 2, 4)
    cd = curvature(chart)
    r0 = cd.r_low.at_origin()
    # -(2 R_ijkl + R_iljk)/3, the r=0 instance of the weighted triad sum
    direct = PointTensor.build(
        2,
        (DOWN,) * 4,
        lambda x: Q(-1, 3)
        * (2 * r0[x] + r0[(x[0], x[3], x[1], x[2])]),
    )
    assert normal_tensor_via_triads(r0, 0) == direct


# ---------------------------------------------------------------------------
# derivative identity report
# ---------------------------------------------------------------------------


def test_flat_derivative_identities():
    report = derivative_identity_report(darboux_flat(2, 4))
    assert report.passed


@pytest.mark.parametrize("seed,n,order", [(101, 2, 3), (102, 4, 3), (103, 2, 4)])
def test_random_chart_derivative_identities(seed, n, order):
    chart = random_fedosov_chart(seed, n, order)
    report = derivative_identity_report(chart)
    assert report.passed
    names = [c.name for c in report.checks]
    assert "second_bianchi" in names and "integrability" in names


def test_corrupted_derivative_fails_integrability_with_witness():
    chart = random_fedosov_chart(104, 2, 4)
    cd = curvature(chart)
    r0 = cd.r_low.at_origin()
    r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
    entries = list(r1.entries)
    entries[1] = entries[1] + 1  # R_{00001} -> breaks the cycles
    bad = PointTensor(2, (DOWN,) * 5, entries)
    assert derivative_point_failures(bad)  # genuinely inadmissible
    report = derivative_point_report(r0, bad)
    integ = report["integrability"]
    assert not integ.passed
    assert integ.witness["index"] is not None


def test_point_condition_checkers_pass_on_valid_data():
    chart = random_fedosov_chart(105, 4, 4)
    cd = curvature(chart)
    r0 = cd.r_low.at_origin()
    r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
    assert curvature_point_failures(r0) == []
    assert derivative_point_failures(r1) == []
