import random

import pytest

from conftest import random_jet
from sympjet.charts import random_fedosov_chart
from sympjet.errors import ShapeError
from sympjet.jets import Jet
from sympjet.rationals import Q
from sympjet.tensors import (
    ANTISYMMETRIZE,
    CYCLIC_SUM,
    DOWN,
    SYMMETRIZE,
    UP,
    JetTensor,
    PointTensor,
    all_indices,
    contract,
    omega_lower,
    omega_raise,
    rat_det,
    sym_project,
    veblen_sum,
)


def random_jet_tensor(rng, dim, variances, order, **kw):
    return JetTensor(
        dim,
        variances,
        [random_jet(rng, dim, order, **kw) for _ in range(dim ** len(variances))],
    )


# ---------------------------------------------------------------------------
# construction and symmetry validation
# ---------------------------------------------------------------------------


def test_declared_symmetry_violation_rejected():
    x = Jet.variable(2, 2, 0)
    zero = Jet.zero(2, 2)
    with pytest.raises(ShapeError):
        JetTensor(2, (DOWN, DOWN), [zero, x, zero, zero], [((0, 1), "symmetric")])
    # the same data is a fine antisymmetric tensor
    JetTensor(2, (DOWN, DOWN), [zero, x, -x, zero], [((0, 1), "antisymmetric")])


def test_antisymmetric_diagonal_must_vanish():
    one = Jet.const(2, 2, 1)
    zero = Jet.zero(2, 2)
    with pytest.raises(ShapeError):
        JetTensor(2, (DOWN, DOWN), [one, zero, zero, -one], [((0, 1), "antisymmetric")])


def test_mixed_orders_align_to_min():
    t = JetTensor(2, (DOWN,), [Jet.variable(2, 3, 0), Jet.variable(2, 2, 1)])
    assert t.order == 2
    assert all(e.order == 2 for e in t.entries)


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


def test_contract_kronecker_delta_gives_dimension():
    n, order = 4, 2
    delta = JetTensor.build(
        n, (UP, DOWN),
        lambda idx: Jet.const(n, order, 1 if idx[0] == idx[1] else 0),
    )
    tr = contract(delta, 0, 1)
    assert tr.rank == 0
    assert tr[()] == Jet.const(n, order, n)


def test_contract_antisymmetric_against_symmetric_is_zero():
    n, order = 2, 2
    rng = random.Random(3)
    sym = random_jet(rng, n, order)
    anti = random_jet(rng, n, order)
    # A^{ij} antisymmetric (up), S_{ij} symmetric: A^{is} S_{sj} contracted over
    # a shared symmetric pair vanishes when fully traced
    a = JetTensor(n, (UP, UP), [Jet.zero(n, order), anti, -anti, Jet.zero(n, order)])
    s = JetTensor(n, (DOWN, DOWN), [sym, sym, sym, sym])

    def pair_entry(idx):
        total = Jet.zero(n, order)
        for p, q in all_indices(n, 2):
            total = total + a[(p, q)] * s[(p, q)]
        return total

    total = pair_entry(())
    assert total.is_zero()


def test_contract_variance_mismatch():
    t = JetTensor(2, (DOWN, DOWN), [Jet.zero(2, 2)] * 4)
    with pytest.raises(ShapeError):
        contract(t, 0, 1)


def test_contraction_commutes_with_lowering_uninvolved_slot():
    rng = random.Random(11)
    chart = random_fedosov_chart(17, 2, 3)
    omega = chart.omega
    t = random_jet_tensor(rng, 2, (UP, UP, DOWN), 3)
    route1 = omega_lower(contract(t, 1, 2), 0, omega)
    route2 = contract(omega_lower(t, 0, omega), 1, 2)
    assert route1 == route2


# ---------------------------------------------------------------------------
# lowering / raising
# ---------------------------------------------------------------------------


def test_lower_then_raise_is_identity():
    rng = random.Random(5)
    chart = random_fedosov_chart(23, 4, 3)
    t = random_jet_tensor(rng, 4, (UP, DOWN), 3)
    lowered = omega_lower(t, 0, chart.omega)
    raised = omega_raise(lowered, 0, chart.omega_inv)
    assert raised == t


def test_flat_darboux_lowering_permutes_with_signs():
    from sympjet.charts import darboux_flat

    chart = darboux_flat(2, 2)
    basis = JetTensor.build(
        2, (UP,), lambda idx: Jet.const(2, 2, 1 if idx[0] == 0 else 0)
    )
    lowered = omega_lower(basis, 0, chart.omega)
    # w_{i0}: only w_{10} = -1 survives
    assert lowered[(0,)].is_zero()
    assert lowered[(1,)] == Jet.const(2, 2, -1)


# ---------------------------------------------------------------------------
# symmetrization
# ---------------------------------------------------------------------------


def test_cyclic_sum_of_cyclic_invariant_tensor_is_triple():
    n, order = 2, 2
    rng = random.Random(9)
    base = random_jet_tensor(rng, n, (DOWN, DOWN, DOWN), order)
    cyc = sym_project(base, (0, 1, 2), CYCLIC_SUM)
    tripled = sym_project(cyc, (0, 1, 2), CYCLIC_SUM)
    expected = JetTensor(n, cyc.variances, [e * 3 for e in cyc.entries])
    assert tripled == expected


def test_antisymmetrize_symmetric_tensor_is_zero():
    n, order = 2, 2
    rng = random.Random(13)
    t = random_jet_tensor(rng, n, (DOWN, DOWN), order)
    sym = sym_project(t, (0, 1), SYMMETRIZE)
    assert sym_project(sym, (0, 1), ANTISYMMETRIZE).is_zero()


def test_symmetrize_is_idempotent():
    rng = random.Random(15)
    t = random_jet_tensor(rng, 2, (DOWN, DOWN, DOWN), 2)
    s1 = sym_project(t, (0, 1, 2), SYMMETRIZE)
    assert sym_project(s1, (0, 1, 2), SYMMETRIZE) == s1


def test_first_bianchi_for_random_chart_curvature():
    from sympjet.curvature import curvature

    chart = random_fedosov_chart(29, 2, 3)
    r = curvature(chart).r_low
    assert sym_project(r, (1, 2, 3), CYCLIC_SUM).is_zero()


# ---------------------------------------------------------------------------
# pair-substitution (veblen) sums
# ---------------------------------------------------------------------------


def _symmetric_point_tensor(rng, n, rank):
    """Random point tensor symmetric in slots (1,2) and in the trailing block."""
    values = {}

    def canon(idx):
        return (idx[0],) + tuple(sorted(idx[1:3])) + tuple(sorted(idx[3:]))

    def entry(idx):
        key = canon(idx)
        if key not in values:
            values[key] = Q(rng.randrange(-4, 5))
        return values[key]

    sym = [((1, 2), "symmetric")]
    if rank > 4:
        sym.append((tuple(range(3, rank)), "symmetric"))
    return PointTensor.build(n, (DOWN,) * rank, entry, symmetries=sym)


def test_veblen_sum_r1_pattern():
    # three terms: T_ijkl + T_ijlk + T_iklj
    rng = random.Random(21)
    t = _symmetric_point_tensor(rng, 2, 4)
    out = veblen_sum(t)
    for idx in all_indices(2, 4):
        i, j, k, l = idx
        assert out[idx] == t[(i, j, k, l)] + t[(i, j, l, k)] + t[(i, k, l, j)]


def test_veblen_sum_r2_pattern():
    # six terms matching the pair choices from {j,k,l,m}
    rng = random.Random(22)
    t = _symmetric_point_tensor(rng, 2, 5)
    out = veblen_sum(t)
    for idx in all_indices(2, 5):
        i, j, k, l, m = idx
        expected = (
            t[(i, j, k, l, m)]
            + t[(i, j, l, k, m)]
            + t[(i, j, m, k, l)]
            + t[(i, k, l, j, m)]
            + t[(i, k, m, j, l)]
            + t[(i, l, m, j, k)]
        )
        assert out[idx] == expected


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_veblen_term_count(r):
    # (r+2)(r+1)/2 terms: run on a tensor of ones, every term contributes 1
    n = 2
    rank = 3 + r
    ones = PointTensor.build(n, (DOWN,) * rank, lambda idx: Q(1))
    out = veblen_sum(ones)
    assert out[(0,) * rank] == (r + 2) * (r + 1) // 2


def test_veblen_requires_declared_symmetries():
    rng = random.Random(23)
    t = PointTensor.build(2, (DOWN,) * 4, lambda idx: Q(rng.randrange(-3, 4)))
    with pytest.raises(ShapeError):
        veblen_sum(t)


def test_rat_det():
    assert rat_det([[Q(0), Q(1)], [Q(-1), Q(0)]]) == 1
    assert rat_det([[Q(1), Q(2)], [Q(2), Q(4)]]) == 0
