"""Geodesic normal coordinates, normal tensors, and their curvature links.

The exponential map of the connection is solved degree by degree as a formal
series; pulling the chart data back through it yields the normal chart, whose
Taylor coefficients at the origin are the normal tensors (derivatives of the
lowered symbols) and the extensions of the form.  Closed-form conversions
between the first normal tensors and the curvature tensor (and its first
covariant derivative) are implemented with their independent double routes,
plus the triad-ordered sum that expresses the same conversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .charts import ChartSpec, CheckResult, ValidationReport, validate
from .curvature import CurvatureData, curvature
from .errors import ConditionError, OrderError, ShapeError, ValidationFailure
from .jets import Jet, Substitution, identity_map, invert_map
from .rationals import Q
from .tensors import (
    DOWN,
    UP,
    JetTensor,
    PointTensor,
    all_indices,
    veblen_sum,
)


def _lift(jet: Jet, order: int) -> Jet:
    """Re-advertise a jet at a higher order.

    Only sound when the caller can argue the missing degrees are never
    read, e.g. a factor of valuation v makes product degrees above
    jet.order + v irrelevant for the part being extracted.
    """
    if jet.order >= order:
        return jet
    return Jet._raw(jet.n_vars, order, dict(jet.coeffs))


def _euler_field(jet: Jet) -> Jet:
    """sum_a x_a * d_a(jet): scales the degree-d part by d, exactly."""
    n = jet.n_vars
    out = Jet.zero(n, jet.order)
    for a in range(n):
        mono = tuple(1 if t == a else 0 for t in range(n))
        out = out + jet.partial(a).mul_monomial(mono)
    return out


def exponential_jets(chart: ChartSpec) -> list[Jet]:
    """Exponential map of the connection as jets in the velocity variables.

    Solves x'' + G(x)(x', x') = 0, x(0) = 0, x'(0) = v degree by degree;
    by homogeneity the time-1 map phi(v) determines the whole flow, its
    linear part is the identity, and the homogeneous degree-d part obeys
    d(d-1) phi_d = -(degree-d part of G(phi)(E, E)) with E the Euler field
    of phi.
    """
    n, K = chart.dim, chart.order
    gup = chart.gamma_up
    phi = identity_map(n, K)
    for d in range(2, K + 1):
        sub = Substitution([p.truncate(min(d - 2, p.order)) for p in phi], d - 2)
        composed: dict = {}
        euler = []
        for p in phi:
            e = _euler_field(p)
            euler.append(_lift(e.truncate(min(d - 1, e.order)), d))
        corrections = []
        for i in range(n):
            total = Jet.zero(n, d)
            for j in range(n):
                for k in range(n):
                    key = (i, j, k) if j <= k else (i, k, j)
                    g = composed.get(key)
                    if g is None:
                        g = _lift(sub(gup[key]), d)
                        composed[key] = g
                    total = total + g * euler[j] * euler[k]
            corrections.append(total.homogeneous_part(d))
        scale = Q(-1, d * (d - 1))
        phi = [
            phi[i] + _lift(corrections[i], K) * scale for i in range(n)
        ]
    return phi


class _Pullback:
    """Coordinate change through the exponential map.

    Holds the composition cache, the Jacobian jets J^i_a = d_a phi^i and
    the inverse-Jacobian jets M^c_m = (d_m psi^c) o phi, and transports
    tensors by one J factor per down slot and one M factor per up slot.
    """

    def __init__(self, chart: ChartSpec, phi: list[Jet] | None = None):
        self.chart = chart
        n, K = chart.dim, chart.order
        self.n = n
        self.phi = exponential_jets(chart) if phi is None else phi
        self.sub = Substitution(self.phi, min(K, min(p.order for p in self.phi)))
        psi = invert_map(self.phi)
        self.jac = [[self.phi[i].partial(a) for a in range(n)] for i in range(n)]
        self.jac_inv = [[self.sub(psi[c].partial(m)) for m in range(n)] for c in range(n)]

    def pull_tensor(self, tensor: JetTensor) -> JetTensor:
        """Tensor transformation law: J on down slots, M on up slots."""
        n = self.n
        current = JetTensor(
            tensor.dim,
            tensor.variances,
            [self.sub(e) for e in tensor.entries],
            check=False,
        )
        for slot, variance in enumerate(tensor.variances):

            def entry(idx, slot=slot, variance=variance, current=current):
                total = None
                probe = list(idx)
                target = idx[slot]
                for m in range(n):
                    probe[slot] = m
                    if variance == UP:
                        factor = self.jac_inv[target][m]
                    else:
                        factor = self.jac[m][target]
                    term = factor * current[tuple(probe)]
                    total = term if total is None else total + term
                return total

            current = JetTensor.build(n, tensor.variances, entry, check=False)
        return current


def to_normal_chart(chart: ChartSpec, phi: list[Jet] | None = None,
                    pullback: _Pullback | None = None) -> ChartSpec:
    """Pull the chart data back through the exponential map.

    The output symbols vanish at the origin and the radial contraction
    G_ijk(y) y^j y^k is the exact zero jet; both are asserted, and the
    output chart is validated.
    """
    pb = pullback if pullback is not None else _Pullback(chart, phi)
    n, K = chart.dim, chart.order
    omega_n = pb.pull_tensor(chart.omega)

    gamma_comp = {}
    for i, j, k in all_indices(n, 3):
        key = (i, j, k) if j <= k else (i, k, j)
        if key not in gamma_comp:
            gamma_comp[key] = pb.sub(chart.gamma_up[key]).truncate(
                min(K - 2, pb.sub.order)
            )

    jac = pb.jac
    jac_inv = pb.jac_inv

    def raised_entry(idx):
        c, a, b = idx
        total = None
        for m in range(n):
            inner = pb.phi[m].partial(a).partial(b)
            for i in range(n):
                step = None
                for j in range(n):
                    key = (m, i, j) if i <= j else (m, j, i)
                    term = gamma_comp[key] * jac[j][b]
                    step = term if step is None else step + term
                inner = inner + step * jac[i][a]
            term = jac_inv[c][m] * inner
            total = term if total is None else total + term
        return total

    gamma_up_n = JetTensor.build(n, (UP, DOWN, DOWN), raised_entry)

    def lowered_entry(idx):
        c, a, b = idx
        total = None
        for m in range(n):
            term = omega_n[(c, m)] * gamma_up_n[(m, a, b)]
            total = term if total is None else total + term
        return total

    gamma_n = JetTensor.build(n, (DOWN, DOWN, DOWN), lowered_entry)

    for idx in all_indices(n, 3):
        if gamma_n[idx].constant_term():
            raise AssertionError(f"normal-chart symbols do not vanish at 0: {idx}")
    for i in range(n):
        residual = None
        for j, k in all_indices(n, 2):
            mono = tuple(
                (1 if t == j else 0) + (1 if t == k else 0) for t in range(n)
            )
            term = gamma_n[(i, j, k)].mul_monomial(mono)
            residual = term if residual is None else residual + term
        if not residual.is_zero():
            raise AssertionError(
                f"radial contraction of the normal-chart symbols is nonzero (i={i})"
            )

    out = ChartSpec(n, K, omega_n, gamma_n, chart.provenance)
    report = validate(out)
    if not report.passed:
        raise ValidationFailure(report)
    return out


# ---------------------------------------------------------------------------
# normal tensors and extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFamily:
    """Normal tensors A_r and form extensions at the chart origin.

    ``a[r]`` is the order-r normal tensor (r-th derivatives of the lowered
    symbols in normal coordinates, r = 0 being the zero tensor), and
    ``omega_ext[r]`` the order-r extension of the form, r = 0 being its
    origin value.
    """

    dim: int
    r_max: int
    a: dict
    omega_ext: dict


def _taylor_point_tensor(source: JetTensor, r: int, symmetries=()) -> PointTensor:
    """Order-r derivative values of every component at the origin."""
    n = source.dim
    base_rank = source.rank

    def entry(idx):
        key = [0] * n
        for v in idx[base_rank:]:
            key[v] += 1
        fact = 1
        for e in key:
            fact *= factorial(e)
        return source[idx[:base_rank]].coefficient(tuple(key)) * fact

    return PointTensor.build(
        n,
        source.variances + (DOWN,) * r,
        entry,
        symmetries=symmetries,
    )


def normal_tensors(chart: ChartSpec, r_max: int,
                   normal_chart: ChartSpec | None = None) -> NormalFamily:
    """Normal tensors and form extensions through order r_max.

    Requires r_max <= (available order of the normal-chart symbols); all
    family invariants are verified exactly: the symmetries, the vanishing
    pair-substitution sums, the link between form extensions and normal
    tensors, and the preserved-form symmetry of A_ikj... - A_jki... in
    (k, first trailing index).
    """
    nc = to_normal_chart(chart) if normal_chart is None else normal_chart
    n = chart.dim
    gamma_order = nc.gamma_lower.order
    if r_max > gamma_order:
        raise OrderError(
            f"r_max={r_max} exceeds the normal symbols' order {gamma_order}"
        )
    a = {0: PointTensor.zeros(n, (DOWN, DOWN, DOWN))}
    for r in range(1, r_max + 1):
        sym = [((1, 2), "symmetric")]
        if r >= 2:
            sym.append((tuple(range(3, 3 + r)), "symmetric"))
        a[r] = _taylor_point_tensor(nc.gamma_lower, r, sym)
    omega_ext = {}
    for r in range(0, r_max + 2):
        sym = [((0, 1), "antisymmetric")]
        if r >= 2:
            sym.append((tuple(range(2, 2 + r)), "symmetric"))
        omega_ext[r] = _taylor_point_tensor(nc.omega, r, sym)

    for r in range(1, r_max + 1):
        if not veblen_sum(a[r]).is_zero():
            raise AssertionError(f"pair-substitution sum of A_{r} does not vanish")
    for r in range(0, r_max + 1):
        ext = omega_ext[r + 1]
        for idx in all_indices(n, 3 + r):
            i, j, k = idx[0], idx[1], idx[2]
            alphas = idx[3:]
            expect = a[r][(i, k, j) + alphas] - a[r][(j, k, i) + alphas]
            if ext[idx] != expect:
                raise AssertionError(
                    f"form extension disagrees with normal tensors at {idx} (r={r})"
                )
    for r in range(1, r_max + 1):
        witness = _pair_exchange_witness(a[r])
        if witness is not None:
            raise AssertionError(
                f"preserved-form symmetry fails for A_{r} at {witness}"
            )
    return NormalFamily(n, r_max, a, omega_ext)


def _pair_exchange_witness(a_r: PointTensor):
    """Witness against symmetry of A_ikj(a1...) - A_jki(a1...) in (k, a1)."""
    n = a_r.dim
    rank = a_r.rank
    for idx in all_indices(n, rank):
        i, k, j = idx[0], idx[1], idx[2]
        a1 = idx[3]
        rest = idx[4:]
        lhs = a_r[(i, k, j, a1) + rest] - a_r[(j, k, i, a1) + rest]
        rhs = a_r[(i, a1, j, k) + rest] - a_r[(j, a1, i, k) + rest]
        if lhs != rhs:
            return idx
    return None


def extension(chart: ChartSpec, tensor: JetTensor, r: int,
              pullback: _Pullback | None = None) -> PointTensor:
    """Order-r extension: derivative values in normal coordinates at 0."""
    pb = pullback if pullback is not None else _Pullback(chart)
    pulled = pb.pull_tensor(tensor)
    if r > pulled.order:
        raise OrderError(f"extension order {r} exceeds available order {pulled.order}")
    return _taylor_point_tensor(pulled, r)


def covariant_derivative(chart: ChartSpec, tensor: JetTensor, r: int = 1) -> JetTensor:
    """Iterated covariant derivative; each step appends a down slot last.

    The first added slot is the innermost derivative, so the final slot
    order matches the comma notation T_{..., a1, ..., ar}.
    """
    n = chart.dim
    gup = chart.gamma_up
    current = tensor
    for _ in range(r):
        if current.order < 1:
            raise OrderError("covariant derivative exhausts the truncation order")
        variances = current.variances

        def entry(idx, variances=variances, current=current):
            base, alpha = idx[:-1], idx[-1]
            total = current[base].partial(alpha)
            probe = list(base)
            for slot, variance in enumerate(variances):
                orig = base[slot]
                for s in range(n):
                    probe[slot] = s
                    if variance == UP:
                        total = total + gup[(orig, alpha, s)] * current[tuple(probe)]
                    else:
                        total = total - gup[(s, alpha, orig)] * current[tuple(probe)]
                probe[slot] = orig
            return total

        current = JetTensor.build(n, variances + (DOWN,), entry)
    return current


# ---------------------------------------------------------------------------
# point conditions on curvature data
# ---------------------------------------------------------------------------

COND_ANTISYM = "antisymmetric_last_pair"
COND_SYM = "symmetric_first_pair"
COND_BIANCHI1 = "first_bianchi"
COND_ANTISYM_D = "antisymmetric_last_pair_derivative"
COND_SYM_D = "symmetric_first_pair_derivative"
COND_BIANCHI1_D = "first_bianchi_derivative"
COND_BIANCHI2 = "second_bianchi"
COND_INTEGRABILITY = "integrability"


def curvature_point_failures(r0: PointTensor) -> list:
    """Violated admissibility conditions of a point curvature tensor."""
    if r0.variances != (DOWN,) * 4:
        raise ShapeError("point curvature must be a (0,4) tensor")
    n = r0.dim
    failures = []
    witness = next(
        (
            idx
            for idx in all_indices(n, 4)
            if r0[idx] + r0[(idx[0], idx[1], idx[3], idx[2])]
        ),
        None,
    )
    if witness is not None:
        failures.append((COND_ANTISYM, witness))
    witness = next(
        (
            idx
            for idx in all_indices(n, 4)
            if r0[idx] != r0[(idx[1], idx[0], idx[2], idx[3])]
        ),
        None,
    )
    if witness is not None:
        failures.append((COND_SYM, witness))
    witness = next(
        (
            (i, j, k, l)
            for i, j, k, l in all_indices(n, 4)
            if r0[(i, j, k, l)] + r0[(i, k, l, j)] + r0[(i, l, j, k)]
        ),
        None,
    )
    if witness is not None:
        failures.append((COND_BIANCHI1, witness))
    return failures


def derivative_point_failures(r1: PointTensor) -> list:
    """Violated admissibility conditions of a point curvature derivative."""
    if r1.variances != (DOWN,) * 5:
        raise ShapeError("point curvature derivative must be a (0,5) tensor")
    n = r1.dim
    failures = []

    def first(pred):
        return next((idx for idx in all_indices(n, 5) if pred(idx)), None)

    witness = first(lambda x: bool(r1[x] + r1[(x[0], x[1], x[3], x[2], x[4])]))
    if witness is not None:
        failures.append((COND_ANTISYM_D, witness))
    witness = first(lambda x: r1[x] != r1[(x[1], x[0], x[2], x[3], x[4])])
    if witness is not None:
        failures.append((COND_SYM_D, witness))
    witness = first(
        lambda x: bool(
            r1[x]
            + r1[(x[0], x[2], x[3], x[1], x[4])]
            + r1[(x[0], x[3], x[1], x[2], x[4])]
        )
    )
    if witness is not None:
        failures.append((COND_BIANCHI1_D, witness))
    witness = first(
        lambda x: bool(
            r1[x]
            + r1[(x[0], x[1], x[3], x[4], x[2])]
            + r1[(x[0], x[1], x[4], x[2], x[3])]
        )
    )
    if witness is not None:
        failures.append((COND_BIANCHI2, witness))
    witness = first(
        lambda x: bool(
            r1[(x[0], x[4], x[2], x[1], x[3])]
            + r1[(x[0], x[1], x[4], x[3], x[2])]
            + r1[(x[0], x[3], x[1], x[2], x[4])]
            + r1[(x[0], x[2], x[3], x[4], x[1])]
        )
    )
    if witness is not None:
        failures.append((COND_INTEGRABILITY, witness))
    return failures


# ---------------------------------------------------------------------------
# closed-form conversions between normal tensors and curvature data
# ---------------------------------------------------------------------------


def _a1_formula(r0: PointTensor) -> PointTensor:
    """A_ijkl = (2 R_iklj + R_iljk) / 3 (no admissibility checks)."""
    third = Q(1, 3)
    return PointTensor.build(
        r0.dim,
        (DOWN,) * 4,
        lambda x: (2 * r0[(x[0], x[2], x[3], x[1])] + r0[(x[0], x[3], x[1], x[2])])
        * third,
    )


def _a2_formula(r1: PointTensor) -> PointTensor:
    """A_ijklm from the five-term compact combination (no checks)."""
    sixth = Q(-1, 6)

    def entry(x):
        i, j, k, l, m = x
        return (
            2 * r1[(i, j, k, l, m)]
            + r1[(i, j, k, m, l)]
            + r1[(i, k, j, l, m)]
            + r1[(i, k, j, m, l)]
            + r1[(i, l, j, m, k)]
        ) * sixth

    return PointTensor.build(r1.dim, (DOWN,) * 5, entry)


def a_from_curvature(r_point: PointTensor, order: int) -> PointTensor:
    """Normal tensor of order 1 or 2 from point curvature data.

    order 1 takes the curvature tensor, order 2 its first covariant
    derivative.  Admissibility is checked first (ConditionError on
    failure); the alternative closed forms and the triad-ordered sum are
    all evaluated and must agree, and the inverse relation recovering the
    input is verified exactly.
    """
    if order == 1:
        failures = curvature_point_failures(r_point)
        if failures:
            raise ConditionError(failures)
        a1 = _a1_formula(r_point)
        alt = PointTensor.build(
            r_point.dim,
            (DOWN,) * 4,
            lambda x: (
                r_point[(x[0], x[2], x[3], x[1])] + r_point[(x[0], x[1], x[3], x[2])]
            )
            * Q(1, 3),
        )
        if a1 != alt:
            raise AssertionError("the two closed forms for A_1 disagree")
        if a1 != normal_tensor_via_triads(r_point, 0):
            raise AssertionError("triad route for A_1 disagrees")
        recovered = PointTensor.build(
            r_point.dim,
            (DOWN,) * 4,
            lambda x: a1[(x[0], x[1], x[3], x[2])] - a1[x],
        )
        if recovered != r_point:
            raise AssertionError("A_1 does not recover the curvature tensor")
        return a1.with_symmetries([((1, 2), "symmetric")])
    if order == 2:
        failures = derivative_point_failures(r_point)
        if failures:
            raise ConditionError(failures)
        a2 = _a2_formula(r_point)
        sixth = Q(-1, 6)
        alt = PointTensor.build(
            r_point.dim,
            (DOWN,) * 5,
            lambda x: (
                5 * r_point[(x[0], x[1], x[2], x[3], x[4])]
                + 4 * r_point[(x[0], x[1], x[3], x[4], x[2])]
                + 3 * r_point[(x[0], x[4], x[1], x[2], x[3])]
                + 2 * r_point[(x[0], x[2], x[4], x[3], x[1])]
                + r_point[(x[0], x[3], x[2], x[4], x[1])]
            )
            * sixth,
        )
        if a2 != alt:
            raise AssertionError("the two closed forms for A_2 disagree")
        if a2 != normal_tensor_via_triads(r_point, 1):
            raise AssertionError("triad route for A_2 disagrees")
        recovered = PointTensor.build(
            r_point.dim,
            (DOWN,) * 5,
            lambda x: a2[(x[0], x[1], x[3], x[2], x[4])] - a2[x],
        )
        if recovered != r_point:
            raise AssertionError("A_2 does not recover the curvature derivative")
        return a2.with_symmetries(
            [((1, 2), "symmetric"), ((3, 4), "symmetric")]
        )
    raise OrderError("a_from_curvature supports orders 1 and 2 only")


# ---------------------------------------------------------------------------
# triad sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriadSequence:
    """Ordered triads over an ordered symbol set.

    The count is m(m-1)/2 - 1 and consecutive triads overlap: the first and
    third entries of a triad are, as a pair, the first two entries of the
    next one.
    """

    symbols: tuple
    triads: tuple

    def __post_init__(self):
        m = len(self.symbols)
        expected = m * (m - 1) // 2 - 1
        if len(self.triads) != expected:
            raise AssertionError(
                f"triad count {len(self.triads)} != {expected} for m={m}"
            )
        for u, w in zip(self.triads, self.triads[1:]):
            if {u[0], u[2]} != {w[0], w[1]}:
                raise AssertionError(f"overlap property fails between {u} and {w}")


def _triads(symbols: tuple) -> list:
    m = len(symbols)
    if m <= 2:
        return []
    if m == 3:
        return [
            (symbols[0], symbols[1], symbols[2]),
            (symbols[2], symbols[0], symbols[1]),
        ]
    out = [(symbols[0], symbols[i], symbols[i + 1]) for i in range(1, m - 1)]
    out.append((symbols[m - 1], symbols[0], symbols[1]))
    out.extend(
        (symbols[1], symbols[t - 1], symbols[t - 2]) for t in range(m, 3, -1)
    )
    out.append((symbols[2], symbols[1], symbols[3]))
    out.extend(_triads(symbols[2:]))
    return out


def triad_sequence(symbols) -> TriadSequence:
    """The inductively ordered triad list of an ordered symbol set (m >= 2)."""
    symbols = tuple(symbols)
    if len(symbols) < 2:
        raise ShapeError("triad sequences need at least two symbols")
    if len(set(symbols)) != len(symbols):
        raise ShapeError("symbols must be distinct")
    return TriadSequence(symbols, tuple(_triads(symbols)))


def normal_tensor_via_triads(r_ext: PointTensor, r: int) -> PointTensor:
    """Normal tensor of order r+1 from the order-r curvature extension.

    Evaluates -1/(N+1) * sum_s (N-s+1) * Rtilde over the triad sequence of
    the non-leading slots; exact (no remainder) for r <= 1.
    """
    if r not in (0, 1):
        raise OrderError("the remainder-free triad sum applies to r <= 1 only")
    rank = 4 + r
    if r_ext.variances != (DOWN,) * rank or r_ext.rank != rank:
        raise ShapeError(f"expected a (0,{rank}) point tensor")
    positions = tuple(range(1, rank))  # slots j, k, l, a_1..a_r
    seq = triad_sequence(positions)
    N = len(seq.triads)
    scale = Q(-1, N + 1)

    def entry(idx):
        total = None
        for s, triad in enumerate(seq.triads):
            rest = [p for p in positions if p not in triad]
            probe = (idx[0],) + tuple(idx[p] for p in triad) + tuple(
                idx[p] for p in rest
            )
            term = (N - s) * r_ext[probe]
            total = term if total is None else total + term
        return total * scale

    return PointTensor.build(r_ext.dim, (DOWN,) * rank, entry)


# ---------------------------------------------------------------------------
# derivative identity report
# ---------------------------------------------------------------------------


def derivative_point_report(r0: PointTensor, r1: PointTensor) -> ValidationReport:
    """Exact identity checks on point curvature data and its derivative.

    Covers the differentiated symmetry conditions, the second Bianchi and
    integrability cycles, the preserved-form pair-exchange symmetry of the
    derived normal tensors at orders 1 and 2, and the vanishing
    pair-substitution sums at both orders.
    """
    checks = []
    d_failures = dict(derivative_point_failures(r1))
    for name in (COND_ANTISYM_D, COND_SYM_D, COND_BIANCHI1_D, COND_BIANCHI2,
                 COND_INTEGRABILITY):
        witness = d_failures.get(name)
        checks.append(
            CheckResult(name, witness is None,
                        None if witness is None else {"index": witness, "multidegree": None})
        )
    a1 = _a1_formula(r0)
    a2 = _a2_formula(r1)
    w = _pair_exchange_witness(a1)
    checks.append(
        CheckResult("pair_exchange_symmetry_r1", w is None,
                    None if w is None else {"index": w, "multidegree": None})
    )
    w = _pair_exchange_witness(a2)
    checks.append(
        CheckResult("pair_exchange_symmetry_r2", w is None,
                    None if w is None else {"index": w, "multidegree": None})
    )
    for name, a_r in (("veblen_sum_vanishes_r1", a1), ("veblen_sum_vanishes_r2", a2)):
        slot_sets = [(1, 2)] + ([(3, 4)] if a_r.rank == 5 else [])
        witness = next(
            (
                w
                for slots in slot_sets
                for w in [a_r.symmetry_witness(slots, "symmetric")]
                if w is not None
            ),
            None,
        )
        if witness is None:
            total = veblen_sum(
                a_r.with_symmetries([(s, "symmetric") for s in slot_sets])
            )
            witness = next(
                (idx for idx in all_indices(total.dim, total.rank) if total[idx]), None
            )
        checks.append(
            CheckResult(name, witness is None,
                        None if witness is None else {"index": witness, "multidegree": None})
        )
    return ValidationReport(tuple(checks))


def derivative_identity_report(chart: ChartSpec,
                               cd: CurvatureData | None = None) -> ValidationReport:
    """Identity suite on the curvature derivative data of a chart at 0."""
    if cd is None:
        cd = curvature(chart)
    if cd.r_low.order < 1:
        raise OrderError("derivative identities need curvature jets of order >= 1")
    r0 = cd.r_low.at_origin()
    r1 = covariant_derivative(chart, cd.r_low, 1).at_origin()
    return derivative_point_report(r0, r1)
