"""Chart-level model of a symplectic form with a compatible connection.

A ChartSpec holds the jets of the form and of the lowered connection symbols
at the chart origin.  ``validate`` checks, exactly on jets: antisymmetry and
nondegeneracy of the form, closedness, symmetry of the connection, and the
preservation identity  d_k w_ij = G_ikj - G_jki  that ties them together.
A chart passing all checks is a (truncated) Fedosov chart.

The affine bijection between symmetric connections and form-preserving
connections is implemented in both directions (``symmetric_part`` /
``preserving_from_symmetric``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .errors import ShapeError, SingularityError
from .jets import Jet, monomials_upto
from .linalg import jet_matrix_inverse
from .rationals import Q
from .tensors import DOWN, UP, JetTensor, all_indices, omega_raise, rat_det

FLAT = "flat"
EXPLICIT = "explicit"
LEVI_CIVITA = "levi_civita"
RECONSTRUCTED = "reconstructed"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_names(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _first_nonzero(jet: Jet):
    """Graded-lex smallest nonzero multidegree of a jet, or None."""
    if jet.is_zero():
        return None
    return min(jet.coeffs, key=lambda k: (sum(k), k))


class ChartSpec:
    """Local data (dim, order, omega jets, lowered connection jets)."""

    def __init__(self, dim: int, order: int, omega: JetTensor, gamma_lower: JetTensor,
                 provenance: str = EXPLICIT):
        if dim < 2 or dim % 2:
            raise ShapeError(f"chart dimension must be even and >= 2, got {dim}")
        if order < 2:
            raise ShapeError(f"chart order must be >= 2, got {order}")
        if omega.variances != (DOWN, DOWN) or omega.dim != dim:
            raise ShapeError("omega must be a (down, down) tensor over the chart dimension")
        if gamma_lower.variances != (DOWN, DOWN, DOWN) or gamma_lower.dim != dim:
            raise ShapeError("gamma_lower must be a (down, down, down) tensor")
        if omega.n_vars != dim or gamma_lower.n_vars != dim:
            raise ShapeError("chart jets must live in dim variables")
        self.dim = dim
        self.order = order
        self.omega = omega.truncate(min(order, omega.order))
        self.gamma_lower = gamma_lower.truncate(min(order, gamma_lower.order))
        self.provenance = provenance

    @cached_property
    def omega_origin(self):
        return [
            [self.omega[(i, j)].constant_term() for j in range(self.dim)]
            for i in range(self.dim)
        ]

    @cached_property
    def omega_inv(self) -> JetTensor:
        """Inverse-form jets w^ij, computed once via adjugate over determinant."""
        rows = [[self.omega[(i, j)] for j in range(self.dim)] for i in range(self.dim)]
        inv = jet_matrix_inverse(rows)
        return JetTensor(
            self.dim, (UP, UP), [inv[i][j] for i in range(self.dim) for j in range(self.dim)],
            check=False,
        )

    @cached_property
    def gamma_up(self) -> JetTensor:
        """Raised symbols G^k_ij = w^kl G_lij, derived on demand."""
        return omega_raise(self.gamma_lower, 0, self.omega_inv)

    def __repr__(self):
        return f"<ChartSpec dim={self.dim} order={self.order} {self.provenance}>"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate(chart: ChartSpec) -> ValidationReport:
    """Exact checks for a (truncated) Fedosov chart, failures as report entries."""
    n = chart.dim
    omega, gamma = chart.omega, chart.gamma_lower
    checks = []

    witness = None
    for i, j in all_indices(n, 2):
        if i > j:
            continue
        diff = omega[(i, j)] + omega[(j, i)]
        if not diff.is_zero():
            witness = {"index": (i, j), "multidegree": _first_nonzero(diff)}
            break
    checks.append(CheckResult("omega_antisymmetric", witness is None, witness))

    nondeg = bool(rat_det(chart.omega_origin))
    checks.append(CheckResult("omega_nondegenerate_origin", nondeg, None))

    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                closed = (
                    omega[(i, j)].partial(k)
                    + omega[(k, i)].partial(j)
                    + omega[(j, k)].partial(i)
                )
                if not closed.is_zero():
                    witness = {"index": (i, j, k), "multidegree": _first_nonzero(closed)}
                    break
            if witness:
                break
        if witness:
            break
    checks.append(CheckResult("omega_closed", witness is None, witness))

    witness = None
    for i, j, k in all_indices(n, 3):
        if j >= k:
            continue
        diff = gamma[(i, j, k)] - gamma[(i, k, j)]
        if not diff.is_zero():
            witness = {"index": (i, j, k), "multidegree": _first_nonzero(diff)}
            break
    checks.append(CheckResult("gamma_symmetric", witness is None, witness))

    witness = None
    for i, j, k in all_indices(n, 3):
        diff = omega[(i, j)].partial(k) - (gamma[(i, k, j)] - gamma[(j, k, i)])
        if not diff.is_zero():
            witness = {"index": (i, j, k), "multidegree": _first_nonzero(diff)}
            break
    checks.append(CheckResult("omega_preserved", witness is None, witness))

    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------------------
# the affine bijection with symmetric connections
# ---------------------------------------------------------------------------


def symmetric_part(chart: ChartSpec) -> tuple[JetTensor, JetTensor]:
    """Split the connection into (Pi lowered, torsion raised).

    Pi_kij = (G_kij + G_kji)/2 is the lowered symmetric part; the torsion
    T^k_ij = G^k_ij - G^k_ji is antisymmetric in (i, j), and G = Pi + T/2
    reassembles the connection exactly.
    """
    gamma = chart.gamma_lower
    half = Q(1, 2)
    pi = JetTensor.build(
        chart.dim,
        (DOWN, DOWN, DOWN),
        lambda idx: (gamma[idx] + gamma[(idx[0], idx[2], idx[1])]) * half,
        symmetries=[((1, 2), "symmetric")],
    )
    gup = chart.gamma_up
    torsion = JetTensor.build(
        chart.dim,
        (UP, DOWN, DOWN),
        lambda idx: gup[idx] - gup[(idx[0], idx[2], idx[1])],
        symmetries=[((1, 2), "antisymmetric")],
    )
    return pi, torsion


def is_closed(omega: JetTensor) -> bool:
    n = omega.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = (
                    omega[(i, j)].partial(k)
                    + omega[(k, i)].partial(j)
                    + omega[(j, k)].partial(i)
                )
                if not s.is_zero():
                    return False
    return True


def preserving_from_symmetric(pi: JetTensor, omega: JetTensor) -> JetTensor:
    """Unique form-preserving connection with symmetric part ``pi``.

    G_kij = (d_k w_ij - d_i w_jk - d_j w_ki)/2 + Pi_kij + Pi_jik - Pi_ijk.
    When the form is closed the derivative terms collapse to d_k w_ij and
    both evaluations are computed and must agree exactly.
    """
    if pi.variances != (DOWN, DOWN, DOWN) or omega.variances != (DOWN, DOWN):
        raise ShapeError("pi must be (0,3), omega (0,2)")
    bad = pi.symmetry_witness((1, 2), "symmetric")
    if bad is not None:
        raise ShapeError(f"pi is not symmetric in its last two slots at {bad}")
    rows = [[omega[(i, j)].constant_term() for j in range(omega.dim)] for i in range(omega.dim)]
    if not rat_det(rows):
        raise SingularityError("form is degenerate at the origin")
    half = Q(1, 2)

    def pi_part(idx):
        k, i, j = idx
        return pi[(k, i, j)] + pi[(j, i, k)] - pi[(i, j, k)]

    def general(idx):
        k, i, j = idx
        d = (
            omega[(i, j)].partial(k)
            - omega[(j, k)].partial(i)
            - omega[(k, i)].partial(j)
        )
        return d * half + pi_part(idx)

    gamma = JetTensor.build(omega.dim, (DOWN, DOWN, DOWN), general)
    if is_closed(omega):
        closed_route = JetTensor.build(
            omega.dim,
            (DOWN, DOWN, DOWN),
            lambda idx: omega[(idx[1], idx[2])].partial(idx[0]) + pi_part(idx),
        )
        if closed_route != gamma:
            raise AssertionError("closed-form and general routes disagree")
    return gamma


def levi_civita(g: JetTensor) -> JetTensor:
    """Lowered symbols of the unique torsion-free metric connection.

    Returns the g-lowered  G_kij = (d_i g_jk + d_j g_ik - d_k g_ij)/2;
    raise with the inverse metric to get G^m_ij.
    """
    if g.variances != (DOWN, DOWN):
        raise ShapeError("metric must be a (down, down) tensor")
    bad = g.symmetry_witness((0, 1), "symmetric")
    if bad is not None:
        raise ShapeError(f"metric is not symmetric at {bad}")
    rows = [[g[(i, j)].constant_term() for j in range(g.dim)] for i in range(g.dim)]
    if not rat_det(rows):
        raise SingularityError("metric is degenerate at the origin")
    half = Q(1, 2)
    return JetTensor.build(
        g.dim,
        (DOWN, DOWN, DOWN),
        lambda idx: (
            g[(idx[2], idx[0])].partial(idx[1])
            + g[(idx[1], idx[0])].partial(idx[2])
            - g[(idx[1], idx[2])].partial(idx[0])
        )
        * half,
        symmetries=[((1, 2), "symmetric")],
    )


def chart_from_metric(g: JetTensor, omega: JetTensor, order: int,
                      provenance: str = LEVI_CIVITA) -> ChartSpec:
    """Chart whose connection is the metric one, stored omega-lowered."""
    lc = levi_civita(g)
    g_rows = [[g[(i, j)] for j in range(g.dim)] for i in range(g.dim)]
    g_inv = jet_matrix_inverse(g_rows)
    g_inv_tensor = JetTensor(
        g.dim, (UP, UP), [g_inv[i][j] for i in range(g.dim) for j in range(g.dim)],
        check=False,
    )
    gamma_up = omega_raise(lc, 0, g_inv_tensor)
    from .tensors import omega_lower

    gamma_lower = omega_lower(gamma_up, 0, omega)
    return ChartSpec(g.dim, order, omega, gamma_lower, provenance)


# ---------------------------------------------------------------------------
# counting and canonical charts
# ---------------------------------------------------------------------------


def functional_dims(n: int) -> dict:
    """Functional dimensions of the connection families, plus the residual.

    C = all connections, S = symmetric ones, C_omega / S_omega = the
    form-preserving subsets, Lambda3 = 3-forms; the residual
    C - C_omega - (S - S_omega + Lambda3) must vanish for every n.
    """
    if n < 1:
        raise ShapeError("n must be positive")
    c = n**3
    s_omega = (n + 2) * (n + 1) * n // 6
    c_omega = n * n * (n + 1) // 2
    s = n * n * (n + 1) // 2
    lambda3 = n * (n - 1) * (n - 2) // 6
    return {
        "C": c,
        "S": s,
        "C_omega": c_omega,
        "S_omega": s_omega,
        "Lambda3": lambda3,
        "residual": c - c_omega - (s - s_omega + lambda3),
    }


def canonical_omega_entries(n: int, order: int) -> list[Jet]:
    """Constant block form: w_{i, m+i} = 1 = -w_{m+i, i} for m = n/2."""
    m = n // 2
    entries = []
    for i, j in all_indices(n, 2):
        if j == i + m:
            entries.append(Jet.const(n, order, 1))
        elif i == j + m:
            entries.append(Jet.const(n, order, -1))
        else:
            entries.append(Jet.zero(n, order))
    return entries


def darboux_flat(n: int, order: int) -> ChartSpec:
    """Constant canonical form with all connection symbols zero."""
    if n % 2:
        raise ShapeError("dimension must be even")
    omega = JetTensor(n, (DOWN, DOWN), canonical_omega_entries(n, order), check=False)
    zero = Jet.zero(n, order)
    gamma = JetTensor(n, (DOWN, DOWN, DOWN), [zero] * n**3, check=False)
    return ChartSpec(n, order, omega, gamma, FLAT)


# ---------------------------------------------------------------------------
# seeded random data (test harness and selftest)
# ---------------------------------------------------------------------------

_COEFFS = [Q(1), Q(-1), Q(2), Q(-2), Q(1, 2), Q(-1, 2), Q(1, 3), Q(3), Q(-3)]


def _random_poly_jet(rng: random.Random, n: int, order: int, density: float,
                     max_degree: int | None = None, zero_const: bool = False) -> Jet:
    top = order if max_degree is None else min(max_degree, order)
    coeffs = {}
    for key in monomials_upto(n, top):
        if zero_const and sum(key) == 0:
            continue
        if rng.random() < density:
            coeffs[key] = rng.choice(_COEFFS)
    return Jet(n, order, coeffs)


def random_fedosov_chart(seed, n: int, order: int, density: float = 0.35,
                         max_degree: int | None = 2) -> ChartSpec:
    """Valid random chart: Darboux form + totally symmetric polynomial symbols.

    In Darboux coordinates a symmetric connection preserves the constant
    form exactly when the lowered symbols are totally symmetric, so the
    output always passes validation.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    entries = {}
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                entries[(i, j, k)] = _random_poly_jet(rng, n, order, density, max_degree)
    zero = Jet.zero(n, order)

    def entry(idx):
        return entries.get(tuple(sorted(idx)), zero)

    gamma = JetTensor.build(n, (DOWN, DOWN, DOWN), entry)
    omega = JetTensor(n, (DOWN, DOWN), canonical_omega_entries(n, order), check=False)
    return ChartSpec(n, order, omega, gamma, EXPLICIT)


def random_closed_omega(rng: random.Random, n: int, order: int,
                        density: float = 0.3) -> JetTensor:
    """Canonical constant form plus the differential of a random 1-form.

    The potential has no linear part, so the origin value stays canonical
    (hence nondegenerate) and closedness is automatic.
    """
    theta = [
        _random_poly_jet(rng, n, order + 1, density, zero_const=True)
        for _ in range(n)
    ]
    theta = [t - t.homogeneous_part(1) for t in theta]
    base = canonical_omega_entries(n, order)
    entries = []
    for i, j in all_indices(n, 2):
        entries.append(base[i * n + j] + theta[j].partial(i) - theta[i].partial(j))
    return JetTensor(n, (DOWN, DOWN), entries, check=False)


def random_symmetric_pi(rng: random.Random, n: int, order: int,
                        density: float = 0.3) -> JetTensor:
    """Random lowered symbols of a symmetric connection (symmetric last pair)."""
    entries = {}
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                entries[(k, i, j)] = _random_poly_jet(rng, n, order, density, max_degree=2)

    def entry(idx):
        k, i, j = idx
        return entries[(k, i, j) if i <= j else (k, j, i)]

    return JetTensor.build(n, (DOWN, DOWN, DOWN), entry,
                           symmetries=[((1, 2), "symmetric")])


def random_vector_field(rng: random.Random, n: int, order: int,
                        density: float = 0.5) -> JetTensor:
    """Random polynomial vector field as a rank-1 up tensor."""
    return JetTensor(
        n, (UP,), [_random_poly_jet(rng, n, order, density, max_degree=2) for _ in range(n)],
        check=False,
    )
