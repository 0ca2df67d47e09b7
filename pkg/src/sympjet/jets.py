"""Truncated multivariate power series over exact rationals.

A Jet holds the Taylor coefficients of a function at the chart origin up to
a fixed total degree (its order).  Coefficients are a sparse map from
exponent tuples to nonzero rationals; every operation is exact and
truncates to the advertised order.  Differentiation lowers the advertised
order by one, binary operations on mixed orders use the minimum, so a jet
never claims degrees it cannot know.
"""

from __future__ import annotations

from itertools import product as _iproduct

from ._kernels import iadd_scaled, mul_trunc, scale
from .errors import IntegrabilityError, ShapeError, SingularityError
from .rationals import Q, QONE, QZERO, rat, rat_str


class Jet:
    """Truncated power series in ``n_vars`` variables, total degree <= order."""

    __slots__ = ("n_vars", "order", "coeffs")

    def __init__(self, n_vars: int, order: int, coeffs=None):
        if n_vars < 1:
            raise ShapeError(f"n_vars must be positive, got {n_vars}")
        if order < 0:
            raise ShapeError(f"order must be non-negative, got {order}")
        canon: dict = {}
        if coeffs:
            for key, val in coeffs.items():
                key = tuple(key)
                if len(key) != n_vars or any(e < 0 for e in key):
                    raise ShapeError(f"bad exponent tuple {key} for {n_vars} variables")
                if sum(key) > order:
                    raise ShapeError(f"term {key} exceeds truncation order {order}")
                val = rat(val)
                if val:
                    canon[key] = val
        self.n_vars = n_vars
        self.order = order
        self.coeffs = canon

    @classmethod
    def _raw(cls, n_vars: int, order: int, coeffs: dict) -> "Jet":
        """Trusted constructor: coeffs already canonical."""
        jet = object.__new__(cls)
        jet.n_vars = n_vars
        jet.order = order
        jet.coeffs = coeffs
        return jet

    @classmethod
    def zero(cls, n_vars: int, order: int) -> "Jet":
        return cls._raw(n_vars, order, {})

    @classmethod
    def const(cls, n_vars: int, order: int, value) -> "Jet":
        value = rat(value)
        return cls._raw(n_vars, order, {(0,) * n_vars: value} if value else {})

    @classmethod
    def variable(cls, n_vars: int, order: int, k: int) -> "Jet":
        """The coordinate function x_k (0-based)."""
        if not 0 <= k < n_vars:
            raise ShapeError(f"variable index {k} out of range for {n_vars} variables")
        if order < 1:
            raise ShapeError("order must be >= 1 to represent a coordinate")
        key = tuple(1 if i == k else 0 for i in range(n_vars))
        return cls._raw(n_vars, order, {key: QONE})

    # -- inspection ---------------------------------------------------------

    def constant_term(self):
        return self.coeffs.get((0,) * self.n_vars, QZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Largest total degree with a nonzero coefficient (-1 for zero)."""
        return max((sum(k) for k in self.coeffs), default=-1)

    def coefficient(self, key) -> "Q":
        return self.coeffs.get(tuple(key), QZERO)

    def homogeneous_part(self, d: int) -> "Jet":
        part = {k: v for k, v in self.coeffs.items() if sum(k) == d}
        return Jet._raw(self.n_vars, self.order, part)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __repr__(self):
        return f"Jet({self.n_vars}, {self.order}, {jet_str(self)!r})"

    # -- ring operations ----------------------------------------------------

    def _common(self, other) -> tuple["Jet", int]:
        if not isinstance(other, Jet):
            other = Jet.const(self.n_vars, self.order, other)
        if other.n_vars != self.n_vars:
            raise ShapeError(
                f"mixed variable counts: {self.n_vars} vs {other.n_vars}"
            )
        return other, min(self.order, other.order)

    def _combine(self, other, sign) -> "Jet":
        other, order = self._common(other)
        out = _restrict(self.coeffs, order) if self.order > order else dict(self.coeffs)
        add = _restrict(other.coeffs, order) if other.order > order else other.coeffs
        iadd_scaled(out, add, sign)
        return Jet._raw(self.n_vars, order, out)

    def __add__(self, other):
        return self._combine(other, QONE)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -QONE)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet._raw(self.n_vars, self.order, scale(self.coeffs, -QONE))

    def __mul__(self, other):
        if isinstance(other, Jet):
            if other.n_vars != self.n_vars:
                raise ShapeError(
                    f"mixed variable counts: {self.n_vars} vs {other.n_vars}"
                )
            order = min(self.order, other.order)
            return Jet._raw(self.n_vars, order, mul_trunc(self.coeffs, other.coeffs, order))
        return Jet._raw(self.n_vars, self.order, scale(self.coeffs, rat(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (QONE / rat(other))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ShapeError("jet powers take non-negative integer exponents")
        result = Jet.const(self.n_vars, self.order, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def reciprocal(self) -> "Jet":
        """Series inverse; requires a nonzero constant term.

        Newton iteration r <- r*(2 - a*r) doubles the correct degrees, so
        a*reciprocal(a) == 1 exactly after truncation.

        >>> x = Jet.variable(1, 3, 0)
        >>> print(jet_str((1 + x).reciprocal()))
        1 + -1*x1^1 + 1*x1^2 + -1*x1^3
        """
        c = self.constant_term()
        if not c:
            raise SingularityError("reciprocal of a jet with zero constant term")
        r = Jet.const(self.n_vars, self.order, QONE / c)
        two = Jet.const(self.n_vars, self.order, 2)
        correct = 1
        while correct <= self.order:
            r = r * (two - self * r)
            correct *= 2
        return r

    # -- calculus -----------------------------------------------------------

    def partial(self, k: int) -> "Jet":
        """Derivative in variable k (0-based); order drops by one."""
        if not 0 <= k < self.n_vars:
            raise ShapeError(f"variable index {k} out of range for {self.n_vars} variables")
        out: dict = {}
        for key, val in self.coeffs.items():
            e = key[k]
            if e:
                dkey = key[:k] + (e - 1,) + key[k + 1 :]
                out[dkey] = e * val
        return Jet._raw(self.n_vars, max(self.order - 1, 0), out)

    def truncate(self, order: int) -> "Jet":
        """Discard information above ``order`` (must not exceed the current order)."""
        if order > self.order:
            raise ShapeError(f"cannot extend order {self.order} to {order}")
        if order == self.order:
            return self
        return Jet._raw(self.n_vars, order, _restrict(self.coeffs, order))

    def mul_monomial(self, key, coeff=QONE) -> "Jet":
        """Multiply by the exact monomial coeff*x^key; order grows by |key|.

        Unlike jet*jet, an exact monomial factor shifts every reliable degree
        up by |key|, so the advertised order increases.
        """
        key = tuple(key)
        if len(key) != self.n_vars or any(e < 0 for e in key):
            raise ShapeError(f"bad exponent tuple {key}")
        shift = sum(key)
        coeff = rat(coeff)
        out = {}
        if coeff:
            for k, v in self.coeffs.items():
                out[tuple(a + b for a, b in zip(k, key))] = coeff * v
        return Jet._raw(self.n_vars, self.order + shift, out)

    def evaluate(self, point):
        """Evaluate the stored polynomial at a point (rationals or floats)."""
        if len(point) != self.n_vars:
            raise ShapeError("point dimension mismatch")
        total = 0
        for key, val in self.coeffs.items():
            term = val
            for x, e in zip(point, key):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def evaluate_float(self, point) -> float:
        return float(self.evaluate([float(x) for x in point]))


def _restrict(coeffs: dict, order: int) -> dict:
    return {k: v for k, v in coeffs.items() if sum(k) <= order}


# -- composition and inversion ----------------------------------------------


class Substitution:
    """Composition target: substitute jets (zero constant term) for variables.

    Caches monomial powers of the substituted jets so that composing many
    series through the same coordinate map shares the work.
    """

    def __init__(self, subs, order: int | None = None):
        subs = list(subs)
        if not subs:
            raise ShapeError("empty substitution")
        n = subs[0].n_vars
        native = min(s.order for s in subs)
        if any(s.n_vars != n for s in subs):
            raise ShapeError("substituted jets must share a variable count")
        if order is None:
            order = native
        elif order > native:
            raise ShapeError(f"cannot compose at order {order} from order-{native} data")
        for j, s in enumerate(subs):
            if s.constant_term():
                raise ShapeError(
                    f"substituted jet {j} has a nonzero constant term"
                )
        self.m = len(subs)
        self.n_vars = n
        self.order = order
        self._subs = [s.truncate(min(order, s.order)).coeffs for s in subs]
        unit = (0,) * n
        self._cache: dict = {(0,) * self.m: {unit: QONE}}

    def _monomial(self, key: tuple) -> dict:
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        j = next(i for i, e in enumerate(key) if e)
        prev = key[:j] + (key[j] - 1,) + key[j + 1 :]
        result = mul_trunc(self._monomial(prev), self._subs[j], self.order)
        self._cache[key] = result
        return result

    def __call__(self, a: Jet) -> Jet:
        if a.n_vars != self.m:
            raise ShapeError(
                f"series in {a.n_vars} variables composed with {self.m} substitutions"
            )
        order = min(a.order, self.order)
        out: dict = {}
        for key, val in a.coeffs.items():
            if sum(key) > order:
                continue
            iadd_scaled(out, self._monomial(key), val)
        return Jet._raw(self.n_vars, order, _restrict(out, order))


def compose(a: Jet, subs) -> Jet:
    """Exact truncated composition a(subs[0], ..., subs[m-1]).

    >>> u_squared = Jet(1, 2, {(2,): 1})
    >>> s = Jet(2, 2, {(1, 0): 1, (0, 1): 1})
    >>> print(jet_str(compose(u_squared, [s])))
    1*x1^2 + 2*x1^1*x2^1 + 1*x2^2
    """
    return Substitution(subs)(a)


def _rat_matrix_inverse(rows):
    """Gauss-Jordan inverse of a square rational matrix."""
    n = len(rows)
    aug = [[Q(x) for x in row] + [QONE if i == j else QZERO for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularityError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = QONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def identity_map(n_vars: int, order: int) -> list[Jet]:
    return [Jet.variable(n_vars, order, k) for k in range(n_vars)]


def invert_map(phi) -> list[Jet]:
    """Compositional inverse of a coordinate map with zero constant terms.

    The linear part must be an invertible rational matrix; the result psi
    satisfies phi(psi) == psi(phi) == identity exactly to the common order.
    """
    phi = list(phi)
    n = len(phi)
    if any(p.n_vars != n for p in phi):
        raise ShapeError("invert_map needs n jets in n variables")
    if any(p.constant_term() for p in phi):
        raise ShapeError("coordinate map must fix the origin")
    order = min(p.order for p in phi)
    lin = [
        [phi[i].coefficient(tuple(1 if v == j else 0 for v in range(n))) for j in range(n)]
        for i in range(n)
    ]
    lin_inv = _rat_matrix_inverse(lin)

    def apply_lin_inv(vectors):
        return [
            sum((vectors[j] * lin_inv[i][j] for j in range(n)), Jet.zero(n, order))
            for i in range(n)
        ]

    ident = identity_map(n, order)
    nonlinear = [
        phi[i] - sum((ident[j] * lin[i][j] for j in range(n)), Jet.zero(n, order))
        for i in range(n)
    ]
    psi = apply_lin_inv(ident)
    # each pass extends the inverse by one correct degree
    for _ in range(order - 1):
        sub = Substitution(psi, order)
        psi = apply_lin_inv([ident[i] - sub(nonlinear[i]) for i in range(n)])
    return psi


def radial_antiderivative(fs, c) -> Jet:
    """Potential F with grad F == fs and F(0) == c.

    The homogeneous degree-d part of F is (1/d) * sum_k x_k * (degree d-1
    part of fs[k]); requires the exact cross-derivative symmetry
    d_l fs[k] == d_k fs[l], else raises with the first failing witness.
    """
    fs = list(fs)
    n = len(fs)
    if any(f.n_vars != n for f in fs):
        raise ShapeError("radial antiderivative needs n jets in n variables")
    order = min(f.order for f in fs)
    for k in range(n):
        for l in range(k + 1, n):
            lhs = fs[k].partial(l)
            rhs = fs[l].partial(k)
            diff = lhs - rhs
            if not diff.is_zero():
                witness = min(diff.coeffs, key=lambda key: (sum(key), key))
                raise IntegrabilityError(
                    f"cross-derivatives differ: d_{l} f_{k} != d_{k} f_{l} "
                    f"at multidegree {witness}",
                    witness=(k, l, witness),
                )
    out: dict = {}
    for k, f in enumerate(fs):
        for key, val in f.coeffs.items():
            if sum(key) >= order + 1:
                continue
            lifted = key[:k] + (key[k] + 1,) + key[k + 1 :]
            cur = out.get(lifted)
            add = val / sum(lifted)
            val2 = add if cur is None else cur + add
            if val2:
                out[lifted] = val2
            elif cur is not None:
                del out[lifted]
    result = Jet._raw(n, order + 1, out)
    return result + Jet.const(n, order + 1, c)


# -- canonical text form ------------------------------------------------------


def _grlex_key(key: tuple):
    return (sum(key), tuple(-e for e in key))


def default_names(n_vars: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n_vars)]


def jet_str(jet: Jet, names=None) -> str:
    """Canonical text form: graded-lex terms ``coeff*x1^a1*...*xn^an``."""
    if not jet.coeffs:
        return "0"
    if names is None:
        names = default_names(jet.n_vars)
    terms = []
    for key in sorted(jet.coeffs, key=_grlex_key):
        factors = [rat_str(jet.coeffs[key])]
        for name, e in zip(names, key):
            if e:
                factors.append(f"{name}^{e}")
        terms.append("*".join(factors))
    return " + ".join(terms)


def monomials_upto(n_vars: int, order: int):
    """All exponent tuples of total degree <= order, graded-lex order."""
    keys = [
        key
        for key in _iproduct(range(order + 1), repeat=n_vars)
        if sum(key) <= order
    ]
    keys.sort(key=_grlex_key)
    return keys
