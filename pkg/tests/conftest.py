import json
import random

from sympjet.chartfile import parse_chart_document
from sympjet.jets import Jet, monomials_upto
from sympjet.rationals import Q

COEFF_POOL = [Q(1), Q(-1), Q(2), Q(-2), Q(1, 2), Q(-1, 3), Q(3)]


def random_jet(rng: random.Random, n_vars: int, order: int, density: float = 0.5,
               max_degree: int | None = None, zero_const: bool = False) -> Jet:
    """Sparse random jet with small rational coefficients."""
    coeffs = {}
    top = order if max_degree is None else min(max_degree, order)
    for key in monomials_upto(n_vars, top):
        if zero_const and sum(key) == 0:
            continue
        if rng.random() < density:
            coeffs[key] = rng.choice(COEFF_POOL)
    return Jet(n_vars, order, coeffs)


def random_nonzero_jet(rng, n_vars, order, **kw) -> Jet:
    while True:
        jet = random_jet(rng, n_vars, order, **kw)
        if not jet.is_zero():
            return jet


# ---------------------------------------------------------------------------
# chart fixtures (conformal 2d metrics with their area forms)
# ---------------------------------------------------------------------------


def sphere_document(radius, base_point, order=4) -> dict:
    """Stereographic chart of the radius-R sphere: g = lam*(dx^2+dy^2),
    lam = 4R^4/(R^2+x^2+y^2)^2, area form w_12 = lam."""
    r = Q(radius)
    num = 4 * r**4
    den = f"({r * r}+x^2+y^2)^2"
    lam = f"({num})/{den}"
    return {
        "dimension": 2,
        "order": order,
        "coordinates": ["x", "y"],
        "base_point": [str(Q(b)) for b in base_point],
        "omega": [[None, lam], [None, None]],
        "connection": {"kind": "levi_civita", "metric": [[lam, "0"], ["0", lam]]},
    }


def hyperbolic_document(base_point=("0", "1"), order=4) -> dict:
    """Half-plane chart: g = (dx^2+dy^2)/y^2, area form w_12 = 1/y^2."""
    return {
        "dimension": 2,
        "order": order,
        "coordinates": ["x", "y"],
        "base_point": [str(Q(b)) for b in base_point],
        "omega": [[None, "1/y^2"], [None, None]],
        "connection": {"kind": "levi_civita", "metric": [["1/y^2", "0"], ["0", "1/y^2"]]},
    }


def flat_document(n=2, order=3) -> dict:
    return {
        "dimension": n,
        "order": order,
        "coordinates": [f"x{i + 1}" for i in range(n)],
        "base_point": ["0"] * n,
        "omega": [[None] * n for _ in range(n)],
        "connection": {"kind": "flat"},
    }


def sphere_chart(radius, base_point, order=4):
    return parse_chart_document(json.dumps(sphere_document(radius, base_point, order))).chart


def hyperbolic_chart(base_point=("0", "1"), order=4):
    return parse_chart_document(json.dumps(hyperbolic_document(base_point, order))).chart
