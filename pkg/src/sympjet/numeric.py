"""Floating-point oracle helpers.

The exact core never touches floats; these utilities exist to cross-check
it numerically: vectorized polynomial evaluation of jets and a batched
fixed-step RK4 integration of the geodesic equation, used to validate the
formal exponential map.
"""

from __future__ import annotations

import numpy as np

from .charts import ChartSpec
from .jets import Jet
from .tensors import all_indices


class PolyBatch:
    """Float evaluator for a family of jets sharing the variable count."""

    def __init__(self, jets: list[Jet]):
        self.n_vars = jets[0].n_vars
        keys = sorted({key for jet in jets for key in jet.coeffs})
        self.exponents = np.array(keys or [(0,) * self.n_vars], dtype=np.int64)
        coeffs = np.zeros((len(jets), len(self.exponents)), dtype=np.float64)
        index = {key: pos for pos, key in enumerate(keys)}
        for row, jet in enumerate(jets):
            for key, value in jet.coeffs.items():
                coeffs[row, index[key]] = float(value)
        self.coeffs = coeffs

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """points (m, n_vars) -> values (m, n_jets)."""
        points = np.asarray(points, dtype=np.float64)
        # monomials via per-variable powers: (m, n_terms)
        max_exp = int(self.exponents.max(initial=0))
        powers = np.ones((points.shape[0], self.n_vars, max_exp + 1))
        for e in range(1, max_exp + 1):
            powers[:, :, e] = powers[:, :, e - 1] * points
        monomials = np.ones((points.shape[0], self.exponents.shape[0]))
        for var in range(self.n_vars):
            monomials *= powers[:, var, self.exponents[:, var]]
        return monomials @ self.coeffs.T


def geodesic_endpoints(chart: ChartSpec, velocities, steps: int = 256) -> np.ndarray:
    """Integrate x'' + G(x)(x', x') = 0 from the origin to t = 1 with RK4.

    ``velocities`` is (m, n); returns the endpoints x(1) as (m, n).  The
    right-hand side evaluates the raised-symbol jets as float polynomials,
    so this oracle checks the degree recursion, not the truncation.
    """
    n = chart.dim
    gup = chart.gamma_up
    batch = PolyBatch([gup[idx] for idx in all_indices(n, 3)])
    velocities = np.asarray(velocities, dtype=np.float64)
    m = velocities.shape[0]

    def acceleration(x, v):
        gamma = batch(x).reshape(m, n, n, n)
        return -np.einsum("mijk,mj,mk->mi", gamma, v, v)

    h = 1.0 / steps
    x = np.zeros_like(velocities)
    v = velocities.copy()
    for _ in range(steps):
        k1x, k1v = v, acceleration(x, v)
        k2x, k2v = v + 0.5 * h * k1v, acceleration(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = v + 0.5 * h * k2v, acceleration(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = v + h * k3v, acceleration(x + h * k3x, v + h * k3v)
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
    return x


def exponential_endpoints(phi: list[Jet], velocities) -> np.ndarray:
    """Evaluate the formal exponential map at float velocities, (m, n)."""
    batch = PolyBatch(phi)
    return batch(np.asarray(velocities, dtype=np.float64))
