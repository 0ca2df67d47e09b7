"""sympjet: exact truncated-jet calculus for symplectic connections.

Local models of symplectic manifolds with a compatible connection, computed
exactly: connection algebra, curvature and Ricci tensors, sectional
classification, geodesic normal coordinates and normal tensors, and
reconstruction of charts from prescribed point curvature data.
"""

from ._kernels import BACKEND as kernel_backend
from .charts import ChartSpec, darboux_flat, functional_dims, validate
from .curvature import curvature, ricci, sectional_classify
from .jets import Jet, compose, invert_map, jet_str, radial_antiderivative
from .normal import normal_tensors, to_normal_chart
from .reconstruct import realize_curvature, realize_curvature_derivative

__version__ = "0.1.0"

__all__ = [
    "ChartSpec",
    "Jet",
    "compose",
    "curvature",
    "darboux_flat",
    "functional_dims",
    "invert_map",
    "jet_str",
    "kernel_backend",
    "normal_tensors",
    "radial_antiderivative",
    "realize_curvature",
    "realize_curvature_derivative",
    "ricci",
    "sectional_classify",
    "to_normal_chart",
    "validate",
]
