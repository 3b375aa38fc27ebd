"""Python front end for the ventcel finite element library.

Problem settings use the same keys and value grammar as the CLI config
files (``domain``, ``a2``, ``a0``, ``phi``, ``exact``, ``n`` ...).
"""

from . import _core
from ._core import (
    ConfigError,
    EllipticityViolation,
    SingularSystem,
    VentcelError,
    arc_length,
    coefficient_bounds,
    config_keys,
    curvature,
    curve_interval,
    eval_curve,
    triangulate,
)

__all__ = [
    "ConfigError",
    "EllipticityViolation",
    "SingularSystem",
    "VentcelError",
    "arc_length",
    "coefficient_bounds",
    "config_keys",
    "convergence",
    "curvature",
    "curve_interval",
    "eval_curve",
    "solve",
    "triangulate",
    "verify",
]


def _as_values(settings):
    out = {}
    for key, value in settings.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        out[key] = str(value)
    return out


def solve(**settings):
    """Solve one problem; returns nodes, triangles, nodal values and diagnostics."""
    return _core.solve(_as_values(settings))


def convergence(**settings):
    """Refinement study from ``n`` over ``levels`` meshes; needs ``exact``."""
    return _core.convergence(_as_values(settings))


def verify(seed=42):
    return _core.run_verification_suite(seed)
