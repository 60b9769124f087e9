"""Relative entropy inequalities for positive operators and GRE simulations."""

from ._core import (
    ConvexEta,
    GrekitError,
    build_generator,
    classify_stochasticity,
    is_nonnegative,
    phi_eta,
    power_iterate_gre,
    relative_entropy,
    run_growth,
    run_transport,
    tangent_minorant,
    verify_csiszar,
    verify_lr,
)

__all__ = [
    "ConvexEta",
    "GrekitError",
    "build_generator",
    "classify_stochasticity",
    "is_nonnegative",
    "phi_eta",
    "power_iterate_gre",
    "relative_entropy",
    "run_growth",
    "run_transport",
    "tangent_minorant",
    "verify_csiszar",
    "verify_lr",
]
