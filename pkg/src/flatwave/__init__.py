"""flatwave: pseudospectral machinery for gravity waves over a flat bottom.

Core pieces: periodic Fourier infrastructure (:mod:`flatwave.spectral`), an
independent Chebyshev-collocation ground truth for the Dirichlet-Neumann
operator (:mod:`flatwave.oracle`), the strip fixed-point formulation and the
height expansion of the same operator (:mod:`flatwave.dn`), closed-form
quadratic interaction symbols (:mod:`flatwave.symbols`), paraproducts and
the symmetrizing change of variables (:mod:`flatwave.paradiff`), and a time
integrator with Hamiltonian and energy diagnostics
(:mod:`flatwave.evolution`).
"""

from .spectral import Grid, MultiplierSpec, NormKind, apply_multiplier, lp_project, norm
from .strip import StripGrid

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "StripGrid",
    "MultiplierSpec",
    "NormKind",
    "apply_multiplier",
    "lp_project",
    "norm",
    "__version__",
]
