"""Lattice exterior-flow laboratory: perforated-domain geometry, corrected
velocity fields, exterior solves, and vortex transport."""

from eulersieve._core import (
    corrector_norms,
    corrector_velocity,
    domain_info,
    evolve_summary,
    expint_e1,
    exterior_report,
    map_report,
    version,
)

__version__ = version().split()[-1]

__all__ = [
    "corrector_norms",
    "corrector_velocity",
    "domain_info",
    "evolve_summary",
    "expint_e1",
    "exterior_report",
    "map_report",
    "version",
    "__version__",
]
