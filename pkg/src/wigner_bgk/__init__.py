"""Exact stationary Wigner and Wigner-Poisson equilibria of BGK type."""

from .core import (AnsatzValue, DomainError, ExponentOverflowError, PhasePoint, PhysicalUnits,
                   QuarticParams, ansatz_dH, ansatz_eval, energy)
from .quartic import (AnsatzConstants, QuarticEquilibrium, coeff_A, coeff_B, coeff_C, density_closed,
                      eval_wigner, ode_residual, origin_positivity)
from .admissibility import AdmissibilityReport, check_admissibility, critical_gamma, normalize
from .dilog import dilog
from .poisson import WPEquilibrium, WPUnits, phi_peak, tabulate, wp_B, wp_phi
from .evolution import EvolutionGrid, default_grid, evolve, stationarity_deviation
from .presets import quartic_preset

__all__ = [
    "AnsatzConstants", "AnsatzValue", "DomainError", "ExponentOverflowError", "PhasePoint",
    "PhysicalUnits", "QuarticEquilibrium", "QuarticParams", "ansatz_dH", "ansatz_eval",
    "coeff_A", "coeff_B", "coeff_C", "density_closed", "energy", "eval_wigner",
    "ode_residual", "origin_positivity",
    "AdmissibilityReport", "check_admissibility", "critical_gamma", "normalize", "dilog",
    "WPEquilibrium", "WPUnits", "phi_peak", "tabulate", "wp_B", "wp_phi",
    "EvolutionGrid", "default_grid", "evolve", "stationarity_deviation", "quartic_preset",
]
