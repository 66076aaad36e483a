"""Named parameter sets used in the figures and the verification runs."""

from __future__ import annotations

from .quartic import QuarticEquilibrium

# name -> (mu, gamma, a0, b0, c0)
QUARTIC_PRESETS = {
    "figure-2": (1, 1.0, 0.0, 0.42, 16.0),
    "figure-4-gamma-0.2": (-1, 0.2, 0.52, -1.3, 1.0),
    "figure-4-gamma-0.5": (-1, 0.5, 0.52, -1.3, 1.0),
    "figure-5": (-1, 1.14, -0.13, 0.32, 1.0),
    "figure-6-gamma-0.5": (-1, 0.5, -0.48, 1.2, 1.0),
    "figure-6-gamma-1.14": (-1, 1.14, -0.13, 0.325, 1.0),
    "figure-6-gamma-2": (-1, 2.0, -0.108, 0.27, 1.0),
    "figure-6-gamma-5": (-1, 5.0, -0.111, 0.2775, 1.0),
}

# Wigner-Poisson curves in natural units
WP_PRESETS = {
    "figure-7": {"c0": (1.0, 2.0, 3.0), "b0": 1.0},
}


def preset_names():
    return sorted(QUARTIC_PRESETS) + sorted(WP_PRESETS)


def quartic_preset(name: str, form: str = "exact") -> QuarticEquilibrium:
    try:
        mu, g, a0, b0, c0 = QUARTIC_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(preset_names())}") from None
    return QuarticEquilibrium.build(mu, g, a0, b0, c0, form)
