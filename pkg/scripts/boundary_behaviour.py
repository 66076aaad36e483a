"""How F(q, 0) behaves as q approaches the mu=+1 support edge, for C0 below and above 24 Gamma.

Prints the local log-slope d ln|F| / d ln s with s = C0 - 2 Gamma q^2; a
finite slope means power-law behaviour s^slope, a slope growing without
bound means exponential decay (or growth) in 1/sqrt(s).
"""

import warnings

import numpy as np

from wigner_bgk.quartic import QuarticEquilibrium, SingularBoundaryWarning, eval_wigner

CASES = [(1.0, 0.0, 0.42, 16.0), (1.0, 0.0, 0.42, 23.0), (1.0, 0.0, 0.42, 25.0), (1.0, 0.3, 0.2, 5.0),
         (0.8, 0.3, 0.2, 5.0), (0.2, 0.0, 1.0, 8.0)]


def main():
    s = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    print("gamma   a0    b0    c0   c0/24G  form       slopes d ln|F|/d ln s at s=1e-2..1e-5")
    for g, a0, b0, c0 in CASES:
        for form in ("exact", "published"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SingularBoundaryWarning)
                eq = QuarticEquilibrium.build(1, g, a0, b0, c0, form)
            q = np.sqrt((c0 - s) / (2 * g))
            with np.errstate(over="ignore", divide="ignore"):
                try:
                    f = np.abs(eval_wigner(q, 0.0, eq))
                    slopes = np.diff(np.log(f)) / np.diff(np.log(s))
                    txt = " ".join(f"{x:9.3g}" for x in slopes)
                except ArithmeticError as exc:
                    txt = f"overflow ({exc})"
            print(f"{g:5.2f} {a0:5.2f} {b0:5.2f} {c0:5.1f} {c0 / (24 * g):7.3f}  {form:10s} {txt}")


if __name__ == "__main__":
    main()
