"""Critical Gamma values along B0 = -2.5 A0, C0 = 1, for both coefficient forms."""

import argparse
import json
import math

from wigner_bgk.admissibility import critical_gamma, ratio_family

SCANS = [
    ("two-hump", 1.0, (0.1, 1.0)),
    ("negativity", 1.0, (0.1, 1.0)),
    ("density-nonneg", 1.0, (0.1, 1.0)),
    ("density-nonneg", -1.0, (0.5, 2.0)),
]

# origin-only statements have closed-form roots
ANALYTIC = {
    ("two-hump", 1.0): (6 + math.sqrt(132)) / 48,
    ("negativity", 1.0): (6 + math.sqrt(84)) / 24,
    ("density-nonneg", -1.0): (3 + math.sqrt(15)) / 6,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for pred, a0, bracket in SCANS:
        for form in ("exact", "published"):
            try:
                g = critical_gamma(ratio_family(a0=a0, form=form), pred, bracket, args.tol)
            except ValueError:
                g = None
            rows.append({"predicate": pred, "a0_sign": int(a0), "form": form, "gamma_star": g,
                         "analytic": ANALYTIC.get((pred, a0))})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'predicate':16s} {'A0':>3s} {'form':10s} {'Gamma*':>10s} {'analytic':>10s}")
    for r in rows:
        g = "none" if r["gamma_star"] is None else f"{r['gamma_star']:.5f}"
        an = "" if r["analytic"] is None else f"{r['analytic']:.5f}"
        print(f"{r['predicate']:16s} {r['a0_sign']:+3d} {r['form']:10s} {g:>10s} {an:>10s}")


if __name__ == "__main__":
    main()
