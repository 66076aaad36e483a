"""Tabulate phi(n), B(n), C(n) for C0 = 1, 2, 3 (natural units, B0 = 1) and locate the phi maxima."""

import argparse
import csv

from wigner_bgk.poisson import WPEquilibrium, default_n_grid, phi_peak, tabulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figure7.csv")
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--c0", type=float, nargs="+", default=[1.0, 2.0, 3.0])
    args = ap.parse_args()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["c0", "n", "C", "B", "phi"])
        for c0 in args.c0:
            eq = WPEquilibrium(c0=c0)
            tab = tabulate(eq, default_n_grid(eq, args.points))
            for row in zip(tab["n"], tab["C"], tab["B"], tab["phi"]):
                w.writerow([f"{c0:.17g}"] + [f"{x:.17g}" for x in row])
            n_star, top = phi_peak(eq)
            print(f"C0={c0:g}: n_cut={eq.n_cut:.6f}  phi max {top:.6g} at n={n_star:.6f} "
                  f"({100 * n_star / eq.n_cut:.3f}% of n_cut)")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
