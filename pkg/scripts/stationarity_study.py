"""Deviation ||F(T) - F(0)|| / ||F(0)|| versus grid size for the double-well presets."""

import argparse
import time

from wigner_bgk.evolution import default_grid, scaled_b_state, stationarity_deviation
from wigner_bgk.presets import quartic_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=10.0)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--presets", nargs="+", default=["figure-4-gamma-0.2", "figure-6-gamma-0.5"])
    args = ap.parse_args()
    for name in args.presets:
        eq = quartic_preset(name)
        base = default_grid(eq, n=max(args.sizes), T=args.T)
        print(f"{name}: box |q|<={base.l_q} |p|<={base.l_p}, dt={base.dt:.3g}")
        for n in args.sizes:
            t0 = time.perf_counter()
            dev = stationarity_deviation(eq, base.with_size(n))
            print(f"  N={n:4d}  deviation {dev:.3e}  ({time.perf_counter() - t0:.1f}s)")
        ctrl = stationarity_deviation(eq, base, initial=scaled_b_state(eq, 1.1))
        pub = eq.with_form("published")
        pctrl = stationarity_deviation(eq, default_grid(pub, n=max(args.sizes), T=args.T), initial=pub)
        print(f"  controls: B(q) x 1.1 -> {ctrl:.3e}, published form -> {pctrl:.3e}")


if __name__ == "__main__":
    main()
