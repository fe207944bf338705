"""Leading-digit-1 densities: the asymptotic estimate oscillates between 1/9
and 5/9 with the radius phase, while harmonic weighting settles on
log10(2). The windowed variant removes the small-integer bias.

    python3 scripts/benford_table.py --kmax 7
"""

import argparse
import math

from zhat.density import density_alpha, density_uniform, log_density_window
from zhat.setdsl import compile_set


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=7)
    args = ap.parse_args()
    if args.kmax < 2:
        ap.error("--kmax must be at least 2")

    cs = compile_set("leadingdigit(1,10)")
    target = math.log10(2.0)

    print("radius        count ratio   harmonic ratio")
    grid = sorted(
        [10**k for k in range(1, args.kmax + 1)]
        + [2 * 10**k for k in range(1, args.kmax + 1)]
    )
    asym = density_alpha(cs, 0.0, grid)
    logr = density_alpha(cs, -1.0, grid)
    for r, a, l in zip(grid, asym.values, logr.values):
        print(f"  {r:<12d}{a:.6f}      {l:.6f}")
    print(f"count-ratio band: [{asym.lower_est:.6f}, {asym.upper_est:.6f}]"
          f"  (1/9 = {1/9:.6f}, 5/9 = {5/9:.6f})")

    k = args.kmax
    w1 = log_density_window(cs, 10 ** (k - 1), 10**k)
    w2 = log_density_window(cs, 2 * 10 ** (k - 1), 2 * 10**k)
    print(f"windowed harmonic ratio (10^{k-1},10^{k}]:     {w1:.8f}")
    print(f"windowed harmonic ratio (2*10^{k-1},2*10^{k}]: {w2:.8f}")
    print(f"log10(2) = {target:.8f}")

    uni = density_uniform(cs, [10**4], scan_radius=10**5)
    lo, hi = uni.values[0]
    print(f"uniform window extremes at L=1e4: inf={lo:.3f} sup={hi:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
