"""Starting from a typical crossing: the quadrature curve and its
closed-form sandwich.

From an intersection the walker starts with four street directions, so
the nearest-point distance stochastically improves on the typical-point
case. The exact one-turn distribution needs a quadrature (the reachable
set on a second street depends on where the turn happens), but two
closed forms pin it down: ignore turning entirely (four rays, intensity
mu) for a lower curve, and pretend every crossing opens a full fresh
street (intensity mu + 4 lambda on four rays) for an upper one.

The script prints the sandwich at (lambda, mu) = (1, 1) with a Monte
Carlo companion and reports where the quadrature curve sits inside its
bracket.
"""

import time

import numpy as np

from linecox.analytic import (
    cdf_one_turn_intersection,
    cdf_one_turn_point,
    cdf_upper_intersection,
    cdf_zero_turn_intersection,
)
from linecox.experiments import dkw_halfwidth, run_mc
from linecox.model import ModelParams, TurnPolicy, typical_intersection

PARAMS = ModelParams(1.0, 1.0)
TRIALS = 20_000


def main():
    grid = np.round(np.arange(0.0, 3.01, 0.1), 10)
    t0 = time.time()
    mid = cdf_one_turn_intersection(PARAMS, grid)
    print(f"quadrature curve on {grid.size} points in {time.time() - t0:.1f}s")
    lo = cdf_zero_turn_intersection(PARAMS, grid)
    hi = cdf_upper_intersection(PARAMS, grid)

    t0 = time.time()
    mc = run_mc(PARAMS, typical_intersection(), TurnPolicy.one_turn(), TRIALS,
                3.0, seed=23, grid=grid)
    print(f"{TRIALS} trials in {time.time() - t0:.1f}s; "
          f"KS {float(np.max(np.abs(mc.values - mid))):.4f} "
          f"(DKW {dkw_halfwidth(TRIALS):.4f})\n")

    print("   t    zero-turn  one-turn   upper      MC     point-start")
    point = cdf_one_turn_point(PARAMS, grid)
    for t in (0.1, 0.3, 0.5, 0.8, 1.2, 2.0):
        i = int(round(t / 0.1))
        print(f"{t:5.2f}    {lo[i]:.4f}    {mid[i]:.4f}   {hi[i]:.4f}   "
              f"{mc.values[i]:.4f}     {point[i]:.4f}")

    gap_lo = float(np.min((mid - lo)[1:]))
    gap_hi = float(np.min((hi - mid)[1:]))
    open_bracket = (hi - lo)[1:] > 1e-3
    frac = float(np.max(((mid - lo)[1:] / (hi - lo)[1:])[open_bracket]))
    print(f"\nsandwich margins for t > 0: min(one-turn - zero-turn) = {gap_lo:.2e}, "
          f"min(upper - one-turn) = {gap_hi:.2e}")
    print(f"while the bracket is open the curve climbs to {100 * frac:.0f}% "
          "of it, and it dominates the typical-point curve everywhere")


if __name__ == "__main__":
    main()
