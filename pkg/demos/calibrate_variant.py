"""Score every intersection-curve variant against simulation.

The one-turn-from-intersection curve is assembled from a quadrature recipe
with three readings that are hard to pin down from the geometry alone: the
sign joining the two sine terms in the outer reach, whether the second
street is averaged over its full angle range or only the reachable window,
and which arc enters the first window threshold. Each reading is plausible;
only simulation can say which combination tracks the process.

This script runs the Monte Carlo estimator for the typical-intersection
one-turn distance under both crossing-angle laws, evaluates all eight
variant curves on the same grid, and writes the Kolmogorov-Smirnov score
card to docs/variant_calibration.json. The shipped default stays whatever
analytic.DEFAULT_VARIANT says; the JSON documents how the alternatives
rank so the choice is auditable.

Runtime is a few minutes (eight quadrature curves plus four six-figure
simulation runs). Rerunning overwrites the JSON in place.
"""

import itertools
import json
import pathlib
import time

import numpy as np

from linecox.analytic import DEFAULT_VARIANT, IntersectionVariant, cdf_one_turn_intersection
from linecox.experiments import default_grid, dkw_halfwidth, run_mc
from linecox.model import AngleLaw, ModelParams, TurnPolicy, typical_intersection

TRIALS = 100_000
GRID_SPEC = (3.0, 0.02)
TOL = 1e-5
SEED = 301
OUT = pathlib.Path(__file__).resolve().parent.parent / "docs" / "variant_calibration.json"

# all variants are scored at the reference point; the runner-up parameter
# point keeps only the shipped default as a sanity row
FULL_POINT = (1.0, 1.0)
EXTRA_POINTS = ((0.5, 1.0),)

LAWS = {"uniform": AngleLaw.UNIFORM, "sin": AngleLaw.SIN_WEIGHTED}


def all_variants():
    combos = itertools.product(("plus", "minus"), ("full-angle", "window-only"),
                               ("x", "t"))
    return [IntersectionVariant(*combo) for combo in combos]


def mc_curves(params, grid, seed):
    out = {}
    for name, law in LAWS.items():
        t0 = time.time()
        curve = run_mc(params, typical_intersection(law), TurnPolicy.one_turn(),
                       TRIALS, float(grid[-1]), seed, grid)
        print(f"  mc {name:8s} {TRIALS} trials  [{time.time() - t0:5.1f}s]")
        out[name] = curve.values
        seed += 1
    return out


def score_point(lam, mu, variants, seed):
    params = ModelParams(lam, mu)
    grid = default_grid(*GRID_SPEC)
    print(f"point lambda={lam:g} mu={mu:g}")
    mc = mc_curves(params, grid, seed)
    rows = {}
    for variant in variants:
        label = variant.label()
        t0 = time.time()
        try:
            values = cdf_one_turn_intersection(params, grid, variant, TOL)
        except Exception as exc:  # a mis-signed recipe may leave the domain
            rows[label] = {"error": f"{type(exc).__name__}: {exc}"}
            print(f"  {label:24s} failed: {type(exc).__name__}  [{time.time() - t0:5.1f}s]")
            continue
        ks = {name: float(np.max(np.abs(values - ref))) for name, ref in mc.items()}
        rows[label] = {"ks": ks}
        print(f"  {label:24s} ks(uniform)={ks['uniform']:.5f} "
              f"ks(sin)={ks['sin']:.5f}  [{time.time() - t0:5.1f}s]")
    return {"lambda": lam, "mu": mu, "seed": seed, "variants": rows}


def main():
    variants = all_variants()
    points = [score_point(*FULL_POINT, variants, SEED)]
    for i, (lam, mu) in enumerate(EXTRA_POINTS):
        points.append(score_point(lam, mu, [DEFAULT_VARIANT], SEED + 10 * (i + 1)))

    reference = points[0]
    scored = {label: row["ks"]["uniform"]
              for label, row in reference["variants"].items() if "ks" in row}
    best = min(scored, key=scored.get)
    doc = {
        "description": "KS distance between each intersection-curve variant "
                       "and the typical-intersection one-turn Monte Carlo "
                       "estimate, per crossing-angle law.",
        "grid": f"0:{GRID_SPEC[0]:g}:{GRID_SPEC[1]:g}",
        "trials": TRIALS,
        "tol": TOL,
        "dkw_halfwidth_95": dkw_halfwidth(TRIALS),
        "default_variant": DEFAULT_VARIANT.label(),
        "min_ks_variant": best,
        "min_ks": scored[best],
        "min_ks_law": "uniform",
        "points": points,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"\nminimal-KS variant at lambda=1, mu=1 (uniform law): {best} "
          f"(ks={scored[best]:.5f})")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
