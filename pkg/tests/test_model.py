import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linecox import (
    DistributionCurve,
    ModelParams,
    NegativeIntensity,
    NonFinite,
    NonPositiveScale,
    PolicyKind,
    TurnPolicy,
    ZeroMu,
    rescale,
    validate,
)


def test_validate_accepts_and_returns():
    p = ModelParams(1.0, 2.0)
    assert validate(p) is p
    assert validate(ModelParams(0.0, 0.5)).lam == 0.0  # lam may be zero


@pytest.mark.parametrize("lam,mu,exc,needle", [
    (float("nan"), 1.0, NonFinite, "lambda"),
    (1.0, float("inf"), NonFinite, "mu"),
    (-0.5, 1.0, NegativeIntensity, "lambda"),
    (1.0, -1.0, NegativeIntensity, "mu"),
    (1.0, 0.0, ZeroMu, "mu"),
])
def test_validate_rejects(lam, mu, exc, needle):
    with pytest.raises(exc) as ei:
        validate(ModelParams(lam, mu))
    assert needle in str(ei.value)


def test_policy_factories():
    assert TurnPolicy.zero_turn().kind is PolicyKind.ZERO_TURN
    one = TurnPolicy.one_turn(include_lower_turn_paths=False)
    assert one.k == 1 and not one.include_lower_turn_paths
    two = TurnPolicy.two_turn_directed()
    assert two.kind is PolicyKind.TWO_TURN_DIRECTED
    assert two.first_hop_positive_x  # forced on
    kt = TurnPolicy.k_turn(5)
    assert kt.k == 5 and not kt.first_hop_positive_x


def test_curve_build_and_freeze():
    c = DistributionCurve(np.array([0.0, 1.0, 2.0]),
                          np.array([0.0, 0.5, 0.9]), 0.1, {"a": 1})
    assert len(c) == 3
    assert c.ci_halfwidth.shape == (3,)  # scalar broadcasts
    with pytest.raises(ValueError):
        c.grid[0] = 5.0  # arrays come back read-only


@pytest.mark.parametrize("grid,values", [
    ([0.0, 1.0], [0.1]),                 # length mismatch
    ([1.0, 0.5], [0.1, 0.2]),            # not increasing
    ([0.0, 0.0], [0.1, 0.2]),            # not strictly increasing
    ([0.0, float("nan")], [0.1, 0.2]),   # non-finite
    ([], []),                            # empty
])
def test_curve_rejects(grid, values):
    with pytest.raises(ValueError):
        DistributionCurve(np.asarray(grid, float), np.asarray(values, float), 0.0)


def test_rescale_maps_grid_and_meta():
    c = DistributionCurve(np.array([0.0, 1.0]), np.array([0.0, 0.5]), 0.01,
                          {"params": {"lambda": 1.0, "mu": 2.0}})
    r = rescale(c, 2.0)
    assert np.array_equal(r.grid, [0.0, 2.0])
    assert np.array_equal(r.values, c.values)
    assert np.array_equal(r.ci_halfwidth, c.ci_halfwidth)
    assert r.meta["params"] == {"lambda": 0.5, "mu": 1.0}
    assert r.meta["rescaled_by"] == 2.0
    rr = rescale(r, 0.5)
    assert rr.meta["rescaled_by"] == 1.0
    assert rr.meta["params"] == {"lambda": 1.0, "mu": 2.0}


@pytest.mark.parametrize("c", [0.0, -1.0, float("nan"), float("inf")])
def test_rescale_rejects_bad_scale(c):
    curve = DistributionCurve(np.array([0.0, 1.0]), np.array([0.0, 1.0]), 0.0)
    with pytest.raises(NonPositiveScale):
        rescale(curve, c)


@given(st.floats(min_value=0.01, max_value=100.0,
                 allow_nan=False, allow_infinity=False))
def test_rescale_round_trip(c):
    curve = DistributionCurve(np.array([0.0, 0.5, 1.7]),
                              np.array([0.0, 0.3, 0.8]), 0.02)
    back = rescale(rescale(curve, c), 1.0 / c)
    assert np.allclose(back.grid, curve.grid, rtol=1e-12, atol=1e-15)
    assert np.array_equal(back.values, curve.values)
