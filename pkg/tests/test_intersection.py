import json
import math
import pathlib

import numpy as np
import pytest

from linecox import (
    DEFAULT_VARIANT,
    DegenerateAngles,
    DomainError,
    IntersectionVariant,
    ModelParams,
    NonFinite,
    QuadratureFailure,
    angle_thresholds,
    cdf_one_turn_intersection,
    cdf_upper_intersection,
    cdf_zero_turn_intersection,
    one_turn_intersection_terms,
    z_length,
)
from linecox.analytic.intersection import _safe_arccos

DATA = pathlib.Path(__file__).parent / "data" / "riemann_oracle.json"
P11 = ModelParams(1.0, 1.0)


def test_threshold_hand_values():
    # omega = pi/2, t = 1, x = 0.5: window arctans and arccos pair by hand
    outer_lo, win_lo, win_hi, outer_hi = angle_thresholds(0.5, math.pi / 2, 1.0)
    assert win_lo == pytest.approx(math.atan2(1.0, 0.5), abs=1e-12)
    assert win_hi == pytest.approx(math.atan2(1.0, -0.5), abs=1e-12)
    # rho = 3, rho^2+1 = 10: arguments +-6/10
    assert outer_lo == pytest.approx(math.acos(0.6), abs=1e-12)
    assert outer_hi == pytest.approx(math.acos(-0.6), abs=1e-12)


def test_thresholds_collapse_at_x_zero():
    for omega in (0.4, math.pi / 2, 2.8):
        got = angle_thresholds(0.0, omega, 1.5)
        assert got == pytest.approx((omega,) * 4, abs=1e-12)


def test_thresholds_symmetric_at_right_angle():
    outer_lo, win_lo, win_hi, outer_hi = angle_thresholds(0.5, math.pi / 2, 1.0)
    assert win_hi == pytest.approx(math.pi - win_lo, abs=1e-9)
    assert outer_hi == pytest.approx(math.pi - outer_lo, abs=1e-9)


def test_threshold_nesting_sampled():
    rng = np.random.default_rng(5)
    for _ in range(300):
        t = float(rng.uniform(0.1, 3.0))
        x = float(rng.uniform(0.0, 1.0)) * t
        omega = float(rng.uniform(1e-3, math.pi - 1e-3))
        outer_lo, win_lo, win_hi, outer_hi = angle_thresholds(x, omega, t)
        assert outer_lo <= win_lo + 1e-9
        assert win_lo <= win_hi + 1e-9
        assert win_hi <= outer_hi + 1e-9
        assert 0.0 <= outer_lo and outer_hi <= math.pi


def test_z_length_branch_values():
    t, x, omega = 1.0, 0.5, math.pi / 2

    # middle window (1.107..2.034 here): flat remaining budget on both arms
    assert z_length(x, 1.3, omega, t) == pytest.approx(2 * (t - x))
    assert z_length(t, 1.3, omega, t) == 0.0

    # outer branch at omega1 = 0.5 (below outer_lo ~ 0.927)
    om1 = 0.5
    c = (math.sin(omega) + math.sin(om1)) / math.sin(om1 - omega)
    want = min(max(2 * t - x * (c + 1.0), 0.0), 4 * t)
    assert z_length(x, om1, omega, t) == pytest.approx(want, abs=1e-12)

    # transition branch at omega1 = 1.0 (between outer_lo and win_lo ~ 1.107)
    om1 = 1.0
    want = min(max(4 * t - 2 * x * (1 + 2 * math.sin(om1) / math.sin(om1 - omega)),
                   0.0), 4 * t)
    assert z_length(x, om1, omega, t) == pytest.approx(want, abs=1e-12)

    # all branches stay inside the clamp
    for om1 in np.linspace(0.0, math.pi, 57):
        if abs(math.sin(om1 - omega)) < 1e-12:
            continue
        assert 0.0 <= z_length(x, float(om1), omega, t) <= 4 * t


def test_z_length_boundary_probe():
    # the regime switch need not be continuous; both sides must stay finite
    t, x, omega = 1.0, 0.5, math.pi / 2
    outer_lo = angle_thresholds(x, omega, t)[0]
    lo = z_length(x, outer_lo - 1e-6, omega, t)
    hi = z_length(x, outer_lo + 1e-6, omega, t)
    assert math.isfinite(lo) and math.isfinite(hi)


def test_z_length_validation():
    with pytest.raises(DegenerateAngles):
        z_length(0.3, 1.0, 1.0, 1.0)
    with pytest.raises(DegenerateAngles):
        z_length(0.3, 1.0 + 1e-13, 1.0, 1.0)
    with pytest.raises(DomainError):
        z_length(0.3, 1.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        z_length(-0.1, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        z_length(1.5, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        z_length(0.3, 1.0, math.pi, 1.0)
    with pytest.raises(DomainError):
        angle_thresholds(0.3, 1.0, float("inf"))


def test_safe_arccos_guard():
    assert _safe_arccos(1.0 + 5e-10) == 0.0
    assert _safe_arccos(-1.0 - 5e-10) == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        _safe_arccos(1.0 + 1e-6)


def test_variant_labels_and_validation():
    assert DEFAULT_VARIANT.label() == "plus/full-angle/x"
    v = IntersectionVariant("minus", "window-only", "t")
    assert v.label() == "minus/window-only/t"
    with pytest.raises(ValueError):
        IntersectionVariant("bogus", "full-angle", "x")
    with pytest.raises(ValueError):
        IntersectionVariant("plus", "sideways", "x")
    with pytest.raises(ValueError):
        IntersectionVariant("plus", "full-angle", "q")


def test_variant_changes_the_answer():
    base = one_turn_intersection_terms(1.0, 1.0)
    other = one_turn_intersection_terms(
        1.0, 1.0, IntersectionVariant("minus", "full-angle", "x"))
    assert base[0] != pytest.approx(other[0], abs=1e-6)


def test_terms_match_riemann_oracle():
    data = json.loads(DATA.read_text())
    assert data["cells_per_axis"] >= 2000
    for rec in data["tx"]:
        assert rec["variant"] == DEFAULT_VARIANT.label()
        tx, ty = one_turn_intersection_terms(rec["mu"], rec["t"])
        assert tx == pytest.approx(rec["tx"], abs=5e-4)
        assert ty == pytest.approx(rec["ty"], abs=5e-4)


def test_terms_regression_and_failure_payload():
    tx, ty = one_turn_intersection_terms(1.0, 1.0)
    assert tx == pytest.approx(0.3585005653644986, rel=1e-9)
    assert ty == pytest.approx(0.908067928716823, rel=1e-9)
    with pytest.raises(QuadratureFailure) as exc:
        one_turn_intersection_terms(1.0, 1.0, tol=1e-15)
    assert exc.value.value is not None
    assert exc.value.error_estimate > 0


def test_cdf_lambda_zero_is_exact_corollary():
    t = np.linspace(0.0, 2.0, 21)
    p = ModelParams(0.0, 1.7)
    assert np.array_equal(cdf_one_turn_intersection(p, t),
                          cdf_zero_turn_intersection(p, t))
    v, e = cdf_one_turn_intersection(p, t, with_err=True)
    assert np.all(e == 0.0)


def test_cdf_basic_contract():
    assert cdf_one_turn_intersection(P11, 0.0) == 0.0
    v, e = cdf_one_turn_intersection(P11, 1.0, with_err=True)
    assert isinstance(v, float) and isinstance(e, float)
    assert 0.0 < v < 1.0 and 0.0 <= e <= 1e-6

    t = np.array([0.0, 0.5, 1.0])
    arr, errs = cdf_one_turn_intersection(P11, t, with_err=True)
    assert arr.shape == errs.shape == t.shape
    assert arr[0] == 0.0
    assert arr[2] == pytest.approx(v, abs=2e-6)
    assert np.all(np.diff(arr) > 0)


def test_cdf_sandwiched_between_corollaries():
    t = np.array([0.1, 0.25, 0.5, 1.0, 1.5])
    mid = cdf_one_turn_intersection(P11, t)
    lo = cdf_zero_turn_intersection(P11, t)
    hi = cdf_upper_intersection(P11, t)
    assert np.all(lo <= mid) and np.all(mid <= hi)


def test_cdf_validation():
    with pytest.raises(NonFinite):
        cdf_one_turn_intersection(P11, float("nan"))
    with pytest.raises(Exception):
        cdf_one_turn_intersection(P11, -1.0)
    with pytest.raises(QuadratureFailure) as exc:
        cdf_one_turn_intersection(P11, 1.0, tol=1e-15)
    assert 0.0 < exc.value.value < 1.0
