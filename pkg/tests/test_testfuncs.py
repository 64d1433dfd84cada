"""Battery test functions: closed-form derivatives vs numerical oracles."""

import math

import mpmath
import pytest

from deltacomb.bump import bump_eval
from deltacomb.errors import InputError
from deltacomb.testfuncs import (
    bump_member,
    default_battery,
    poly_member,
    shifted_member,
    trig_member,
)

mpmath.mp.dps = 30


def mp_mirror(member):
    """Independent mpmath mirror of a battery member's value function."""
    a = mpmath.mpf(member.spec.a.numerator) / member.spec.a.denominator
    norm = mpmath.mpf(member.spec.normalization)
    center = mpmath.mpf(member.center)
    scale = mpmath.mpf(member.scale)

    def weight(x):
        if member.family == "polynomial-bump":
            return sum(c * x**i for i, c in enumerate(member.poly))
        if member.family == "trig-bump":
            return mpmath.cos(member.omega * x + member.phase)
        return mpmath.mpf(1)

    def psi(x):
        u = scale * (mpmath.mpf(x) - center) / a
        if abs(u) >= 1:
            return mpmath.mpf(0)
        return weight(mpmath.mpf(x)) * norm * mpmath.e ** (-1 / (1 - u * u))

    return psi


INTERIOR_POINTS = {
    "bump": (-0.6, 0.0, 0.45),
    "shifted-scaled": None,  # derived from the member's own support
    "polynomial-bump": (-1.2, 0.3, 1.5),
    "trig-bump": (-0.5, 0.1, 0.7),
}


def interior_points(member):
    lo, hi = member.support()
    width = hi - lo
    return (lo + 0.2 * width, lo + 0.5 * width, lo + 0.83 * width)


class TestValuesAgainstMirror:
    @pytest.mark.parametrize("idx", range(12))
    def test_value_matches_mpmath_mirror(self, idx, battery):
        member = battery[idx]
        psi = mp_mirror(member)
        for x in interior_points(member):
            assert member.eval_deriv(x, 0) == pytest.approx(
                float(psi(x)), rel=1e-12, abs=1e-12
            )

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("idx", [0, 3, 7, 10])
    def test_derivatives_match_mpmath_diff(self, idx, r, battery):
        member = battery[idx]
        psi = mp_mirror(member)
        for x in interior_points(member):
            oracle = float(mpmath.diff(psi, x, r))
            got = member.eval_deriv(x, r)
            assert got == pytest.approx(oracle, rel=1e-8, abs=1e-8)

    def test_finite_difference_consistency(self, battery):
        h = 1e-6
        for member in battery:
            x = sum(member.support()) / 2 + 0.05
            for r in range(3):
                fd = (
                    member.eval_deriv(x + h, r) - member.eval_deriv(x - h, r)
                ) / (2 * h)
                want = member.eval_deriv(x, r + 1)
                assert fd == pytest.approx(want, rel=1e-5, abs=1e-5)


class TestStructure:
    def test_default_battery_has_twelve_members(self, battery):
        assert len(battery) == 12

    def test_all_supports_contain_origin(self, battery):
        for member in battery:
            lo, hi = member.support()
            assert lo < 0 < hi

    def test_zero_outside_support(self, battery):
        for member in battery:
            lo, hi = member.support()
            for x in (lo - 0.1, hi + 0.1, lo, hi):
                assert member.eval_deriv(x, 0) == 0.0
                assert member.eval_deriv(x, 2) == 0.0

    def test_poly_weight_evaluates_at_x(self):
        member = poly_member((0.0, 1.0), a=2)  # weight w(x) = x
        x = 0.75
        assert member.eval_deriv(x, 0) == pytest.approx(
            x * bump_eval(member.spec, x), rel=1e-14
        )

    def test_trig_weight(self):
        member = trig_member(2.0, math.pi / 3.0, a=3)
        x = 0.4
        want = math.cos(2 * x + math.pi / 3) * bump_eval(member.spec, x)
        assert member.eval_deriv(x, 0) == pytest.approx(want, rel=1e-14)

    def test_shifted_member_support(self):
        member = shifted_member(0.3, 0.5, 1)
        assert member.support() == (0.3 - 2.0, 0.3 + 2.0)

    def test_call_is_value(self, battery):
        member = battery[0]
        assert member(0.2) == member.eval_deriv(0.2, 0)

    def test_validation(self):
        with pytest.raises(InputError):
            shifted_member(0, -1)
        with pytest.raises(InputError):
            poly_member(())


class TestSupAbs:
    def test_bounds_every_sample(self, battery):
        member = battery[4]
        lo, hi = member.support()
        sup = member.sup_abs(lo, hi)
        for i in range(50):
            x = lo + (hi - lo) * i / 49
            assert abs(member.eval_deriv(x, 0)) <= sup + 1e-15

    def test_extra_points_are_covered(self):
        member = bump_member(1)
        # restrict to a window missing the peak; the extra point adds it back
        sup_without = member.sup_abs(0.5, 0.9)
        sup_with = member.sup_abs(0.5, 0.9, extra_points=(0.6, 0.0))
        assert sup_with >= sup_without
        assert sup_with >= abs(member.eval_deriv(0.6, 0))

    def test_zero_on_disjoint_window(self):
        member = bump_member(1)
        assert member.sup_abs(5, 6) == 0.0
