"""Mollification and Riemann-comb sampling: the weak approximation stage."""

from fractions import Fraction

import pytest

from deltacomb.bump import bump_eval, bump_spec
from deltacomb.distributions import (
    add,
    comb_to_distribution,
    dirac,
    pair,
    support_hull,
    zero_distribution,
)
from deltacomb.errors import InputError, SupportError
from deltacomb.mollify import (
    comb_sequence,
    default_schedule,
    min_mollifier_index,
    mollify,
    riemann_comb,
)
from deltacomb.quadrature import integrate
from deltacomb.scalars import MODE_FLOAT
from deltacomb.testfuncs import bump_member


def delta(loc, order=0, coeff=1.0):
    return dirac(loc, order, coeff, MODE_FLOAT)


class TestMollify:
    def test_point_mass_gives_scaled_bump(self):
        m = 4
        f = mollify(delta(0), m)
        spec = bump_spec(1)
        for x in (-0.2, 0.0, 0.11, 0.24):
            assert f.eval(x) == pytest.approx(
                m * bump_eval(spec, m * x), rel=1e-14
            )

    def test_shifted_point_mass(self):
        f = mollify(delta(Fraction(1, 2)), 8)
        spec = bump_spec(1)
        assert f.eval(0.55) == pytest.approx(
            8 * bump_eval(spec, 8 * 0.05), rel=1e-12
        )
        assert f.eval(0.3) == 0.0

    def test_derivative_term_matches_finite_difference(self):
        m = 3
        base = mollify(delta(0), m)
        deriv = mollify(delta(0, order=1), m)
        h = 1e-6
        for x in (-0.15, 0.02, 0.2):
            fd = (base.eval(x + h) - base.eval(x - h)) / (2 * h)
            assert deriv.eval(x).real == pytest.approx(
                fd.real, rel=1e-5, abs=1e-4
            )

    def test_mass_is_one(self):
        for m in (1, 2, 5):
            f = mollify(delta(0), m)
            lo, hi = f.support()
            mass = integrate(
                lambda x: f.eval(x).real, float(lo), float(hi), tol=1e-12
            )
            assert mass == pytest.approx(1.0, abs=1e-10)

    def test_support_law(self):
        t = add(delta(Fraction(-1, 4)), delta(Fraction(1, 2), order=1))
        m = 4
        f = mollify(t, m)
        lo, hi = f.support()
        hull = support_hull(t)
        assert lo == hull[0] - Fraction(1, m)
        assert hi == hull[1] + Fraction(1, m)
        # the evaluation really vanishes at and beyond the edges
        assert f.eval(float(lo)) == 0.0
        assert f.eval(float(hi) + 0.01) == 0.0

    def test_weak_convergence_to_source(self):
        # <T * phi_m, psi> -> <T, psi> as m grows
        t = add(delta(Fraction(1, 4), coeff=2.0), delta(0, order=1))
        psi = bump_member(2)
        want = pair(t, psi)
        errs = []
        for m in (2, 4, 8, 16):
            f = mollify(t, m)
            lo, hi = f.support()
            got = integrate(
                lambda x: (f.eval(x) * psi(x)).real,
                float(lo),
                float(hi),
                breakpoints=[float(b) for b in f.breakpoints()],
                tol=1e-12,
            )
            errs.append(abs(got - want.real))
        assert errs[-1] < errs[0] / 4
        assert errs[-1] < 0.05

    def test_zero_distribution(self):
        f = mollify(zero_distribution(MODE_FLOAT), 3)
        assert f.support() is None
        assert f.eval(0.0) == 0

    def test_bad_index_rejected(self):
        with pytest.raises(InputError):
            mollify(delta(0), 0)


class TestMinMollifierIndex:
    def test_quarter_support_inside_unit_window(self):
        t = delta(Fraction(-1, 4), coeff=3.0)
        assert min_mollifier_index(t, 1) == 2

    def test_wider_bump_needs_larger_index(self):
        t = delta(Fraction(-1, 4))
        assert min_mollifier_index(t, 1, spec=bump_spec(3)) == 4

    def test_zero_distribution_gives_one(self):
        assert min_mollifier_index(zero_distribution(MODE_FLOAT), 1) == 1

    def test_support_touching_window_rejected(self):
        with pytest.raises(SupportError):
            min_mollifier_index(delta(1), 1)
        with pytest.raises(SupportError):
            min_mollifier_index(delta(2), 1)

    def test_bad_window_rejected(self):
        with pytest.raises(InputError):
            min_mollifier_index(delta(0), 0)


class TestRiemannComb:
    def test_comb_sits_on_the_grid(self):
        f = mollify(delta(0), 2)
        comb = riemann_comb(f, 1, 16)
        assert comb.n == 16
        d = comb_to_distribution(comb)
        for t in d.terms:
            assert t.loc.denominator in (1, 2, 4, 8, 16)
            assert Fraction(-1) <= t.loc < Fraction(1)

    def test_total_mass_approximates_integral(self):
        f = mollify(delta(0), 2)
        comb = riemann_comb(f, 1, 256)
        total = sum(
            complex(t.coeff) for t in comb_to_distribution(comb).terms
        )
        assert total.real == pytest.approx(1.0, abs=0.02)

    def test_pairing_equals_left_riemann_sum(self):
        f = mollify(delta(Fraction(1, 4)), 2)
        psi = bump_member(1)
        k, n = 1, 32
        comb = riemann_comb(f, k, n)
        width = 2 * k / n
        want = sum(
            width * f.eval(-k + width * l) * psi(-k + width * l)
            for l in range(n)
        )
        got = pair(comb_to_distribution(comb), psi)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_support_violation_rejected(self):
        f = mollify(delta(Fraction(9, 10)), 2)  # support up to 1.4
        with pytest.raises(SupportError):
            riemann_comb(f, 1, 8)

    def test_bad_panel_count(self):
        f = mollify(delta(0), 2)
        with pytest.raises(InputError):
            riemann_comb(f, 1, 0)


class TestCombSequence:
    def test_default_schedule_shape(self):
        t = delta(Fraction(-1, 4), coeff=3.0)
        sched = default_schedule(t, 1)
        assert sched == [(2, 8), (4, 32), (8, 128), (16, 512)]
        assert default_schedule(t, 1, steps=2) == [(2, 8), (4, 32)]

    def test_weak_errors_decrease_along_schedule(self, battery):
        t = add(delta(Fraction(1, 2), order=1), delta(Fraction(-1, 4), coeff=3.0))
        out = comb_sequence(t, 1, default_schedule(t, 1, steps=3), battery=battery)
        weaks = [diag.max_weak for _, diag in out]
        assert all(a > b for a, b in zip(weaks, weaks[1:]))
        # geometric refinement should at least halve-ish the error per step
        assert weaks[-1] < 0.75 * weaks[-2]

    def test_error_split_is_consistent(self, battery):
        t = delta(Fraction(1, 4), coeff=2.0)
        out = comb_sequence(t, 1, [(2, 16), (4, 64)], battery=battery)
        for comb, diag in out:
            for i, weak, moll, riem in diag.rows:
                assert weak <= moll + riem + 1e-9
            assert diag.max_weak == max(r[1] for r in diag.rows)

    def test_comb_matches_direct_sampling(self, battery):
        t = delta(0)
        ((comb, _),) = comb_sequence(t, 1, [(2, 32)], battery=battery)
        f = mollify(t, 2)
        direct = riemann_comb(f, 1, 32)
        assert comb == direct

    def test_schedule_below_floor_rejected(self, battery):
        t = delta(Fraction(-1, 4), coeff=3.0)  # floor m = 2
        with pytest.raises(SupportError):
            comb_sequence(t, 1, [(1, 8)], battery=battery)

    def test_empty_schedule_gives_empty_output(self, battery):
        assert comb_sequence(delta(0), 1, [], battery=battery) == []

    def test_empty_battery_rejected(self):
        with pytest.raises(InputError):
            comb_sequence(delta(0), 1, [(1, 8)], battery=[])
