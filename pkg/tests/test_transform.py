"""Fourier-Laplace evaluation, growth certificates, and grid diagnostics."""

import cmath
import math
import random

import pytest

from deltacomb.distributions import (
    add,
    convolve,
    dirac,
    identity_distribution,
    scale,
    zero_distribution,
)
from deltacomb.errors import InputError
from deltacomb.scalars import MODE_FLOAT
from deltacomb.transform import (
    DEFAULT_CERT_GRID,
    GridSpec,
    PWCertificate,
    coprime_certificate_grid,
    fl_eval,
    fl_eval_scaled,
    grid_points,
    min_modulus_grid,
    pw_constants,
    refine_min_modulus,
    validate_certificate,
)


def witness():
    """(delta_{-1} - delta_1) / (2i), whose transform is sin(2 pi z)."""
    return scale(
        1 / 2j,
        add(
            dirac(-1, 0, 1.0, MODE_FLOAT),
            dirac(1, 0, -1.0, MODE_FLOAT),
        ),
    )


class TestFlEval:
    def test_identity_transforms_to_one(self):
        assert fl_eval(identity_distribution(MODE_FLOAT), 1.3 - 0.4j) == 1

    def test_point_mass_is_exponential(self):
        d = dirac(3, 0, 2.0, MODE_FLOAT)
        for z in (0.2, -1j, 0.7 + 0.3j):
            want = 2 * cmath.exp(-2j * math.pi * 3 * z)
            assert fl_eval(d, z) == pytest.approx(want, rel=1e-12)

    def test_derivative_gives_polynomial_factor(self):
        d = dirac(0, 1, 1.0, MODE_FLOAT)
        for z in (0.5, 1 + 1j):
            assert fl_eval(d, z) == pytest.approx(
                2j * math.pi * z, rel=1e-13
            )

    def test_witness_is_sine(self):
        t = witness()
        rng = random.Random(5)
        for _ in range(50):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            want = cmath.sin(2 * math.pi * z)
            got = fl_eval(t, z)
            assert abs(got - want) <= 1e-10 * max(1.0, abs(want))

    def test_multiplicativity(self):
        t = add(
            dirac("1/2", 1, 1.0, MODE_FLOAT),
            dirac("-1/4", 0, 3.0, MODE_FLOAT),
        )
        s = add(dirac(0, 0, 2.0, MODE_FLOAT), dirac(1, 2, -0.5j, MODE_FLOAT))
        prod = convolve(t, s)
        rng = random.Random(9)
        for _ in range(25):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            lhs = fl_eval(prod, z)
            rhs = fl_eval(t, z) * fl_eval(s, z)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

    def test_conjugate_symmetry_for_real_data(self):
        # real coefficients and locations give T-hat(-conj z) = conj(T-hat(z))
        d = add(
            dirac("1/2", 0, 2.0, MODE_FLOAT), dirac(-1, 1, -3.0, MODE_FLOAT)
        )
        for z in (0.3 + 0.8j, -1.1 - 0.2j):
            assert fl_eval(d, -z.conjugate()) == pytest.approx(
                fl_eval(d, z).conjugate(), rel=1e-12
            )

    def test_scaled_evaluation_avoids_overflow(self):
        d = dirac(3, 0, 2.0, MODE_FLOAT)
        mantissa, log_scale = fl_eval_scaled(d, 100j)
        assert mantissa == pytest.approx(2 + 0j)
        assert log_scale == pytest.approx(600 * math.pi, rel=1e-14)
        # log |T-hat| reconstructed from the pair
        got_log = math.log(abs(mantissa)) + log_scale
        assert got_log == pytest.approx(math.log(2) + 600 * math.pi, rel=1e-12)

    def test_scaled_matches_plain_at_moderate_points(self):
        d = witness()
        for z in (0.4 - 0.9j, 1.2 + 0.3j):
            mantissa, log_scale = fl_eval_scaled(d, z)
            assert mantissa * math.exp(log_scale) == pytest.approx(
                fl_eval(d, z), rel=1e-12
            )


class TestPWConstants:
    def test_point_mass(self):
        cert = pw_constants(dirac(3, 0, 2.0, MODE_FLOAT))
        assert cert == PWCertificate(C=2.0, M=0, R=6 * math.pi)

    def test_derivative_point_mass(self):
        cert = pw_constants(dirac(0, 1, 1.0, MODE_FLOAT))
        assert cert.C == pytest.approx(2 * math.pi)
        assert cert.M == 1
        assert cert.R == 0.0

    def test_sum_of_terms(self):
        d = add(
            dirac("1/2", 1, 1.0, MODE_FLOAT),
            dirac("-1/4", 0, 3.0, MODE_FLOAT),
        )
        cert = pw_constants(d)
        assert cert.C == pytest.approx(2 * math.pi + 3)
        assert cert.M == 1
        assert cert.R == pytest.approx(2 * math.pi * 0.5)

    def test_zero_rejected(self):
        with pytest.raises(InputError):
            pw_constants(zero_distribution(MODE_FLOAT))


class TestValidateCertificate:
    @pytest.mark.parametrize(
        "d",
        [
            dirac(3, 0, 2.0, MODE_FLOAT),
            dirac(0, 1, 1.0, MODE_FLOAT),
            witness(),
            add(dirac("1/2", 1, 1.0, MODE_FLOAT), dirac("-1/4", 0, 3.0, MODE_FLOAT)),
        ],
    )
    def test_own_certificate_never_violates(self, d):
        violations, max_ratio, _ = validate_certificate(
            d, pw_constants(d), DEFAULT_CERT_GRID
        )
        assert violations == 0
        assert max_ratio <= 1.0 + 1e-12

    def test_understated_constant_is_caught(self):
        d = dirac(3, 0, 2.0, MODE_FLOAT)
        cert = pw_constants(d)
        bad = PWCertificate(C=cert.C / 10, M=cert.M, R=cert.R)
        violations, max_ratio, worst = validate_certificate(
            d, bad, DEFAULT_CERT_GRID
        )
        assert violations > 0
        assert max_ratio > 1.0
        assert worst is not None

    def test_understated_radius_is_caught(self):
        d = dirac(3, 0, 2.0, MODE_FLOAT)
        cert = pw_constants(d)
        bad = PWCertificate(C=cert.C, M=cert.M, R=cert.R / 2)
        violations, _, _ = validate_certificate(d, bad, DEFAULT_CERT_GRID)
        assert violations > 0


class TestGrids:
    def test_grid_point_count_and_order(self):
        g = GridSpec(0j, 1.0, 3)
        pts = grid_points(g)
        assert len(pts) == 9
        assert pts[0] == -1 - 1j
        # x varies in the outer loop, y in the inner one
        assert pts[1] == -1 + 0j and pts[3] == 0 - 1j

    def test_grid_validation(self):
        with pytest.raises(InputError):
            GridSpec(0j, 0.0, 5)
        with pytest.raises(InputError):
            GridSpec(0j, 1.0, 1)

    def test_spacing(self):
        g = GridSpec(1j, 2.0, 5)
        assert g.spacing == pytest.approx(1.0)


class TestMinModulus:
    def test_exponential_minimum_on_square(self):
        d = dirac(3, 0, 2.0, MODE_FLOAT)
        value, arg = min_modulus_grid(d, GridSpec(0j, 1.0, 41))
        # |2 exp(-6 pi i z)| = 2 exp(6 pi Im z), minimal on the bottom edge
        assert value == pytest.approx(2 * math.exp(-6 * math.pi), rel=1e-9)
        assert arg.imag == pytest.approx(-1.0)

    def test_constant_ties_break_to_first_point(self):
        d = identity_distribution(MODE_FLOAT)
        g = GridSpec(0j, 1.0, 11)
        value, arg = min_modulus_grid(d, g)
        assert value == 1.0
        assert arg == grid_points(g)[0]

    def test_witness_minimum_sits_near_a_sine_zero(self):
        t = witness()
        g = GridSpec(0j, 1.0, 201)
        value, arg = min_modulus_grid(t, g)
        assert value < 1e-2
        zeros = (-1.0, -0.5, 0.0, 0.5, 1.0)
        assert min(abs(arg - z) for z in zeros) < 0.05

    def test_refinement_does_not_increase_the_minimum(self):
        t = witness()
        g = GridSpec(0.5 + 0j, 0.25, 21)
        coarse, _ = min_modulus_grid(t, g)
        fine, arg = refine_min_modulus(t, g)
        assert fine <= coarse
        assert abs(arg - 0.5) < 0.05

    def test_two_refinement_levels_tighten_further(self):
        t = witness()
        g = GridSpec(0.5 + 0j, 0.25, 21)
        one, _ = refine_min_modulus(t, g, levels=1)
        two, _ = refine_min_modulus(t, g, levels=2)
        assert two <= one


class TestCoprimeMargin:
    def test_identity_keeps_margin_above_one(self):
        d1 = identity_distribution(MODE_FLOAT)
        d2 = dirac(3, 0, 2.0, MODE_FLOAT)
        margin, _ = coprime_certificate_grid(d1, d2, GridSpec(0j, 1.0, 21))
        assert margin >= 1.0 - 1e-12

    def test_common_zero_drives_margin_down(self):
        t = witness()  # sin(2 pi z): zero at 1/2
        margin, arg = coprime_certificate_grid(t, t, GridSpec(0j, 1.0, 201))
        assert margin < 2e-2
