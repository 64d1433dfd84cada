"""Smooth compactly supported test functions for weak pairings.

Every battery member has the shape psi(x) = w(x) * B(x) with B a shifted and
scaled normalized bump, B(x) = phi(scale * (x - center)), and w either the
constant 1, a polynomial, or a sinusoid cos(omega*x + phase).  Derivatives
come from the Leibniz rule on top of the exact bump recurrence, so pairings
with point distributions are closed form to the order cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError
from .bump import BumpSpec, bump_eval, bump_spec

__all__ = ["TestFunction", "bump_member", "shifted_member", "poly_member", "trig_member", "default_battery"]

FAMILY_BUMP = "bump"
FAMILY_SHIFTED = "shifted-scaled"
FAMILY_POLY = "polynomial-bump"
FAMILY_TRIG = "trig-bump"


@dataclass(frozen=True)
class TestFunction:
    """One battery member psi(x) = w(x) * phi(scale*(x - center))."""

    family: str
    spec: BumpSpec
    center: float
    scale: float
    poly: tuple  # weight polynomial coefficients, low to high; () means w = 1
    omega: float
    phase: float

    def support(self):
        half = float(self.spec.a) / self.scale
        return (self.center - half, self.center + half)

    def _weight_deriv(self, x, j):
        if self.family in (FAMILY_BUMP, FAMILY_SHIFTED):
            return 1.0 if j == 0 else 0.0
        if self.family == FAMILY_POLY:
            acc = 0.0
            for i in range(len(self.poly) - 1, j - 1, -1):
                acc = acc * x + self.poly[i] * math.perm(i, j)
            return acc
        if self.family == FAMILY_TRIG:
            return self.omega**j * math.cos(self.omega * x + self.phase + j * math.pi / 2.0)
        raise InputError(f"unknown test-function family {self.family!r}")

    def eval_deriv(self, x, r=0):
        """psi^(r)(x) by the Leibniz rule (OrderCapError above the bump cap)."""
        x = float(x)
        if self.family in (FAMILY_BUMP, FAMILY_SHIFTED):
            return self.scale**r * bump_eval(self.spec, self.scale * (x - self.center), r)
        acc = 0.0
        for j in range(r + 1):
            w = self._weight_deriv(x, j)
            if w == 0.0:
                continue
            b = self.scale ** (r - j) * bump_eval(
                self.spec, self.scale * (x - self.center), r - j
            )
            acc += math.comb(r, j) * w * b
        return acc

    def __call__(self, x):
        return self.eval_deriv(x, 0)

    def sup_abs(self, lo, hi, samples=4097, extra_points=()):
        """Max |psi| over a dense sample of [lo, hi] plus given extra points.

        A sampled supremum never exceeds the true one, so bounds asserted
        against it are conservative; pass the exact evaluation points of a
        pairing as extra_points when those must be covered.
        """
        lo, hi = float(lo), float(hi)
        slo, shi = self.support()
        a, b = max(lo, slo), min(hi, shi)
        best = 0.0
        if a < b:
            step = (b - a) / (samples - 1)
            for i in range(samples):
                best = max(best, abs(self.eval_deriv(a + i * step, 0)))
        for x in extra_points:
            x = float(x)
            if lo <= x <= hi:
                best = max(best, abs(self.eval_deriv(x, 0)))
        return best


def bump_member(a=1):
    return TestFunction(FAMILY_BUMP, bump_spec(a), 0.0, 1.0, (), 0.0, 0.0)


def shifted_member(center, scale, a=1):
    if scale <= 0:
        raise InputError(f"scale must be positive, got {scale}")
    return TestFunction(FAMILY_SHIFTED, bump_spec(a), float(center), float(scale), (), 0.0, 0.0)


def poly_member(coeffs, a=1, center=0.0, scale=1.0):
    coeffs = tuple(float(c) for c in coeffs)
    if not coeffs:
        raise InputError("empty weight polynomial")
    return TestFunction(FAMILY_POLY, bump_spec(a), float(center), float(scale), coeffs, 0.0, 0.0)


def trig_member(omega, phase=0.0, a=1, center=0.0, scale=1.0):
    return TestFunction(FAMILY_TRIG, bump_spec(a), float(center), float(scale), (), float(omega), float(phase))


def default_battery():
    """Twelve members spanning the four families; all supports contain 0."""
    return [
        bump_member(1),
        bump_member(2),
        bump_member(3),
        shifted_member(0.3, 0.5, 1),
        shifted_member(-0.4, 0.25, 1),
        shifted_member(0.1, 1.0 / 3.0, 1),
        poly_member((0.0, 1.0), a=2),
        poly_member((1.0, 0.0, -0.25), a=2),
        poly_member((0.5, -1.0, 0.0, 2.0), a=3),
        trig_member(math.pi, 0.0, a=2),
        trig_member(2.0, math.pi / 3.0, a=3),
        trig_member(1.0, math.pi / 2.0, a=1),
    ]
