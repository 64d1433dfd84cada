"""Transform-side evaluation and diagnostics on complex grids.

The transform of a point distribution is the entire function
T^(z) = sum_j c_j * (2*pi*i*z)^(r_j) * exp(-2*pi*i*a_j*z); convolution maps
to pointwise product.  This module evaluates it (with a scaled variant that
stays finite when exponents grow), derives growth certificates
|T^(z)| <= C*(1+|z|)^M * e^(R|z|), and scans square grids for minimum
modulus and pointwise coprimality margins.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import InputError
from .scalars import scalar_to_complex
from .distributions import Distribution, max_order

__all__ = [
    "GridSpec",
    "PWCertificate",
    "grid_points",
    "fl_eval",
    "fl_eval_scaled",
    "pw_constants",
    "validate_certificate",
    "min_modulus_grid",
    "refine_min_modulus",
    "coprime_certificate_grid",
    "DEFAULT_CERT_GRID",
]

# Relative slop allowed when comparing float evaluations against the bound.
_COMPARE_SLOP = 1e-12
_POWER_CAP = 64


@dataclass(frozen=True)
class GridSpec:
    """Square grid of resolution^2 points circumscribing a centered disk."""

    center: complex
    radius: float
    resolution: int

    def __post_init__(self):
        if self.radius <= 0:
            raise InputError(f"grid radius must be positive, got {self.radius}")
        if self.resolution < 2:
            raise InputError(
                f"grid resolution must be at least 2, got {self.resolution}"
            )

    @property
    def spacing(self):
        return 2.0 * self.radius / (self.resolution - 1)


DEFAULT_CERT_GRID = GridSpec(0j, 4.0, 41)


def grid_points(grid):
    """Grid points in deterministic lexicographic order (x outer, y inner)."""
    cx, cy = grid.center.real, grid.center.imag
    res = grid.resolution
    step = grid.spacing
    pts = []
    for i in range(res):
        x = cx - grid.radius + i * step
        for j in range(res):
            y = cy - grid.radius + j * step
            pts.append(complex(x, y))
    return pts


def _int_power(base, r):
    acc = 1 + 0j
    for _ in range(r):
        acc *= base
    return acc


def fl_eval_scaled(D, z):
    """Transform value as (mantissa, log_scale) with value = mantissa * e^log_scale.

    The common factor e^log_scale absorbs the largest exponential growth
    among the terms, so the mantissa stays finite for any support.
    """
    z = complex(z)
    if not D.terms:
        return 0j, 0.0
    exponents = [2.0 * math.pi * float(t.loc) * z.imag for t in D.terms]
    log_scale = max(exponents)
    two_pi_iz = 2j * math.pi * z
    acc = 0j
    for t, ex in zip(D.terms, exponents):
        if t.order > _POWER_CAP:
            raise InputError(f"derivative order {t.order} above power cap {_POWER_CAP}")
        c = scalar_to_complex(t.coeff)
        phase = -2.0 * math.pi * float(t.loc) * z.real
        mag = math.exp(ex - log_scale)
        acc += c * _int_power(two_pi_iz, t.order) * mag * cmath.exp(1j * phase)
    return acc, log_scale


def fl_eval(D, z):
    """Transform value at z (entire in z, linear in D; delta_0 maps to 1)."""
    mantissa, log_scale = fl_eval_scaled(D, z)
    if mantissa == 0:
        return 0j
    return mantissa * math.exp(log_scale)


@dataclass(frozen=True)
class PWCertificate:
    """Growth certificate: |T^(z)| <= C * (1+|z|)^M * e^(R|z|)."""

    C: float
    M: int
    R: float


def pw_constants(D):
    """Certificate constants from the term data.

    C = sum |c_j| (2*pi)^(r_j), M = max r_j, R = 2*pi*max|a_j|: each term is
    bounded by |c|(2*pi|z|)^r e^(2*pi|a||z|) and the triangle inequality sums
    them.  Requires a nonzero distribution.
    """
    if D.is_zero:
        raise InputError("no growth certificate for the zero distribution")
    C = 0.0
    R = 0.0
    for t in D.terms:
        C += abs(scalar_to_complex(t.coeff)) * (2.0 * math.pi) ** t.order
        R = max(R, 2.0 * math.pi * abs(float(t.loc)))
    return PWCertificate(C=C, M=max_order(D), R=R)


def validate_certificate(D, cert, grid=DEFAULT_CERT_GRID):
    """Check the certificate at every grid point, in log space.

    OUTPUT: (violations, max_ratio, worst_z): violations counts points where
    |T^(z)| exceeds the bound beyond a relative comparison slop of 1e-12;
    max_ratio is the largest |T^(z)| / bound encountered (slack report).
    """
    violations = 0
    max_ratio = 0.0
    worst = None
    log_slop = math.log1p(_COMPARE_SLOP)
    for z in grid_points(grid):
        mantissa, log_scale = fl_eval_scaled(D, z)
        az = abs(z)
        log_bound = math.log(cert.C) + cert.M * math.log1p(az) + cert.R * az
        if mantissa == 0:
            continue
        log_val = math.log(abs(mantissa)) + log_scale
        ratio = math.exp(min(log_val - log_bound, 700.0))
        if ratio > max_ratio:
            max_ratio = ratio
            worst = z
        if log_val > log_bound + log_slop:
            violations += 1
    return violations, max_ratio, worst


def min_modulus_grid(D, grid):
    """Exact minimum of |T^| over the grid points (never the continuum).

    Ties break to the earliest point in lexicographic grid order.
    """
    best = math.inf
    arg = None
    for z in grid_points(grid):
        mantissa, log_scale = fl_eval_scaled(D, z)
        value = abs(mantissa) * math.exp(log_scale) if mantissa != 0 else 0.0
        if value < best:
            best = value
            arg = z
    return best, arg


def refine_min_modulus(D, grid, levels=1):
    """Grid minimum plus local refinement around the argmin.

    Each level re-scans a square of radius one grid spacing centered at the
    current argmin with resolution 9 (spacing shrinks fourfold per level).
    """
    best, arg = min_modulus_grid(D, grid)
    spacing = grid.spacing
    for _ in range(int(levels)):
        local = GridSpec(arg, spacing, 9)
        cand, cand_arg = min_modulus_grid(D, local)
        if cand < best:
            best, arg = cand, cand_arg
        spacing = local.spacing
    return best, arg


def coprime_certificate_grid(D1, D2, grid):
    """Minimum of |T1^(z)| + |T2^(z)| over the grid, with the argmin.

    A margin bounded away from zero is evidence (not proof) that the pair
    has no common zero in the scanned region.
    """
    best = math.inf
    arg = None
    for z in grid_points(grid):
        m1, s1 = fl_eval_scaled(D1, z)
        m2, s2 = fl_eval_scaled(D2, z)
        v1 = abs(m1) * math.exp(s1) if m1 != 0 else 0.0
        v2 = abs(m2) * math.exp(s2) if m2 != 0 else 0.0
        value = v1 + v2
        if value < best:
            best = value
            arg = z
    return best, arg
