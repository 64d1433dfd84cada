"""Canonical point-supported distributions and their convolution algebra.

A distribution here is a finite sum of terms c * delta_a^(r): a point mass of
derivative order r at rational location a with scalar coefficient c.  The
canonical form is sorted by (location, order), merged, and zero-free; the
zero distribution has no terms.  Convolution acts on terms by
delta_a^(r) * delta_b^(s) = delta_{a+b}^(r+s) and extends bilinearly;
delta_0 is the multiplicative identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ModeMismatchError, OrderCapError, SupportError
from .scalars import (
    MODE_EXACT,
    FLOAT_TOL,
    check_mode,
    coerce_scalar,
    scalar_is_zero,
    scalar_one,
    scalar_to_complex,
    ExactComplex,
)

__all__ = [
    "RationalPoint",
    "PointTerm",
    "Distribution",
    "DiracComb",
    "NotInvertible",
    "canonicalize",
    "dirac",
    "zero_distribution",
    "identity_distribution",
    "add",
    "scale",
    "convolve",
    "pair",
    "support_hull",
    "invert",
    "weak_distance",
    "distributions_close",
    "max_order",
    "comb_make",
    "comb_to_distribution",
    "comb_from_distribution",
    "comb_coeff_map",
]

# Grid points and term locations are exact rationals, never floats.
RationalPoint = Fraction


@dataclass(frozen=True)
class PointTerm:
    """One term c * delta_loc^(order); coeff is nonzero in canonical form."""

    loc: Fraction
    order: int
    coeff: object

    def __post_init__(self):
        if not isinstance(self.loc, Fraction):
            object.__setattr__(self, "loc", Fraction(self.loc))
        if self.order < 0:
            raise InputError(f"negative derivative order {self.order}")


@dataclass(frozen=True)
class Distribution:
    """Canonical finite sum of point terms; construct via canonicalize()."""

    mode: str
    terms: tuple

    @property
    def is_zero(self):
        return not self.terms


@dataclass(frozen=True)
class NotInvertible:
    """Returned by invert() when no inverse exists; a value, not an error."""

    reason: str


@dataclass(frozen=True)
class DiracComb:
    """Order-0 distribution on the grid (1/n)Z: index j holds the mass at j/n."""

    mode: str
    n: int
    coeffs: tuple  # sorted tuple of (index, scalar) pairs, zero-free

    @property
    def is_zero(self):
        return not self.coeffs

    def support_indices(self):
        return tuple(j for j, _ in self.coeffs)


def canonicalize(terms, mode):
    """Sort, merge, and drop zero coefficients; idempotent.

    INPUT: iterable of (loc, order, coeff) triples or PointTerm; scalar mode.
    OUTPUT: Distribution in canonical form.
    """
    check_mode(mode)
    merged = {}
    for t in terms:
        if isinstance(t, PointTerm):
            loc, order, coeff = t.loc, t.order, t.coeff
        else:
            loc, order, coeff = t
        loc = Fraction(loc)
        order = int(order)
        if order < 0:
            raise InputError(f"negative derivative order {order}")
        coeff = coerce_scalar(coeff, mode)
        key = (loc, order)
        if key in merged:
            merged[key] = merged[key] + coeff
        else:
            merged[key] = coeff
    out = tuple(
        PointTerm(loc, order, coeff)
        for (loc, order), coeff in sorted(merged.items())
        if not scalar_is_zero(coeff, mode)
    )
    return Distribution(mode, out)


def dirac(loc=0, order=0, coeff=1, mode=MODE_EXACT):
    """Single-term builder: coeff * delta_loc^(order)."""
    return canonicalize([(Fraction(loc), order, coeff)], mode)


def zero_distribution(mode=MODE_EXACT):
    return Distribution(check_mode(mode), ())


def identity_distribution(mode=MODE_EXACT):
    return dirac(0, 0, scalar_one(mode), mode)


def _check_same_mode(d1, d2):
    if d1.mode != d2.mode:
        raise ModeMismatchError(f"mixed scalar modes {d1.mode!r} and {d2.mode!r}")


def add(d1, d2):
    """Canonical sum; commutative and associative."""
    _check_same_mode(d1, d2)
    return canonicalize(list(d1.terms) + list(d2.terms), d1.mode)


def scale(c, d):
    """Canonical scalar multiple; scale(0, D) is the zero distribution."""
    c = coerce_scalar(c, d.mode)
    return canonicalize([(t.loc, t.order, c * t.coeff) for t in d.terms], d.mode)


def convolve(d1, d2):
    """Convolution product: bilinear extension of the term rule.

    delta_a^(r) * delta_b^(s) = delta_{a+b}^(r+s); delta_0 is the identity.
    """
    _check_same_mode(d1, d2)
    out = []
    for t1 in d1.terms:
        for t2 in d2.terms:
            out.append((t1.loc + t2.loc, t1.order + t2.order, t1.coeff * t2.coeff))
    return canonicalize(out, d1.mode)


def max_order(d):
    """Largest derivative order appearing in d (0 for the zero distribution)."""
    return max((t.order for t in d.terms), default=0)


def pair(d, psi):
    """Apply d to a test function: sum of c * (-1)^r * psi^(r)(a).

    The test function is evaluated in floats, so the pairing is a complex
    float in both modes.  psi must support .eval_deriv(x, r) up to the
    largest order in d (OrderCapError otherwise, raised by psi).
    """
    acc = 0j
    for t in d.terms:
        c = scalar_to_complex(t.coeff)
        val = psi.eval_deriv(float(t.loc), t.order)
        acc += c * ((-1) ** t.order) * val
    return acc


def support_hull(d):
    """Closed convex hull [min location, max location] or None for zero."""
    if d.is_zero:
        return None
    locs = [t.loc for t in d.terms]
    return (min(locs), max(locs))


def invert(d):
    """Inverse under convolution, when one exists.

    Returns c^{-1} * delta_{-a} iff d = c * delta_a (a single term of order
    0 with nonzero coefficient); otherwise a NotInvertible value.  When an
    inverse is returned, convolve(d, inverse) = delta_0 (exactly in exact
    mode).
    """
    if d.is_zero:
        return NotInvertible("zero distribution")
    if len(d.terms) > 1:
        return NotInvertible(
            "support has more than one point: convolving with any nonzero "
            "distribution widens the support hull, so the product is never "
            "the single point mass delta_0"
        )
    t = d.terms[0]
    if t.order > 0:
        return NotInvertible(
            "derivative order is positive: orders add under convolution, so "
            "the product always has a term of positive order and cannot be "
            "delta_0"
        )
    if d.mode == MODE_EXACT:
        inv = ExactComplex(1, 0) / t.coeff
    else:
        inv = 1.0 / t.coeff
    return canonicalize([(-t.loc, 0, inv)], d.mode)


def weak_distance(d1, d2, battery):
    """Max over the battery of |pair(d1 - d2, psi)|."""
    battery = list(battery)
    if not battery:
        raise InputError("empty test-function battery")
    _check_same_mode(d1, d2)
    diff = add(d1, scale(-1, d2))
    return max(abs(pair(diff, psi)) for psi in battery)


def distributions_close(d1, d2, tol=FLOAT_TOL):
    """Float-mode equality: align (location, order) keys, compare within tol.

    A key missing on one side is treated as coefficient zero.  Exact-mode
    inputs compare structurally (tol ignored).
    """
    _check_same_mode(d1, d2)
    if d1.mode == MODE_EXACT:
        return d1.terms == d2.terms
    m1 = {(t.loc, t.order): t.coeff for t in d1.terms}
    m2 = {(t.loc, t.order): t.coeff for t in d2.terms}
    for key in m1.keys() | m2.keys():
        if abs(m1.get(key, 0j) - m2.get(key, 0j)) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Dirac combs


def comb_make(mapping, n, mode):
    """Build a DiracComb from {index: coeff}; zero coefficients are dropped."""
    check_mode(mode)
    n = int(n)
    if n < 1:
        raise InputError(f"comb denominator must be positive, got {n}")
    items = []
    for j, c in mapping.items():
        c = coerce_scalar(c, mode)
        if not scalar_is_zero(c, mode):
            items.append((int(j), c))
    items.sort(key=lambda jc: jc[0])
    return DiracComb(mode, n, tuple(items))


def comb_coeff_map(comb):
    return dict(comb.coeffs)


def comb_to_distribution(comb):
    """View a comb as a canonical Distribution (order-0 terms at j/n)."""
    return canonicalize(
        [(Fraction(j, comb.n), 0, c) for j, c in comb.coeffs], comb.mode
    )


def comb_from_distribution(d, n=None):
    """Interpret a distribution as a comb on the (1/n)Z grid.

    INPUT: order-0 distribution with rational locations; optional denominator
    n (default: least common denominator of the locations).
    OUTPUT: DiracComb.  Raises SupportError for positive orders or locations
    off the grid.
    """
    for t in d.terms:
        if t.order > 0:
            raise SupportError(
                f"term at {t.loc} has order {t.order}; combs carry order 0 only"
            )
    if n is None:
        n = 1
        for t in d.terms:
            n = math.lcm(n, t.loc.denominator)
    n = int(n)
    if n < 1:
        raise InputError(f"comb denominator must be positive, got {n}")
    mapping = {}
    for t in d.terms:
        idx = t.loc * n
        if idx.denominator != 1:
            raise SupportError(f"location {t.loc} is not on the 1/{n} grid")
        mapping[int(idx)] = t.coeff
    return comb_make(mapping, n, d.mode)
