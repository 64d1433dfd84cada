"""Sparse Laurent polynomials and the grid-comb correspondence.

A LaurentPoly is a finite map from integer exponents to scalar coefficients
(canonical: no zero coefficients; the zero polynomial is the empty map).
The map phi sends the monomial z^j to the point mass at j/n, turning
polynomial multiplication into convolution; phi_inverse recovers the
polynomial from an order-0 grid comb.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, ModeMismatchError, SupportError
from .scalars import (
    check_mode,
    coerce_scalar,
    scalar_is_zero,
    scalar_to_complex,
)
from .distributions import DiracComb, comb_make

__all__ = [
    "LaurentPoly",
    "lp_make",
    "lp_zero",
    "lp_one",
    "lp_from_coeffs",
    "lp_coeff_map",
    "lp_add",
    "lp_sub",
    "lp_mul",
    "lp_scale",
    "lp_shift",
    "lp_eval",
    "lp_degree",
    "lp_valuation",
    "lp_to_dense",
    "lp_to_float",
    "phi",
    "phi_inverse",
    "comb_to_centered_poly",
]


@dataclass(frozen=True)
class LaurentPoly:
    """Canonical sparse polynomial in z and 1/z; construct via lp_make()."""

    mode: str
    coeffs: tuple  # sorted tuple of (exponent, scalar) pairs, zero-free

    @property
    def is_zero(self):
        return not self.coeffs


def lp_make(mapping, mode):
    """Build a LaurentPoly from {exponent: coeff}, dropping zeros."""
    check_mode(mode)
    items = []
    for e, c in mapping.items():
        c = coerce_scalar(c, mode)
        if not scalar_is_zero(c, mode):
            items.append((int(e), c))
    items.sort(key=lambda ec: ec[0])
    return LaurentPoly(mode, tuple(items))


def lp_zero(mode):
    return lp_make({}, mode)


def lp_one(mode):
    return lp_make({0: 1}, mode)


def lp_from_coeffs(coeffs, mode, start=0):
    """Dense constructor: coeffs[i] is the coefficient of z^(start+i)."""
    return lp_make({start + i: c for i, c in enumerate(coeffs)}, mode)


def lp_coeff_map(p):
    return dict(p.coeffs)


def _check_same_mode(p, q):
    if p.mode != q.mode:
        raise ModeMismatchError(f"mixed scalar modes {p.mode!r} and {q.mode!r}")


def lp_add(p, q):
    _check_same_mode(p, q)
    out = dict(p.coeffs)
    for e, c in q.coeffs:
        out[e] = out[e] + c if e in out else c
    return lp_make(out, p.mode)


def lp_sub(p, q):
    return lp_add(p, lp_scale(-1, q))


def lp_mul(p, q):
    _check_same_mode(p, q)
    out = {}
    for e1, c1 in p.coeffs:
        for e2, c2 in q.coeffs:
            e = e1 + e2
            v = c1 * c2
            out[e] = out[e] + v if e in out else v
    return lp_make(out, p.mode)


def lp_scale(c, p):
    c = coerce_scalar(c, p.mode)
    return lp_make({e: c * v for e, v in p.coeffs}, p.mode)


def lp_shift(p, s):
    """Multiply by z^s (shift every exponent by the integer s)."""
    return LaurentPoly(p.mode, tuple((e + int(s), c) for e, c in p.coeffs))


def lp_eval(p, z):
    """Evaluate at a complex point (z != 0 required when valuation < 0)."""
    z = complex(z)
    acc = 0j
    for e, c in p.coeffs:
        if e < 0 and z == 0:
            raise InputError("evaluation at 0 with negative exponent")
        acc += scalar_to_complex(c) * z**e
    return acc


def lp_degree(p):
    if p.is_zero:
        raise InputError("degree of the zero polynomial is undefined")
    return p.coeffs[-1][0]


def lp_valuation(p):
    if p.is_zero:
        raise InputError("valuation of the zero polynomial is undefined")
    return p.coeffs[0][0]


def lp_to_dense(p):
    """Dense coefficient list [c_0, ..., c_deg] of an ordinary polynomial.

    Raises for negative exponents.  The zero polynomial gives [].
    """
    if p.is_zero:
        return []
    if lp_valuation(p) < 0:
        raise InputError("negative exponents: not an ordinary polynomial")
    out = [coerce_scalar(0, p.mode)] * (lp_degree(p) + 1)
    for e, c in p.coeffs:
        out[e] = c
    return out


def lp_to_float(p):
    """Float-mode copy of p."""
    return lp_make({e: scalar_to_complex(c) for e, c in p.coeffs}, "float")


def phi(p, n):
    """Ring homomorphism onto grid combs: c*z^j maps to c*delta_{j/n}.

    Multiplication becomes convolution and addition stays addition, exactly
    in exact mode.
    """
    n = int(n)
    if n < 1:
        raise InputError(f"grid denominator must be positive, got {n}")
    return comb_make({e: c for e, c in p.coeffs}, n, p.mode)


def phi_inverse(comb):
    """Inverse of phi on its image: delta_{j/n} maps back to z^j."""
    if not isinstance(comb, DiracComb):
        raise InputError("phi_inverse expects a DiracComb")
    return lp_make({j: c for j, c in comb.coeffs}, comb.mode)


def comb_to_centered_poly(comb, L=None):
    """Center a comb supported in {-L..L}/n into an ordinary polynomial.

    The coefficient of z^(j+L) is the comb coefficient at index j, so the
    result has degree at most 2L and z^(-L) times it maps back to the comb
    under phi.  L defaults to the largest |index| (0 for the zero comb); a
    declared L smaller than the support raises SupportError.
    """
    indices = comb.support_indices()
    max_abs = max((abs(j) for j in indices), default=0)
    if L is None:
        L = max_abs
    L = int(L)
    if L < 0:
        raise InputError(f"negative support bound {L}")
    if max_abs > L:
        raise SupportError(
            f"comb support reaches index {max_abs}, beyond declared bound {L}"
        )
    return lp_make({j + L: c for j, c in comb.coeffs}, comb.mode), L
