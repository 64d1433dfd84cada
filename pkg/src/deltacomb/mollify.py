"""Mollification of point distributions and Riemann-sum comb sampling.

Convolving a point distribution with the scaled bump phi_m(x) = m*phi(m*x)
gives the smooth function f_m(x) = sum_j c_j phi_m^(r_j)(x - a_j), evaluated
in closed form.  Left-endpoint Riemann sampling of f_m on [-k, k] with n
panels produces a comb on the 1/n grid whose pairing against any test
function equals the corresponding Riemann sum, and refining (m, n) along a
schedule drives the comb weakly toward the original distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, SupportError
from .scalars import MODE_FLOAT, scalar_to_complex
from .distributions import (
    Distribution,
    comb_make,
    comb_to_distribution,
    pair,
    support_hull,
)
from .bump import BumpSpec, bump_spec, raw_bump_deriv, ORDER_CAP
from .quadrature import integrate

__all__ = [
    "MollifiedFunction",
    "mollify",
    "min_mollifier_index",
    "riemann_comb",
    "comb_sequence",
    "default_schedule",
    "StepDiagnostics",
]


@dataclass(frozen=True)
class MollifiedFunction:
    """f_m = T * phi_m, closed-form evaluable; support is exact rational."""

    source: Distribution
    m: int
    spec: BumpSpec

    def eval(self, x):
        """Value at x: sum of c_j * m^(r_j + 1) * phi^(r_j)(m*(x - a_j))."""
        x = float(x)
        m = self.m
        norm = self.spec.normalization
        a = float(self.spec.a)
        acc = 0j
        for t in self.source.terms:
            c = scalar_to_complex(t.coeff)
            acc += c * m ** (t.order + 1) * norm * raw_bump_deriv(
                m * (x - float(t.loc)), t.order, a
            )
        return acc

    def __call__(self, x):
        return self.eval(x)

    def support(self):
        """Exact rational interval containing the support, or None if zero."""
        hull = support_hull(self.source)
        if hull is None:
            return None
        radius = Fraction(self.spec.a, self.m)
        return (hull[0] - radius, hull[1] + radius)

    def breakpoints(self):
        """Support edges and centers of the individual mollified terms."""
        radius = Fraction(self.spec.a, self.m)
        pts = []
        for t in self.source.terms:
            pts.extend((t.loc - radius, t.loc, t.loc + radius))
        return sorted(set(pts))


def mollify(T, m, spec=None):
    """Mollified approximant T * phi_m (closed form, no quadrature)."""
    m = int(m)
    if m < 1:
        raise InputError(f"mollifier index must be >= 1, got {m}")
    spec = spec if spec is not None else bump_spec(1)
    order = max((t.order for t in T.terms), default=0)
    if order > ORDER_CAP:
        raise InputError(
            f"distribution order {order} above the derivative cap {ORDER_CAP}"
        )
    return MollifiedFunction(T, m, spec)


def min_mollifier_index(T, k, spec=None):
    """Smallest m with support_hull(T) + [-a/m, a/m] inside [-k, k].

    Requires the hull strictly inside (-k, k); the zero distribution gives 1.
    """
    spec = spec if spec is not None else bump_spec(1)
    k = int(k)
    if k < 1:
        raise InputError(f"window bound k must be a positive integer, got {k}")
    hull = support_hull(T)
    if hull is None:
        return 1
    reach = max(hull[1], -hull[0])
    margin = k - reach
    if margin <= 0:
        raise SupportError(
            f"support hull [{hull[0]}, {hull[1]}] is not strictly inside (-{k}, {k})"
        )
    return max(1, math.ceil(Fraction(spec.a) / margin))


def riemann_comb(f, k, n):
    """Left-endpoint Riemann sampling of f on [-k, k] into a comb.

    The sample points -k + (2k/n)*l for l = 0..n-1 sit on the 1/n grid
    because k is an integer; the comb coefficient at such a point is
    (2k/n) * f_m(point).  Pairing the comb against any test function gives
    exactly the left Riemann sum of f_m * psi with n panels.
    """
    k = int(k)
    n = int(n)
    if k < 1:
        raise InputError(f"window bound k must be a positive integer, got {k}")
    if n < 1:
        raise InputError(f"panel count must be >= 1, got {n}")
    supp = f.support()
    if supp is not None and (supp[0] < -k or supp[1] > k):
        raise SupportError(
            f"mollified support [{supp[0]}, {supp[1]}] exceeds [-{k}, {k}]"
        )
    weight = 2.0 * k / n
    coeffs = {}
    for l in range(n):
        loc = Fraction(-k) + Fraction(2 * k * l, n)
        index = loc * n
        value = weight * f.eval(float(loc))
        coeffs[int(index)] = value
    return comb_make(coeffs, n, MODE_FLOAT)


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step error split: weak <= mollify + riemann, per battery member."""

    m: int
    n: int
    rows: tuple  # (battery index, weak, mollify component, riemann component)
    max_weak: float
    max_mollify: float
    max_riemann: float


def _component_errors(T, f, comb, battery, tol=1e-12):
    rows = []
    comb_dist = comb_to_distribution(comb)
    supp = f.support()
    breaks = [float(b) for b in f.breakpoints()]
    for i, psi in enumerate(battery):
        t_pair = pair(T, psi)
        c_pair = pair(comb_dist, psi)
        if supp is None:
            integral = 0.0
        else:
            integral = integrate(
                lambda x: (f.eval(x) * psi(x)).real,
                float(supp[0]),
                float(supp[1]),
                breakpoints=breaks,
                tol=tol,
            ) + 1j * integrate(
                lambda x: (f.eval(x) * psi(x)).imag,
                float(supp[0]),
                float(supp[1]),
                breakpoints=breaks,
                tol=tol,
            )
        rows.append(
            (i, abs(t_pair - c_pair), abs(t_pair - integral), abs(integral - c_pair))
        )
    return rows


def comb_sequence(T, k, schedule, spec=None, battery=None):
    """Run a sampling schedule and report the two-stage error split.

    INPUT: distribution T with support hull strictly inside (-k, k);
    schedule of (m, n) pairs with every m >= min_mollifier_index(T, k).
    OUTPUT: list of (DiracComb, StepDiagnostics).
    """
    from .testfuncs import default_battery

    spec = spec if spec is not None else bump_spec(1)
    battery = list(battery) if battery is not None else default_battery()
    if not battery:
        raise InputError("empty test-function battery")
    m_floor = min_mollifier_index(T, k, spec)
    out = []
    for m, n in schedule:
        m, n = int(m), int(n)
        if m < m_floor:
            raise SupportError(
                f"schedule index m={m} below the minimum {m_floor} for k={k}"
            )
        f = mollify(T, m, spec)
        comb = riemann_comb(f, k, n)
        rows = _component_errors(T, f, comb, battery)
        diag = StepDiagnostics(
            m=m,
            n=n,
            rows=tuple(rows),
            max_weak=max(r[1] for r in rows),
            max_mollify=max(r[2] for r in rows),
            max_riemann=max(r[3] for r in rows),
        )
        out.append((comb, diag))
    return out


def default_schedule(T, k, steps=4, spec=None):
    """Geometric refinement schedule: m = M * 2^j, n = 8 * 4^j."""
    M = min_mollifier_index(T, k, spec)
    return [(M * 2**j, 8 * 4**j) for j in range(int(steps))]
