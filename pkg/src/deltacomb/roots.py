"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration).

Works on float-mode polynomials.  Initial guesses sit on a circle sized by
the Fujiwara bound with a small deterministic angular jitter; updates are
Newton corrections coupled through pairwise repulsion, applied in
Gauss-Seidel order.  Convergence is declared when the largest relative step
drops below STEP_TOL; on stagnation the iterates are re-jittered once.
Acceptance is judged by backward error |p(rho)| / sum_k |a_k| |rho|^k, which
stays meaningful for clustered (numerically multiple) roots where forward
step convergence is slow.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

from .errors import InputError, RootConvergenceError
from .laurent import lp_shift, lp_to_dense, lp_to_float, lp_valuation
from .scalars import MODE_FLOAT, scalar_to_complex

__all__ = [
    "RootSet",
    "roots",
    "poly_roots",
    "polyval",
    "backward_error",
    "cluster_roots",
    "cluster_members",
    "poly_from_roots",
    "CLUSTER_TOL",
]

ITERATION_CAP = 200
STEP_TOL = 1e-13
STAGNATION_WINDOW = 40
# Mutual distance below which roots are reported as one cluster.
CLUSTER_TOL = 1e-8
_JITTER_SEED = 0x5EED


@dataclass(frozen=True)
class RootSet:
    """All roots (with multiplicity) of the non-monomial part of the input.

    residual_bound is the largest observed |p(rho)|; every returned root
    satisfies |p(rho)| <= residual_bound.
    """

    roots: tuple
    residual_bound: float


def polyval(coeffs, z):
    """Evaluate a dense low-to-high coefficient list by Horner's rule."""
    acc = 0j
    for a in reversed(coeffs):
        acc = acc * z + a
    return acc


def backward_error(coeffs, z):
    """|p(z)| normalized by sum_k |a_k| |z|^k (the attainable roundoff scale)."""
    num = abs(polyval(coeffs, z))
    den = 0.0
    zk = 1.0
    az = abs(z)
    for a in coeffs:
        den += abs(a) * zk
        zk *= az
    return num / den if den > 0 else num


def _fujiwara_radius(coeffs):
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    bound = 0.0
    for k in range(1, d + 1):
        ak = abs(coeffs[d - k])
        if k == d:
            ak *= 0.5
        if ak > 0:
            bound = max(bound, (ak / lead) ** (1.0 / k))
    return 2.0 * bound if bound > 0 else 1.0


def poly_roots(coeffs, tol=1e-9):
    """Roots of a dense complex coefficient list (low to high).

    INPUT: coeffs with nonzero leading coefficient, degree >= 1; tolerance on
    the backward error of every root.
    OUTPUT: list of complex roots, length = degree.
    Raises RootConvergenceError when any backward error stays above tol.
    """
    coeffs = [complex(a) for a in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise InputError("zero polynomial has no well-defined roots")
    # factor out exact origin roots first: the backward error of what remains
    # is otherwise pinned at 1 near z = 0, which no iteration can beat
    origin = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        origin += 1
    d = len(coeffs) - 1
    if d == 0:
        return [0j] * origin
    rng = random.Random(_JITTER_SEED)
    radius = _fujiwara_radius(coeffs)
    zs = [
        radius * cmath.exp(2j * math.pi * ((i + 0.5) / d + 0.1 * rng.random() / d))
        for i in range(d)
    ]
    deriv = [coeffs[i] * i for i in range(1, d + 1)]
    prev_steps = []
    restarted = False
    for it in range(ITERATION_CAP):
        max_step = 0.0
        for i in range(d):
            zi = zs[i]
            p = polyval(coeffs, zi)
            if p == 0:
                continue
            dp = polyval(deriv, zi)
            if dp == 0:
                zs[i] = zi * (1 + 1e-8) + 1e-8
                max_step = math.inf
                continue
            newton = p / dp
            rep = 0j
            for j in range(d):
                if j != i:
                    dz = zi - zs[j]
                    if dz == 0:
                        dz = complex(1e-14)
                    rep += 1.0 / dz
            den = 1.0 - newton * rep
            w = newton if den == 0 else newton / den
            zs[i] = zi - w
            max_step = max(max_step, abs(w) / (1.0 + abs(zs[i])))
        if max_step < STEP_TOL:
            break
        prev_steps.append(max_step)
        if (
            not restarted
            and len(prev_steps) > STAGNATION_WINDOW
            and max_step > 0.5 * prev_steps[-STAGNATION_WINDOW]
            and max(backward_error(coeffs, z) for z in zs) > tol
        ):
            # stagnating far from a solution: shake the iterates once
            zs = [z * (1 + 1e-6 * rng.random()) + 1e-6 * rng.random() for z in zs]
            restarted = True
    errs = [backward_error(coeffs, z) for z in zs]
    worst = max(errs)
    if worst > tol:
        raise RootConvergenceError(
            f"root iteration stalled: backward error {worst:.3e} above {tol:.1e}",
            best_residual=worst,
        )
    return [0j] * origin + zs


def roots(p, tol=1e-9):
    """RootSet of a Laurent polynomial (valuation factored out first).

    The monomial factor z^v carries no information here; the returned roots
    are those of p / z^valuation, counted with multiplicity, so their number
    is degree - valuation.  Float mode required (exact inputs are converted).
    """
    if p.is_zero:
        raise InputError("zero polynomial has no well-defined roots")
    if p.mode != MODE_FLOAT:
        p = lp_to_float(p)
    v = lp_valuation(p)
    dense = [scalar_to_complex(c) for c in lp_to_dense(lp_shift(p, -v))]
    found = poly_roots(dense, tol)
    bound = max((abs(polyval(dense, z)) for z in found), default=0.0)
    return RootSet(tuple(found), bound)


def cluster_members(root_list, tol=CLUSTER_TOL):
    """Greedy clustering of near-coincident roots, keeping member indices.

    OUTPUT: list of (center, members) with members a tuple of indices into
    root_list, sorted by ascending |center| then (real, imag) for
    determinism.  A root joins the first cluster whose running center is
    within tol; the center is the running mean of its members.
    """
    order = sorted(
        range(len(root_list)),
        key=lambda i: (abs(root_list[i]), root_list[i].real, root_list[i].imag),
    )
    clusters = []  # [center, [indices]]
    for i in order:
        z = root_list[i]
        for c in clusters:
            if abs(z - c[0]) <= tol:
                size = len(c[1])
                c[0] = (c[0] * size + z) / (size + 1)
                c[1].append(i)
                break
        else:
            clusters.append([z, [i]])
    clusters.sort(key=lambda c: (abs(c[0]), c[0].real, c[0].imag))
    return [(c[0], tuple(c[1])) for c in clusters]


def cluster_roots(root_list, tol=CLUSTER_TOL):
    """Clusters as (center, count): numerical multiplicity report."""
    return [(center, len(members)) for center, members in cluster_members(root_list, tol)]


def poly_from_roots(lead, root_list):
    """Dense coefficients (low to high) of lead * prod (z - rho)."""
    coeffs = [complex(lead)]
    for r in root_list:
        nxt = [0j] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i + 1] += a
            nxt[i] -= r * a
        coeffs = nxt
    return coeffs
