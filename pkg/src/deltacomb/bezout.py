"""Coprime perturbation, Bezout cofactors, and unimodular comb quadruples.

Given two combs on a common grid, the pipeline centers them into ordinary
polynomials, perturbs the second polynomial's roots just enough to clear any
common zeros while keeping every coefficient within the prescribed budget,
solves p*u + q*v = 1, and lifts the four polynomials back to combs.  The
resulting quadruple satisfies the convolution identity
T_k * U_k + S_k * V_k = delta_0 up to the reported residual.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    InputError,
    ModeMismatchError,
    NotCoprimeError,
    PerturbationBudgetError,
)
from .scalars import (
    MODE_EXACT,
    MODE_FLOAT,
    ExactComplex,
    exact_from_complex,
    scalar_to_complex,
)
from .distributions import (
    DiracComb,
    add,
    comb_make,
    comb_to_distribution,
    convolve,
    identity_distribution,
    scale,
)
from .laurent import (
    LaurentPoly,
    comb_to_centered_poly,
    lp_add,
    lp_coeff_map,
    lp_degree,
    lp_from_coeffs,
    lp_make,
    lp_mul,
    lp_shift,
    lp_to_dense,
    lp_to_float,
    lp_valuation,
    lp_zero,
    phi,
)
from .roots import CLUSTER_TOL, cluster_members, poly_from_roots, poly_roots

__all__ = [
    "CROSS_ROOT_TOL",
    "RESIDUAL_GATE",
    "PerturbationBudget",
    "PerturbOutcome",
    "UnimodularQuadruple",
    "perturb_to_coprime",
    "bezout_cofactors",
    "bezout_residual",
    "unimodular_approx_pair",
]

# Minimum separation required between the two polynomials' roots.
CROSS_ROOT_TOL = 1e-7
# Acceptance threshold on the coefficient residual of p*u + q*v - 1.
RESIDUAL_GATE = 1e-9
_EPS_PRIME_FLOOR = 1e-15
_MAX_ATTEMPTS = 5


@dataclass(frozen=True)
class PerturbationBudget:
    """Coefficient budget epsilon = 1/(2^k * 2L) for approximation index k."""

    k: int
    L: int
    epsilon: float

    @staticmethod
    def for_pair(k, L):
        if k < 1:
            raise InputError(f"approximation index k must be >= 1, got {k}")
        if L < 1:
            raise InputError(f"support bound L must be >= 1, got {L}")
        return PerturbationBudget(k, L, 1.0 / (2**k * 2 * L))

    @property
    def epsilon_exact(self):
        return Fraction(1, 2**self.k * 2 * self.L)

    @property
    def sum_cap(self):
        # total coefficient movement that keeps the weak-error bound 2^-k
        return 2.0**-self.k


@dataclass(frozen=True)
class PerturbOutcome:
    """Result of perturb_to_coprime.

    shifted_clusters lists (center, size) of the root clusters of q that were
    moved, sorted by ascending |center|; eps_prime is the applied shift
    magnitude (0.0 when nothing moved).
    """

    p_t: LaurentPoly
    q_t: LaurentPoly
    eps_prime: float
    direction: complex
    shifted_clusters: tuple
    max_dev_p: float
    sum_dev_p: float
    max_dev_q: float
    sum_dev_q: float

    @property
    def unchanged(self):
        return self.eps_prime == 0.0 and self.max_dev_p == 0.0 and self.max_dev_q == 0.0


def _dense_complex(p):
    return [scalar_to_complex(c) for c in lp_to_dense(lp_to_float(p))]


def _deviations(new, old):
    n = max(len(new), len(old))
    devs = [
        abs((new[i] if i < len(new) else 0j) - (old[i] if i < len(old) else 0j))
        for i in range(n)
    ]
    return (max(devs, default=0.0), sum(devs))


def perturb_to_coprime(p, q, eps, sum_cap=None, rng=None, randomize_first=False):
    """Clear common roots of (p, q) by shifting q's offending root clusters.

    INPUT: ordinary polynomials (valuation >= 0), budget eps > 0, optional
    cap on the total coefficient movement per polynomial, RNG for shift
    directions.  p is perturbed only when it is identically zero (replaced
    by eps/2); q carries the root shifts, every member of an offending
    cluster moving by the same eps'.
    OUTPUT: PerturbOutcome with max coefficient deviation < eps strictly on
    each polynomial, total deviation < sum_cap when given, and all roots of
    q_t at distance > CROSS_ROOT_TOL from all roots of p_t.
    Raises PerturbationBudgetError when no admissible eps' exists.
    """
    if eps <= 0:
        raise InputError(f"perturbation budget must be positive, got {eps}")
    rng = rng if rng is not None else random.Random(0)
    p = lp_to_float(p)
    q = lp_to_float(q)

    dev_p = (0.0, 0.0)
    if p.is_zero:
        p = lp_make({0: eps / 2}, MODE_FLOAT)
        dev_p = (eps / 2, eps / 2)
    a = _dense_complex(p)
    if q.is_zero:
        if len(a) == 1:
            # constant p solves the identity alone; leave q untouched
            return PerturbOutcome(p, q, 0.0, 1.0, (), *dev_p, 0.0, 0.0)
        q = lp_make({0: eps / 2}, MODE_FLOAT)
        return PerturbOutcome(p, q, 0.0, 1.0, (), *dev_p, eps / 2, eps / 2)
    b = _dense_complex(q)
    if len(a) == 1 or len(b) == 1:
        # a nonzero constant has no roots: nothing can be shared
        return PerturbOutcome(p, q, 0.0, 1.0, (), *dev_p, 0.0, 0.0)

    roots_p = poly_roots(a)
    roots_q = poly_roots(b)
    clusters = cluster_members(roots_q, CLUSTER_TOL)
    flagged = [
        (center, members)
        for center, members in clusters
        if min(abs(center - alpha) for alpha in roots_p) <= CROSS_ROOT_TOL
    ]
    if not flagged:
        return PerturbOutcome(p, q, 0.0, 1.0, (), *dev_p, 0.0, 0.0)

    moved_indices = sorted(i for _, members in flagged for i in members)

    def build(eps_prime, direction):
        shift = direction * eps_prime
        moved = list(roots_q)
        for i in moved_indices:
            moved[i] = roots_q[i] + shift
        return poly_from_roots(b[-1], moved), moved

    def admissible(new_b, moved):
        max_dev, sum_dev = _deviations(new_b, b)
        if not max_dev < eps:
            return False, max_dev, sum_dev
        if sum_cap is not None and not sum_dev < sum_cap:
            return False, max_dev, sum_dev
        sep = min(
            abs(moved[i] - alpha) for i in moved_indices for alpha in roots_p
        )
        return sep > CROSS_ROOT_TOL, max_dev, sum_dev

    direction = (
        cmath.exp(2j * cmath.pi * rng.random()) if randomize_first else (1 + 0j)
    )
    eps_prime = eps / 2
    # one proportional correction: coefficient movement is ~linear in eps'
    trial_b, _ = build(eps_prime, direction)
    max_dev, sum_dev = _deviations(trial_b, b)
    headroom = eps
    if sum_cap is not None:
        headroom = min(headroom, sum_cap)
    worst = max(max_dev / eps if eps else 0.0, sum_dev / headroom if headroom else 0.0)
    if worst > 0.9:
        eps_prime *= 0.45 / worst

    halvings = 0
    directions_tried = 0
    while True:
        if eps_prime < _EPS_PRIME_FLOOR:
            center, members = flagged[0]
            raise PerturbationBudgetError(
                f"cannot separate root cluster at {center:.6g} "
                f"(size {len(members)}) within budget eps={eps:.3e}",
                cluster=(center, len(members)),
            )
        new_b, moved = build(eps_prime, direction)
        ok, max_dev, sum_dev = admissible(new_b, moved)
        if ok:
            q_t = lp_from_coeffs(new_b, MODE_FLOAT)
            shifted = tuple(
                (center, len(members))
                for center, members in sorted(
                    flagged, key=lambda cm: (abs(cm[0]), cm[0].real, cm[0].imag)
                )
            )
            return PerturbOutcome(
                p, q_t, eps_prime, direction, shifted, *dev_p, max_dev, sum_dev
            )
        eps_prime /= 2
        halvings += 1
        if halvings >= 20:
            halvings = 0
            directions_tried += 1
            if directions_tried > 5:
                center, members = flagged[0]
                raise PerturbationBudgetError(
                    f"no admissible shift for root cluster at {center:.6g} "
                    f"(size {len(members)}) after direction retries",
                    cluster=(center, len(members)),
                )
            direction = cmath.exp(2j * cmath.pi * rng.random())
            eps_prime = eps / 2


# ---------------------------------------------------------------------------
# Bezout cofactors


def _exact_dense(p):
    out = lp_to_dense(p)
    return [c if isinstance(c, ExactComplex) else ExactComplex(c, 0) for c in out]


def _exact_divmod(num, den):
    """Long division of dense ExactComplex lists; returns (quotient, remainder)."""
    num = list(num)
    dden = len(den) - 1
    lead = den[-1]
    if not lead:
        raise InputError("division by zero polynomial")
    if len(num) - 1 < dden:
        return [ExactComplex(0, 0)], num
    quo = [ExactComplex(0, 0)] * (len(num) - dden)
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i] / lead
        quo[i - dden] = c
        if c:
            for j in range(dden + 1):
                num[i - dden + j] = num[i - dden + j] - c * den[j]
    while len(num) > 1 and not num[-1]:
        num.pop()
    if len(num) == 1 and not num[0]:
        num = []
    return quo, num


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _exact_xgcd(a, b):
    """Extended Euclid on dense ExactComplex lists, remainders kept monic."""
    zero, one = ExactComplex(0, 0), ExactComplex(1, 0)

    def sub_scaled(x, quo, y):
        # x - quo*y on dense lists
        prod = [zero] * (len(quo) + len(y) - 1) if quo and y else []
        for i, qc in enumerate(quo):
            if qc:
                for j, yc in enumerate(y):
                    prod[i + j] = prod[i + j] + qc * yc
        n = max(len(x), len(prod))
        out = [
            (x[i] if i < len(x) else zero) - (prod[i] if i < len(prod) else zero)
            for i in range(n)
        ]
        return _poly_trim(out)

    r0, r1 = _poly_trim(a), _poly_trim(b)
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while r1:
        lead = r1[-1]
        r1 = [c / lead for c in r1]
        s1 = [c / lead for c in s1]
        t1 = [c / lead for c in t1]
        quo, rem = _exact_divmod(r0, r1)
        r0, r1 = r1, _poly_trim(rem)
        s0, s1 = s1, sub_scaled(s0, quo, s1)
        t0, t1 = t1, sub_scaled(t0, quo, t1)
    return r0, s0, t0


def _dense_mul_complex(a, b):
    if not a or not b:
        return []
    out = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _identity_residual_dense(a, b, u, v):
    """Max |coeff| of a*u + b*v - 1 computed densely (no canonical dropping)."""
    prod = _dense_mul_complex(a, u)
    prod2 = _dense_mul_complex(b, v)
    n = max(len(prod), len(prod2), 1)
    worst = 0.0
    for i in range(n):
        s = (prod[i] if i < len(prod) else 0j) + (prod2[i] if i < len(prod2) else 0j)
        if i == 0:
            s -= 1
        worst = max(worst, abs(s))
    return worst


def bezout_cofactors(p, q, residual_gate=RESIDUAL_GATE):
    """Solve p*u + q*v = 1 for coprime ordinary polynomials.

    Float mode solves the Sylvester-structured linear system on coefficient
    vectors by least squares with one refinement pass; exact mode runs the
    extended Euclidean algorithm with monic normalization.  Degrees are
    minimal: deg u < deg q and deg v < deg p when both degrees are >= 1.
    OUTPUT: (u, v, residual) with residual the max coefficient magnitude of
    p*u + q*v - 1 (exactly 0.0 in exact mode).
    Raises NotCoprimeError when the inputs share a root (exact) or the
    solver residual exceeds residual_gate (float).
    """
    if p.mode != q.mode:
        raise ModeMismatchError(f"mixed scalar modes {p.mode!r} and {q.mode!r}")
    mode = p.mode
    if p.is_zero and q.is_zero:
        raise InputError("no cofactors for the zero pair")
    # constant shortcuts (valuation checks happen inside lp_to_dense)
    if not p.is_zero and lp_degree(p) == 0:
        c = lp_to_dense(p)[0]
        inv = (ExactComplex(1, 0) / c) if mode == MODE_EXACT else 1.0 / c
        return lp_make({0: inv}, mode), lp_zero(mode), 0.0
    if not q.is_zero and lp_degree(q) == 0:
        c = lp_to_dense(q)[0]
        inv = (ExactComplex(1, 0) / c) if mode == MODE_EXACT else 1.0 / c
        return lp_zero(mode), lp_make({0: inv}, mode), 0.0
    if p.is_zero or q.is_zero:
        raise NotCoprimeError("one polynomial is zero and the other is not a unit")

    if mode == MODE_EXACT:
        a, b = _exact_dense(p), _exact_dense(q)
        g, s, t = _exact_xgcd(a, b)
        if len(g) != 1:
            raise NotCoprimeError(
                f"exact gcd has degree {len(g) - 1}: inputs are not coprime"
            )
        c = g[0]
        u = [x / c for x in s]
        v = [x / c for x in t]
        u_lp = lp_from_coeffs(u, MODE_EXACT)
        v_lp = lp_from_coeffs(v, MODE_EXACT)
        check = lp_add(lp_mul(p, u_lp), lp_mul(q, v_lp))
        if lp_coeff_map(check) != {0: ExactComplex(1, 0)}:
            raise AssertionError("exact Bezout identity failed verification")
        return u_lp, v_lp, 0.0

    a = _dense_complex(p)
    b = _dense_complex(q)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    A = np.zeros((size, size), dtype=complex)
    for j in range(n):  # u_j, deg u <= n-1
        for i, ai in enumerate(a):
            A[i + j, j] = ai
    for j in range(m):  # v_j, deg v <= m-1
        for i, bi in enumerate(b):
            A[i + j, n + j] = bi
    rhs = np.zeros(size, dtype=complex)
    rhs[0] = 1.0
    x, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    resid_vec = rhs - A @ x
    dx, *_ = np.linalg.lstsq(A, resid_vec, rcond=None)
    x = x + dx
    u = [complex(x[j]) for j in range(n)]
    v = [complex(x[n + j]) for j in range(m)]
    residual = _identity_residual_dense(a, b, u, v)
    if residual > residual_gate:
        raise NotCoprimeError(
            f"Bezout residual {residual:.3e} above gate {residual_gate:.1e}: "
            "inputs are numerically not coprime"
        )
    return lp_from_coeffs(u, MODE_FLOAT), lp_from_coeffs(v, MODE_FLOAT), residual


def bezout_residual(T, S, U, V):
    """Max coefficient magnitude of T*U + S*V - delta_0 after canonicalization.

    Accepts Distributions or DiracCombs (combs are widened to distributions).
    """
    ds = [
        comb_to_distribution(d) if isinstance(d, DiracComb) else d for d in (T, S, U, V)
    ]
    t, s, u, v = ds
    lhs = add(convolve(t, u), convolve(s, v))
    err = add(lhs, scale(-1, identity_distribution(t.mode)))
    return max((abs(scalar_to_complex(term.coeff)) for term in err.terms), default=0.0)


# ---------------------------------------------------------------------------
# The full comb-pair procedure


@dataclass(frozen=True)
class UnimodularQuadruple:
    """Combs (T_k, S_k, U_k, V_k) with T_k*U_k + S_k*V_k = delta_0 (residual).

    perturbation_distances holds the max coefficient deviation of T_k from T
    and S_k from S; sum_distances the corresponding totals.  L is the
    centering bound actually used, epsilon the budget 1/(2^k*2L).
    """

    t_k: DiracComb
    s_k: DiracComb
    u_k: DiracComb
    v_k: DiracComb
    residual: float
    perturbation_distances: tuple
    sum_distances: tuple
    epsilon: float
    eps_prime: float
    k: int
    L: int
    n: int
    cofactor_degrees: tuple
    shifted_clusters: tuple
    mode: str


def _lp_degree_or(p, default=-1):
    return default if p.is_zero else lp_degree(p)


def _exact_snap_poly(p_float):
    return lp_make(
        {e: exact_from_complex(c) for e, c in p_float.coeffs}, MODE_EXACT
    )


def _exact_max_dev(p_new, p_old, eps_exact):
    """Exact per-coefficient check |delta| < eps; returns float (max, sum)."""
    m_new = lp_coeff_map(p_new)
    m_old = lp_coeff_map(p_old)
    eps_sq = eps_exact * eps_exact
    max_dev = 0.0
    total = 0.0
    for e in m_new.keys() | m_old.keys():
        zero = ExactComplex(0, 0)
        d = m_new.get(e, zero) - m_old.get(e, zero)
        mag_sq = d.re * d.re + d.im * d.im
        if not mag_sq < eps_sq:
            raise PerturbationBudgetError(
                f"exact deviation at exponent {e} reaches the budget"
            )
        mag = abs(complex(d))
        max_dev = max(max_dev, mag)
        total += mag
    return max_dev, total


def unimodular_approx_pair(T, S, k, seed=0, mode=None):
    """Approximate a comb pair by a unimodular quadruple at index k.

    INPUT: combs T, S on a common grid 1/n; k >= 1; seed for shift
    directions; mode "exact" or "float" (default: the combs' mode).  The
    budget is epsilon = 1/(2^k * 2L) with L = max |support index| (at least
    1).  In exact mode the perturbed coefficients are snapped to exact
    dyadic rationals and the cofactors recomputed exactly, making the
    residual exactly zero.
    OUTPUT: UnimodularQuadruple.
    """
    if T.n != S.n:
        raise InputError(f"combs must share a denominator: {T.n} != {S.n}")
    if T.mode != S.mode:
        raise ModeMismatchError(f"mixed scalar modes {T.mode!r} and {S.mode!r}")
    k = int(k)
    if k < 1:
        raise InputError(f"approximation index k must be >= 1, got {k}")
    mode = mode or T.mode
    n = T.n
    L_support = max(
        (abs(j) for j in T.support_indices() + S.support_indices()), default=0
    )
    budget = PerturbationBudget.for_pair(k, max(1, L_support))
    eps = budget.epsilon

    if T.is_zero and S.is_zero:
        # replace the zero pair by ((eps/2) delta_0, 0) with cofactor (2/eps) delta_0;
        # eps is a power of two, so the identity holds exactly in floats too
        half = Fraction(budget.epsilon_exact, 2)
        t_coeff = half if mode == MODE_EXACT else float(half)
        u_coeff = 1 / half if mode == MODE_EXACT else float(1 / half)
        t_k = comb_make({0: t_coeff}, n, mode)
        u_k = comb_make({0: u_coeff}, n, mode)
        s_k = comb_make({}, n, mode)
        v_k = comb_make({}, n, mode)
        return UnimodularQuadruple(
            t_k, s_k, u_k, v_k,
            residual=bezout_residual(t_k, s_k, u_k, v_k),
            perturbation_distances=(float(half), 0.0),
            sum_distances=(float(half), 0.0),
            epsilon=eps,
            eps_prime=float(half),
            k=k,
            L=budget.L,
            n=n,
            cofactor_degrees=(0, -1),
            shifted_clusters=(),
            mode=mode,
        )

    L = L_support
    p, _ = comb_to_centered_poly(T, L)
    q, _ = comb_to_centered_poly(S, L)
    # a shared monomial factor z^c is a unit of the comb ring (a delta shift),
    # not a genuine common-zero obstruction: cancel it before perturbing, or
    # every origin root would demand a shift and the cofactors would blow up
    # with the multiplicity
    cancel = 0
    if not p.is_zero and not q.is_zero:
        cancel = min(lp_valuation(p), lp_valuation(q))
        if cancel:
            p = lp_shift(p, -cancel)
            q = lp_shift(q, -cancel)
    p_f, q_f = lp_to_float(p), lp_to_float(q)
    rng = random.Random(seed)

    last_err = None
    for attempt in range(_MAX_ATTEMPTS):
        try:
            outcome = perturb_to_coprime(
                p_f,
                q_f,
                eps,
                sum_cap=budget.sum_cap,
                rng=rng,
                randomize_first=attempt > 0,
            )
            if mode == MODE_EXACT:
                if outcome.unchanged:
                    p_used, q_used = p, q
                    devs = ((0.0, 0.0), (0.0, 0.0))
                else:
                    p_used = p if outcome.max_dev_p == 0.0 else _exact_snap_poly(outcome.p_t)
                    q_used = q if outcome.max_dev_q == 0.0 else _exact_snap_poly(outcome.q_t)
                    devs = (
                        _exact_max_dev(p_used, p, budget.epsilon_exact),
                        _exact_max_dev(q_used, q, budget.epsilon_exact),
                    )
                u, v, _ = bezout_cofactors(p_used, q_used)
            else:
                p_used, q_used = outcome.p_t, outcome.q_t
                devs = (
                    (outcome.max_dev_p, outcome.sum_dev_p),
                    (outcome.max_dev_q, outcome.sum_dev_q),
                )
                u, v, _ = bezout_cofactors(p_used, q_used)
            break
        except NotCoprimeError as exc:
            last_err = exc
    else:
        raise last_err

    t_k = phi(lp_shift(p_used, cancel - L), n)
    s_k = phi(lp_shift(q_used, cancel - L), n)
    u_k = phi(lp_shift(u, L - cancel), n)
    v_k = phi(lp_shift(v, L - cancel), n)
    residual = bezout_residual(t_k, s_k, u_k, v_k)
    return UnimodularQuadruple(
        t_k, s_k, u_k, v_k,
        residual=residual,
        perturbation_distances=(devs[0][0], devs[1][0]),
        sum_distances=(devs[0][1], devs[1][1]),
        epsilon=eps,
        eps_prime=outcome.eps_prime,
        k=k,
        L=L,
        n=n,
        cofactor_degrees=(_lp_degree_or(u), _lp_degree_or(v)),
        shifted_clusters=outcome.shifted_clusters,
        mode=mode,
    )
