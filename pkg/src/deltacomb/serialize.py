"""JSON/CSV serialization for distributions, polynomials, and reports.

All artifacts round-trip: parse(serialize(x)) == x on canonical values.
Exact-mode coefficients are written as rational strings ("3/4"), float-mode
as JSON numbers, so exact artifacts stay lossless and diff-able.  Parsers
raise ParseError with a JSON-path location on malformed input.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction

from .errors import ParseError
from .scalars import (
    MODE_EXACT,
    MODE_FLOAT,
    ExactComplex,
    format_rational,
    parse_rational,
)
from .distributions import (
    DiracComb,
    Distribution,
    canonicalize,
    comb_make,
    comb_to_distribution,
    comb_from_distribution,
)
from .laurent import LaurentPoly, lp_make
from .bezout import UnimodularQuadruple

__all__ = [
    "to_canonical_json",
    "json_loads_checked",
    "write_text_atomic",
    "error_json",
    "dist_to_json",
    "dist_from_json",
    "comb_to_json",
    "comb_from_json",
    "poly_to_json",
    "poly_from_json",
    "quadruple_to_json",
    "quadruple_from_json",
    "csv_text",
]


# ---------------------------------------------------------------------------
# Canonical text and atomic writes


def to_canonical_json(obj):
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def json_loads_checked(text, source="input"):
    """json.loads that reports syntax errors as ParseError with a location."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON in {source}: {exc.msg}",
            location=f"line {exc.lineno} column {exc.colno}",
        ) from exc


def write_text_atomic(path, text):
    """Write text to path atomically (temp file + rename in the same dir)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def error_json(exc):
    """Structured error body shared by the CLI and the service."""
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


# ---------------------------------------------------------------------------
# Guarded accessors (every parser reports a JSON-path location)


def _as_object(obj, location):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", location=location)
    return obj


def _get(obj, key, location):
    _as_object(obj, location)
    if key not in obj:
        raise ParseError(f"missing key {key!r}", location=location)
    return obj[key], f"{location}.{key}"


def _as_int(value, location):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("expected an integer", location=location)
    return value


def _as_float(value, location):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError("expected a number", location=location)
    return float(value)


def _as_list(value, location):
    if not isinstance(value, list):
        raise ParseError("expected a JSON array", location=location)
    return value


def _as_mode(value, location):
    if value not in (MODE_EXACT, MODE_FLOAT):
        raise ParseError(
            f"mode must be {MODE_EXACT!r} or {MODE_FLOAT!r}, got {value!r}",
            location=location,
        )
    return value


def _rational_component(value, location):
    if isinstance(value, bool):
        raise ParseError("expected a rational component", location=location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), location=location) from exc
    raise ParseError(
        "exact-mode components must be integers or rational strings",
        location=location,
    )


def _scalar_from_json(re, im, mode, location):
    if mode == MODE_EXACT:
        return ExactComplex(
            _rational_component(re, f"{location}.re"),
            _rational_component(im, f"{location}.im"),
        )
    re_f = (
        float(_rational_component(re, f"{location}.re"))
        if isinstance(re, str)
        else _as_float(re, f"{location}.re")
    )
    im_f = (
        float(_rational_component(im, f"{location}.im"))
        if isinstance(im, str)
        else _as_float(im, f"{location}.im")
    )
    return complex(re_f, im_f)


def _scalar_to_json(coeff, mode):
    if mode == MODE_EXACT:
        return format_rational(coeff.re), format_rational(coeff.im)
    c = complex(coeff)
    return c.real, c.imag


def _fraction_to_json(value):
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def _fraction_from_json(obj, location):
    num, num_loc = _get(obj, "num", location)
    den, den_loc = _get(obj, "den", location)
    den_i = _as_int(den, den_loc)
    if den_i == 0:
        raise ParseError("denominator must be nonzero", location=den_loc)
    return Fraction(_as_int(num, num_loc), den_i)


# ---------------------------------------------------------------------------
# Distributions


def dist_to_json(d):
    """`{"mode":..., "terms":[{"loc":{"num","den"},"order","re","im"}]}`."""
    terms = []
    for t in d.terms:
        re, im = _scalar_to_json(t.coeff, d.mode)
        terms.append(
            {"loc": _fraction_to_json(t.loc), "order": t.order, "re": re, "im": im}
        )
    return {"mode": d.mode, "terms": terms}


def dist_from_json(obj, location="$"):
    mode_raw, mode_loc = _get(obj, "mode", location)
    mode = _as_mode(mode_raw, mode_loc)
    terms_raw, terms_loc = _get(obj, "terms", location)
    triples = []
    for i, entry in enumerate(_as_list(terms_raw, terms_loc)):
        here = f"{terms_loc}[{i}]"
        loc_raw, loc_loc = _get(entry, "loc", here)
        order_raw, order_loc = _get(entry, "order", here)
        order = _as_int(order_raw, order_loc)
        if order < 0:
            raise ParseError("order must be nonnegative", location=order_loc)
        re, _ = _get(entry, "re", here)
        im, _ = _get(entry, "im", here)
        triples.append(
            (
                _fraction_from_json(loc_raw, loc_loc),
                order,
                _scalar_from_json(re, im, mode, here),
            )
        )
    return canonicalize(triples, mode)


# ---------------------------------------------------------------------------
# Dirac combs (a distribution payload plus the grid denominator)


def comb_to_json(comb):
    return {"n": comb.n, "dist": dist_to_json(comb_to_distribution(comb))}


def comb_from_json(obj, location="$"):
    n_raw, n_loc = _get(obj, "n", location)
    n = _as_int(n_raw, n_loc)
    if n < 1:
        raise ParseError("comb denominator n must be >= 1", location=n_loc)
    dist_raw, dist_loc = _get(obj, "dist", location)
    return comb_from_distribution(dist_from_json(dist_raw, dist_loc), n)


# ---------------------------------------------------------------------------
# Laurent polynomials


def poly_to_json(p):
    """`{"mode":..., "coeffs":[{"exp","re","im"}]}` with ascending exponents."""
    coeffs = []
    for e, c in p.coeffs:
        re, im = _scalar_to_json(c, p.mode)
        coeffs.append({"exp": e, "re": re, "im": im})
    return {"mode": p.mode, "coeffs": coeffs}


def poly_from_json(obj, location="$"):
    mode_raw, mode_loc = _get(obj, "mode", location)
    mode = _as_mode(mode_raw, mode_loc)
    coeffs_raw, coeffs_loc = _get(obj, "coeffs", location)
    mapping = {}
    for i, entry in enumerate(_as_list(coeffs_raw, coeffs_loc)):
        here = f"{coeffs_loc}[{i}]"
        exp_raw, exp_loc = _get(entry, "exp", here)
        re, _ = _get(entry, "re", here)
        im, _ = _get(entry, "im", here)
        exp = _as_int(exp_raw, exp_loc)
        scalar = _scalar_from_json(re, im, mode, here)
        if exp in mapping:
            mapping[exp] = mapping[exp] + scalar
        else:
            mapping[exp] = scalar
    return lp_make(mapping, mode)


# ---------------------------------------------------------------------------
# Unimodular quadruples


def quadruple_to_json(q):
    return {
        "kind": "unimodular-quadruple",
        "mode": q.mode,
        "k": q.k,
        "L": q.L,
        "n": q.n,
        "epsilon": q.epsilon,
        "eps_prime": q.eps_prime,
        "residual": q.residual,
        "perturbation_distances": list(q.perturbation_distances),
        "sum_distances": list(q.sum_distances),
        "cofactor_degrees": list(q.cofactor_degrees),
        "shifted_clusters": [
            {"re": c.real, "im": c.imag, "size": size}
            for c, size in q.shifted_clusters
        ],
        "t_k": comb_to_json(q.t_k),
        "s_k": comb_to_json(q.s_k),
        "u_k": comb_to_json(q.u_k),
        "v_k": comb_to_json(q.v_k),
    }


def quadruple_from_json(obj, location="$"):
    mode_raw, mode_loc = _get(obj, "mode", location)
    mode = _as_mode(mode_raw, mode_loc)
    combs = {}
    for name in ("t_k", "s_k", "u_k", "v_k"):
        raw, here = _get(obj, name, location)
        combs[name] = comb_from_json(raw, here)
    k_raw, k_loc = _get(obj, "k", location)
    big_l_raw, big_l_loc = _get(obj, "L", location)
    n_raw, n_loc = _get(obj, "n", location)
    residual_raw, residual_loc = _get(obj, "residual", location)
    epsilon_raw, epsilon_loc = _get(obj, "epsilon", location)
    eps_prime_raw, eps_prime_loc = _get(obj, "eps_prime", location)
    pert_raw, pert_loc = _get(obj, "perturbation_distances", location)
    sums_raw, sums_loc = _get(obj, "sum_distances", location)
    degs_raw, degs_loc = _get(obj, "cofactor_degrees", location)
    clusters_raw, clusters_loc = _get(obj, "shifted_clusters", location)
    clusters = []
    for i, entry in enumerate(_as_list(clusters_raw, clusters_loc)):
        here = f"{clusters_loc}[{i}]"
        re, re_loc = _get(entry, "re", here)
        im, im_loc = _get(entry, "im", here)
        size, size_loc = _get(entry, "size", here)
        clusters.append(
            (
                complex(_as_float(re, re_loc), _as_float(im, im_loc)),
                _as_int(size, size_loc),
            )
        )
    return UnimodularQuadruple(
        t_k=combs["t_k"],
        s_k=combs["s_k"],
        u_k=combs["u_k"],
        v_k=combs["v_k"],
        residual=_as_float(residual_raw, residual_loc),
        perturbation_distances=tuple(
            _as_float(x, f"{pert_loc}[{i}]")
            for i, x in enumerate(_as_list(pert_raw, pert_loc))
        ),
        sum_distances=tuple(
            _as_float(x, f"{sums_loc}[{i}]")
            for i, x in enumerate(_as_list(sums_raw, sums_loc))
        ),
        epsilon=_as_float(epsilon_raw, epsilon_loc),
        eps_prime=_as_float(eps_prime_raw, eps_prime_loc),
        k=_as_int(k_raw, k_loc),
        L=_as_int(big_l_raw, big_l_loc),
        n=_as_int(n_raw, n_loc),
        cofactor_degrees=tuple(
            _as_int(x, f"{degs_loc}[{i}]")
            for i, x in enumerate(_as_list(degs_raw, degs_loc))
        ),
        shifted_clusters=tuple(clusters),
        mode=mode,
    )


# ---------------------------------------------------------------------------
# CSV


def csv_text(header, rows):
    """CSV with a header row and '\n' line endings (stable across platforms)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
