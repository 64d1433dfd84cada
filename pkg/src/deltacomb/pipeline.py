"""Pipeline orchestration shared by the service handlers and the CLI.

Each run_* function takes a PipelineConfig (or a parsed JSON object for
verify), performs the full computation, and returns a RunResult with a
report (JSON-ready dict), named text artifacts, and an overall ok flag.
Exit-code policy downstream: ok=False means a validation failure (residual
or certificate gate), while input and numerical errors raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ModeMismatchError
from .scalars import MODE_EXACT
from .distributions import (
    add,
    comb_from_distribution,
    comb_to_distribution,
    invert,
    max_order,
    pair,
    scale,
    support_hull,
    Distribution,
    NotInvertible,
)
from .bezout import RESIDUAL_GATE, UnimodularQuadruple, bezout_residual, unimodular_approx_pair
from .mollify import comb_sequence, default_schedule, min_mollifier_index
from .testfuncs import default_battery
from .transform import (
    DEFAULT_CERT_GRID,
    GridSpec,
    coprime_certificate_grid,
    fl_eval,
    grid_points,
    min_modulus_grid,
    pw_constants,
    refine_min_modulus,
    validate_certificate,
)
from .serialize import (
    comb_to_json,
    csv_text,
    dist_to_json,
    quadruple_from_json,
    quadruple_to_json,
    to_canonical_json,
)

__all__ = [
    "PipelineConfig",
    "RunResult",
    "run_approx",
    "run_sample",
    "run_transform",
    "run_invert",
    "run_verify",
    "DEFAULT_TRANSFORM_GRID",
]

DEFAULT_TRANSFORM_GRID = GridSpec(0j, 1.0, 101)


@dataclass(frozen=True)
class PipelineConfig:
    """One run's worth of settings; fixed seed implies byte-identical output.

    inputs: one or two Distributions (two for approx, one otherwise);
    schedule None means the per-input default; battery None means the
    standard twelve-member battery; grid None means the command default.
    """

    inputs: tuple
    k_values: tuple | None = None
    schedule: tuple | None = None
    battery: tuple | None = None
    grid: GridSpec | None = None
    seed: int = 0


@dataclass(frozen=True)
class RunResult:
    report: dict
    artifacts: dict  # filename -> text
    ok: bool


def _expect_inputs(config, low, high):
    n = len(config.inputs)
    if not (low <= n <= high):
        wanted = str(low) if low == high else f"{low} or {high}"
        raise InputError(f"expected {wanted} input distribution(s), got {n}")
    for d in config.inputs:
        if not isinstance(d, Distribution):
            raise InputError("inputs must be distributions")
    modes = {d.mode for d in config.inputs}
    if len(modes) > 1:
        raise ModeMismatchError("inputs mix exact and float scalar modes")
    return config.inputs


def _battery(config):
    battery = (
        list(config.battery) if config.battery is not None else default_battery()
    )
    if not battery:
        raise InputError("empty test-function battery")
    return battery


def _auto_window(dists):
    """Smallest integer k with every support hull strictly inside (-k, k)."""
    reach = Fraction(0)
    for d in dists:
        hull = support_hull(d)
        if hull is not None:
            reach = max(reach, hull[1], -hull[0])
    return int(math.floor(reach)) + 1


def _grid_json(grid):
    return {
        "center_re": grid.center.real,
        "center_im": grid.center.imag,
        "radius": grid.radius,
        "resolution": grid.resolution,
    }


def _diag_rows(steps):
    """Diagnostics CSV rows: (m, n, battery index, weak, mollify, riemann)."""
    rows = []
    for _, diag in steps:
        for i, weak, mol, rie in diag.rows:
            rows.append((diag.m, diag.n, i, weak, mol, rie))
    return rows


def _step_summaries(steps):
    return [
        {
            "m": diag.m,
            "n": diag.n,
            "max_weak": diag.max_weak,
            "max_mollify": diag.max_mollify,
            "max_riemann": diag.max_riemann,
        }
        for _, diag in steps
    ]


_DIAG_HEADER = (
    "m",
    "n",
    "battery_index",
    "weak_error",
    "mollify_error",
    "riemann_error",
)


# ---------------------------------------------------------------------------
# approx: two-stage density pipeline


def _stage1(d, label, k_sample, config, artifacts):
    """Sample one non-comb input into combs; returns (final comb, summary).

    The default schedule stops at two geometric steps: the final comb feeds
    the perturbation/Bezout stage, whose float residual gate needs centered
    degrees in the few-dozen range (deeper refinement belongs to `sample`,
    which never solves Bezout).
    """
    schedule = (
        [tuple(mn) for mn in config.schedule]
        if config.schedule is not None
        else default_schedule(d, k_sample, steps=2)
    )
    if not schedule:
        raise InputError("approx needs a nonempty sampling schedule")
    steps = comb_sequence(d, k_sample, schedule, battery=config.battery)
    artifacts[f"diagnostics_{label}.csv"] = csv_text(
        _DIAG_HEADER, _diag_rows(steps)
    )
    summary = {
        "schedule": [[m, n] for m, n in schedule],
        "min_m": min_mollifier_index(d, k_sample),
        "steps": _step_summaries(steps),
    }
    return steps[-1][0], summary


def _weak_error_table(t_dist, s_dist, quad, battery):
    """Per-battery stage-2 errors against the bound 2^-k * sup on [-L/n, L/n].

    The sup is sampled over the window intersected with each member's
    support, with the comb grid points added explicitly so the pairing's
    own evaluation points are always covered.
    """
    window = Fraction(quad.L, quad.n)
    t_k = comb_to_distribution(quad.t_k)
    s_k = comb_to_distribution(quad.s_k)
    diff_t = add(t_dist, scale(-1, t_k))
    diff_s = add(s_dist, scale(-1, s_k))
    grid_xs = tuple(
        float(Fraction(j, quad.n))
        for j in range(-quad.L, quad.L + 1)
    )
    cap = 2.0 ** (-quad.k)
    rows = []
    worst = 0.0
    all_within = True
    for i, psi in enumerate(battery):
        sup = psi.sup_abs(-float(window), float(window), extra_points=grid_xs)
        bound = cap * sup
        err_t = abs(pair(diff_t, psi))
        err_s = abs(pair(diff_s, psi))
        within = err_t <= bound and err_s <= bound
        all_within = all_within and within
        worst = max(worst, err_t, err_s)
        rows.append(
            {
                "battery_index": i,
                "t_error": err_t,
                "s_error": err_s,
                "bound": bound,
                "within": within,
            }
        )
    return rows, worst, all_within


def _combined_weak_errors(t, s, quad, battery):
    """Full two-stage errors |<T - T_k, psi>| against the original inputs."""
    t_k = comb_to_distribution(quad.t_k)
    s_k = comb_to_distribution(quad.s_k)
    diff_t = add(t, scale(-1, t_k))
    diff_s = add(s, scale(-1, s_k))
    return [
        {
            "battery_index": i,
            "t_error": abs(pair(diff_t, psi)),
            "s_error": abs(pair(diff_s, psi)),
        }
        for i, psi in enumerate(battery)
    ]


def run_approx(config):
    """Two-stage approximation: sample to combs, then perturb to unimodular.

    Stage 1 (skipped for order-0 inputs, which already are combs) samples
    each input along the schedule; stage 2 runs the perturbation/Bezout
    pipeline on the finest combs for every requested k.  ok is True iff
    every Bezout residual passes the 1e-9 gate.
    """
    t, s = _expect_inputs(config, 2, 2)
    if config.schedule is not None and not list(config.schedule):
        raise InputError("approx needs a nonempty sampling schedule")
    battery = _battery(config)
    ks = [int(k) for k in (config.k_values if config.k_values else (1,))]

    artifacts = {}
    stage1_report = None
    needs_sampling = max_order(t) > 0 or max_order(s) > 0
    if needs_sampling:
        if t.mode == MODE_EXACT:
            raise InputError(
                "inputs with derivative terms need the sampling stage, "
                "which runs in float mode only"
            )
        k_sample = _auto_window([t, s])
        stage1_report = {"k_sample": k_sample, "t": None, "s": None}
        finals = {}
        for label, d in (("t", t), ("s", s)):
            if max_order(d) == 0:
                finals[label] = comb_from_distribution(d)
            else:
                finals[label], summary = _stage1(
                    d, label, k_sample, config, artifacts
                )
                stage1_report[label] = summary
        t_comb, s_comb = finals["t"], finals["s"]
    else:
        t_comb = comb_from_distribution(t)
        s_comb = comb_from_distribution(s)

    n_common = math.lcm(t_comb.n, s_comb.n)
    t_comb = comb_from_distribution(comb_to_distribution(t_comb), n_common)
    s_comb = comb_from_distribution(comb_to_distribution(s_comb), n_common)
    t_dist = comb_to_distribution(t_comb)
    s_dist = comb_to_distribution(s_comb)

    stage2 = []
    all_pass = True
    for k in ks:
        quad = unimodular_approx_pair(t_comb, s_comb, k, seed=config.seed)
        weak_rows, worst, within = _weak_error_table(
            t_dist, s_dist, quad, battery
        )
        entry = {
            "k": k,
            "n": quad.n,
            "L": quad.L,
            "epsilon": quad.epsilon,
            "eps_prime": quad.eps_prime,
            "residual": quad.residual,
            "residual_pass": quad.residual <= RESIDUAL_GATE,
            "perturbation_distances": list(quad.perturbation_distances),
            "sum_distances": list(quad.sum_distances),
            "cofactor_degrees": list(quad.cofactor_degrees),
            "shifted_clusters": [
                {"re": c.real, "im": c.imag, "size": size}
                for c, size in quad.shifted_clusters
            ],
            "weak_errors": weak_rows,
            "max_weak_error": worst,
            "weak_bound_satisfied": within,
        }
        if needs_sampling:
            entry["combined_weak_errors"] = _combined_weak_errors(
                t, s, quad, battery
            )
        stage2.append(entry)
        all_pass = all_pass and quad.residual <= RESIDUAL_GATE
        artifacts[f"quadruple_k{k}.json"] = to_canonical_json(
            quadruple_to_json(quad)
        )

    report = {
        "kind": "approx-report",
        "mode": t.mode,
        "seed": config.seed,
        "residual_gate": RESIDUAL_GATE,
        "inputs": {"t": dist_to_json(t), "s": dist_to_json(s)},
        "comb_inputs": {
            "n": n_common,
            "t": comb_to_json(t_comb),
            "s": comb_to_json(s_comb),
        },
        "stage1": stage1_report,
        "stage2": stage2,
        "all_residuals_pass": all_pass,
    }
    artifacts["report.json"] = to_canonical_json(report)
    return RunResult(report=report, artifacts=artifacts, ok=all_pass)


# ---------------------------------------------------------------------------
# sample: stage 1 alone, with full diagnostics


def run_sample(config):
    """Mollify-and-sample one distribution along a schedule (float mode)."""
    (d,) = _expect_inputs(config, 1, 1)
    if d.mode == MODE_EXACT:
        raise InputError("sampling runs in float mode only")
    # the sample command reads the window bound from --k (auto when absent)
    k = int(config.k_values[0]) if config.k_values else _auto_window([d])
    schedule = (
        [tuple(mn) for mn in config.schedule]
        if config.schedule is not None
        else default_schedule(d, k)
    )
    steps = comb_sequence(d, k, schedule, battery=config.battery)
    artifacts = {
        "diagnostics.csv": csv_text(_DIAG_HEADER, _diag_rows(steps))
    }
    for comb, diag in steps:
        artifacts[f"comb_m{diag.m}_n{diag.n}.json"] = to_canonical_json(
            comb_to_json(comb)
        )
    report = {
        "kind": "sample-report",
        "mode": d.mode,
        "input": dist_to_json(d),
        "k": k,
        "min_m": min_mollifier_index(d, k),
        "schedule": [[m, n] for m, n in schedule],
        "steps": _step_summaries(steps),
    }
    artifacts["report.json"] = to_canonical_json(report)
    return RunResult(report=report, artifacts=artifacts, ok=True)


# ---------------------------------------------------------------------------
# transform: grids, certificates, zero diagnostics


def _transform_one(d, grid):
    cert = pw_constants(d)
    violations, max_ratio, worst = validate_certificate(
        d, cert, DEFAULT_CERT_GRID
    )
    coarse, coarse_arg = min_modulus_grid(d, grid)
    refined, refined_arg = refine_min_modulus(d, grid)
    cert_json = {
        "kind": "pw-certificate",
        "C": cert.C,
        "M": cert.M,
        "R": cert.R,
        "validation": {
            "grid": _grid_json(DEFAULT_CERT_GRID),
            "violations": violations,
            "max_ratio": max_ratio,
            "worst_re": worst.real if worst is not None else None,
            "worst_im": worst.imag if worst is not None else None,
        },
    }
    rows = []
    for z in grid_points(grid):
        value = fl_eval(d, z)
        rows.append((z.real, z.imag, value.real, value.imag, abs(value)))
    csv_body = csv_text(("re_z", "im_z", "re_fl", "im_fl", "abs_fl"), rows)
    summary = {
        "certificate": cert_json,
        "min_modulus": {
            "value": coarse,
            "re": coarse_arg.real,
            "im": coarse_arg.imag,
            "refined_value": refined,
            "refined_re": refined_arg.real,
            "refined_im": refined_arg.imag,
        },
    }
    return summary, csv_body, violations


def run_transform(config):
    """Evaluate transforms on a grid; emit CSV values and PW certificates.

    With two inputs, also reports the pointwise coprimality margin
    min over the grid of |T1^| + |T2^|.  ok is True iff every certificate
    validates with zero violations on the radius-4 grid.
    """
    dists = _expect_inputs(config, 1, 2)
    grid = config.grid if config.grid is not None else DEFAULT_TRANSFORM_GRID
    artifacts = {}
    summaries = []
    total_violations = 0
    for i, d in enumerate(dists):
        summary, csv_body, violations = _transform_one(d, grid)
        total_violations += violations
        summaries.append(summary)
        suffix = "" if i == 0 else f"_{i + 1}"
        artifacts[f"grid{suffix}.csv"] = csv_body
        artifacts[f"certificate{suffix}.json"] = to_canonical_json(
            summary["certificate"]
        )
    report = {
        "kind": "transform-report",
        "mode": dists[0].mode,
        "inputs": [dist_to_json(d) for d in dists],
        "grid": _grid_json(grid),
        "results": summaries,
        "violations": total_violations,
    }
    if len(dists) == 2:
        margin, arg = coprime_certificate_grid(dists[0], dists[1], grid)
        report["coprime_margin"] = {
            "value": margin,
            "re": arg.real,
            "im": arg.imag,
        }
    artifacts["report.json"] = to_canonical_json(report)
    return RunResult(
        report=report, artifacts=artifacts, ok=total_violations == 0
    )


# ---------------------------------------------------------------------------
# invert / verify


def run_invert(config):
    """Convolution inverse, or a NotInvertible value with the reason.

    inverse.json holds the bare inverse distribution (written only when one
    exists); the report always lands in report.json.
    """
    (d,) = _expect_inputs(config, 1, 1)
    result = invert(d)
    artifacts = {}
    if isinstance(result, NotInvertible):
        report = {
            "kind": "invert-report",
            "input": dist_to_json(d),
            "invertible": False,
            "reason": result.reason,
        }
    else:
        inverse_json = dist_to_json(result)
        report = {
            "kind": "invert-report",
            "input": dist_to_json(d),
            "invertible": True,
            "inverse": inverse_json,
        }
        artifacts["inverse.json"] = to_canonical_json(inverse_json)
    artifacts["report.json"] = to_canonical_json(report)
    return RunResult(report=report, artifacts=artifacts, ok=True)


def run_verify(quadruple):
    """Recompute the Bezout residual of a (possibly serialized) quadruple.

    ok is True iff the recomputed residual passes the 1e-9 gate; a stored
    residual is echoed for comparison but never trusted.
    """
    if isinstance(quadruple, dict):
        quad = quadruple_from_json(quadruple)
    elif isinstance(quadruple, UnimodularQuadruple):
        quad = quadruple
    else:
        raise InputError("verify expects a quadruple JSON object")
    recomputed = bezout_residual(quad.t_k, quad.s_k, quad.u_k, quad.v_k)
    ok = recomputed <= RESIDUAL_GATE
    report = {
        "kind": "verify-report",
        "mode": quad.mode,
        "k": quad.k,
        "L": quad.L,
        "n": quad.n,
        "stored_residual": quad.residual,
        "recomputed_residual": recomputed,
        "residual_gate": RESIDUAL_GATE,
        "ok": ok,
    }
    artifacts = {"report.json": to_canonical_json(report)}
    return RunResult(report=report, artifacts=artifacts, ok=ok)
