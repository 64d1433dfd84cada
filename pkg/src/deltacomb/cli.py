"""Command-line interface: a thin client over the service handlers.

Subcommands mirror the HTTP endpoints (approx, sample, transform, invert,
verify).  Inputs are distribution JSON files or inline JSON; the report is
printed to stdout and artifacts are written under --out when given.

Exit codes: 0 success; 2 validation failure (residual or certificate gate);
3 input error (bad flags, malformed JSON, unsupported values); 4 numerical
failure (non-convergence, exhausted perturbation budget).
"""

from __future__ import annotations

import argparse
import os
import sys

from pydantic import ValidationError

from .errors import InputError, NumericalError
from .serialize import error_json, json_loads_checked, to_canonical_json, write_text_atomic
from .service.handlers import (
    handle_approx,
    handle_invert,
    handle_sample,
    handle_transform,
    handle_verify,
)
from .service.models import (
    ApproxRequest,
    InvertRequest,
    SampleRequest,
    TransformRequest,
    VerifyRequest,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as InputError (exit code 3)."""

    def error(self, message):
        raise InputError(message)


def _build_parser():
    parser = _Parser(
        prog="deltacomb",
        description=(
            "Point-mass distribution algebra: unimodular approximation, "
            "mollified sampling, transforms, inverses."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs_help, max_inputs):
        p.add_argument(
            "--input",
            action="append",
            required=True,
            metavar="PATH|JSON",
            help=inputs_help,
        )
        p.add_argument(
            "--mode",
            choices=["exact", "float"],
            help="require this scalar mode on every input",
        )
        p.add_argument(
            "--out",
            metavar="DIR",
            help="write artifact files (report, quadruples, CSVs) here",
        )
        p.set_defaults(max_inputs=max_inputs)

    p = sub.add_parser(
        "approx",
        help="two-stage unimodular approximation of a distribution pair",
    )
    common(p, "the two inputs T and S (repeat the flag)", 2)
    p.add_argument(
        "--k",
        default="1",
        help="approximation index: an integer, a..b range, or comma list",
    )
    p.add_argument(
        "--schedule",
        metavar="m:n,...",
        help="sampling schedule as m:n pairs (default: geometric)",
    )
    p.add_argument("--seed", type=int, default=0, help="perturbation seed")

    p = sub.add_parser(
        "sample", help="mollify and Riemann-sample one distribution"
    )
    common(p, "the input distribution", 1)
    p.add_argument("--k", help="window bound (default: from the support)")
    p.add_argument("--schedule", metavar="m:n,...", help="as for approx")

    p = sub.add_parser(
        "transform",
        help="transform values on a grid plus growth certificates",
    )
    common(p, "one input, or two for a coprimality margin", 2)
    p.add_argument(
        "--grid",
        metavar="c,r,res",
        help="grid: center (complex), radius, resolution (default 0,1,101)",
    )

    p = sub.add_parser("invert", help="convolution inverse when one exists")
    common(p, "the input distribution", 1)

    p = sub.add_parser(
        "verify", help="recompute the Bezout residual of a saved quadruple"
    )
    common(p, "the quadruple JSON produced by approx", 1)

    return parser


def _load_json_arg(value):
    """Parse an --input value: inline JSON if it looks like it, else a path."""
    if value.lstrip().startswith("{"):
        return json_loads_checked(value, source="inline input")
    if not os.path.exists(value):
        raise InputError(f"input file not found: {value}")
    with open(value) as handle:
        text = handle.read()
    return json_loads_checked(text, source=value)


def _parse_k(value):
    """Accept '3', '1..5', or '1,3,5'."""
    value = value.strip()
    try:
        if ".." in value:
            lo_text, hi_text = value.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        if "," in value:
            return [int(part) for part in value.split(",")]
        return [int(value)]
    except ValueError:
        raise InputError(
            f"--k expects an integer, a..b range, or comma list, got {value!r}"
        ) from None


def _parse_schedule(value):
    """Parse 'm:n,m:n' into [[m, n], ...]; empty string means empty."""
    value = value.strip()
    if not value:
        return []
    pairs = []
    for part in value.split(","):
        try:
            m_text, n_text = part.split(":", 1)
            pairs.append([int(m_text), int(n_text)])
        except ValueError:
            raise InputError(
                f"--schedule expects m:n pairs separated by commas, got {part!r}"
            ) from None
    return pairs


def _parse_grid(value):
    parts = value.split(",")
    if len(parts) != 3:
        raise InputError(
            f"--grid expects center,radius,resolution, got {value!r}"
        )
    try:
        return {
            "center_re": complex(parts[0]).real,
            "center_im": complex(parts[0]).imag,
            "radius": float(parts[1]),
            "resolution": int(parts[2]),
        }
    except ValueError:
        raise InputError(f"could not parse --grid value {value!r}") from None


def _check_mode(args, dists):
    if args.mode is None:
        return
    for obj in dists:
        if isinstance(obj, dict) and obj.get("mode") != args.mode:
            raise InputError(
                f"--mode {args.mode} but an input declares "
                f"mode {obj.get('mode')!r}"
            )


def _dispatch(args):
    inputs = [_load_json_arg(v) for v in args.input]
    if len(inputs) > args.max_inputs:
        raise InputError(
            f"{args.command} takes at most {args.max_inputs} --input value(s)"
        )

    if args.command == "verify":
        return handle_verify(VerifyRequest.model_validate(inputs[0]))

    _check_mode(args, inputs)
    if args.command == "approx":
        if len(inputs) != 2:
            raise InputError("approx needs exactly two --input values")
        body = {
            "t": inputs[0],
            "s": inputs[1],
            "k": _parse_k(args.k),
            "seed": args.seed,
        }
        if args.schedule is not None:
            body["schedule"] = _parse_schedule(args.schedule)
        return handle_approx(ApproxRequest.model_validate(body))
    if args.command == "sample":
        body = {"input": inputs[0]}
        if args.k is not None:
            ks = _parse_k(args.k)
            if len(ks) != 1:
                raise InputError("sample takes a single --k value")
            body["k"] = ks[0]
        if args.schedule is not None:
            body["schedule"] = _parse_schedule(args.schedule)
        return handle_sample(SampleRequest.model_validate(body))
    if args.command == "transform":
        body = {"inputs": inputs}
        if args.grid is not None:
            body["grid"] = _parse_grid(args.grid)
        return handle_transform(TransformRequest.model_validate(body))
    if args.command == "invert":
        return handle_invert(InvertRequest.model_validate({"input": inputs[0]}))
    raise InputError(f"unknown command {args.command!r}")


def _write_artifacts(out_dir, artifacts):
    os.makedirs(out_dir, exist_ok=True)
    for name in sorted(artifacts):
        write_text_atomic(os.path.join(out_dir, name), artifacts[name])


def _first_validation_message(exc):
    errors = exc.errors()
    if not errors:
        return "invalid request"
    first = errors[0]
    where = ".".join(str(p) for p in first.get("loc", ()))
    message = first.get("msg", "invalid request")
    return f"{message} (at {where})" if where else message


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
        result = _dispatch(args)
    except ValidationError as exc:
        body = {
            "error": {
                "type": "ParseError",
                "message": _first_validation_message(exc),
            }
        }
        sys.stderr.write(to_canonical_json(body))
        return EXIT_INPUT
    except InputError as exc:
        sys.stderr.write(to_canonical_json(error_json(exc)))
        return EXIT_INPUT
    except NumericalError as exc:
        sys.stderr.write(to_canonical_json(error_json(exc)))
        return EXIT_NUMERICAL

    sys.stdout.write(to_canonical_json(result.report))
    if args.out:
        _write_artifacts(args.out, result.artifacts)
    return EXIT_OK if result.ok else EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
