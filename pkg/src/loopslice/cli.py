"""``loopslice`` command-line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import acceptance, branching, fibers, graded, lattice, slodowy
from .errors import LoopSliceError, SchemaError
from .exactnum.poly import poly_from_list

PRECISION_ENV = "LOOPSLICE_PRECISION"
EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_MATH = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    precision: int = lattice.DEFAULT_PRECISION
    seed: int = 0
    output: str = "text"

    def __post_init__(self):
        if self.precision < 2:
            raise SchemaError(f"precision must be at least 2, got {self.precision}")
        if self.output not in ("text", "json"):
            raise SchemaError(f"unknown output format {self.output!r}")
        if not (-(2**63) <= self.seed < 2**64):
            raise SchemaError("seed must fit in 64 bits")


def _resolve_precision(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(PRECISION_ENV)
    if env is None or env == "":
        return lattice.DEFAULT_PRECISION
    try:
        return int(env)
    except ValueError as exc:
        raise SchemaError(f"{PRECISION_ENV}={env!r} is not an integer") from exc


def _load_json(source: str):
    """``-`` reads stdin, an existing path reads the file, anything else is parsed as JSON text."""
    try:
        if source == "-":
            return json.load(sys.stdin)
        if os.path.exists(source):
            with open(source, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON input: {exc}") from exc


def _poly_arg(text: str):
    data = _load_json(text)
    if not isinstance(data, list) or not data:
        raise SchemaError("polynomials are ascending coefficient lists, e.g. [-1, 1]")
    try:
        return poly_from_list(data)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad polynomial coefficients {data!r}") from exc


def _fixture_pair() -> lattice.LatticePair:
    """Normal form with coweight (2, -1) for ``(n, m) = (2, 3)``."""
    return lattice.gl_normal_form_pair(lattice.Coweight((2, -1)), 3)


def _pair_arg(args) -> lattice.LatticePair:
    if getattr(args, "fixture", False):
        return _fixture_pair()
    if args.input is None:
        raise SchemaError("provide --input (JSON text, a file path, or '-') or --fixture")
    context = getattr(args, "context", None)
    return _parse(lambda: lattice.LatticePair.from_json(_load_json(args.input), context))


def _parse(build):
    """Report structural problems in decoded JSON as schema errors."""
    try:
        return build()
    except LoopSliceError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed input: {exc}") from exc


# command handlers return (json payload, text rendering, exit code)

def cmd_normal_form(args, cfg: RunConfig):
    pair = _pair_arg(args)
    if pair.context == lattice.OSP:
        cw, _, a, b = lattice.sp_so_reduce(pair.v, cfg.precision)
        nf = lattice.LatticePair.osp(lattice.osp_block_form(a, b, pair.n, pair.m))
        payload = {"context": "osp", "coweight": cw.to_json(), "a": a, "b": b, "normal_form": nf.to_json()}
        return payload, f"coweight {cw}\na = {tuple(a)}, b = {tuple(b)}", EXIT_OK
    cw, _ = lattice.gl_normal_form(pair, cfg.precision)
    nf = lattice.gl_normal_form_pair(cw, pair.m)
    payload = {"context": "gl", "coweight": cw.to_json(), "normal_form": nf.to_json()}
    return payload, f"coweight {cw}", EXIT_OK


def cmd_orbit_index(args, cfg: RunConfig):
    pair = _pair_arg(args)
    if pair.context == lattice.OSP:
        cw = lattice.sp_so_normal_form(pair, cfg.precision)
    else:
        cw = lattice.orbit_index(pair, cfg.precision)
    return {"coweight": cw.to_json()}, f"coweight {cw}", EXIT_OK


def cmd_slice(args, cfg: RunConfig):
    chart = slodowy.build_slice_chart(args.n, args.m)
    summary = slodowy.chart_summary(chart)
    width = max(len(s) for row in summary["matrix"] for s in row)
    lines = [" ".join(s.rjust(width) for s in row) for row in summary["matrix"]]
    lines.append("grading: " + ", ".join(f"{k}={v}" for k, v in summary["grading"].items()))
    lines.append(f"dimension: {summary['dimension']}")
    return summary, "\n".join(lines), EXIT_OK


def cmd_invariants(args, cfg: RunConfig):
    point = _parse(lambda: slodowy.SlicePoint.from_json(_load_json(args.input)))
    inv = fibers.invariant_map(point)
    return inv.to_json(), f"f = {inv.f}\ng = {inv.g}", EXIT_OK


def cmd_fiber(args, cfg: RunConfig):
    desc = fibers.fiber(_poly_arg(args.f), _poly_arg(args.g))
    text = f"stratum: {desc.stratum}\nstructure: {desc.structure}\npoint: {desc.point_str()}"
    return desc.to_json(), text, EXIT_OK


def cmd_stalk(args, cfg: RunConfig):
    stalk = graded.stalk_ic(args.n, args.m)
    coker, ker = graded.cone_of_c1(args.n, args.m)
    remainder = graded.decomposition_remainder(args.n, args.m)
    payload = {
        "n": args.n,
        "m": args.m,
        "stalk": stalk.to_json(),
        "coker": coker.to_json(),
        "ker": ker.to_json(),
        "remainder_shifts": remainder,
    }
    text = f"stalk: {stalk.to_json()}\nremainder shifts: {remainder}"
    return payload, text, EXIT_OK


def cmd_branch(args, cfg: RunConfig):
    weight = branching.DominantWeight.parse(args.weight)
    if weight.rank != args.m:
        raise LoopSliceError(f"weight {weight} has length {weight.rank} but --m is {args.m}")
    res = branching.graded_restriction(weight, args.n)
    payload = {"m": args.m, "weight": weight.to_json(), **res.to_json()}
    return payload, str(res), EXIT_OK


def cmd_algebra_check(args, cfg: RunConfig):
    rep = graded.gl1_algebra_report(args.m, args.order, args.rank)
    payload = {
        "m": args.m,
        "ok": rep.ok,
        "euler_expansion": rep.euler_ok,
        "first_mismatch": rep.first_mismatch,
        "free_series": [[d, c] for d, c in rep.free_series.items()],
        "module_series": [[d, c] for d, c in rep.module_series.items()],
    }
    text = "series agree" if rep.first_mismatch is None else f"first mismatch at degree {rep.first_mismatch}"
    text += f"\neuler expansion {'holds' if rep.euler_ok else 'FAILS'}"
    return payload, text, EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_all(args, cfg: RunConfig):
    results = acceptance.run_all(cfg.seed, cfg.precision, args.only)
    ok = all(r.passed for r in results)
    lines = []
    for r in results:
        lines.append(r.line())
        lines.extend(f"      {d}" for d in r.details)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    payload = {"seed": cfg.seed, "passed": ok, "criteria": [r.to_json() for r in results]}
    return payload, "\n".join(lines), EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from overwriting flags given before it
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help=f"working t-adic precision (default 8, or ${PRECISION_ENV})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="default 0")
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS, help="default text")

    parser = argparse.ArgumentParser(prog="loopslice", parents=[common],
                                     description="Exact computations on loop-group lattices and slices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(handler=handler)
        return p

    for name, handler, help_ in (
        ("normal-form", cmd_normal_form, "reduce a lattice pair to normal form"),
        ("orbit-index", cmd_orbit_index, "coweight of a lattice pair"),
    ):
        p = add(name, handler, help_)
        p.add_argument("--input", help="JSON text, a file path, or '-' for stdin")
        p.add_argument("--context", choices=("gl", "osp"), default=None)
        p.add_argument("--fixture", action="store_true", help="use the (2, -1) normal form for (n, m) = (2, 3)")

    p = add("slice", cmd_slice, "show the slice chart")
    p.add_argument("action", choices=("show",))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("invariants", cmd_invariants, "invariant polynomials of a slice point")
    p.add_argument("--input", required=True)

    p = add("fiber", cmd_fiber, "a point over (f, g)")
    p.add_argument("--f", required=True, help="ascending coefficients, e.g. '[-1,1]'")
    p.add_argument("--g", required=True)

    p = add("stalk", cmd_stalk, "graded stalk dimensions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("branch", cmd_branch, "graded restriction GL_m -> GL_n")
    p.add_argument("--weight", required=True, help="e.g. '[1,0,0]'")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("algebra-check", cmd_algebra_check, "series identity for the n=1 algebra")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", type=int, default=30)
    p.add_argument("--rank", type=int, default=None)

    p = add("verify-all", cmd_verify_all, "run the acceptance suite")
    p.add_argument("--only", type=int, nargs="*", choices=sorted(acceptance.CRITERIA), default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            _resolve_precision(getattr(args, "precision", None)),
            getattr(args, "seed", 0),
            getattr(args, "output", "text"),
        )
        payload, text, code = args.handler(args, cfg)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except LoopSliceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    if cfg.output == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
