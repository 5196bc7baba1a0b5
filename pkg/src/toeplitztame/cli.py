"""Command line interface: analyze, gtheta, thickness, independence,
semicocycle, odometer.

Reports are UTF-8 JSON on stdout (sorted keys, so identical inputs give
byte-identical output); diagnostics go to stderr.  Exit status 0 on
success, 1 with a structured error, 2 on inconclusive verdicts so CI can
tell the cases apart.  Sampling commands take an explicit seed; there is
no hidden randomness.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ParseError, ToeplitzError
from .extended_bratteli import DiagramSpec, essential_thickness, \
    find_double_path, thickness_census
from .gtheta import INCONCLUSIVE, tameness_verdict, to_dot
from .independence import synthesize_scheme, verify_patterns
from .odometer import OdometerHead, Scale, add_integer, head_index
from .semicocycle import (FullShift, SturmianFibonacci, build_d_stage,
                          build_f_family, build_level_family, default_zhat5,
                          default_zhat6, realize_prefix, toeplitz5_window)
from .substitution import parse_text, validate


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _fail(exc: ToeplitzError) -> int:
    _emit({"schema": 1, "error": {"code": exc.code, "message": str(exc)}})
    print(f"error[{exc.code}]: {exc}", file=sys.stderr)
    return 1


def _load_substitution(source: str):
    if source.strip().startswith("{"):
        return validate(json.loads(source))
    if source == "-":
        return parse_text(sys.stdin.read())
    with open(source, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return validate(json.loads(text))
    return parse_text(text)


def _parse_scale(spec: str) -> Scale:
    if spec.startswith("{"):
        return Scale.from_json(json.loads(spec))
    kind, _, arg = spec.partition(":")
    if kind == "constant":
        return Scale.constant(int(arg))
    if kind == "powers":
        return Scale.powers(int(arg))
    raise ParseError(f"cannot parse scale {spec!r} (use constant:N or powers:N)")


def _parse_range(spec: str) -> tuple[int, int]:
    lo, _, hi = spec.partition(":")
    return int(lo), int(hi)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args) -> int:
    report = tameness_verdict(_load_substitution(args.input))
    _emit(report.to_json())
    return 2 if report.verdict == INCONCLUSIVE else 0


def _cmd_gtheta(args) -> int:
    report = tameness_verdict(_load_substitution(args.input))
    if report.graph is None:
        _emit(report.to_json())
        return 2
    if args.dot:
        sys.stdout.write(to_dot(report.graph))
        return 0
    _emit({"schema": 1, "gtheta": report.graph.to_json(),
           "cycle_census": report.census.to_json()})
    return 0


def _cmd_thickness(args) -> int:
    spec = DiagramSpec.stationary(_load_substitution(args.input))
    k = essential_thickness(spec)
    census = thickness_census(spec, depth=args.depth)
    witness = None
    if k >= 2:
        witness = find_double_path(spec, k, max_power=args.max_power)
    _emit({
        "schema": 1,
        "essential_thickness": k,
        "census": {str(kk): {"classification": row["classification"],
                             "chain_counts": list(row["chain_counts"])}
                   for kk, row in census.items()},
        "double_path": None if witness is None else witness.to_json(),
    })
    if k >= 2 and witness is None:
        print("no double path found within max power; inconclusive",
              file=sys.stderr)
        return 2
    return 0


def _cmd_independence(args) -> int:
    theta = _load_substitution(args.input)
    scheme = synthesize_scheme(theta, max_power=args.max_power)
    if scheme is None:
        _emit({"schema": 1, "scheme": None,
               "note": f"no scheme found up to power {args.max_power}"})
        return 2
    report = verify_patterns(scheme, n_levels=args.n)
    _emit(report.to_json())
    return 0 if report.complete else 1


def _cmd_semicocycle(args) -> int:
    if args.action == "d-set":
        stage = build_d_stage(args.stage)
        _emit({"schema": 1, **stage.to_json()})
        return 0
    if args.action == "window":
        stage = build_d_stage(args.stage)
        depth = args.depth or 2 ** args.stage
        if args.zhat:
            digits = [int(x) for x in args.zhat.split(",")]
            digits += [digits[-1]] * (depth - len(digits))
            zhat = OdometerHead(Scale.powers(4), tuple(digits[:depth]))
        else:
            zhat = default_zhat5(depth)
        lo, hi = _parse_range(args.range)
        word = toeplitz5_window(zhat, lo, hi, stage)
        _emit({"schema": 1, "stage": args.stage, "depth": depth,
               "zhat": list(zhat.digits), "range": [lo, hi], "word": word})
        return 0
    if args.action == "realize":
        handle = FullShift() if args.lang == "full" else SturmianFibonacci()
        lf = build_level_family()
        fam = build_f_family(handle, args.n_max, args.horizon, lf)
        n = len(args.word)
        if args.word not in handle.words(n):
            from .errors import LanguageError
            raise LanguageError(f"{args.word!r} is not in the level-{n} language")
        # deepen the base point until the realization depth suffices
        from .errors import DepthError

        def base_point(depth):
            if not args.zhat:
                return default_zhat6(depth)
            digits = [int(x) for x in args.zhat.split(",")]
            digits += [digits[-1], 1 - digits[-1]] * depth  # keep non-constant
            return OdometerHead(Scale.constant(2), tuple(digits[:depth]))

        probe_depth = 8
        t_w = None
        while t_w is None:
            try:
                zhat = base_point(probe_depth)
                t_w, letters = realize_prefix(args.word, fam, lf, zhat)
            except DepthError:
                probe_depth *= 2
                if probe_depth > 1 << 22:
                    raise
        _emit({"schema": 1, "word": args.word, "t_w": t_w, "letters": letters,
               "zhat": args.zhat or "alternating-01", "depth": probe_depth,
               "times": [lf.time(k) for k in range(1, n + 1)],
               "family": fam.to_json()})
        return 0
    if args.action == "disjoint":
        from .semicocycle import check_translate_disjointness
        stage = build_d_stage(args.stage)
        report = check_translate_disjointness(stage, args.t_range, args.depth,
                                              args.samples, seed=args.seed)
        _emit(report)
        return 0 if not report["violations"] else 1
    raise ParseError(f"unknown semicocycle action {args.action!r}")


def _cmd_odometer(args) -> int:
    scale = _parse_scale(args.scale)
    digits = tuple(int(x) for x in args.digits.split(",")) if args.digits else ()
    head = OdometerHead(scale, digits)
    out = {"schema": 1, "scale": scale.to_json(), "digits": list(head.digits),
           "head_index": head_index(head)}
    if args.add is not None:
        shifted = add_integer(head, args.add)
        out["added"] = args.add
        out["result"] = list(shifted.digits)
        out["result_index"] = head_index(shifted)
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="toeplitztame",
        description="Tameness certificates for substitution and Toeplitz shifts.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=1,
                   help="parallelism bound (reserved; evaluation is sequential)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="full tameness pipeline, JSON report")
    sp.add_argument("input", help="substitution file, inline JSON, or - for stdin")
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("gtheta", help="subset graph and cycle census")
    sp.add_argument("input")
    sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    sp.set_defaults(func=_cmd_gtheta)

    sp = sub.add_parser("thickness", help="extended-diagram thickness census")
    sp.add_argument("input")
    sp.add_argument("--max-power", type=int, default=6)
    sp.add_argument("--depth", type=int, default=8)
    sp.set_defaults(func=_cmd_thickness)

    sp = sub.add_parser("independence",
                        help="synthesize and verify an independence scheme")
    sp.add_argument("input")
    sp.add_argument("--n", type=int, default=2, help="verify t_0..t_N")
    sp.add_argument("--max-power", type=int, default=6)
    sp.set_defaults(func=_cmd_independence)

    sp = sub.add_parser("semicocycle", help="the two counterexample families")
    act = sp.add_subparsers(dest="action", required=True)
    a = act.add_parser("d-set")
    a.add_argument("--stage", type=int, default=3)
    a = act.add_parser("window")
    a.add_argument("--stage", type=int, default=5)
    a.add_argument("--zhat", help="comma digits, last repeated (default all 2)")
    a.add_argument("--depth", type=int)
    a.add_argument("--range", default="0:16", help="inclusive lo:hi")
    a = act.add_parser("realize")
    a.add_argument("--lang", choices=["full", "sturmian"], required=True)
    a.add_argument("--word", required=True)
    a.add_argument("--n-max", type=int, default=6)
    a.add_argument("--horizon", type=int, default=4096)
    a.add_argument("--zhat", help="comma binary digits, extended alternately "
                                  "(default alternating 0,1)")
    a = act.add_parser("disjoint")
    a.add_argument("--stage", type=int, default=3)
    a.add_argument("--t-range", type=int, default=16)
    a.add_argument("--depth", type=int, default=12)
    a.add_argument("--samples", type=int, default=10000)
    a.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_semicocycle)

    sp = sub.add_parser("odometer", help="exact head arithmetic")
    sp.add_argument("--scale", required=True, help="constant:N, powers:N, or JSON")
    sp.add_argument("--digits", default="", help="comma separated, level 1 first")
    sp.add_argument("--add", type=int)
    sp.set_defaults(func=_cmd_odometer)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        return _fail(ParseError("--jobs must be >= 1"))
    try:
        return args.func(args)
    except ToeplitzError as exc:
        return _fail(exc)
    except OSError as exc:
        return _fail(ToeplitzError(str(exc), code="io"))
    except json.JSONDecodeError as exc:
        return _fail(ParseError(f"bad JSON input: {exc}"))


if __name__ == "__main__":
    sys.exit(main())
