"""Command-line front end: calibrate, eval, table, map, check.

Exit codes: 0 success, 1 evaluation/domain/usage error, 2 calibration
failure, 3 output I/O failure.  Identical invocations produce
byte-identical output: doubles print as shortest round-trip decimals,
wider precisions with explicit digit counts.

Calibration constants are computed lazily and cached under
``$SUPEREXP_CACHE_DIR`` (default ``~/.cache/superexp``), keyed by the
calibration precision tier; ``--no-cache`` recomputes and skips the
file entirely.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import statistics
import sys
from typing import Optional

import mpmath
from mpmath import mp

from .errors import SuperexpError
from .evaluators import (
    A1,
    A3,
    F1,
    F3,
    CalibrationConstants,
    EvalContext,
    calibrate,
    default_constants,
)
from .iteration import (
    AGREEMENT_KINDS,
    GRID_FUNCTIONS,
    GridSpec,
    IterateRequest,
    _error_code,
    agreement,
    exp_iterate,
    grid_to_csv,
    grid_to_json,
    map_grid,
)
from .limits import PrecisionConfig, _printed, _value_bits, convergence_table, records_to_csv

__all__ = ["CliConfig", "main"]

OK, EVAL_ERROR, CALIBRATION_ERROR, IO_ERROR = 0, 1, 2, 3

_CACHE_ENV = "SUPEREXP_CACHE_DIR"

# table presets reproducing the published comparison columns
_TABLE_DEFAULT_ARGS = {"levy": (-1.0, 1.0), "fatou1": (-1.0,)}


@dataclasses.dataclass(frozen=True)
class CliConfig:
    """Resolved common flags; ctx override fields stay None when unset."""

    precision_bits: int = 53
    output_format: str = "text"
    output_path: Optional[str] = None
    no_cache: bool = False
    abel_tail_terms: Optional[int] = None
    superexp_terms: Optional[int] = None
    abel_disk_radius: Optional[float] = None
    superexp_re_threshold: Optional[float] = None
    max_recursion: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    # usage problems are domain errors (1), not calibration failures (2)
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EVAL_ERROR)


# flags whose values may start with "-" (ranges, negative seeds); argparse
# only accepts those in --flag=value form, so pre-join the spellings with
# a separate token
_VALUE_FLAGS = ("--x", "--y", "--n", "--c", "--args", "--seed-x1", "--seed-x3")


def _normalize_argv(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _fail(message: str, code: int = EVAL_ERROR) -> int:
    sys.stderr.write(f"superexp: {message}\n")
    return code


def _config(args, default_bits: int = 53, default_format: str = "text") -> CliConfig:
    bits = args.precision_bits if args.precision_bits is not None else default_bits
    if bits < 53:
        sys.stderr.write("superexp: --precision-bits must be at least 53\n")
        raise SystemExit(EVAL_ERROR)
    return CliConfig(
        precision_bits=bits,
        output_format=args.format if args.format is not None else default_format,
        output_path=args.out,
        no_cache=args.no_cache,
        abel_tail_terms=args.abel_terms,
        superexp_terms=args.superexp_terms,
        abel_disk_radius=args.abel_radius,
        superexp_re_threshold=args.re_threshold,
        max_recursion=args.max_recursion,
    )


def _context(cfg: CliConfig) -> EvalContext:
    kwargs = {"precision": PrecisionConfig(mantissa_bits=cfg.precision_bits)}
    for flag, field in (
        ("abel_tail_terms", "abel_tail_terms"),
        ("superexp_terms", "superexp_terms"),
        ("abel_disk_radius", "abel_disk_radius"),
        ("superexp_re_threshold", "superexp_re_threshold"),
        ("max_recursion", "max_recursion"),
    ):
        value = getattr(cfg, flag)
        if value is not None:
            kwargs[field] = value
    return EvalContext(**kwargs)


def _cache_dir() -> str:
    override = os.environ.get(_CACHE_ENV)
    if override:
        return override
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache"
    )
    return os.path.join(base, "superexp")


def _calibration_tier(bits: int) -> int:
    needed = max(192, bits + 16)
    return -(-needed // 64) * 64


def _constants(cfg: CliConfig) -> CalibrationConstants:
    tier = _calibration_tier(cfg.precision_bits)
    path = os.path.join(_cache_dir(), f"constants-{tier}.json")
    if not cfg.no_cache:
        try:
            with open(path, encoding="ascii") as fh:
                payload = json.load(fh)
            if int(payload.get("bits", 0)) == tier:
                return CalibrationConstants.from_decimal_dict(payload)
        except (OSError, ValueError, KeyError):
            pass  # unreadable or stale cache: recompute below
    constants = default_constants(cfg.precision_bits)
    if not cfg.no_cache:
        try:
            os.makedirs(_cache_dir(), exist_ok=True)
            with open(path, "w", encoding="ascii") as fh:
                json.dump(constants.as_decimal_dict(), fh)
        except OSError:
            pass  # cache is best effort; the value is already in hand
    return constants


def _emit(text: str, path: Optional[str]) -> int:
    if path is None:
        sys.stdout.write(text)
        return OK
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(f"cannot write {path}: {exc}", IO_ERROR)
    return OK


def _parse_complex(text: str) -> complex:
    re, _, im = text.partition(",")
    try:
        return complex(float(re), float(im) if im else 0.0)
    except ValueError:
        raise SystemExit(_fail(f"bad complex value {text!r}; use re or re,im"))


def _parse_span(text: str, flag: str):
    lo, sep, hi = text.partition(":")
    if sep:
        try:
            return float(lo), float(hi)
        except ValueError:
            pass
    raise SystemExit(_fail(f"bad {flag} range {text!r}; use lo:hi"))


def _parse_n_list(text: str):
    if text == "":
        return []
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            return [int(lo)]
        a, b = int(lo), int(hi)
    except ValueError:
        raise SystemExit(_fail(f"bad --n range {text!r}; use first:last"))
    if a > b:
        raise SystemExit(_fail(f"--n range {text!r} is descending"))
    return list(range(a, b + 1))


def _format_parts(value, bits: int):
    """Round-trip decimals at 53 bits, counted digits beyond."""
    if bits == 53:
        v = complex(value)
        return repr(v.real), repr(v.imag)
    digits = mpmath.libmp.prec_to_dps(bits) + 3
    with mp.workprec(bits):
        v = mpmath.mpmathify(value)
        return (
            mpmath.nstr(mpmath.re(v), digits),
            mpmath.nstr(mpmath.im(v), digits),
        )


# -- calibrate ------------------------------------------------------------

def _cmd_calibrate(args) -> int:
    cfg = _config(args)
    try:
        if args.seed_x1 is not None or args.seed_x3 is not None:
            # explicit seeds bypass the cache: the result may differ
            ctx = _context(cfg)
            constants = calibrate(ctx, seed_x1=args.seed_x1, seed_x3=args.seed_x3)
        else:
            constants = _constants(cfg)
    except SuperexpError as exc:
        return _fail(f"calibration failed: {exc}", CALIBRATION_ERROR)
    payload = constants.as_decimal_dict()
    if cfg.output_format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg.output_format == "csv":
        lines = ["name,value"] + [f"{k},{v}" for k, v in payload.items()]
        text = "\n".join(lines) + "\n"
    else:
        digits = mpmath.libmp.prec_to_dps(cfg.precision_bits)
        with mp.workprec(constants.bits):
            rows = [
                ("x1", mpmath.nstr(constants.x1, digits)),
                ("x3", mpmath.nstr(constants.x3, digits)),
                ("a1_norm", mpmath.nstr(constants.a1_norm, digits)),
                ("a3_norm", mpmath.nstr(constants.a3_norm, digits)),
                ("period_t1_imag", mpmath.nstr(constants.period_t1.imag, digits)),
                ("bits", str(constants.bits)),
            ]
        text = "\n".join(f"{k} = {v}" for k, v in rows) + "\n"
    return _emit(text, cfg.output_path)


# -- eval -----------------------------------------------------------------

def _cmd_eval(args) -> int:
    cfg = _config(args)
    ctx = _context(cfg)
    z = complex(args.re, args.im)
    err = None
    value = None
    try:
        constants = _constants(cfg)
        if args.fn == "expc":
            if args.c is None:
                return _fail("eval expc requires --c")
            request = IterateRequest(
                _parse_complex(args.c), z, args.branch, args.cut_side or "above"
            )
            value = exp_iterate(request, ctx, constants)
        else:
            fn = {"F1": F1, "F3": F3, "A1": A1, "A3": A3}[args.fn]
            value = fn(z, ctx, constants, cut_side=args.cut_side)
    except SuperexpError as exc:
        err = _error_code(exc)
        if cfg.output_format == "text":
            return _fail(f"{type(exc).__name__}: {exc}")
    if cfg.output_format == "text":
        re_s, im_s = _format_parts(value, cfg.precision_bits)
        return _emit(f"{re_s} {im_s}\n", cfg.output_path)
    if err is None:
        re_s, im_s = _format_parts(value, cfg.precision_bits)
    if cfg.output_format == "csv":
        row = f"{re_s},{im_s}," if err is None else f",,{err}"
        code = _emit(f"re,im,err\n{row}\n", cfg.output_path)
    else:
        # doubles round-trip as JSON numbers; wider values stay decimal strings
        if err is not None:
            re_out = im_out = None
        elif cfg.precision_bits == 53:
            re_out, im_out = float(re_s), float(im_s)
        else:
            re_out, im_out = re_s, im_s
        payload = {
            "fn": args.fn,
            "x": args.re,
            "y": args.im,
            "re": re_out,
            "im": im_out,
            "err": err,
        }
        code = _emit(json.dumps(payload) + "\n", cfg.output_path)
    return code if err is None else max(code, EVAL_ERROR)


# -- table ----------------------------------------------------------------

def _cmd_table(args) -> int:
    # published tables need deep orbits; default to a comfortably wide
    # working precision rather than doubles
    cfg = _config(args, default_bits=256, default_format="text")
    method = {"fatou": "fatou1"}.get(args.method, args.method)
    ns = _parse_n_list(args.n)
    if args.args is not None:
        try:
            params = tuple(float(tok) for tok in args.args.split(",") if tok)
        except ValueError:
            return _fail(f"bad --args list {args.args!r}")
    elif method in _TABLE_DEFAULT_ARGS:
        params = _TABLE_DEFAULT_ARGS[method]
    else:
        return _fail(f"table {args.method} requires --args")
    try:
        records = convergence_table(
            method, params, ns, PrecisionConfig(mantissa_bits=cfg.precision_bits)
        )
    except (ValueError, SuperexpError) as exc:
        return _fail(str(exc))
    if cfg.output_format == "csv":
        return _emit(records_to_csv(records), cfg.output_path)
    if cfg.output_format == "json":
        rows = []
        for rec in records:
            if rec.error is not None:
                rows.append(
                    {"method": rec.method, "n": rec.n, "value": None,
                     "printed": None, "error": rec.error}
                )
                continue
            digits = mpmath.libmp.prec_to_dps(_value_bits(rec.value)) + 3
            value = mpmath.nstr(
                rec.value, digits, strip_zeros=True, min_fixed=1, max_fixed=0
            ).replace(" ", "")
            rows.append(
                {
                    "method": rec.method,
                    "n": rec.n,
                    "value": value,
                    "printed": _printed(rec.method, rec.n, rec.value),
                    "error": None,
                }
            )
        return _emit(json.dumps(rows) + "\n", cfg.output_path)
    lines = [
        f"{rec.n} {rec.error if rec.error is not None else _printed(rec.method, rec.n, rec.value)}"
        for rec in records
    ]
    return _emit("".join(line + "\n" for line in lines), cfg.output_path)


# -- map ------------------------------------------------------------------

def _grid_spec(args) -> GridSpec:
    x_min, x_max = _parse_span(args.x, "--x")
    y_min, y_max = _parse_span(args.y, "--y")
    try:
        return GridSpec(x_min, x_max, y_min, y_max, args.nx, args.ny, args.cut_side)
    except ValueError as exc:
        raise SystemExit(_fail(str(exc)))


def _cmd_map(args) -> int:
    cfg = _config(args, default_format="csv")
    grid = _grid_spec(args)
    c = _parse_complex(args.c) if args.c is not None else None
    try:
        result = map_grid(
            args.fn, grid, _context(cfg), _constants(cfg), c=c, branch=args.branch
        )
    except ValueError as exc:
        return _fail(str(exc))
    if cfg.output_format == "json":
        return _emit(grid_to_json(result) + "\n", cfg.output_path)
    return _emit(grid_to_csv(result), cfg.output_path)


# -- check ----------------------------------------------------------------

def _cmd_check(args) -> int:
    cfg = _config(args)
    grid = _grid_spec(args)
    ctx = _context(cfg)
    constants = _constants(cfg)
    xs, ys = grid.xs(), grid.ys()
    cells = []
    for y in ys:
        for x in xs:
            d = agreement(
                args.kind, complex(x, y), ctx, constants,
                clip=args.clip, cut_side=grid.cut_side,
            )
            cells.append((x, y, d))
    finite = [d for _, _, d in cells if d == d]  # NaN-free subset
    summary = {
        "min": min(finite) if finite else None,
        "median": statistics.median(finite) if finite else None,
        "fraction_ge_14": sum(1 for d in finite if d >= 14.0) / len(cells),
        "unavailable": len(cells) - len(finite),
    }
    if cfg.output_format == "json":
        payload = {
            "kind": args.kind,
            "nx": grid.nx,
            "ny": grid.ny,
            "x_min": grid.x_min,
            "x_max": grid.x_max,
            "y_min": grid.y_min,
            "y_max": grid.y_max,
            "samples": [
                {"x": x, "y": y, "d": None if d != d else d} for x, y, d in cells
            ],
            "summary": summary,
        }
        return _emit(json.dumps(payload) + "\n", cfg.output_path)
    if cfg.output_format == "csv":
        lines = ["x,y,d"]
        lines += [f"{x!r},{y!r},{'' if d != d else repr(d)}" for x, y, d in cells]
        lines += [f"# {key}={value!r}" for key, value in summary.items()]
        return _emit("\n".join(lines) + "\n", cfg.output_path)
    text = "".join(f"{key} {value!r}\n" for key, value in summary.items())
    return _emit(text, cfg.output_path)


# -- parser ---------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision-bits", type=int, default=None,
                   help="working mantissa bits (default 53; tables 256)")
    p.add_argument("--format", choices=("csv", "json", "text"), default=None)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--no-cache", action="store_true",
                   help="ignore and do not write the calibration cache")
    p.add_argument("--abel-terms", type=int, default=None,
                   help="override Abel tail term count")
    p.add_argument("--superexp-terms", type=int, default=None,
                   help="override asymptotic polynomial count")
    p.add_argument("--abel-radius", type=float, default=None,
                   help="override expansion disk radius")
    p.add_argument("--re-threshold", type=float, default=None,
                   help="override direct-summation real-part threshold")
    p.add_argument("--max-recursion", type=int, default=None,
                   help="override the orbit recursion cap")


def _build_parser() -> _Parser:
    parser = _Parser(prog="superexp",
                     description="Super-exponentials and super-logarithms "
                                 "to base e^(1/e)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="solve for the calibration constants")
    _add_common(p)
    p.add_argument("--seed-x1", type=float, default=None,
                   help="override the x1 root-finder seed")
    p.add_argument("--seed-x3", type=float, default=None,
                   help="override the x3 root-finder seed")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("eval", help="evaluate one function at one point")
    _add_common(p)
    p.add_argument("fn", choices=GRID_FUNCTIONS)
    p.add_argument("re", type=float)
    p.add_argument("im", type=float, nargs="?", default=0.0)
    p.add_argument("--cut-side", choices=("above", "below"), default=None,
                   help="side resolving on-cut arguments (omit = strict)")
    p.add_argument("--c", default=None, help="iteration count re[,im] for expc")
    p.add_argument("--branch", choices=("lower", "upper"), default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("table", help="convergence table of a limit estimator")
    _add_common(p)
    p.add_argument("method", choices=("levy", "fatou", "fatou1", "fatou2", "newton"))
    p.add_argument("--n", required=True,
                   help="inclusive orbit range first:last (empty for none)")
    p.add_argument("--args", default=None,
                   help="estimator arguments, comma separated "
                        "(defaults: levy -1,1; fatou -1)")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("map", help="sample a function over a grid")
    _add_common(p)
    p.add_argument("fn", choices=GRID_FUNCTIONS)
    p.add_argument("--x", required=True, help="x span lo:hi")
    p.add_argument("--y", required=True, help="y span lo:hi")
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--cut-side", choices=("above", "below"), default="above")
    p.add_argument("--c", default=None, help="iteration count re[,im] for expc")
    p.add_argument("--branch", choices=("lower", "upper"), default=None)
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("check", help="agreement diagnostic over a grid")
    _add_common(p)
    p.add_argument("kind", choices=AGREEMENT_KINDS)
    p.add_argument("--x", required=True, help="x span lo:hi")
    p.add_argument("--y", required=True, help="y span lo:hi")
    p.add_argument("--nx", type=int, default=41)
    p.add_argument("--ny", type=int, default=41)
    p.add_argument("--cut-side", choices=("above", "below"), default="above")
    p.add_argument("--clip", type=float, default=16.0,
                   help="digit ceiling reported for exact agreement")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(_normalize_argv(list(argv)))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
