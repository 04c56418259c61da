"""Command-line front end: run several transforms side by side on one sequence.

Example::

    seqaccel --series "euler_2f0(3)" --transform aitken \\
        --transform D:rule=d --transform epsilon --n 30

Each ``--transform`` takes an id and optional ``key=value`` parameters after a
colon, e.g. ``L:rule=u,beta=0.5``. Global ``--beta``/``--gamma``/... flags set
the defaults that per-transform parameters override.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import epsilon_aitken as ea
from . import interpolation as ip
from . import levin_like as ll
from . import theta_like as th
from .kernel import BINARY64, BINARY128, Precision, SequencePoint, Transformer
from .series_lab import SeriesSpec, double_factorial_ratio, series_from_name

__all__ = [
    "TransformSpec",
    "RunConfig",
    "Cell",
    "Row",
    "ResultTable",
    "CheckResult",
    "UsageError",
    "InputError",
    "parse_transform",
    "build_transformer",
    "run",
    "check",
    "render_table",
    "render_json",
    "main",
]

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

TAINT_MARK = "*"


class UsageError(ValueError):
    """Bad flags, unknown ids or parameter violations (exit status 2)."""


class InputError(ValueError):
    """Unreadable or malformed input data (exit status 3)."""


ALIASES = {
    "levin": "L", "weniger": "S", "drummond": "D", "w_standard": "w",
    "iterated_aitken": "aitken", "wynn_epsilon": "epsilon", "wynn_rho": "rho",
    "J": "j", "Theta": "big_theta", "modified_theta": "theta_mod",
    "Lambda_linear": "Lambda",
}

# id -> accepted parameter keys
TRANSFORM_KEYS: dict[str, frozenset] = {
    "epsilon": frozenset(),
    "aitken": frozenset(),
    "richardson": frozenset({"points", "beta", "alpha"}),
    "sidi_r": frozenset({"points", "beta", "alpha", "rule"}),
    "rho": frozenset({"points", "beta", "alpha"}),
    "w": frozenset({"points", "beta", "alpha"}),
    "L": frozenset({"rule", "beta", "ell"}),
    "S": frozenset({"rule", "beta", "ell"}),
    "M": frozenset({"rule", "gamma", "ell"}),
    "D": frozenset({"rule"}),
    "Lambda": frozenset({"beta"}),
    "F": frozenset({"alpha"}),
    "P": frozenset({"zeta"}),
    "theta": frozenset(),
    "theta_mod": frozenset(),
    "big_theta": frozenset({"points", "beta", "alpha"}),
    "j": frozenset(),
    "B": frozenset(),
    "C": frozenset(),
    "lambda": frozenset({"beta"}),
    "sigma": frozenset({"alpha"}),
    "mu": frozenset({"zeta"}),
}

_DEFAULT_POINTS = {"richardson": "reciprocal", "sidi_r": "reciprocal", "rho": "linear",
                   "w": "linear", "big_theta": "linear"}
OMEGA_RULES = ("u", "t", "d", "v", "stieltjes", "dfact")


@dataclass(frozen=True)
class TransformSpec:
    """One requested column: a transform id plus explicit parameters."""

    id: str
    params: tuple = ()
    label: str = ""

    def get(self, key: str, default=None):
        return dict(self.params).get(key, default)


@dataclass
class RunConfig:
    """Everything a run needs.

    ``series`` is a :class:`SeriesSpec` or None for external data, in which
    case ``values`` holds the numbers read from the input (terms unless
    ``values_are_sums``). ``align="order"`` places lookahead transforms
    (d/v rules, difference-based points) on the row of their superscript-0
    order instead of on the row of the last consumed sample.
    """

    series: Optional[SeriesSpec] = None
    transforms: list = field(default_factory=list)
    max_n: int = 20
    precision: Precision = BINARY64
    output: str = "table"
    reference: Optional[str] = None
    beta: str = "1"
    gamma: str = "17"
    alpha: str = "1"
    zeta: str = "1"
    ell: int = 0
    omega_rule: str = "u"
    points: Optional[str] = None
    align: str = "prefix"
    values: Optional[list] = None
    values_are_sums: bool = False
    source: str = "external"

    def validate(self) -> None:
        if self.max_n < 0:
            raise UsageError("--n must be non-negative")
        if self.output not in ("table", "json"):
            raise UsageError(f"unknown output format {self.output!r}")
        if self.align not in ("prefix", "order"):
            raise UsageError(f"unknown alignment {self.align!r}")
        if not self.transforms:
            raise UsageError("at least one --transform is required")
        if self.series is None and self.values is None:
            raise UsageError("give --series or --input")
        for spec in self.transforms:
            build_transformer(spec, self, SeriesContext(self.series))


@dataclass(frozen=True)
class Cell:
    id: str
    value: Any
    k: Optional[int]
    n: Optional[int]
    tainted: bool


@dataclass(frozen=True)
class Row:
    n: int
    s: Any
    cells: tuple


@dataclass
class ResultTable:
    series: str
    params: dict
    rows: list
    reference: Optional[tuple]  # (value, provenance)
    precision: Precision = BINARY64

    def column(self, label: str) -> list:
        return [c for r in self.rows for c in r.cells if c.id == label]


@dataclass
class CheckResult:
    passed: bool
    lines: list


def parse_transform(text: str) -> TransformSpec:
    """Parse ``id`` or ``id:key=value,key=value``."""
    name, _, rest = text.partition(":")
    name = name.strip()
    tid = ALIASES.get(name, name)
    if tid not in TRANSFORM_KEYS:
        raise UsageError(f"unknown transform {name!r}; known: {', '.join(TRANSFORM_KEYS)}")
    params = []
    if rest.strip():
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            key, val = key.strip(), val.strip()
            if not eq or not key or not val:
                raise UsageError(f"transform {name!r}: malformed parameter {item!r}")
            if key not in TRANSFORM_KEYS[tid]:
                allowed = ", ".join(sorted(TRANSFORM_KEYS[tid])) or "none"
                raise UsageError(f"transform {name!r} does not take {key!r} (accepts: {allowed})")
            params.append((key, val))
    return TransformSpec(tid, tuple(params), text.strip())


class SeriesContext:
    """Lazy series-dependent data needed by some rules (Stieltjes moments)."""

    def __init__(self, series: Optional[SeriesSpec]):
        self.series = series


def _number(text: str, what: str) -> Fraction:
    """Parse a decimal or a ratio such as ``1/2`` without rounding."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be a finite number or ratio, got {text!r}") from None


def _exactish(text: str, prec: Precision, what: str):
    return prec.convert(_number(text, what))


def _points(spec: TransformSpec, cfg: RunConfig, prec: Precision, sums=None):
    kind = spec.get("points", cfg.points or _DEFAULT_POINTS[spec.id])
    beta = _number(spec.get("beta", cfg.beta), "beta")
    alpha_text = spec.get("alpha", cfg.alpha)
    if kind == "explicit":
        raise UsageError("explicit interpolation points are not available from the command line")
    if alpha_text == "auto":
        if sums is None:
            alpha = 1.0  # validation pass only
        else:
            m = min(12, len(sums) - 1)
            if m < 2:
                raise InputError("--alpha auto needs at least 3 partial sums")
            alpha = ip.beleznay_alpha_search(sums, m=m, beta=beta, precision=prec)
            if alpha is None:
                raise InputError("--alpha auto: every grid candidate was tainted")
    else:
        alpha = _number(alpha_text, "alpha")
    try:
        return ip.PointFamily(kind, beta=beta, alpha=alpha)
    except ValueError as exc:
        raise UsageError(f"{spec.label}: {exc}") from None


def _remainder(spec: TransformSpec, cfg: RunConfig, ctx: SeriesContext):
    rule = spec.get("rule", cfg.omega_rule)
    if rule not in OMEGA_RULES:
        raise UsageError(f"{spec.label}: unknown remainder rule {rule!r}; known: {', '.join(OMEGA_RULES)}")
    beta = _number(spec.get("beta", cfg.beta), "beta")
    gamma = _number(spec.get("gamma", cfg.gamma), "gamma")
    if rule == "dfact":
        return ll.RemainderEstimator("explicit", values=double_factorial_ratio)
    if rule == "stieltjes":
        moments = ctx.series.stieltjes() if ctx.series is not None else None
        if moments is None:
            raise UsageError(f"{spec.label}: the stieltjes rule needs a moment series "
                             "(log_stieltjes or euler_2f0)")
        mu, z = moments
        return ll.RemainderEstimator("stieltjes", mu=mu, z=z)
    return ll.RemainderEstimator(rule, beta=beta, gamma=gamma, m_variant=spec.id == "M")


def build_transformer(spec: TransformSpec, cfg: RunConfig, ctx: SeriesContext,
                      sums=None) -> Transformer:
    """Instantiate the transformer for one column (raises UsageError on bad parameters)."""
    prec = cfg.precision
    tid = spec.id
    kw: dict = {"precision": prec}
    try:
        if tid == "epsilon":
            return ea.EpsilonTransformer(**kw)
        if tid == "aitken":
            return ea.AitkenTransformer(**kw)
        if tid in ("richardson", "rho", "w", "big_theta"):
            cls = {"richardson": ip.RichardsonTransformer, "rho": ip.RhoTransformer,
                   "w": ip.WTransformer, "big_theta": th.BigThetaTransformer}[tid]
            return cls(points=_points(spec, cfg, prec, sums), **kw)
        if tid == "sidi_r":
            return ip.SidiRTransformer(points=_points(spec, cfg, prec, sums),
                                       remainder=_remainder(spec, cfg, ctx), **kw)
        if tid in ll.FAMILIES:
            ell_text = spec.get("ell", str(cfg.ell))
            try:
                ell = int(ell_text)
            except ValueError:
                raise UsageError(f"ell must be an integer, got {ell_text!r}") from None
            if tid == "D":
                ell = 0
            return ll.RatioTransformer(
                tid, _remainder(spec, cfg, ctx),
                beta=_exactish(spec.get("beta", cfg.beta), prec, "beta"),
                gamma=_exactish(spec.get("gamma", cfg.gamma), prec, "gamma"),
                ell=ell, **kw)
        if tid in ("Lambda", "F", "P", "lambda", "sigma", "mu"):
            key = {"Lambda": "beta", "F": "alpha", "P": "zeta",
                   "lambda": "beta", "sigma": "alpha", "mu": "zeta"}[tid]
            param = _exactish(spec.get(key, getattr(cfg, key)), prec, key)
            if tid in ("Lambda", "F", "P"):
                return ll.LinearTransformer(tid, param, **kw)
            return th.LSMTransformer(tid, param, **kw)
        if tid in ("theta", "theta_mod"):
            return th.ThetaTransformer(modified=tid == "theta_mod", **kw)
        if tid == "j":
            return th.JTransformer(**kw)
        return th.BCTransformer(tid, **kw)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"{spec.label}: {exc}") from None


def _sequence(cfg: RunConfig, count: int):
    """(sums, terms) in the run's precision; terms may be None."""
    prec = cfg.precision
    if cfg.series is not None:
        return cfg.series.partial_sums(count, prec), cfg.series.terms(count, prec)
    vals = cfg.values[:count]
    if cfg.values_are_sums:
        return vals, None
    sums, acc = [], prec.convert(0)
    for v in vals:
        acc = acc + v
        sums.append(acc)
    return sums, list(vals)


def _lookahead(tr: Transformer) -> int:
    return tr.lag


def run(config: RunConfig) -> ResultTable:
    """Feed s_0 .. s_max_n to every column and assemble the table."""
    config.validate()
    prec = config.precision
    ctx = SeriesContext(config.series)
    rows_n = config.max_n + 1
    if config.series is None and len(config.values) < rows_n:
        raise InputError(f"input has {len(config.values)} values, --n {config.max_n} "
                         f"needs {rows_n}")
    base_sums, _ = _sequence(config, rows_n)
    probes = [build_transformer(t, config, ctx, base_sums) for t in config.transforms]
    extra = max(_lookahead(p) for p in probes) if config.align == "order" else 0
    count = rows_n + extra
    if config.series is None:
        count = min(count, len(config.values))
    sums, terms = _sequence(config, count)
    columns = []
    for spec, tr in zip(config.transforms, probes):
        shift = tr.lag if config.align == "order" else 0
        ests = []
        try:
            for i in range(min(count, rows_n + shift)):
                term = None if terms is None else terms[i]
                ests.append(tr.extend(SequencePoint(i, sums[i], term=term)))
        except ValueError as exc:
            raise InputError(f"{spec.label}: {exc}") from None
        cells = []
        for n in range(rows_n):
            j = n + shift
            if j < len(ests):
                e = ests[j]
                cells.append(Cell(spec.label, e.value, e.k, e.n, not e.valid))
            else:
                cells.append(Cell(spec.label, None, None, None, False))
        columns.append(cells)
    rows = [Row(n, sums[n], tuple(col[n] for col in columns)) for n in range(rows_n)]
    ref = None
    if config.reference is not None:
        ref = (_exactish(config.reference, prec, "reference"), "user override")
    elif config.series is not None:
        r = config.series.reference(prec)
        if r is not None:
            ref = (r.value, r.provenance)
    params = {
        "max_n": config.max_n,
        "precision": prec.name,
        "align": config.align,
        "transforms": [{"id": t.id, "label": t.label, **dict(t.params)} for t in config.transforms],
        "defaults": {"beta": config.beta, "gamma": config.gamma, "alpha": config.alpha,
                     "zeta": config.zeta, "ell": config.ell, "omega_rule": config.omega_rule,
                     "points": config.points},
        "input": "catalog" if config.series else ("partial_sums" if config.values_are_sums else "terms"),
    }
    label = config.series.label if config.series is not None else config.source
    return ResultTable(label, params, rows, ref, prec)


def _digits_shown(prec: Precision) -> int:
    return 14 if prec.ctx is not None else 13


def format_value(v, prec: Precision, digits: Optional[int] = None) -> str:
    """Fixed significant-digit rendering shared by table and JSON checks."""
    if v is None:
        return "-"
    d = digits or _digits_shown(prec)
    if prec.ctx is not None:
        return prec.ctx.nstr(v, d, min_fixed=-5, max_fixed=d + 1, strip_zeros=False)
    return f"{float(v):#.{d}g}"


def _json_number(v, prec: Precision):
    if v is None:
        return None
    if prec.ctx is not None:
        # a JSON double would lose the extra digits; keep 36 significant digits
        return prec.ctx.nstr(v, 36, min_fixed=-5, max_fixed=37)
    return float(v)


def render_table(table: ResultTable) -> str:
    prec = table.precision
    heads = ["n", "s_n"] + [c.id for c in table.rows[0].cells] if table.rows else ["n"]
    body = []
    for r in table.rows:
        line = [str(r.n), format_value(r.s, prec)]
        for c in r.cells:
            line.append(format_value(c.value, prec) + (TAINT_MARK if c.tainted else ""))
        body.append(line)
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h)
              for i, h in enumerate(heads)]
    out = [f"# series: {table.series}  precision: {prec.name}"]
    out.append("  ".join(h.rjust(w) for h, w in zip(heads, widths)))
    for b in body:
        out.append("  ".join(x.rjust(w) for x, w in zip(b, widths)))
    if table.reference is not None:
        out.append(f"reference: {format_value(table.reference[0], prec)}  ({table.reference[1]})")
    else:
        out.append("reference: none")
    if any(c.tainted for r in table.rows for c in r.cells):
        out.append(f"{TAINT_MARK} = value passed through a guarded near-zero denominator")
    return "\n".join(out) + "\n"


def render_json(table: ResultTable) -> str:
    prec = table.precision
    doc = {
        "series": table.series,
        "params": table.params,
        "rows": [
            {"n": r.n, "s": _json_number(r.s, prec),
             "cells": [{"id": c.id, "value": _json_number(c.value, prec), "k": c.k,
                        "n": c.n, "tainted": c.tainted} for c in r.cells]}
            for r in table.rows
        ],
        "reference": None if table.reference is None else {
            "value": _json_number(table.reference[0], prec),
            "provenance": table.reference[1]},
    }
    return json.dumps(doc, indent=1) + "\n"


def _max_digits(prec: Precision) -> int:
    # decimal digits needed to pin down every representable value
    return 36 if prec.ctx is not None else 17


def check(config: RunConfig, expected, digits: int,
          table: Optional[ResultTable] = None) -> CheckResult:
    """Does each column's last untainted estimate agree with ``expected``?

    Agreement to d significant digits means a relative error of at most
    10^-d (absolute error when ``expected`` is zero).
    """
    prec = config.precision
    exp_f = float(expected)
    if not math.isfinite(exp_f):
        raise UsageError("--check value must be finite")
    if digits < 1:
        raise UsageError("--check digits must be a positive integer")
    lines = []
    if digits > _max_digits(prec):
        lines.append(f"FAIL: {digits} digits exceed what {prec.name} can represent "
                     f"(at most {_max_digits(prec)})")
        return CheckResult(False, lines)
    table = table or run(config)
    ref = prec.convert(str(expected)) if prec.ctx is not None else exp_f
    ok = True
    for idx, spec in enumerate(config.transforms):
        cells = [(r.n, r.cells[idx]) for r in table.rows if r.cells[idx].value is not None]
        good = [(n, c) for n, c in cells if not c.tainted]
        if not good:
            ok = False
            lines.append(f"FAIL {spec.label}: all {len(cells)} estimates are tainted "
                         "(guarded division fired on every path)")
            continue
        row, last = good[-1]
        scale = abs(ref) if ref != 0 else 1
        rel = abs(last.value - ref) / scale
        got = math.inf if rel == 0 else -math.log10(float(rel))
        passed = rel <= prec.convert(10) ** (-digits)
        ok = ok and passed
        note = "" if row == cells[-1][0] else f" (later cells tainted; using row {row})"
        lines.append(f"{'PASS' if passed else 'FAIL'} {spec.label}: "
                     f"{format_value(last.value, prec)} agrees to {got:.1f} digits "
                     f"(need {digits}){note}")
    return CheckResult(ok, lines)


def _read_values(source: str, prec: Precision) -> list:
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    vals = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        item = line.split("#", 1)[0].strip()
        if not item:
            continue
        try:
            f = float(item)
        except ValueError:
            raise InputError(f"{source}:{lineno}: not a real number: {item!r}") from None
        if not math.isfinite(f):
            raise InputError(f"{source}:{lineno}: non-finite value {item!r}")
        vals.append(prec.convert(item) if prec.ctx is not None else f)
    if not vals:
        raise InputError(f"{source}: no values")
    return vals


def _parse_check(text: str):
    value, sep, dig = text.rpartition(":")
    if not sep:
        raise UsageError("--check expects VALUE:DIGITS")
    _number(value, "--check value")
    try:
        digits = int(dig)
    except ValueError:
        raise UsageError(f"--check digits must be an integer, got {dig!r}") from None
    if digits < 1:
        raise UsageError("--check digits must be a positive integer")
    return value, digits


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit status 2 but route through UsageError
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seqaccel",
                description="Accelerate or sum a sequence with several transforms side by side.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--series", help='catalog series, e.g. "zeta(2)" or "euler_2f0:3"')
    src.add_argument("--input", metavar="FILE", help="file with one real per line, or - for stdin")
    p.add_argument("--partial-sums", action="store_true",
                   help="input values are partial sums rather than terms")
    p.add_argument("--transform", action="append", default=[], metavar="ID[:k=v,...]",
                   help=f"column to compute (repeatable); ids: {', '.join(TRANSFORM_KEYS)}")
    p.add_argument("--n", type=int, default=None, help="last row index (default 20, or input length - 1)")
    p.add_argument("--beta", default="1")
    p.add_argument("--gamma", default="17")
    p.add_argument("--alpha", default="1", help="point exponent or alpha parameter; 'auto' searches a grid")
    p.add_argument("--zeta", default="1")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--omega-rule", default="u", choices=OMEGA_RULES)
    p.add_argument("--points", default=None, choices=[k for k in ip.POINT_KINDS if k != "explicit"])
    p.add_argument("--precision", default="binary64",
                   choices=["binary64", "double", "binary128", "quad"])
    p.add_argument("--format", default="table", choices=["table", "json"])
    p.add_argument("--align", default="prefix", choices=["prefix", "order"],
                   help="row of lookahead transforms: last consumed sample (prefix) "
                        "or superscript-0 order (order)")
    p.add_argument("--reference", default=None, help="override the reference value")
    p.add_argument("--check", default=None, metavar="VALUE:DIGITS")
    return p


def config_from_args(argv: Optional[Sequence[str]] = None) -> tuple[RunConfig, Optional[tuple]]:
    args = build_parser().parse_args(argv)
    prec = BINARY128 if args.precision in ("binary128", "quad") else BINARY64
    series = None
    try:
        if args.series is not None:
            series = series_from_name(args.series)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.reference is not None:
        _number(args.reference, "--reference")
    chk = _parse_check(args.check) if args.check is not None else None
    transforms = [parse_transform(t) for t in args.transform]
    cfg = RunConfig(series=series, transforms=transforms, precision=prec, output=args.format,
                    reference=args.reference, beta=args.beta, gamma=args.gamma,
                    alpha=args.alpha, zeta=args.zeta, ell=args.ell,
                    omega_rule=args.omega_rule, points=args.points, align=args.align,
                    values_are_sums=args.partial_sums)
    if args.input is not None:
        cfg.values = _read_values(args.input, prec)
        cfg.source = "stdin" if args.input == "-" else args.input
        cfg.max_n = len(cfg.values) - 1 if args.n is None else args.n
    elif series is None:
        raise UsageError("give --series or --input")
    else:
        cfg.max_n = 20 if args.n is None else args.n
    return cfg, chk


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg, chk = config_from_args(argv)
        table = run(cfg)
        out = render_json(table) if cfg.output == "json" else render_table(table)
        sys.stdout.write(out)
        if chk is not None:
            result = check(cfg, chk[0], chk[1], table)
            for line in result.lines:
                print(line, file=sys.stderr)
            return EXIT_OK if result.passed else EXIT_CHECK
        return EXIT_OK
    except UsageError as exc:
        print(f"seqaccel: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"seqaccel: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
