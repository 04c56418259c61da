"""Shared numerics and the streaming-transformer contract.

Every transformer in this package consumes one :class:`SequencePoint` at a
time, updates a single counterdiagonal of its table in place and returns an
:class:`Estimate`. Arithmetic is generic: the same code runs on ``float``,
on ``mpmath`` numbers of a private 113-bit context, and on
``fractions.Fraction`` (handy for exact oracles in tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from mpmath.ctx_mp import MPContext

__all__ = [
    "SequencePoint",
    "Estimate",
    "SafeguardPolicy",
    "Precision",
    "BINARY64",
    "BINARY128",
    "EXACT",
    "get_precision",
    "pochhammer",
    "forward_difference",
    "guard_divide",
    "is_finite",
    "History",
    "AuxRule",
    "Transformer",
    "lozenge_selection",
    "step_selection",
    "acceleration_ratio",
    "run",
]


def is_finite(v) -> bool:
    """True for finite numbers of any supported type."""
    try:
        return bool(v - v == 0)
    except (OverflowError, ValueError):
        return False


@dataclass(frozen=True)
class SequencePoint:
    """One input sample.

    Attributes:
        n: Index, consecutive from 0.
        s: Partial sum.
        x: Optional interpolation point.
        omega: Optional remainder estimate (nonzero).
        term: Optional series term; when absent it is recovered as the
            difference of consecutive partial sums (with the first term equal
            to the first partial sum).
    """

    n: int
    s: Any
    x: Any = None
    omega: Any = None
    term: Any = None


@dataclass(frozen=True)
class Estimate:
    """Current best approximation and its table coordinates."""

    value: Any
    n: int
    k: int
    valid: bool = True


@dataclass(frozen=True)
class SafeguardPolicy:
    """Thresholds for guarded divisions.

    Attributes:
        tiny: Denominators smaller than this in magnitude are treated as zero.
        huge: Value substituted for a guarded quotient (sign preserved).
    """

    tiny: Any = 1e-300
    huge: Any = 1e300

    def __post_init__(self):
        if not (0 < self.tiny < 1 < self.huge):
            raise ValueError("safeguard policy needs 0 < tiny < 1 < huge")
        if not (is_finite(self.tiny) and is_finite(self.huge)):
            raise ValueError("safeguard thresholds must be finite")


class Precision:
    """Arithmetic mode shared by all transformers of one run.

    ``binary64`` uses Python floats. ``binary128`` uses an isolated mpmath
    context with a 113-bit mantissa, which gives the same significand width
    as IEEE quadruple precision without touching the global ``mpmath.mp``.
    ``exact`` runs on ``Fraction`` and exists for oracle checks.
    """

    def __init__(self, name: str, bits: Optional[int] = None, exact: bool = False):
        self.name = name
        self.exact = exact
        if exact:
            self.ctx = None
            self.eps = Fraction(0)
            self.policy = SafeguardPolicy(tiny=Fraction(1, 10**300), huge=Fraction(10**300))
        elif bits is None:
            self.ctx = None
            self.eps = 2.0**-52
            self.policy = SafeguardPolicy()
        else:
            self.ctx = MPContext()
            self.ctx.prec = bits
            self.eps = self.ctx.mpf(2) ** (1 - bits)
            self.policy = SafeguardPolicy(
                tiny=self.ctx.mpf("1e-4900"), huge=self.ctx.mpf("1e4900")
            )

    def __repr__(self) -> str:
        return f"Precision({self.name!r})"

    def convert(self, v):
        """Map an int, float, Fraction, string or mpf into this mode."""
        if self.exact:
            return v if isinstance(v, Fraction) else Fraction(v)
        if self.ctx is None:
            return float(v)
        if isinstance(v, Fraction):
            return self.ctx.mpf(v.numerator) / self.ctx.mpf(v.denominator)
        return self.ctx.mpf(v)

    def _inexact(self):
        if self.exact:
            raise ValueError("transcendental functions are unavailable in exact mode")

    def exp(self, v):
        self._inexact()
        return math.exp(v) if self.ctx is None else self.ctx.exp(v)

    def sqrt(self, v):
        self._inexact()
        return math.sqrt(v) if self.ctx is None else self.ctx.sqrt(v)

    def power(self, base, expo):
        if self.exact and Fraction(expo).denominator == 1:
            return self.convert(base) ** int(expo)
        self._inexact()
        if self.ctx is None:
            return float(base) ** float(expo)
        return self.ctx.power(self.convert(base), self.convert(expo))


BINARY64 = Precision("binary64")
BINARY128 = Precision("binary128", bits=113)
EXACT = Precision("exact", exact=True)


def get_precision(name: str) -> Precision:
    """Look up a precision mode by name (``binary64`` or ``binary128``)."""
    table = {"binary64": BINARY64, "double": BINARY64,
             "binary128": BINARY128, "quad": BINARY128, "exact": EXACT}
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown precision mode {name!r}") from None


def pochhammer(z, m: int):
    """Rising factorial ``z (z+1) ... (z+m-1)``; 1 for ``m == 0``.

    Args:
        z: Any real (or exact rational) number.
        m: Non-negative number of factors.

    Returns:
        The product, in the numeric type of ``z``.
    """
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    out = z * 0 + 1
    for i in range(m):
        out *= z + i
    return out


def forward_difference(values: Sequence, k: int):
    """k-th forward difference at the first entry, via the binomial sum.

    Meant as a test oracle; production recursions never call it.

    Raises:
        ValueError: If fewer than ``k + 1`` values are given.
    """
    if k < 0:
        raise ValueError("difference order must be non-negative")
    if len(values) < k + 1:
        raise ValueError(f"need at least {k + 1} values, got {len(values)}")
    total = values[0] * 0
    for j in range(k + 1):
        term = math.comb(k, j) * values[j]
        total = total + term if (k - j) % 2 == 0 else total - term
    return total


def guard_divide(numerator, denominator, policy: Optional[SafeguardPolicy] = None):
    """Division that never produces a non-finite result.

    Returns:
        ``(value, fired)``. When ``|denominator| < tiny`` (or the quotient is
        not finite) the value is ``huge`` carrying the sign of the quotient,
        with zero counted as positive, and ``fired`` is True.
    """
    policy = policy or BINARY64.policy
    negative = (numerator < 0) != (denominator < 0)
    if not (is_finite(numerator) and is_finite(denominator)) or abs(denominator) < policy.tiny:
        return (-policy.huge if negative else policy.huge), True
    q = numerator / denominator
    if not is_finite(q):
        return (-policy.huge if negative else policy.huge), True
    return q, False


def lozenge_selection(m: int) -> tuple[int, int]:
    """(superscript, subscript) of the even-order ε/ρ-type estimate after s_m."""
    half = m // 2
    return m - 2 * half, 2 * half


def step_selection(m: int, width: int) -> tuple[int, int]:
    """(superscript, order) when each order consumes ``width`` extra points."""
    k = m // width
    return m - width * k, k


def acceleration_ratio(estimate: Estimate, partial_sums: Sequence, limit):
    """Ratio (T - s) / (s_n - s), n being the estimate's superscript."""
    den = partial_sums[estimate.n] - limit
    if den == 0:
        return math.inf if estimate.value != limit else 0.0
    return (estimate.value - limit) / den


@dataclass
class History:
    """Consumed samples, with terms recovered from partial sums if needed."""

    s: list = field(default_factory=list)
    a: list = field(default_factory=list)
    x: list = field(default_factory=list)
    omega: list = field(default_factory=list)

    def push(self, s, term=None, x=None, omega=None) -> None:
        if term is None:
            term = s if not self.s else s - self.s[-1]
        self.s.append(s)
        self.a.append(term)
        self.x.append(x)
        self.omega.append(omega)

    def __len__(self) -> int:
        return len(self.s)


class AuxRule:
    """Produces an auxiliary quantity (x or ω) for index n from the history.

    Subclasses set ``lag``: the number of samples beyond n that must have been
    consumed before index n can be served.
    """

    lag = 0
    name = "aux"

    def value(self, n: int, hist: History, prec: Precision):
        raise NotImplementedError


class Transformer:
    """Base class of all streaming transformers.

    Subclasses implement ``_advance(n, s, x, omega)`` which runs one
    counterdiagonal update for index ``n`` and returns an :class:`Estimate`.
    Lookahead (from d/v-style remainder rules or difference-based points) is
    handled here: after consuming s_m the table has advanced to index
    ``m - lag``; before that the first partial sum is returned unchanged.

    Args:
        precision: Arithmetic mode; inputs are converted into it.
        policy: Safeguard thresholds; defaults to the precision's policy.
        points: Rule for interpolation points; overrides any x on the samples.
        remainder: Rule for remainder estimates; overrides any ω on the samples.
        default_points: Fallback for samples that carry no x.
    """

    name = "transform"
    needs_x = False
    needs_omega = False

    def __init__(self, *, precision: Precision = BINARY64,
                 policy: Optional[SafeguardPolicy] = None,
                 points: Optional[AuxRule] = None,
                 remainder: Optional[AuxRule] = None,
                 default_points: Optional[AuxRule] = None):
        self.precision = precision
        self.policy = policy or precision.policy
        self.points = points
        self.remainder = remainder
        # used only when neither a rule nor the sample supplies x
        self.default_points = default_points
        self.history = History()
        self.count = 0
        self.estimate: Optional[Estimate] = None
        lags = [r.lag for r in (points, remainder) if r is not None]
        self.lag = max(lags, default=0)

    def _c(self, v):
        return self.precision.convert(v)

    def _div(self, num, den):
        return guard_divide(num, den, self.policy)

    def _aux(self, kind: str, n: int):
        rule = self.points if kind == "x" else self.remainder
        if rule is not None:
            return self._c(rule.value(n, self.history, self.precision))
        stored = getattr(self.history, kind)[n]
        if stored is None:
            if kind == "x" and self.default_points is not None:
                return self._c(self.default_points.value(n, self.history, self.precision))
            raise ValueError(f"{self.name}: point {n} lacks {kind} and no rule was given")
        return self._c(stored)

    def extend(self, point: SequencePoint) -> Estimate:
        """Consume the next sample and return the updated estimate.

        Raises:
            ValueError: If ``point.n`` is not the next expected index.
        """
        if point.n != self.count:
            raise ValueError(f"{self.name}: expected index {self.count}, got {point.n}")
        c = self._c
        self.history.push(
            c(point.s),
            None if point.term is None else c(point.term),
            point.x,
            point.omega,
        )
        self.count += 1
        ready = self.count - 1 - self.lag
        if ready < 0:
            self.estimate = Estimate(self.history.s[0], 0, 0, True)
            return self.estimate
        x = self._aux("x", ready) if self.needs_x else None
        omega = self._aux("omega", ready) if self.needs_omega else None
        self.estimate = self._advance(ready, self.history.s[ready], x, omega)
        return self.estimate

    def feed(self, partial_sums: Iterable, terms: Optional[Iterable] = None) -> list[Estimate]:
        """Extend with a run of partial sums; returns one estimate per input."""
        sums = list(partial_sums)
        ts: list = list(terms) if terms is not None else [None] * len(sums)
        out = []
        for s, a in zip(sums, ts):
            out.append(self.extend(SequencePoint(self.count, s, term=a)))
        return out

    def _advance(self, n: int, s, x, omega) -> Estimate:
        raise NotImplementedError


def run(transformer: Transformer, partial_sums: Iterable,
        terms: Optional[Iterable] = None) -> Estimate:
    """Feed all partial sums and return the final estimate."""
    return transformer.feed(partial_sums, terms)[-1]

