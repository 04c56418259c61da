"""Extrapolation methods built on interpolation points.

Richardson (Neville scheme), Sidi's generalized Richardson process via
divided differences, Wynn's rho algorithm, the iterated rho_2 transform W,
the interpolation-point families and a grid search for the exponent of
power-law points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from .kernel import (
    BINARY64,
    AuxRule,
    Estimate,
    History,
    Precision,
    SequencePoint,
    Transformer,
    lozenge_selection,
    step_selection,
)

__all__ = [
    "PointFamily",
    "RichardsonTransformer",
    "SidiRTransformer",
    "RhoTransformer",
    "WTransformer",
    "richardson_extend",
    "sidi_R_extend",
    "rho_extend",
    "w_extend",
    "beleznay_alpha_search",
    "DEFAULT_ALPHA_GRID",
]

POINT_KINDS = (
    "reciprocal",
    "reciprocal_power",
    "linear",
    "power",
    "gbw",
    "levin_like",
    "reciprocal_levin_like",
    "explicit",
)


@dataclass(frozen=True)
class PointFamily(AuxRule):
    """Rule producing interpolation points x_n.

    Kinds (b = beta, a_n = n-th series term):

    * ``reciprocal``: 1/(b+n)
    * ``reciprocal_power``: (b+n)^(-alpha)
    * ``linear``: b+n
    * ``power``: (b+n)^alpha
    * ``gbw``: Δs_n, which needs one sample of lookahead
    * ``levin_like``: (b+n) a_n
    * ``reciprocal_levin_like``: 1/((b+n) a_n)
    * ``explicit``: ``values`` is a callable of n or an indexable sequence
    """

    kind: str = "reciprocal"
    beta: float = 1.0
    alpha: float = 1.0
    values: Optional[Union[Callable[[int], object], Sequence]] = None

    def __post_init__(self):
        if self.kind not in POINT_KINDS:
            raise ValueError(f"unknown point family {self.kind!r}")
        if self.beta <= 0 or self.alpha <= 0:
            raise ValueError("point families need beta > 0 and alpha > 0")
        if self.kind == "explicit" and self.values is None:
            raise ValueError("explicit point family needs values")

    @property
    def lag(self) -> int:  # type: ignore[override]
        return 1 if self.kind == "gbw" else 0

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"points:{self.kind}"

    def value(self, n: int, hist: History, prec: Precision):
        b = prec.convert(self.beta) + n
        kind = self.kind
        if kind == "reciprocal":
            return 1 / b
        if kind == "linear":
            return b
        if kind == "reciprocal_power":
            return prec.power(b, -self.alpha)
        if kind == "power":
            return prec.power(b, self.alpha)
        if kind == "gbw":
            return hist.a[n + 1]
        if kind == "levin_like":
            return b * hist.a[n]
        if kind == "reciprocal_levin_like":
            return 1 / (b * hist.a[n])
        v = self.values
        return v(n) if callable(v) else v[n]


class _PointTransformer(Transformer):
    needs_x = True
    monotone = False

    def __init__(self, **kw):
        super().__init__(**kw)
        self.xs: list = []

    def _push_x(self, x):
        if any(x == old for old in self.xs):
            raise ValueError(f"{self.name}: coincident interpolation point {x!r}")
        if self.monotone and self.xs and not x > self.xs[-1]:
            raise ValueError(f"{self.name}: interpolation points must increase strictly")
        self.xs.append(x)


class RichardsonTransformer(_PointTransformer):
    """Richardson extrapolation through the Neville scheme.

    After s_0 .. s_m, ``diag[m - j]`` holds N_j^(m - j); the estimate is
    N_m^(0). The default points are x_n = 1/(n + 1).
    """

    name = "richardson"

    def __init__(self, points: Optional[AuxRule] = None, **kw):
        super().__init__(points=points, default_points=PointFamily("reciprocal"), **kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        self._push_x(x)
        d, t, xs = self.diag, self.taint, self.xs
        d.append(s)
        t.append(False)
        xn = xs[n]
        for i in range(n - 1, -1, -1):
            q, fired = self._div(xs[i] * d[i + 1] - xn * d[i], xs[i] - xn)
            d[i] = q
            t[i] = fired or t[i] or t[i + 1]
        return Estimate(d[0], 0, n, not t[0])


class SidiRTransformer(_PointTransformer):
    """Sidi's generalized Richardson process R.

    Two divided-difference tables over the same points, seeded with s/ω and
    1/ω. The estimate is their ratio at maximal order. It is exact for
    s_n = s + ω_n * (polynomial of degree k-1 in x_n).
    """

    name = "sidi_r"
    needs_omega = True

    def __init__(self, points: Optional[AuxRule] = None,
                 remainder: Optional[AuxRule] = None, **kw):
        super().__init__(points=points, default_points=PointFamily("reciprocal"),
                         remainder=remainder, **kw)
        self.num: list = []
        self.den: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        self._push_x(x)
        if omega == 0:
            raise ValueError(f"{self.name}: zero remainder estimate at n={n}")
        num, den, t, xs = self.num, self.den, self.taint, self.xs
        num.append(s / omega)
        den.append(1 / omega)
        t.append(False)
        xn = xs[n]
        for i in range(n - 1, -1, -1):
            h = xn - xs[i]
            qn, f1 = self._div(num[i + 1] - num[i], h)
            qd, f2 = self._div(den[i + 1] - den[i], h)
            num[i], den[i] = qn, qd
            t[i] = f1 or f2 or t[i] or t[i + 1]
        v, fired = self._div(num[0], den[0])
        return Estimate(v, 0, n, not (fired or t[0]))


class RhoTransformer(_PointTransformer):
    """Wynn's rho algorithm; standard points x_n = n + 1 by default.

    Same moving-lozenge storage as epsilon, with the reciprocal differences
    weighted by the spread of the interpolation points.
    """

    name = "rho"
    monotone = True

    def __init__(self, points: Optional[AuxRule] = None, **kw):
        super().__init__(points=points, default_points=PointFamily("linear"), **kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        self._push_x(x)
        r, t, xs = self.diag, self.taint, self.xs
        r.append(s)
        t.append(False)
        back, back_t = s * 0, False
        for i in range(n - 1, -1, -1):
            old, old_t = r[i], t[i]
            q, fired = self._div(xs[n] - xs[i], r[i + 1] - old)
            r[i] = back + q
            t[i] = fired or back_t or old_t or t[i + 1]
            back, back_t = old, old_t
        sup, sub = lozenge_selection(n)
        return Estimate(r[sup], sup, sub, not t[sup])


class WTransformer(_PointTransformer):
    """Iterated rho_2 transform, stored like the iterated Aitken process.

    With the default points x_n = n + 1 this is the standard form.
    """

    name = "w"
    monotone = True

    def __init__(self, points: Optional[AuxRule] = None, **kw):
        super().__init__(points=points, default_points=PointFamily("linear"), **kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        self._push_x(x)
        w, t, xs = self.diag, self.taint, self.xs
        w.append(s)
        t.append(False)
        for j in range(1, n // 2 + 1):
            i = n - 2 * j
            d0 = w[i + 1] - w[i]
            d1 = w[i + 2] - w[i + 1]
            num = (xs[n] - xs[i]) * d1 * d0
            den = (xs[n] - xs[i + 1]) * d0 - (xs[n - 1] - xs[i]) * d1
            q, fired = self._div(num, den)
            w[i] = w[i + 1] + q
            t[i] = fired or t[i] or t[i + 1] or t[i + 2]
        sup, k = step_selection(n, 2)
        return Estimate(w[sup], sup, k, not t[sup])


def richardson_extend(state: RichardsonTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def sidi_R_extend(state: SidiRTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def rho_extend(state: RhoTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def w_extend(state: WTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


DEFAULT_ALPHA_GRID = tuple(0.25 * i for i in range(1, 9))


def beleznay_alpha_search(series, alphas: Iterable[float] = DEFAULT_ALPHA_GRID,
                          m: int = 12, beta: float = 1.0,
                          precision: Precision = BINARY64) -> Optional[float]:
    """Pick the exponent of x_n = (n + beta)^(-alpha) from a grid.

    For every candidate the Neville table is run on s_0 .. s_m and the
    candidate is scored by |N_{m-1}^(1) - N_{m-1}^(0)|, the disagreement of
    the two order-(m-1) estimates. The smallest score wins; ties go to the
    smaller alpha.

    Args:
        series: Object with a ``partial_sums(count)`` method, or a sequence
            of partial sums.
        alphas: Non-empty grid of positive exponents.
        m: Index of the last partial sum used (m >= 2).
        beta: Shift of the interpolation points.
        precision: Arithmetic mode.

    Returns:
        The winning exponent, or None when every candidate was tainted.
    """
    grid = sorted(float(a) for a in alphas)
    if not grid:
        raise ValueError("alpha grid is empty")
    if m < 2:
        raise ValueError("beleznay search needs m >= 2")
    if hasattr(series, "partial_sums"):
        sums = list(series.partial_sums(m + 1, precision=precision))
    else:
        sums = list(series)[: m + 1]
    if len(sums) < m + 1:
        raise ValueError(f"need {m + 1} partial sums, got {len(sums)}")
    best, best_score = None, None
    for alpha in grid:
        fam = PointFamily("reciprocal_power", beta=beta, alpha=alpha)
        rich = RichardsonTransformer(points=fam, precision=precision)
        ests = rich.feed(sums)
        lower = ests[m - 1]  # N_{m-1}^(0) from s_0 .. s_{m-1}
        upper_valid = not rich.taint[1]
        if not (lower.valid and upper_valid):
            continue
        score = abs(rich.diag[1] - lower.value)  # diag[1] is N_{m-1}^(1)
        if best_score is None or score < best_score:
            best, best_score = alpha, score
    return best
