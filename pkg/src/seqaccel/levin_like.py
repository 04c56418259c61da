"""Levin-type ratio transformations and their linear special cases.

Families L (Levin), S (factorial-series based), M (Pochhammer in -gamma-n)
and D (Drummond) all compute

    Δ^k {P(n) s_n / ω_n} / Δ^k {P(n) / ω_n}

through a scaled three-term recursion run on two arrays (numerator and
denominator) with counterdiagonal storage. The linear transforms Λ, F and P
are the special cases of fixed ω and need one array only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Union

from .kernel import AuxRule, Estimate, History, Precision, SequencePoint, Transformer, pochhammer

__all__ = [
    "RemainderEstimator",
    "RatioTransformer",
    "LinearTransformer",
    "ratio_extend",
    "linear_special_extend",
    "FAMILIES",
    "RULES",
]

FAMILIES = ("L", "S", "M", "D")
RULES = ("u", "t", "d", "v", "stieltjes", "explicit")


@dataclass(frozen=True)
class RemainderEstimator(AuxRule):
    """Rule that turns the sample stream into remainder estimates ω_n.

    Rules (a_n is the n-th term, with a_0 = s_0 for raw sequences):

    * ``u``: (beta + n) a_n, or -(gamma + n) a_n with ``m_variant``
    * ``t``: a_n
    * ``d``: a_{n+1} (one sample of lookahead)
    * ``v``: a_n a_{n+1} / (a_n - a_{n+1}) (one sample of lookahead)
    * ``stieltjes``: (-1)^(n+1) mu(n+1) z^(n+1)
    * ``explicit``: ``values`` (callable of n or sequence); when ``values``
      is None the ω carried by each input point is used
    """

    rule: str = "t"
    beta: Any = 1
    gamma: Any = 17
    m_variant: bool = False
    z: Any = None
    mu: Optional[Callable[[int], Any]] = None
    values: Optional[Union[Callable[[int], Any], Sequence]] = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown remainder rule {self.rule!r}")
        if self.rule == "stieltjes" and (self.z is None or self.mu is None):
            raise ValueError("stieltjes rule needs z and mu")

    @property
    def lag(self) -> int:  # type: ignore[override]
        return 1 if self.rule in ("d", "v") else 0

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"omega:{self.rule}"

    def value(self, n: int, hist: History, prec: Precision):
        r = self.rule
        a = hist.a
        if r == "t":
            return a[n]
        if r == "u":
            if self.m_variant:
                return -(prec.convert(self.gamma) + n) * a[n]
            return (prec.convert(self.beta) + n) * a[n]
        if r == "d":
            return a[n + 1]
        if r == "v":
            diff = a[n] - a[n + 1]
            if diff == 0:
                raise ValueError(f"{self.name}: equal consecutive terms at n={n}")
            return a[n] * a[n + 1] / diff
        if r == "stieltjes":
            z = prec.convert(self.z)
            w = prec.convert(self.mu(n + 1)) * z ** (n + 1)
            return w if n % 2 else -w
        if self.values is None:
            om = hist.omega[n]
            if om is None:
                raise ValueError(f"{self.name}: point {n} carries no omega")
            return om
        v = self.values
        return v(n) if callable(v) else v[n]


class RatioTransformer(Transformer):
    """Levin-type transformation of family L, S, M or D.

    Args:
        family: ``"L"``, ``"S"``, ``"M"`` or ``"D"``.
        remainder: Rule for ω_n; defaults to the ω carried by the points.
        beta: Shift of families L and S (default 1).
        gamma: Parameter of family M (default 17). The order is capped at
            floor(gamma) + 1; beyond it the order stays frozen, the estimate
            moves to higher superscripts and ``frozen`` is set.
        ell: Order of the generalized variant (0 gives the base transform).
        precision, policy: See :class:`~seqaccel.kernel.Transformer`.

    After the table has reached index n, ``num[n - j]`` and ``den[n - j]``
    hold the scaled sums of order j and superscript n - j.
    """

    needs_omega = True

    def __init__(self, family: str = "L", remainder: Optional[RemainderEstimator] = None,
                 beta: Any = 1, gamma: Any = 17, ell: int = 0, **kw):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        if family in ("L", "S") and not beta > 0:
            raise ValueError("beta must be positive")
        if family == "M" and not gamma > 0:
            raise ValueError("gamma must be positive")
        if ell < 0 or (family == "D" and ell):
            raise ValueError("ell must be non-negative (and zero for family D)")
        super().__init__(remainder=remainder or RemainderEstimator("explicit"), **kw)
        self.family = family
        self.name = f"{family}[{self.remainder.rule}]"
        self.beta = self._c(beta)
        self.gamma = self._c(gamma)
        self.ell = ell
        self.max_order = int(gamma) + 1 if family == "M" else None
        self.frozen = False
        self.num: list = []
        self.den: list = []
        self.taint: list[bool] = []

    def _seed_weight(self, n: int):
        if self.ell == 0:
            return self._c(1)
        if self.family == "L":
            return (self.beta + n) ** self.ell
        if self.family == "S":
            return pochhammer(self.beta + n, self.ell)
        return pochhammer(-self.gamma - n, self.ell)

    def _coefficients(self, n: int, top: int) -> list:
        """Recursion weights for j = 1 .. top at table index n."""
        fam, one = self.family, self._c(1)
        if fam == "D":
            return [one] * top
        if fam == "L":
            bn = self.beta + n
            ratio = (bn - 1) / bn
            out, p = [one], one  # p = ratio^(j-2)
            for j in range(2, top + 1):
                out.append((bn - j) / bn * p)
                p = p * ratio
            return out[:top]
        if fam == "S":
            bn = self.beta + n
            head = (bn - 1) * (bn - 2)
            # the j = 1 weight is identically 1 (its closed form is 0/0 at bn = 2)
            rest = [head / ((bn + j - 2) * (bn + j - 3)) for j in range(2, top + 1)]
            return ([one] + rest)[:top]
        gn = self.gamma + n
        return [(gn - 2 * j + 2) / gn for j in range(1, top + 1)]

    def _advance(self, n, s, x, omega):
        if omega == 0:
            raise ValueError(f"{self.name}: remainder estimator {self.remainder.name} "
                             f"returned zero at n={n}")
        num, den, t = self.num, self.den, self.taint
        w, f0 = self._div(1, self._seed_weight(n) * omega)
        num.append(s * w)
        den.append(w)
        t.append(f0)
        top = n if self.max_order is None else min(n, self.max_order)
        self.frozen = top < n
        for j, c in enumerate(self._coefficients(n, top), start=1):
            i = n - j
            num[i] = num[i + 1] - c * num[i]
            den[i] = den[i + 1] - c * den[i]
            t[i] = t[i] or t[i + 1]
        r = n - top
        v, fired = self._div(num[r], den[r])
        return Estimate(v, r, top, not (fired or t[r]))


_LINEAR_KINDS = {"Lambda": "beta", "F": "alpha", "P": "zeta"}


class LinearTransformer(Transformer):
    """Linear transforms Λ (beta), F (alpha) and P (zeta).

    Each equals a ratio transformation with a fixed ω, so the denominator
    sums are known in closed form and a single array suffices. The estimate
    after s_m is the order-m transform at superscript 0.
    """

    def __init__(self, kind: str = "Lambda", param: Any = 1, **kw):
        if kind not in _LINEAR_KINDS:
            raise ValueError(f"unknown linear transform {kind!r}")
        if not param > 0:
            raise ValueError(f"{_LINEAR_KINDS[kind]} must be positive")
        super().__init__(**kw)
        self.name = kind
        self.kind = kind
        self.param = self._c(param)
        self.diag: list = []

    def _advance(self, n, s, x, omega):
        f = self.diag
        f.append(s)
        p = self.param
        for j in range(1, n + 1):
            i = n - j
            if self.kind == "Lambda":
                w = (p + n - j) / j
            elif self.kind == "F":
                w = (p + n - 1) / j
            else:
                w = (p + n - 2 * j + 1) / j
            f[i] = f[i + 1] + w * (f[i + 1] - f[i])
        return Estimate(f[0], 0, n, True)


def ratio_extend(state: RatioTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def linear_special_extend(state: LinearTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)
