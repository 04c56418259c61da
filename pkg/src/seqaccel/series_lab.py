"""Test series, model sequences and their reference values.

Every generator builds its terms in exact rational arithmetic where the
series allows it and converts at the end, so binary64 and binary128 runs see
correctly rounded inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import mpmath

from .kernel import BINARY64, Precision, SequencePoint, pochhammer

__all__ = [
    "SeriesSpec",
    "ModelSequenceSpec",
    "Reference",
    "SERIES_KINDS",
    "MODEL_KINDS",
    "terms",
    "partial_sums",
    "reduced_bessel",
    "reference",
    "model_sequence",
    "double_factorial_ratio",
    "series_from_name",
]

SERIES_KINDS = (
    "geometric",
    "zeta",
    "euler_2f0",
    "log_stieltjes",
    "lemniscate",
    "bessel_expansion",
    "half_factorial",
    "sigma_rho",
)

# Default parameter per kind (None: the kind takes no parameter).
_DEFAULT_PARAM = {
    "geometric": 0.5,
    "zeta": 2,
    "euler_2f0": 3,
    "log_stieltjes": 1,
    "lemniscate": None,
    "bessel_expansion": 0.8,
    "half_factorial": None,
    "sigma_rho": 0.5,
}


@dataclass(frozen=True)
class Reference:
    """Reference value of a series and where it comes from."""

    value: Any
    provenance: str


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(str(v))


@dataclass(frozen=True)
class SeriesSpec:
    """One catalog series.

    Attributes:
        kind: One of :data:`SERIES_KINDS`.
        param: The series argument (z, the zeta exponent, or rho); ignored
            for ``lemniscate`` and ``half_factorial``.
    """

    kind: str
    param: Any = None

    def __post_init__(self):
        if self.kind not in SERIES_KINDS:
            raise ValueError(f"unknown series {self.kind!r}")
        if self.param is None and _DEFAULT_PARAM[self.kind] is not None:
            object.__setattr__(self, "param", _DEFAULT_PARAM[self.kind])
        p = self.param
        if self.kind == "bessel_expansion" and not p > 0:
            raise ValueError("bessel_expansion needs z > 0")
        if self.kind == "euler_2f0" and p == 0:
            raise ValueError("euler_2f0 needs z != 0")
        if self.kind == "zeta" and not p > 1:
            raise ValueError("zeta series needs exponent > 1")

    @property
    def label(self) -> str:
        if _DEFAULT_PARAM[self.kind] is None:
            return self.kind
        return f"{self.kind}({self.param})"

    def terms(self, count: int, precision: Precision = BINARY64) -> list:
        return terms(self, count, precision)

    def partial_sums(self, count: int, precision: Precision = BINARY64) -> list:
        return partial_sums(self, count, precision)

    def reference(self, precision: Precision = BINARY64) -> Optional[Reference]:
        return reference(self, precision)

    def stieltjes(self):
        """(mu, z) such that the terms are (-1)^m mu(m) z^m, or None.

        Only the two moment series of the catalog have this form: the
        logarithm series (moments 1/(m+1), argument z, one extra factor z
        absorbed into the moments) and the Euler series (moments m!,
        argument 1/z).
        """
        if self.kind == "log_stieltjes":
            z = _exact(self.param)
            return (lambda m: z / (m + 1)), z
        if self.kind == "euler_2f0":
            return (lambda m: Fraction(math.factorial(m))), 1 / _exact(self.param)
        return None


def double_factorial_ratio(m: int) -> Fraction:
    """(2m-1)!!/(2m)!! computed as (1/2)_m / m!."""
    return pochhammer(Fraction(1, 2), m) / math.factorial(m)


def _bessel_poly(n: int, z: Fraction) -> Fraction:
    """e^z * k_{n+1/2}(z) as an exact rational (terminating 1F1 sum)."""
    if n == -1:
        return 1 / z
    total, term = Fraction(0), Fraction(1)
    for j in range(n + 1):
        total += term
        # ratio of consecutive 1F1(-n; -2n; 2z) terms
        if j < n:
            term *= Fraction(-n + j, -2 * n + j) * 2 * z / (j + 1)
    return 2**n * pochhammer(Fraction(1, 2), n) * total


def reduced_bessel(n: int, z, precision: Precision = BINARY64):
    """Reduced Bessel function k_{n+1/2}(z).

    Args:
        n: Order index, n >= 0 (n = -1 gives exp(-z)/z and needs z > 0).
        z: Argument; must be non-negative, and z = 0 returns the value at the
            origin, 2^n (1/2)_n.
        precision: Arithmetic mode of the result.

    Raises:
        ValueError: For z < 0, or z = 0 with n = -1, or n < -1.
    """
    if n < -1:
        raise ValueError("reduced_bessel needs n >= -1")
    zq = _exact(z)
    if zq < 0 or (zq == 0 and n == -1):
        raise ValueError("reduced_bessel needs z > 0")
    if zq == 0:
        return precision.convert(2**n * pochhammer(Fraction(1, 2), n))
    return precision.convert(_bessel_poly(n, zq)) * precision.exp(-precision.convert(zq))


def _exact_terms(spec: SeriesSpec, count: int):
    """Exact rational terms, or None when the series needs a transcendental factor."""
    k, p = spec.kind, spec.param
    out: list[Fraction] = []
    if k == "geometric":
        z = _exact(p)
        out = [z**m for m in range(count)]
    elif k == "zeta":
        ex = _exact(p)
        if ex.denominator != 1:
            return None
        out = [Fraction(1, (m + 1) ** int(ex)) for m in range(count)]
    elif k == "euler_2f0":
        z = _exact(p)
        t = Fraction(1)
        for m in range(count):
            out.append(t)
            t *= -Fraction(m + 1) / z
    elif k == "log_stieltjes":
        z = _exact(p)
        out = [(-1) ** m * z ** (m + 1) / (m + 1) for m in range(count)]
    elif k == "lemniscate":
        out = [double_factorial_ratio(m) / (4 * m + 1) for m in range(count)]
    elif k == "half_factorial":
        out = [pochhammer(Fraction(1, 2), m) / (2 * math.factorial(m + 1)) for m in range(count)]
    elif k == "sigma_rho":
        r = _exact(p)
        out = [Fraction(0)] + [r ** (m - 1) for m in range(1, count)]
        out = out[:count]
    elif k == "bessel_expansion":
        z = _exact(p)
        out = [_bessel_poly(m - 1, z) / (2**m * math.factorial(m)) for m in range(count)]
    return out


def terms(spec: SeriesSpec, count: int, precision: Precision = BINARY64) -> list:
    """First ``count`` terms a_0, a_1, ... of a catalog series."""
    if count < 1:
        raise ValueError("count must be positive")
    exact = _exact_terms(spec, count)
    if exact is None:  # zeta with non-integer exponent
        ex = precision.convert(spec.param)
        return [precision.power(m + 1, -ex) for m in range(count)]
    vals = [precision.convert(t) for t in exact]
    if spec.kind == "bessel_expansion":
        f = precision.exp(-precision.convert(_exact(spec.param)))
        vals = [v * f for v in vals]
    return vals


def partial_sums(spec: SeriesSpec, count: int, precision: Precision = BINARY64) -> list:
    """First ``count`` partial sums s_0, s_1, ...

    Sums are accumulated exactly before rounding whenever the terms are
    rational.
    """
    if count < 1:
        raise ValueError("count must be positive")
    exact = _exact_terms(spec, count)
    if exact is None:
        out, acc = [], precision.convert(0)
        for t in terms(spec, count, precision):
            acc = acc + t
            out.append(acc)
        return out
    sums, acc = [], Fraction(0)
    for t in exact:
        acc += t
        sums.append(acc)
    vals = [precision.convert(s) for s in sums]
    if spec.kind == "bessel_expansion":
        f = precision.exp(-precision.convert(_exact(spec.param)))
        vals = [v * f for v in vals]
    return vals


_TABULATED = {
    ("zeta", Fraction(2)): ("1.6449340668482", "tabulated: pi^2/6"),
    ("euler_2f0", Fraction(3)): ("0.78625122076594",
                                 "tabulated library value; transforms agree on 0.78625122076596"),
    ("euler_2f0", Fraction(1, 2)): ("0.46145531624187", "tabulated"),
    ("log_stieltjes", Fraction(5)): ("1.79175946922806", "tabulated: ln 6"),
    ("log_stieltjes", Fraction(1)): ("0.69314718055995", "tabulated: ln 2"),
    ("log_stieltjes", Fraction(-9, 10)): ("-2.30258509299405", "tabulated: ln 0.1"),
    ("lemniscate", None): ("1.3110287771461", "tabulated: Gamma(1/4)^2 / (4 sqrt(2 pi))"),
}

EULER_CONSENSUS = {Fraction(3): "0.78625122076596", Fraction(1, 2): "0.46145531624187"}


def reference(spec: SeriesSpec, precision: Precision = BINARY64) -> Optional[Reference]:
    """Reference value with provenance, or None when none is known.

    Tabulated values are returned as printed (13 or 14 significant digits).
    Closed forms are evaluated in the requested precision.
    """
    k = spec.kind
    key = (k, None if spec.param is None or _DEFAULT_PARAM[k] is None else _exact(spec.param))
    if key in _TABULATED:
        val, prov = _TABULATED[key]
        return Reference(precision.convert(val), prov)
    c = precision.convert
    if k == "geometric":
        z = _exact(spec.param)
        if z == 1:
            return None
        return Reference(c(1 / (1 - z)), "closed form: 1/(1-z)")
    if k == "sigma_rho":
        r = _exact(spec.param)
        if r == 1:
            return None
        return Reference(c(1 / (1 - r)), "closed form: 1/(1-rho)")
    if k == "bessel_expansion":
        return Reference(c(1 / _exact(spec.param)), "closed form: 1/z")
    if k == "half_factorial":
        return Reference(c(1), "closed form: 1")
    if k == "zeta":
        ctx = precision.ctx or mpmath.mp
        return Reference(c(ctx.zeta(c(spec.param))), "closed form: Riemann zeta")
    if k == "log_stieltjes":
        z = _exact(spec.param)
        if z <= -1:
            return None
        ctx = precision.ctx or mpmath.mp
        return Reference(c(ctx.log1p(c(z))), "closed form: ln(1+z)")
    return None


def series_from_name(text: str) -> SeriesSpec:
    """Parse ``kind`` or ``kind(param)`` / ``kind:param`` into a spec."""
    t = text.strip()
    param: Any = None
    if t.endswith(")") and "(" in t:
        t, arg = t[:-1].split("(", 1)
        param = arg
    elif ":" in t:
        t, param = t.split(":", 1)
    if param is not None:
        param = Fraction(param.strip())
        if param.denominator == 1:
            param = int(param)
    return SeriesSpec(t.strip(), param)


# --------------------------------------------------------------------------
# model sequences

MODEL_KINDS = (
    "exp_sum",
    "two_geometric",
    "rational_in_x",
    "levin_model",
    "s_model",
    "m_model",
    "poly_in_x",
    "sidi_model",
    "drummond_model",
    "pochhammer_ratio",
)


@dataclass(frozen=True)
class ModelSequenceSpec:
    """Sequence built to be reproduced exactly by one transformation.

    Attributes:
        kind: One of :data:`MODEL_KINDS`.
        limit: The limit s.
        coeffs: c_j (for ``rational_in_x``: numerator coefficients a_1..a_k).
        ratios: lambda_j for ``exp_sum`` / ``two_geometric``.
        denom: b_1..b_k for ``rational_in_x``.
        beta: Shift for ``levin_model`` / ``s_model``.
        gamma: Shift for ``m_model``.
        a: Numerator Pochhammer argument for ``pochhammer_ratio``.
        b: Denominator Pochhammer argument for ``pochhammer_ratio``.
        omega: Callable n -> ω_n, required by the ω-based models.
        x: Callable n -> x_n, required by the point-based models.
    """

    kind: str
    limit: Any = 0
    coeffs: Sequence = ()
    ratios: Sequence = ()
    denom: Sequence = ()
    beta: Any = 1
    gamma: Any = 10
    a: Any = Fraction(1, 2)
    b: Any = 2
    omega: Optional[Callable[[int], Any]] = None
    x: Optional[Callable[[int], Any]] = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model sequence {self.kind!r}")
        needs_omega = self.kind in ("levin_model", "s_model", "m_model", "sidi_model",
                                    "drummond_model")
        needs_x = self.kind in ("rational_in_x", "poly_in_x", "sidi_model")
        if needs_omega and self.omega is None:
            raise ValueError(f"{self.kind} needs an omega generator")
        if needs_x and self.x is None:
            raise ValueError(f"{self.kind} needs an x generator")
        if self.kind in ("exp_sum", "two_geometric") and len(self.coeffs) != len(self.ratios):
            raise ValueError("coeffs and ratios must have equal length")
        if self.kind == "two_geometric" and len(self.coeffs) != 2:
            raise ValueError("two_geometric takes exactly two terms")
        if self.kind == "rational_in_x" and len(self.coeffs) != len(self.denom):
            raise ValueError("rational_in_x needs as many numerator as denominator coefficients")


def _model_value(spec: ModelSequenceSpec, n: int, c):
    s = c(spec.limit)
    k = spec.kind
    if k in ("exp_sum", "two_geometric"):
        return s + sum((c(cj) * c(lj) ** n for cj, lj in zip(spec.coeffs, spec.ratios)), c(0))
    if k == "rational_in_x":
        x = c(spec.x(n))
        deg = len(spec.coeffs)
        num = s * x**deg + sum((c(aj) * x ** (deg - 1 - j) for j, aj in enumerate(spec.coeffs)), c(0))
        den = x**deg + sum((c(bj) * x ** (deg - 1 - j) for j, bj in enumerate(spec.denom)), c(0))
        return num / den
    if k == "poly_in_x":
        x = c(spec.x(n))
        return s + sum((c(cj) * x ** (j + 1) for j, cj in enumerate(spec.coeffs)), c(0))
    if k == "pochhammer_ratio":
        return s + pochhammer(c(spec.a), n + 1) / pochhammer(c(spec.b), n + 1)
    om = c(spec.omega(n))
    if k == "levin_model":
        base = c(spec.beta) + n
        corr = sum((c(cj) / base**j for j, cj in enumerate(spec.coeffs)), c(0))
    elif k == "s_model":
        base = c(spec.beta) + n
        corr = sum((c(cj) / pochhammer(base, j) for j, cj in enumerate(spec.coeffs)), c(0))
    elif k == "m_model":
        base = -c(spec.gamma) - n
        corr = sum((c(cj) / pochhammer(base, j) for j, cj in enumerate(spec.coeffs)), c(0))
    elif k == "sidi_model":
        x = c(spec.x(n))
        corr = sum((c(cj) * x**j for j, cj in enumerate(spec.coeffs)), c(0))
    else:  # drummond_model: polynomial in n
        corr = sum((c(cj) * n**j for j, cj in enumerate(spec.coeffs)), c(0))
    return s + om * corr


def model_sequence(spec: ModelSequenceSpec, count: int,
                   precision: Precision = BINARY64) -> list[SequencePoint]:
    """First ``count`` elements of a model sequence as sample points.

    Each point carries x and ω when the model defines them. Terms are set
    to s_n - s_{n-1} with s_{-1} taken from the model formula, so rules that
    read terms see the model's own differences.
    """
    c = precision.convert
    pts = []
    prev = _model_value(spec, -1, c) if spec.kind == "pochhammer_ratio" else None
    for n in range(count):
        s = _model_value(spec, n, c)
        term = None if prev is None else s - prev
        x = c(spec.x(n)) if spec.x is not None else None
        om = c(spec.omega(n)) if spec.omega is not None else None
        pts.append(SequencePoint(n, s, x=x, omega=om, term=term))
        prev = s if prev is not None else None
    return pts
