"""Shared test utilities: digit counting and a registry of transform variants."""

from __future__ import annotations

import math

from seqaccel.epsilon_aitken import AitkenTransformer, EpsilonTransformer
from seqaccel.interpolation import (
    PointFamily,
    RhoTransformer,
    RichardsonTransformer,
    SidiRTransformer,
    WTransformer,
)
from seqaccel.levin_like import LinearTransformer, RatioTransformer, RemainderEstimator
from seqaccel.theta_like import (
    BCTransformer,
    BigThetaTransformer,
    JTransformer,
    LSMTransformer,
    ThetaTransformer,
)


def digits(value, ref) -> float:
    """Matching significant digits, -log10 of the relative error."""
    err = abs(value - ref)
    if err == 0:
        return math.inf
    return -math.log10(float(err / abs(ref)))


def ratio(family, rule, **kw):
    def make(precision):
        return RatioTransformer(family, RemainderEstimator(rule, m_variant=family == "M"),
                                precision=precision, **kw)
    return make


# every transform variant the package offers, keyed by a readable id
FACTORIES = {
    "epsilon": lambda p: EpsilonTransformer(precision=p),
    "aitken": lambda p: AitkenTransformer(precision=p),
    "richardson": lambda p: RichardsonTransformer(precision=p),
    "sidi_r": lambda p: SidiRTransformer(remainder=RemainderEstimator("t"), precision=p),
    "rho": lambda p: RhoTransformer(precision=p),
    "w": lambda p: WTransformer(precision=p),
    "theta": lambda p: ThetaTransformer(precision=p),
    "theta_mod": lambda p: ThetaTransformer(modified=True, precision=p),
    "big_theta": lambda p: BigThetaTransformer(precision=p),
    "j": lambda p: JTransformer(precision=p),
    "B": lambda p: BCTransformer("B", precision=p),
    "C": lambda p: BCTransformer("C", precision=p),
    "lambda": lambda p: LSMTransformer("lambda", 1, precision=p),
    "sigma": lambda p: LSMTransformer("sigma", 1, precision=p),
    "mu": lambda p: LSMTransformer("mu", 1, precision=p),
    "Lambda": lambda p: LinearTransformer("Lambda", 1, precision=p),
    "F": lambda p: LinearTransformer("F", 1, precision=p),
    "P": lambda p: LinearTransformer("P", 1, precision=p),
}
for _fam in "LSMD":
    for _rule in ("u", "t", "d", "v"):
        FACTORIES[f"{_fam}[{_rule}]"] = ratio(_fam, _rule)
