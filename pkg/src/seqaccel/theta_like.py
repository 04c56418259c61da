"""Brezinski's theta algorithm and the transforms built the same way.

Contents: theta, its rho-based analogue Θ (with interpolation points), the
iterated theta_2 transform J, the Aitken-derived B and C, and the weighted
Δ² methods lambda, sigma and mu.
"""

from __future__ import annotations

from typing import Any, Optional

from .interpolation import PointFamily
from .kernel import AuxRule, Estimate, SequencePoint, Transformer, step_selection

__all__ = [
    "ThetaTransformer",
    "BigThetaTransformer",
    "JTransformer",
    "BCTransformer",
    "LSMTransformer",
    "theta_extend",
    "big_theta_extend",
    "j_extend",
    "bc_extend",
    "lsm_extend",
]


class ThetaTransformer(Transformer):
    """Brezinski's theta algorithm with two ping-pong arrays.

    After s_0 .. s_m the newest string theta_j^(m - floor(3j/2)),
    0 <= j <= floor((2m+1)/3), lives in ``arrays[m % 2]``; the other array
    holds the string of s_{m-1}. While the new string overwrites the string
    of s_{m-2}, three scalars shadow the overwritten entries two slots back,
    one slot back and the current slot.

    Args:
        modified: Use theta_{2k+1} = 1/Δtheta_{2k} (dropping the
            theta_{2k-1} term). The even columns then coincide with J.
    """

    name = "theta"

    def __init__(self, modified: bool = False, **kw):
        super().__init__(**kw)
        self.modified = modified
        self.arrays: list[list] = [[], []]
        self.taints: list[list[bool]] = [[], []]

    @staticmethod
    def top(m: int) -> int:
        return (2 * m + 1) // 3

    def _odd_update(self, m, k, back2, new_even, prev_even):
        """theta_{2k+1} from the even entry below it and the odd entry two strings back."""
        q, fired = self._div(1, new_even - prev_even)
        return (q if self.modified or k == 0 else back2 + q), fired

    def _even_update(self, m, k, old_even, old_odd, prev_even, prev_odd, new_odd):
        d_even = prev_even - old_even
        d_odd = new_odd - prev_odd
        q, fired = self._div(d_even * d_odd, new_odd - 2 * prev_odd + old_odd)
        return old_even + q, fired

    def _advance(self, m, s, x, omega):
        cur, cur_t = self.arrays[m % 2], self.taints[m % 2]
        prev, prev_t = self.arrays[1 - m % 2], self.taints[1 - m % 2]
        top = self.top(m)
        zero = s * 0
        # shadows of overwritten entries of the m-2 string: slots j-2, j-1
        sh2, sh2_t = zero, False
        sh1, sh1_t = zero, False
        for j in range(top + 1):
            have = j < len(cur)
            cur_old, cur_old_t = (cur[j], cur_t[j]) if have else (zero, False)
            if j == 0:
                val, tv = s, False
            elif j % 2 == 1:
                k = (j - 1) // 2
                val, fired = self._odd_update(m, k, sh2, cur[j - 1], prev[j - 1])
                tv = fired or cur_t[j - 1] or prev_t[j - 1] or (k > 0 and not self.modified and sh2_t)
            else:
                k = (j - 2) // 2
                val, fired = self._even_update(m, k, sh2, sh1, prev[j - 2], prev[j - 1], cur[j - 1])
                tv = fired or sh2_t or sh1_t or prev_t[j - 2] or prev_t[j - 1] or cur_t[j - 1]
            if have:
                cur[j], cur_t[j] = val, tv
            else:
                cur.append(val)
                cur_t.append(tv)
            sh2, sh2_t, sh1, sh1_t = sh1, sh1_t, cur_old, cur_old_t
        del cur[top + 1:], cur_t[top + 1:]
        sup, k3 = step_selection(m, 3)
        j = 2 * k3
        return Estimate(cur[j], sup, j, not cur_t[j])


class BigThetaTransformer(ThetaTransformer):
    """Θ: the theta construction applied to Wynn's rho algorithm.

    Same table geometry as theta; the default points are x_n = n + 1.
    """

    name = "big_theta"
    needs_x = True

    def __init__(self, points: Optional[AuxRule] = None, **kw):
        super().__init__(points=points, default_points=PointFamily("linear"), **kw)
        self.xs: list = []

    def _advance(self, m, s, x, omega):
        if any(x == old for old in self.xs):
            raise ValueError(f"{self.name}: coincident interpolation point {x!r}")
        self.xs.append(x)
        return super()._advance(m, s, x, omega)

    def _odd_update(self, m, k, back2, new_even, prev_even):
        xs = self.xs
        n = m - 3 * k - 1
        q, fired = self._div(xs[n + 2 * k + 1] - xs[n], new_even - prev_even)
        return (q if k == 0 else back2 + q), fired

    def _even_update(self, m, k, old_even, old_odd, prev_even, prev_odd, new_odd):
        xs = self.xs
        n = m - 3 * k - 3
        num = (xs[n + 2 * k + 2] - xs[n]) * (prev_even - old_even) * (new_odd - prev_odd)
        den = ((xs[n + 2 * k + 2] - xs[n + 1]) * (prev_odd - old_odd)
               - (xs[n + 2 * k + 1] - xs[n]) * (new_odd - prev_odd))
        q, fired = self._div(num, den)
        return old_even - q, fired


class _KnightTransformer(Transformer):
    """Single-array schemes where order k+1 at n uses order k at n..n+width."""

    width = 2

    def __init__(self, **kw):
        super().__init__(**kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _combine(self, n: int, j: int, i: int):
        raise NotImplementedError

    def _advance(self, n, s, x, omega):
        a, t = self.diag, self.taint
        a.append(s)
        t.append(False)
        w = self.width
        for j in range(1, n // w + 1):
            i = n - w * j
            val, fired = self._combine(n, j, i)
            a[i] = val
            t[i] = fired or any(t[i: i + w + 1])
        sup, k = step_selection(n, w)
        return Estimate(a[sup], sup, k, not t[sup])


class JTransformer(_KnightTransformer):
    """Iterated theta_2 transform J (iterated Lubkin transform).

    Storage: ``diag[n - v]`` holds J_{floor(v/3)}^(n - v).
    """

    name = "j"
    width = 3

    def _combine(self, n, j, i):
        a = self.diag
        d0, d1, d2 = a[i + 1] - a[i], a[i + 2] - a[i + 1], a[i + 3] - a[i + 2]
        dd0, dd1 = d1 - d0, d2 - d1
        q, fired = self._div(d0 * d1 * dd1, d2 * dd0 - d0 * dd1)
        return a[i + 1] - q, fired


class BCTransformer(_KnightTransformer):
    """The Aitken-derived transforms B and C (three new points per order).

    Args:
        which: ``"B"`` or ``"C"``.
    """

    width = 3

    def __init__(self, which: str = "B", **kw):
        if which not in ("B", "C"):
            raise ValueError("which must be 'B' or 'C'")
        super().__init__(**kw)
        self.which = which
        self.name = which

    def _combine(self, n, j, i):
        a = self.diag
        d0, d1, d2 = a[i + 1] - a[i], a[i + 2] - a[i + 1], a[i + 3] - a[i + 2]
        dd0, dd1 = d1 - d0, d2 - d1
        if self.which == "B":
            q, fired = self._div(d0 ** 3 * dd1, d0 * d0 * dd1 - d1 * d1 * dd0)
            return a[i] + q, fired
        q, fired = self._div(d1 * d1 * d2 * dd1, d1 * d1 * dd1 - d2 * d2 * dd0)
        return a[i + 2] + q, fired


class LSMTransformer(_KnightTransformer):
    """Weighted Δ² methods lambda (beta), sigma (alpha) and mu (zeta).

    Order k+1 at superscript n is
    X_k^(n+1) - c ΔX_k^(n) ΔX_k^(n+1) / ((c+1) ΔX_k^(n+1) - c ΔX_k^(n))
    with c = beta + n, alpha + n + k or zeta + n - k. Passing
    ``which="limit"`` uses the c -> infinity form, which is Aitken's process
    written as X^(n+1) - ΔX^(n) ΔX^(n+1) / Δ²X^(n).
    """

    width = 2

    def __init__(self, which: str = "lambda", param: Any = 1, **kw):
        if which not in ("lambda", "sigma", "mu", "limit"):
            raise ValueError(f"unknown weighted transform {which!r}")
        if which != "limit" and not param > 0:
            raise ValueError("parameter must be positive")
        super().__init__(**kw)
        self.which = which
        self.name = which
        self.param = self._c(param)

    def weight(self, n: int, j: int):
        """Weight c for the order-j entry at array index n - 2j."""
        p = self.param
        if self.which == "lambda":
            return p + (n - 2 * j)
        if self.which == "sigma":
            return p + (n - j - 1)
        return p + (n - 3 * j + 1)

    def _combine(self, n, j, i):
        a = self.diag
        d0, d1 = a[i + 1] - a[i], a[i + 2] - a[i + 1]
        if self.which == "limit":
            q, fired = self._div(d0 * d1, d1 - d0)
        else:
            c = self.weight(n, j)
            q, fired = self._div(c * d0 * d1, (c + 1) * d1 - c * d0)
        return a[i + 1] - q, fired


def theta_extend(state: ThetaTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def big_theta_extend(state: BigThetaTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def j_extend(state: JTransformer, point: SequencePoint) -> Estimate:
    return state.extend(point)


def bc_extend(state: BCTransformer, point: SequencePoint, which: Optional[str] = None) -> Estimate:
    if which is not None and which != state.which:
        raise ValueError(f"state computes {state.which}, not {which}")
    return state.extend(point)


def lsm_extend(state: LSMTransformer, point: SequencePoint, which: Optional[str] = None) -> Estimate:
    if which is not None and which != state.which:
        raise ValueError(f"state computes {state.which}, not {which}")
    return state.extend(point)
