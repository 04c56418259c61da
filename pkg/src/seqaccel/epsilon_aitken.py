"""Wynn's epsilon algorithm and the iterated Aitken delta-squared process."""

from __future__ import annotations

from .kernel import Estimate, Transformer, lozenge_selection, step_selection

__all__ = ["EpsilonTransformer", "AitkenTransformer", "epsilon_extend", "aitken_extend"]


class EpsilonTransformer(Transformer):
    """Wynn's epsilon algorithm with moving-lozenge storage.

    After consuming s_0 .. s_m, ``diag[m - j]`` holds eps_j^(m - j) for
    0 <= j <= m. Odd-subscript entries are auxiliary and never returned. Two
    scalars carry the overwritten entries of the previous counterdiagonal.

    Example:
        >>> eps = EpsilonTransformer()
        >>> eps.feed([1.0, 1.5, 1.75])[-1].value
        2.0
    """

    name = "epsilon"

    def __init__(self, **kw):
        super().__init__(**kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        e, t = self.diag, self.taint
        e.append(s)
        t.append(False)
        # eps_{-1} is zero; ``back`` shadows the old value one slot higher
        back, back_t = s * 0, False
        for i in range(n - 1, -1, -1):
            old, old_t = e[i], t[i]
            q, fired = self._div(1, e[i + 1] - old)
            e[i] = back + q
            t[i] = fired or back_t or old_t or t[i + 1]
            back, back_t = old, old_t
        sup, sub = lozenge_selection(n)
        return Estimate(e[sup], sup, sub, not t[sup])


class AitkenTransformer(Transformer):
    """Iterated Aitken delta-squared process in one array.

    Storage: after s_0 .. s_m, ``diag[m - v]`` holds A_{floor(v/2)}^(m - v).
    Each iteration uses s_n - (Δs_n)^2 / Δ^2 s_n, the numerically preferred
    form.
    """

    name = "aitken"

    def __init__(self, **kw):
        super().__init__(**kw)
        self.diag: list = []
        self.taint: list[bool] = []

    def _advance(self, n, s, x, omega):
        a, t = self.diag, self.taint
        a.append(s)
        t.append(False)
        for j in range(1, n // 2 + 1):
            i = n - 2 * j
            d0 = a[i + 1] - a[i]
            d1 = a[i + 2] - a[i + 1]
            q, fired = self._div(d0 * d0, d1 - d0)
            a[i] = a[i] - q
            t[i] = fired or t[i] or t[i + 1] or t[i + 2]
        sup, k = step_selection(n, 2)
        return Estimate(a[sup], sup, k, not t[sup])


def epsilon_extend(state: EpsilonTransformer, point) -> Estimate:
    """Functional alias of :meth:`EpsilonTransformer.extend`."""
    return state.extend(point)


def aitken_extend(state: AitkenTransformer, point) -> Estimate:
    """Functional alias of :meth:`AitkenTransformer.extend`."""
    return state.extend(point)
