from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lagrange_at_zero, rho_table, sidi_r, w_table
from seqaccel.interpolation import (
    DEFAULT_ALPHA_GRID,
    PointFamily,
    RhoTransformer,
    RichardsonTransformer,
    SidiRTransformer,
    WTransformer,
    beleznay_alpha_search,
    rho_extend,
)
from seqaccel.kernel import BINARY64, BINARY128, EXACT, History, SequencePoint
from seqaccel.levin_like import RemainderEstimator
from seqaccel.series_lab import ModelSequenceSpec, SeriesSpec, model_sequence

ZETA2 = SeriesSpec("zeta", 2)
SAMPLE = ZETA2.partial_sums(9, EXACT)


class TestPointFamily:
    @pytest.mark.parametrize("kind,expected", [
        ("reciprocal", Fraction(1, 4)),
        ("linear", Fraction(4)),
        ("levin_like", Fraction(4) * Fraction(1, 16)),
        ("reciprocal_levin_like", 1 / (Fraction(4) * Fraction(1, 16))),
        ("gbw", Fraction(1, 25)),
    ])
    def test_values(self, kind, expected):
        hist = History()
        for s, a in zip(ZETA2.partial_sums(6, EXACT), ZETA2.terms(6, EXACT)):
            hist.push(s, a)
        assert PointFamily(kind).value(3, hist, EXACT) == expected

    def test_power_kinds(self):
        hist = History()
        assert PointFamily("power", alpha=0.5).value(3, hist, BINARY64) == 2.0
        assert PointFamily("reciprocal_power", alpha=2).value(1, hist, EXACT) == Fraction(1, 4)

    def test_lag(self):
        assert PointFamily("gbw").lag == 1
        assert PointFamily("linear").lag == 0

    @pytest.mark.parametrize("kw", [{"kind": "cubic"}, {"beta": 0}, {"alpha": -1},
                                    {"kind": "explicit"}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PointFamily(**kw)

    def test_explicit_values(self):
        fam = PointFamily("explicit", values=[5, 7, 9])
        assert fam.value(1, History(), EXACT) == 7
        fam = PointFamily("explicit", values=lambda n: 2 ** n)
        assert fam.value(3, History(), EXACT) == 8


class TestRichardson:
    def test_equals_polynomial_extrapolation(self):
        x = [Fraction(1, n + 1) for n in range(len(SAMPLE))]
        rich = RichardsonTransformer(precision=EXACT)
        for m, est in enumerate(rich.feed(SAMPLE)):
            assert est.k == m and est.n == 0
            assert est.value == lagrange_at_zero(SAMPLE[: m + 1], x[: m + 1])

    def test_exact_on_polynomial_model(self):
        spec = ModelSequenceSpec("poly_in_x", limit=Fraction(7, 3), coeffs=(1, -2, 4),
                                 x=lambda n: Fraction(1, n + 2))
        pts = model_sequence(spec, 4, EXACT)
        rich = RichardsonTransformer(precision=EXACT)
        est = [rich.extend(p) for p in pts][-1]
        assert est.value == Fraction(7, 3)

    def test_coincident_points_rejected(self):
        rich = RichardsonTransformer(points=PointFamily("explicit", values=[1, 2, 2]))
        rich.feed([1.0, 2.0])
        with pytest.raises(ValueError, match="coincident"):
            rich.feed([3.0])

    def test_points_from_samples(self):
        rich = RichardsonTransformer()  # samples carry x, so the default rule is unused
        est = [rich.extend(SequencePoint(n, 1 + 2.0 / (n + 1), x=1.0 / (n + 1))) for n in range(3)][-1]
        assert est.value == pytest.approx(1.0, abs=1e-14)

    def test_zeta2(self):
        est = RichardsonTransformer().feed(ZETA2.partial_sums(16))[-1]
        assert abs(est.value - 1.6449340668482) < 1e-9


class TestSidiR:
    def test_matches_linear_system(self):
        x = [Fraction(1, n + 1) for n in range(7)]
        terms = ZETA2.terms(7, EXACT)
        omega = [(n + 1) * terms[n] for n in range(7)]
        sidi = SidiRTransformer(remainder=RemainderEstimator("u"), precision=EXACT)
        ests = sidi.feed(SAMPLE[:7], terms)
        for m in range(1, 7):
            assert ests[m].value == sidi_r(SAMPLE[: m + 1], x, omega)

    def test_exact_on_model(self):
        spec = ModelSequenceSpec("sidi_model", limit=2, coeffs=(3, -1, Fraction(1, 2)),
                                 omega=lambda n: Fraction(1, 3 ** n), x=lambda n: Fraction(1, n + 1))
        pts = model_sequence(spec, 4, EXACT)
        sidi = SidiRTransformer(points=None, remainder=None, precision=EXACT)
        assert [sidi.extend(p) for p in pts][-1].value == 2

    def test_zero_omega(self):
        sidi = SidiRTransformer(remainder=RemainderEstimator("t"))
        with pytest.raises(ValueError, match="zero remainder"):
            sidi.feed([0.0])


class TestRho:
    def test_matches_full_table(self):
        x = [Fraction(n + 1) for n in range(len(SAMPLE))]
        table = rho_table(SAMPLE, x)
        rho = RhoTransformer(precision=EXACT)
        for m, est in enumerate(rho.feed(SAMPLE)):
            assert (est.n, est.k) == (m % 2, 2 * (m // 2))
            assert est.value == table[est.k][est.n]

    def test_exact_on_rational_model(self):
        spec = ModelSequenceSpec("rational_in_x", limit=Fraction(5, 2), coeffs=(1, 3),
                                 denom=(2, 7), x=lambda n: Fraction(n + 1))
        pts = model_sequence(spec, 5, EXACT)
        rho = RhoTransformer(precision=EXACT)
        assert [rho.extend(p) for p in pts][-1].value == Fraction(5, 2)

    def test_requires_increasing_points(self):
        rho = RhoTransformer(points=PointFamily("explicit", values=[3, 2, 1]))
        rho.feed([1.0])
        with pytest.raises(ValueError, match="increase"):
            rho.feed([2.0])

    def test_functional_alias(self):
        assert rho_extend(RhoTransformer(), SequencePoint(0, 4.0)).value == 4.0

    def test_lemniscate_sqrt_points_binary64(self):
        lem = SeriesSpec("lemniscate")
        rho = RhoTransformer(points=PointFamily("power", alpha=0.5))
        est = rho.feed(lem.partial_sums(25), lem.terms(25))[-1]
        assert abs(est.value - 1.3110287771461) < 1e-8


class TestW:
    def test_matches_full_table(self):
        x = [Fraction(n + 1) for n in range(len(SAMPLE))]
        table = w_table(SAMPLE, x)
        w = WTransformer(precision=EXACT)
        for m, est in enumerate(w.feed(SAMPLE)):
            assert (est.n, est.k) == (m % 2, m // 2)
            assert est.value == table[est.k][est.n]

    def test_general_points_match_table(self):
        x = [Fraction(1, 1) + Fraction(n * n, 3) for n in range(len(SAMPLE))]
        table = w_table(SAMPLE, x)
        w = WTransformer(points=PointFamily("explicit", values=x), precision=EXACT)
        est = w.feed(SAMPLE)[-1]
        assert est.value == table[est.k][est.n]

    def test_standard_form(self):
        # with x_n = n + 1 the first order reduces to a weighted Δ² formula
        s = SAMPLE
        d0, d1 = s[1] - s[0], s[2] - s[1]
        expected = s[1] - 2 * d1 * d0 / (d1 - d0)
        assert WTransformer(precision=EXACT).feed(s[:3])[-1].value == expected

    def test_zeta2(self):
        est = WTransformer().feed(ZETA2.partial_sums(16))[-1]
        assert abs(est.value - 1.6449340668482) / 1.6449340668482 < 1e-9


class TestBeleznay:
    def test_zeta2_picks_unit_exponent(self):
        assert beleznay_alpha_search(ZETA2, alphas=(0.5, 1.0, 2.0)) == 1.0

    def test_lemniscate_picks_half(self):
        assert beleznay_alpha_search(SeriesSpec("lemniscate"), alphas=(0.25, 0.5, 1.0)) == 0.5

    def test_default_grid(self):
        assert DEFAULT_ALPHA_GRID[0] == 0.25 and DEFAULT_ALPHA_GRID[-1] == 2.0
        assert beleznay_alpha_search(ZETA2.partial_sums(13)) in DEFAULT_ALPHA_GRID

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            beleznay_alpha_search(ZETA2, alphas=())
        with pytest.raises(ValueError):
            beleznay_alpha_search(ZETA2, m=1)
        with pytest.raises(ValueError):
            beleznay_alpha_search([1.0, 2.0], m=5)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=20),
                min_size=2, max_size=6, unique=True))
def test_divided_difference_of_reciprocal(xs):
    # Sidi's R with s = 1/x and omega = 1 reproduces the divided difference identity:
    # [x_0..x_k] (1/x) = (-1)^k / (x_0 ... x_k)
    if 0 in xs:
        return
    k = len(xs) - 1
    sidi = SidiRTransformer(points=PointFamily("explicit", values=xs),
                            remainder=RemainderEstimator("explicit", values=lambda n: 1),
                            precision=EXACT)
    sidi.feed([1 / x for x in xs])
    prod = Fraction(1)
    for x in xs:
        prod *= x
    assert sidi.num[0] == Fraction((-1) ** k) / prod
