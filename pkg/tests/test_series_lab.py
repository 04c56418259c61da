import math
from fractions import Fraction

import mpmath
import pytest

from seqaccel.kernel import BINARY64, BINARY128, EXACT
from seqaccel.series_lab import (
    EULER_CONSENSUS,
    MODEL_KINDS,
    SERIES_KINDS,
    ModelSequenceSpec,
    SeriesSpec,
    double_factorial_ratio,
    model_sequence,
    reduced_bessel,
    series_from_name,
)


class TestCatalog:
    @pytest.mark.parametrize("spec,index,expected", [
        (SeriesSpec("euler_2f0", 3), 3, Fraction(2, 3)),
        (SeriesSpec("log_stieltjes", 1), 3, Fraction(7, 12)),
        (SeriesSpec("lemniscate"), 3, Fraction(1) + Fraction(1, 10) + Fraction(3, 72) + Fraction(5, 208)),
        (SeriesSpec("zeta", 2), 2, Fraction(49, 36)),
        (SeriesSpec("geometric", Fraction(1, 2)), 3, Fraction(15, 8)),
        (SeriesSpec("half_factorial"), 1, Fraction(1, 2) + Fraction(1, 8)),
        (SeriesSpec("sigma_rho", Fraction(1, 2)), 2, Fraction(3, 2)),
    ])
    def test_partial_sums_exact(self, spec, index, expected):
        assert spec.partial_sums(index + 1, EXACT)[index] == expected

    def test_binary64_sums_are_correctly_rounded(self):
        spec = SeriesSpec("euler_2f0", 3)
        exact = spec.partial_sums(25, EXACT)
        assert spec.partial_sums(25) == [float(s) for s in exact]

    def test_lemniscate_published_row(self):
        assert SeriesSpec("lemniscate").partial_sums(4)[3] == pytest.approx(1.16570512820513, abs=1e-14)

    def test_bessel_series(self):
        s = SeriesSpec("bessel_expansion", Fraction(4, 5)).partial_sums(8)
        assert s[7] == pytest.approx(1.042231219617028, abs=1e-14)

    def test_bessel_terms_match_mpmath(self):
        z = Fraction(4, 5)
        a = SeriesSpec("bessel_expansion", z).terms(6, BINARY128)
        with mpmath.workdps(40):
            zz = mpmath.mpf(4) / 5
            for m in range(1, 6):
                nu = mpmath.mpf(m) - mpmath.mpf(1) / 2
                kv = mpmath.sqrt(2 / mpmath.pi) * zz**nu * mpmath.besselk(nu, zz)
                assert abs(a[m] - kv / (2**m * math.factorial(m))) < 1e-30

    def test_terms_and_sums_agree(self):
        for kind in SERIES_KINDS:
            spec = SeriesSpec(kind)
            a = spec.terms(10, BINARY128)
            s = spec.partial_sums(10, BINARY128)
            acc = 0
            for t, v in zip(a, s):
                acc += t
                assert abs(acc - v) <= 1e-28 * max(1, abs(v))

    def test_stieltjes_moments_reproduce_terms(self):
        for spec in (SeriesSpec("log_stieltjes", Fraction(1, 2)), SeriesSpec("euler_2f0", 3)):
            mu, z = spec.stieltjes()
            terms = spec.terms(8, EXACT)
            assert terms == [(-1) ** m * mu(m) * z**m for m in range(8)]
        assert SeriesSpec("zeta").stieltjes() is None

    @pytest.mark.parametrize("kind,param", [("zeta", 1), ("bessel_expansion", 0),
                                            ("euler_2f0", 0), ("cosine", None)])
    def test_invalid(self, kind, param):
        with pytest.raises(ValueError):
            SeriesSpec(kind, param)

    def test_count_must_be_positive(self):
        with pytest.raises(ValueError):
            SeriesSpec("zeta").partial_sums(0)

    def test_non_integer_zeta_exponent(self):
        s = SeriesSpec("zeta", 2.5).partial_sums(3)
        assert s[2] == pytest.approx(1 + 2**-2.5 + 3**-2.5)


class TestReferences:
    def test_tabulated(self):
        ref = SeriesSpec("zeta", 2).reference()
        assert ref.value == 1.6449340668482 and "pi^2/6" in ref.provenance

    def test_closed_forms(self):
        assert SeriesSpec("geometric", Fraction(1, 3)).reference().value == 1.5
        assert SeriesSpec("bessel_expansion", Fraction(4, 5)).reference().value == 1.25
        assert SeriesSpec("half_factorial").reference().value == 1.0
        ref = SeriesSpec("log_stieltjes", Fraction(1, 2)).reference(BINARY128)
        assert abs(ref.value - BINARY128.ctx.log(BINARY128.convert("1.5"))) == 0

    def test_divergent_without_antilimit(self):
        assert SeriesSpec("geometric", 1).reference() is None
        assert SeriesSpec("log_stieltjes", -1).reference() is None

    def test_euler_consensus(self):
        assert EULER_CONSENSUS[Fraction(3)] == "0.78625122076596"


class TestHelpers:
    def test_double_factorial_ratio(self):
        assert double_factorial_ratio(0) == 1
        assert double_factorial_ratio(3) == Fraction(1 * 3 * 5, 2 * 4 * 6)
        # stays exact far beyond where the factorials would overflow a double
        assert double_factorial_ratio(400) > 0

    def test_reduced_bessel(self):
        assert reduced_bessel(1, 1) == pytest.approx(0.7357588823428847, rel=1e-15)
        assert reduced_bessel(0, 2) == pytest.approx(math.exp(-2), rel=1e-15)
        assert reduced_bessel(-1, 2) == pytest.approx(math.exp(-2) / 2, rel=1e-15)
        assert reduced_bessel(3, 0) == 15

    @pytest.mark.parametrize("n,z", [(-2, 1), (0, -1), (-1, 0)])
    def test_reduced_bessel_domain(self, n, z):
        with pytest.raises(ValueError):
            reduced_bessel(n, z)

    @pytest.mark.parametrize("text,kind,param", [
        ("zeta(2)", "zeta", 2), ("euler_2f0:3", "euler_2f0", 3),
        ("euler_2f0(1/2)", "euler_2f0", Fraction(1, 2)), ("lemniscate", "lemniscate", None),
        ("bessel_expansion(0.8)", "bessel_expansion", Fraction(4, 5)),
    ])
    def test_series_from_name(self, text, kind, param):
        spec = series_from_name(text)
        assert spec.kind == kind and spec.param == param

    def test_series_from_name_unknown(self):
        with pytest.raises(ValueError):
            series_from_name("nope(1)")


class TestModelSequences:
    def test_kinds_validated(self):
        with pytest.raises(ValueError):
            ModelSequenceSpec("mystery")
        with pytest.raises(ValueError):
            ModelSequenceSpec("levin_model")  # needs omega
        with pytest.raises(ValueError):
            ModelSequenceSpec("poly_in_x")  # needs x
        with pytest.raises(ValueError):
            ModelSequenceSpec("exp_sum", coeffs=(1,), ratios=())
        with pytest.raises(ValueError):
            ModelSequenceSpec("two_geometric", coeffs=(1,), ratios=(Fraction(1, 2),))

    def test_points_carry_aux(self):
        spec = ModelSequenceSpec("sidi_model", limit=1, coeffs=(1,), omega=lambda n: Fraction(1, n + 1),
                                 x=lambda n: Fraction(n))
        pts = model_sequence(spec, 3, EXACT)
        assert [p.omega for p in pts] == [1, Fraction(1, 2), Fraction(1, 3)]
        assert [p.x for p in pts] == [0, 1, 2]
        assert pts[2].s == 1 + Fraction(1, 3)

    def test_pochhammer_ratio_terms_use_model_history(self):
        spec = ModelSequenceSpec("pochhammer_ratio", limit=0, a=Fraction(1, 2), b=2)
        pts = model_sequence(spec, 3, EXACT)
        # s_{-1} = s + 1 from the empty Pochhammer products
        assert pts[0].term == pts[0].s - 1
        assert pts[2].term == pts[2].s - pts[1].s

    def test_all_kinds_constructible(self):
        om, x = (lambda n: Fraction(1, n + 1)), (lambda n: Fraction(n + 1))
        for kind in MODEL_KINDS:
            kw = {"omega": om, "x": x}
            if kind in ("exp_sum", "two_geometric"):
                kw.update(coeffs=(1, 2), ratios=(Fraction(1, 2), Fraction(1, 3)))
            elif kind == "rational_in_x":
                kw.update(coeffs=(1,), denom=(2,))
            else:
                kw.update(coeffs=(1, 2))
            pts = model_sequence(ModelSequenceSpec(kind, limit=3, **kw), 4, BINARY64)
            assert len(pts) == 4 and all(math.isfinite(p.s) for p in pts)
