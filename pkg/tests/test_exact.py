from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from takumlab import NAR, NEG_INF, POS_INF, rel_2norm_error
from takumlab.exact import UndefinedErrorNorm, format_real, sqrt_decimal, to_exact
from takumlab.minifloat import E4M3, mf_decode, mf_encode
from takumlab.takum import takum_decode, takum_encode


def test_identity_and_total_loss():
    assert rel_2norm_error([Fraction(3), Fraction(-5)], [Fraction(3), Fraction(-5)]) == 0
    assert rel_2norm_error([Fraction(1)], [Fraction(0)]) == 1


def test_non_finite_gives_infinity():
    ref = [Fraction(10**6)]
    conv = [mf_decode(mf_encode(v, E4M3)) for v in ref]
    assert rel_2norm_error(ref, conv) == Decimal("Infinity")
    for bad in (NAR, POS_INF, NEG_INF):
        assert rel_2norm_error([Fraction(1), Fraction(2)], [Fraction(1), bad]).is_infinite()


def test_exactly_representable_values():
    ref = [Fraction(1), Fraction(2), Fraction(4)]
    assert rel_2norm_error(ref, [takum_decode(takum_encode(v, 8)) for v in ref]) == 0


def test_errors():
    with pytest.raises(UndefinedErrorNorm):
        rel_2norm_error([Fraction(0)], [Fraction(0)])
    with pytest.raises(ValueError):
        rel_2norm_error([Fraction(1)], [])
    with pytest.raises(ValueError):
        rel_2norm_error([POS_INF], [Fraction(1)])


values = st.lists(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000), min_size=1, max_size=12)


@settings(max_examples=200, deadline=None)
@given(values, st.data())
def test_matches_mpmath(ref, data):
    if all(v == 0 for v in ref):
        return
    conv = [v + data.draw(st.fractions(min_value=-1, max_value=1, max_denominator=64)) for v in ref]
    got = rel_2norm_error(ref, conv)
    with mpmath.workdps(80):
        num = mpmath.fsum((mpmath.mpf(a.numerator) / a.denominator - mpmath.mpf(b.numerator) / b.denominator) ** 2 for a, b in zip(ref, conv))
        den = mpmath.fsum((mpmath.mpf(a.numerator) / a.denominator) ** 2 for a in ref)
        want = mpmath.sqrt(num / den)
        assert abs(mpmath.mpf(str(got)) - want) <= want * mpmath.mpf(10) ** -38 + mpmath.mpf(10) ** -70


@settings(max_examples=100, deadline=None)
@given(values, st.integers(-60, 60))
def test_scale_invariance_and_order_independence(ref, k):
    if all(v == 0 for v in ref):
        return
    conv = [v * Fraction(9, 8) for v in ref]
    base = rel_2norm_error(ref, conv)
    s = Fraction(2) ** k
    assert rel_2norm_error([v * s for v in ref], [v * s for v in conv]) == base
    assert rel_2norm_error(ref[::-1], conv[::-1]) == base


def test_sqrt_digits():
    assert sqrt_decimal(Fraction(2)) == Decimal("1.414213562373095048801688724209698078569")
    assert sqrt_decimal(Fraction(1, 4)) == Decimal("0.5")


@pytest.mark.parametrize(
    "v, text",
    [
        (Fraction(1), "1.0000000000000000e+00"),
        (Fraction(1, 3), "3.3333333333333333e-01"),
        (Fraction(-57344), "-5.7344000000000000e+04"),
        (Fraction(0), "0.0000000000000000e+00"),
        (Decimal("Infinity"), "inf"),
        (Decimal("0.5"), "5.0000000000000000e-01"),
        (NAR, "nar"),
        (POS_INF, "inf"),
        (NEG_INF, "-inf"),
        (float("inf"), "inf"),
        (1.5, "1.5000000000000000e+00"),
    ],
)
def test_format_real(v, text):
    assert format_real(v) == text


def test_format_real_round_trips_binary64():
    import random

    rng = random.Random(2)
    for _ in range(2000):
        x = rng.uniform(-1, 1) * 10.0 ** rng.randint(-300, 300)
        assert float(format_real(Fraction(x))) == x


def test_to_exact():
    assert to_exact("0.1") == Fraction(0.1)
    assert to_exact(3) == 3
    assert to_exact(float("nan")) is NAR
    assert to_exact(float("-inf")) is NEG_INF
    with pytest.raises(TypeError):
        to_exact([1])
