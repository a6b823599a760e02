import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from levinorm.scalars import (GaussianRational, ScalarParseError, abs2, format_scalar,
                              parse_scalar, to_complex, to_field)

from conftest import rationals

gaussians = st.builds(GaussianRational, rationals(), rationals())


@given(rationals(1000))
def test_rational_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(gaussians)
def test_gaussian_round_trip(z):
    assert parse_scalar(format_scalar(z), "gaussian") == z


@pytest.mark.parametrize("text,value", [("3/4", mpq(3, 4)), ("-7", mpq(-7)), (" 2 / -6 ", mpq(-1, 3)),
                                        (5, mpq(5))])
def test_parse_forms(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["1/0", "0.5", "abc", "1/", 0.5, True, None, [1]])
def test_parse_rejects(bad):
    with pytest.raises(ScalarParseError):
        parse_scalar(bad)


def test_complex_outside_gaussian_mode():
    with pytest.raises(ScalarParseError):
        parse_scalar({"re": "1", "im": "2"})
    assert parse_scalar({"re": "1/2", "im": "0"}) == mpq(1, 2)
    with pytest.raises(ScalarParseError):
        parse_scalar({"re": "1", "imag": "2"}, "gaussian")


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == GaussianRational()
    if b:
        assert (a / b) * b == a


@given(gaussians, rationals())
def test_mixed_arithmetic(z, q):
    assert z + q == q + z
    assert z * q == q * z
    assert (q - z) == -(z - q)


def test_i_squared_and_modulus():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert abs2(GaussianRational(3, 4)) == 25
    assert to_complex(GaussianRational(1, -2)) == complex(1, -2)
    assert to_field(mpq(2), "gaussian") == GaussianRational(2, 0)
    with pytest.raises(ValueError):
        to_field(GaussianRational(0, 1), "rational")
