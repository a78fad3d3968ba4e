from fractions import Fraction

import pytest

from fuzzyifs.numeric import Radical, format_scalar, le_sum, parse_scalar, scale, sqrt_exact


def test_sqrt_exact_rational_roots():
    assert sqrt_exact(Fraction(4)) == Fraction(2)
    assert sqrt_exact(Fraction(9, 16)) == Fraction(3, 4)
    assert sqrt_exact(0) == 0
    assert isinstance(sqrt_exact(Fraction(1, 4)), Fraction)


def test_sqrt_exact_irrational_roots():
    r = sqrt_exact(Fraction(2))
    assert isinstance(r, Radical)
    assert r.square == 2
    assert float(r) == pytest.approx(2 ** 0.5)


def test_radical_comparisons_are_exact():
    r2 = sqrt_exact(Fraction(2))
    r3 = sqrt_exact(Fraction(3))
    assert r2 < r3
    assert r3 > r2
    assert r2 != r3
    assert r2 < Fraction(3, 2)
    assert r2 > Fraction(7, 5)
    assert Fraction(7, 5) < r2  # reflected comparison
    assert max(Fraction(1), r2, Fraction(1, 2)) == r2
    assert r2 > -1  # nonnegative beats any negative rational


def test_radical_arithmetic():
    r2 = sqrt_exact(Fraction(2))
    assert r2 * r2 == Fraction(2)
    assert isinstance(r2 * r2, Fraction)
    assert (r2 * Fraction(3)).square == 18
    assert (Fraction(3) * r2).square == 18
    assert r2 / r2 == Fraction(1)
    assert (sqrt_exact(Fraction(8)) / Fraction(2)) == r2
    with pytest.raises(TypeError):
        r2 + r2  # sums leave the representation on purpose


def test_le_sum_triangle_comparisons():
    r2 = sqrt_exact(Fraction(2))
    # sqrt(2) <= 1 + 1 but not <= 1/2 + 1/2
    assert le_sum(r2, Fraction(1), Fraction(1))
    assert not le_sum(r2, Fraction(1, 2), Fraction(1, 2))
    # 2 <= sqrt(2) + sqrt(2) (equality after squaring twice)
    assert le_sum(Fraction(2), r2, r2)
    assert le_sum(sqrt_exact(Fraction(5)), sqrt_exact(Fraction(2)), sqrt_exact(Fraction(3)))


def test_scale():
    r5 = sqrt_exact(Fraction(5))
    assert scale(r5, Fraction(1, 2)) == sqrt_exact(Fraction(5, 4))
    assert scale(Fraction(3, 4), Fraction(2)) == Fraction(3, 2)
    assert scale(0.5, 0.25) == 0.125


def test_parse_scalar_modes():
    assert parse_scalar("3/4", True) == Fraction(3, 4)
    assert parse_scalar("0.1", True) == Fraction(1, 10)
    assert parse_scalar(3, True) == Fraction(3)
    assert parse_scalar("3/4", False) == 0.75
    assert parse_scalar(0.5, False) == 0.5
    with pytest.raises(ValueError):
        parse_scalar(True, True)
    with pytest.raises(ValueError):
        parse_scalar("not a number", True)


def test_format_scalar():
    assert format_scalar(Fraction(3, 4)) == "3/4"
    assert format_scalar(Fraction(2)) == "2"
    assert format_scalar(0.1) == "0.10000000000000001"
