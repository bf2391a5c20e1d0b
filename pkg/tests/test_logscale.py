import math
import random
from fractions import Fraction

import gmpy2
import pytest

from liouville_minima import Interval, QScale, ValidationError, log_interval


def high_precision_log(value) -> float:
    """Reference natural log at 200 bits via gmpy2, independent of the
    package's directed-rounding interval construction."""
    with gmpy2.context(precision=200):
        f = Fraction(value)
        return float(gmpy2.log(gmpy2.mpq(f.numerator, f.denominator)))


class TestInterval:
    def test_validated_log_contains_reference(self):
        for value in (2, 3, 10, 97, Fraction(1, 3), Fraction(110001, 10**6), 10**50):
            iv = log_interval(value)
            ref = high_precision_log(value)
            assert iv.lo <= ref <= iv.hi
            assert iv.width() < 1e-12

    def test_log_width_request_honored(self):
        iv = log_interval(Fraction(7, 5), 1e-14)
        assert iv.width() < 1e-14

    def test_log_requires_positive(self):
        with pytest.raises(ValidationError):
            log_interval(Fraction(0))
        with pytest.raises(ValidationError):
            log_interval(Fraction(-3, 2))

    def test_arithmetic_containment(self):
        rng = random.Random(7)
        for _ in range(200):
            a = rng.uniform(-5, 5)
            b = rng.uniform(-5, 5)
            A = Interval(a - abs(a) * 1e-9 - 1e-12, a + abs(a) * 1e-9 + 1e-12)
            B = Interval(b - abs(b) * 1e-9 - 1e-12, b + abs(b) * 1e-9 + 1e-12)
            assert (A + B).contains(a + b)
            assert (A - B).contains(a - b)
            assert (A * B).contains(a * b)
            assert (-A).contains(-a)
            assert A.scale(3).contains(3 * a)
            assert A.shift(Fraction(1, 2)).contains(a + 0.5)
            assert A.max_with(B).contains(max(a, b))

    def test_div_pos_containment(self):
        rng = random.Random(11)
        for _ in range(200):
            a = rng.uniform(-5, 5)
            b = rng.uniform(0.1, 5)
            A = Interval(a - 1e-10, a + 1e-10)
            B = Interval(b - 1e-10, b + 1e-10)
            assert A.div_pos(B).contains(a / b)

    def test_div_pos_requires_positive_divisor(self):
        with pytest.raises(ZeroDivisionError):
            Interval(1.0, 2.0).div_pos(Interval(-1.0, 1.0))

    def test_misordered_interval_rejected(self):
        with pytest.raises(ValueError):
            Interval(2.0, 1.0)


class TestQScale:
    def test_power_representations_compare_equal(self):
        assert QScale.power(10, 2).equals(QScale(100))
        assert QScale.power(100, 1, 2).equals(QScale(10))
        assert QScale.power(10, 3, 2).equals(QScale.power(1000, 1, 2))

    def test_ordering_across_representations(self):
        assert QScale.power(10, 1, 2) < QScale(4)
        assert QScale(3) < QScale.power(10, 1, 2)
        assert QScale.power(10, 5, 2) < QScale(1000)
        assert not QScale(1000) < QScale.power(10, 3)

    def test_log10_exact_for_powers_of_ten(self):
        assert QScale.power(10, 7, 2).log10() == 3.5
        assert QScale(1000).log10() == pytest.approx(3.0, abs=1e-13)

    def test_pow_floor_matches_integer_root_oracle(self):
        # floor(Q^(num/den)) cross-checked with exact integer arithmetic
        cases = [
            (QScale(10), 1, 2, 3),
            (QScale(1000), 3, 2, 31622),
            (QScale.power(10, 5, 2), 1, 1, 316),
            (QScale.power(10, 5), 3, 2, 31622776),
            (QScale(97), 2, 3, 21),
        ]
        for scale, num, den, expected in cases:
            got = scale.pow_floor(num, den)
            assert got == expected
            frac = scale.as_fraction() if scale.is_rational() else None
            if frac is not None:
                # oracle: largest x with x^den <= Q^num
                assert got**den * frac.denominator**num <= frac.numerator**num
                assert (got + 1) ** den * frac.denominator**num > frac.numerator**num

    def test_pow_floor_irrational_scale(self):
        # Q = 10^(1/2): floor(Q^3) = floor(10^1.5) = 31
        assert QScale.power(10, 1, 2).pow_floor(3, 1) == 31
        assert QScale.power(10, 1, 2).pow_floor(2, 1) == 10

    def test_coerce(self):
        assert QScale.coerce(50).equals(QScale(50))
        q = QScale.power(10, 3, 2)
        assert QScale.coerce(q) is q

    def test_scale_must_exceed_one(self):
        with pytest.raises(ValidationError):
            QScale(1)
        with pytest.raises(ValidationError):
            QScale.power(10, 0, 1)
        with pytest.raises(ValidationError):
            QScale.power(10, -1, 2)

    def test_power_requires_integer_parts(self):
        with pytest.raises(ValidationError):
            QScale.power(10, Fraction(1, 2), 1)

    def test_log_interval_of_scale(self):
        q = QScale.power(10, 7, 2)
        iv = q.log_interval()
        ref = 3.5 * high_precision_log(10)
        assert iv.lo <= ref <= iv.hi
        assert iv.width() < 1e-12

    def test_label_readable(self):
        assert "10" in QScale.power(10, 5, 2).label()
