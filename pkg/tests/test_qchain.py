from fractions import Fraction

import pytest

from liouville_minima import (
    QSequenceSpec,
    ValidationError,
    check_growth,
    powers,
    q_terms,
    spec_from_text,
    spec_to_text,
    truncate,
)


def explicit(*terms):
    return QSequenceSpec(kind="explicit-list", terms=terms, name="x")


class TestQTerms:
    def test_factorial_base10_prefix(self, classic_spec):
        assert q_terms(classic_spec, 3) == [10, 100, 1000000]

    def test_factorial_base3_prefix(self):
        spec = QSequenceSpec(kind="base-power", base=3, exponent_rule="factorial")
        assert q_terms(spec, 2) == [3, 9]

    def test_explicit_list_divisibility_violation_names_index(self):
        with pytest.raises(ValidationError) as err:
            explicit(10, 25)
        assert "25" in str(err.value)

    def test_explicit_list_passthrough(self):
        assert q_terms(explicit(2, 4, 16, 32), 3) == [2, 4, 16]

    def test_prefix_longer_than_list_rejected(self):
        with pytest.raises(ValidationError):
            q_terms(explicit(2, 4), 3)

    def test_q1_equal_one_rejected(self):
        with pytest.raises(ValidationError):
            explicit(1, 2)

    def test_non_increasing_exponents_rejected(self):
        with pytest.raises(ValidationError):
            QSequenceSpec(
                kind="base-power",
                base=10,
                exponent_rule="list",
                exponents=(2, 2),
            )

    def test_base_below_two_rejected(self):
        with pytest.raises(ValidationError):
            QSequenceSpec(kind="base-power", base=1, exponent_rule="factorial")

    def test_deterministic(self, classic_spec):
        assert q_terms(classic_spec, 5) == q_terms(classic_spec, 5)


class TestTruncate:
    def test_classic_depth3(self, classic_spec):
        t = truncate(classic_spec, 3)
        assert t.value == Fraction(110001, 10**6)
        assert t.tail_bound == Fraction(2, 10**24)

    def test_single_term(self, classic_spec):
        assert truncate(classic_spec, 1).value == Fraction(1, 10)

    def test_base3_depth2(self):
        spec = QSequenceSpec(kind="base-power", base=3, exponent_rule="factorial")
        assert truncate(spec, 2).value == Fraction(4, 9)

    def test_exhausted_chain_has_zero_tail(self):
        t = truncate(explicit(2, 4, 8), 3)
        assert t.tail_bound == 0
        assert t.value == Fraction(1, 2) + Fraction(1, 4) + Fraction(1, 8)

    def test_denominator_divides_qN(self, classic_spec):
        for N in (1, 2, 3, 4):
            t = truncate(classic_spec, N)
            assert q_terms(classic_spec, N)[-1] % t.denominator == 0

    def test_successive_difference_is_one_over_q_next(self, classic_spec):
        for N in (1, 2, 3, 4):
            lo = truncate(classic_spec, N)
            hi = truncate(classic_spec, N + 1)
            q_next = q_terms(classic_spec, N + 1)[-1]
            assert hi.value - lo.value == Fraction(1, q_next)
            assert hi.value > lo.value

    def test_tail_bound_sound_five_levels_out(self, classic_spec):
        base = truncate(classic_spec, 2)
        for M in range(3, 8):
            far = truncate(classic_spec, M)
            assert abs(far.value - base.value) <= base.tail_bound


class TestPowers:
    def test_classic_square(self, classic_spec):
        t = truncate(classic_spec, 3)
        pv = powers(t, 2)
        assert pv.entries[1] == Fraction(110001, 10**6) ** 2
        assert pv.entries[1] == Fraction(12100220001, 10**12)

    def test_identity(self, classic_spec):
        t = truncate(classic_spec, 1)
        assert powers(t, 1).entries == (Fraction(1, 10),)

    def test_exact_cubes(self):
        spec = QSequenceSpec(kind="base-power", base=3, exponent_rule="factorial")
        pv = powers(truncate(spec, 2), 3)
        assert pv.entries == (Fraction(4, 9), Fraction(16, 81), Fraction(64, 729))

    def test_power_tail_bounds_sound(self, classic_spec):
        # |zeta^m - zeta_N^m| for the deeper truncation must sit under the
        # shallower truncation's per-entry tail bound
        near = powers(truncate(classic_spec, 2), 3)
        far = powers(truncate(classic_spec, 4), 3)
        for m in range(3):
            assert abs(far.entries[m] - near.entries[m]) <= near.tail_bounds[m]

    def test_k_zero_rejected(self, classic_spec):
        with pytest.raises(ValidationError):
            powers(truncate(classic_spec, 2), 0)


class TestCheckGrowth:
    def test_classic_k2_C5(self, classic_spec):
        w = check_growth(classic_spec, k=2, C=5)
        assert w is not None
        assert (w.n, w.ratio1, w.ratio2) == (5, Fraction(6), Fraction(7))

    def test_classic_k1_C1(self, classic_spec):
        w = check_growth(classic_spec, k=1, C=1)
        assert (w.n, w.ratio1, w.ratio2) == (1, Fraction(2), Fraction(3))

    def test_bounded_chain_fails(self):
        assert check_growth(explicit(2, 4, 8, 16), k=1, C=10) is None

    def test_factorial_always_eventually_passes(self, classic_spec):
        for k in (1, 2, 3):
            for C in (2, 5, 9):
                assert check_growth(classic_spec, k=k, C=C, n_max=12) is not None

    def test_nonpositive_C_rejected(self, classic_spec):
        with pytest.raises(ValidationError):
            check_growth(classic_spec, k=1, C=0)


class TestSerialization:
    def test_base_power_round_trip(self, classic_spec):
        text = spec_to_text(classic_spec)
        again = spec_from_text(text)
        assert again == classic_spec
        assert q_terms(again, 3) == q_terms(classic_spec, 3)

    def test_explicit_round_trip(self):
        spec = explicit(2, 4, 16, 32)
        assert spec_from_text(spec_to_text(spec)) == spec

    def test_exponent_list_round_trip(self):
        spec = QSequenceSpec(
            kind="base-power", base=2, exponent_rule="list", exponents=(1, 3, 9)
        )
        assert spec_from_text(spec_to_text(spec)) == spec

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValidationError):
            spec_from_text("kind=mystery\n")

    def test_bad_terms_rejected(self):
        with pytest.raises(ValidationError):
            spec_from_text("kind=explicit-list\nterms=10,25\n")
