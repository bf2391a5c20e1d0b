"""Dual-route equivalence: the greedy interval-validated engine against the
definition-direct oracle in oracles.py.

The oracle first proves itself on tiny boxes (prefix-rank shortcut vs the
literal independent-subset search), then the engine is required to match it
on seeded random rational targets -- with equality certified per witness by
exact rational comparison, not by float coincidence.
"""

import random
import time
from fractions import Fraction

import pytest

import oracles
from test_minima import rational_target

from liouville_minima import (
    ApproxTarget,
    QScale,
    successive_minima_enumerate,
    truncate,
)

# (num, den, k, Q): rationals small enough for the exponential subset route
TINY_CASES = [(1, 3, 1, 3), (2, 5, 1, 8), (4, 9, 2, 4), (1, 2, 1, 6)]


def criterion5_cases():
    """The seeded draw space for the 50-target equivalence run: k <= 2,
    scales from {10, 50, 200, 500}, denominators up to 400."""
    rng = random.Random(20260823)
    for _ in range(50):
        k = rng.choice((1, 2))
        den = rng.randint(5, 400)
        num = rng.randint(1, den - 1)
        Q = rng.choice((10, 50, 200, 500))
        yield num, den, k, Q


def check_equivalence_case(num, den, k, Q):
    """Run both routes on one target and require witness-level equality.

    For every j the engine's j-th witness and the oracle's j-th witness must
    have exactly equal admitting exponents (decided in rational arithmetic),
    and the reported float values must agree closely.  Returns (elapsed
    seconds for both routes combined, max float difference).
    """
    frac = Fraction(num, den)
    powers = [frac**j for j in range(1, k + 1)]
    started = time.perf_counter()
    engine = successive_minima_enumerate(rational_target(frac, k), QScale(Q))
    oracle_psi, _, oracle_wits = oracles.oracle_minima(powers, Fraction(Q), k)
    elapsed = time.perf_counter() - started
    assert engine.mode == "exact-enumeration"
    assert len(engine.psi) == len(oracle_psi) == k + 1
    diff = 0.0
    for j in range(k + 1):
        same = oracles.compare_nu_exact(
            powers, Fraction(Q), k, engine.witnesses[j].vector(), oracle_wits[j]
        )
        assert same == 0, (
            f"exact exponent mismatch at j={j + 1} for {num}/{den}, k={k}, Q={Q}"
        )
        diff = max(diff, abs(engine.psi[j] - oracle_psi[j]))
    assert diff < 1e-9
    return elapsed, diff


class TestOracleSelfChecks:
    """The oracle validates itself before being trusted as a reference."""

    @pytest.mark.parametrize("num,den,k,Q", TINY_CASES)
    def test_prefix_rank_equals_literal_subsets(self, num, den, k, Q):
        powers = [Fraction(num, den) ** j for j in range(1, k + 1)]
        psi, prefixes, wits = oracles.oracle_minima(powers, Fraction(Q), k)
        subset_psi = oracles.oracle_minima_subsets(powers, Fraction(Q), k)
        assert len(psi) == len(subset_psi) == k + 1
        for fast, literal in zip(psi, subset_psi):
            assert fast == pytest.approx(literal, abs=1e-12)
        assert prefixes == sorted(prefixes)
        logQ = oracles.fraction_log(Fraction(Q))
        for value, w in zip(psi, wits):
            assert oracles.oracle_nu(powers, logQ, k, w) == pytest.approx(
                value, abs=1e-12
            )

    def test_box_has_units_and_no_duplicates(self):
        powers = [Fraction(2, 5)]
        box = oracles.candidate_box(powers, Fraction(8), 1)
        assert (0, 1) in box
        assert (0, 0) not in box
        X, _ = oracles.box_arrays(powers, Fraction(8), 1)
        # the flat arrays carry no duplicates, so the set cannot shrink
        assert len(X) == len(box)

    def test_box_x_bound_exact(self):
        X, _ = oracles.box_arrays([Fraction(1, 2)], Fraction(8), 1)
        assert int(X.max()) == 64  # floor(8^2)
        X2, _ = oracles.box_arrays([Fraction(1, 3), Fraction(1, 9)], Fraction(4), 2)
        assert int(X2.max()) == 8  # floor(4^(3/2))

    def test_exact_comparison_signs(self):
        powers = [Fraction(1, 3)]
        Q = Fraction(3)
        # all three vectors sit exactly at exponent 0: a genuine triple tie
        assert oracles.compare_nu_exact(powers, Q, 1, (1, 0), (3, 1)) == 0
        assert oracles.compare_nu_exact(powers, Q, 1, (2, 1), (3, 1)) == 0
        # (1, 1) misses by 2/3, pushing its exponent strictly positive
        assert oracles.compare_nu_exact(powers, Q, 1, (1, 1), (1, 0)) == 1
        assert oracles.compare_nu_exact(powers, Q, 1, (1, 0), (1, 1)) == -1

    def test_exact_term_comparison_closed_form(self):
        # log(8)/log(2) - 1 = 2 vs log(1)/log(2) + 0 = 0
        up = (Fraction(8), Fraction(-1))
        zero = (Fraction(1), Fraction(0))
        assert oracles.compare_terms_exact(up, zero, Fraction(2)) == 1
        # log(4)/log(2) - 1 = 1 == log(2)/log(2) + 0
        assert oracles.compare_terms_exact(
            (Fraction(4), Fraction(-1)), (Fraction(2), Fraction(0)), Fraction(2)
        ) == 0


class TestEngineMatchesOracle:
    def test_fifty_random_targets_exact_equivalence(self):
        seen_k = set()
        seen_Q = set()
        for num, den, k, Q in criterion5_cases():
            seen_k.add(k)
            seen_Q.add(Q)
            elapsed, _ = check_equivalence_case(num, den, k, Q)
            assert elapsed < 2.0, f"case {num}/{den}, k={k}, Q={Q} took {elapsed:.2f}s"
        # the draw actually exercises the whole advertised space
        assert seen_k == {1, 2}
        assert seen_Q == {10, 50, 200, 500}

    def test_half_at_largest_scale(self):
        elapsed, _ = check_equivalence_case(1, 2, 1, 500)
        assert elapsed < 2.0

    @pytest.mark.parametrize("num,den,k,Q", TINY_CASES)
    def test_desk_cases(self, num, den, k, Q):
        check_equivalence_case(num, den, k, Q)

    def test_truncation_target_matches_oracle(self, classic_spec):
        t = truncate(classic_spec, 3)
        target = ApproxTarget.from_truncation(t, 1)
        engine = successive_minima_enumerate(target, QScale(100))
        value = t.value
        oracle_psi, _, oracle_wits = oracles.oracle_minima([value], Fraction(100), 1)
        for j in range(2):
            assert (
                oracles.compare_nu_exact(
                    [value],
                    Fraction(100),
                    1,
                    engine.witnesses[j].vector(),
                    oracle_wits[j],
                )
                == 0
            )
            assert engine.psi[j] == pytest.approx(oracle_psi[j], abs=1e-9)


class TestContinuedFractionOracle:
    def test_quotients_reconstruct_value(self):
        value = Fraction(514229, 832040)  # ratio of consecutive Fibonacci numbers
        convergents = oracles.oracle_continued_fraction(value, 60)
        _, p, q = convergents[-1]
        assert Fraction(p, q) == value
        quotients = [a for a, _, _ in convergents]
        assert quotients[0] == 0
        assert all(a == 1 for a in quotients[1:-1])

    def test_classic_truncation_exponent(self, classic_spec):
        value = truncate(classic_spec, 4).value
        estimate = oracles.oracle_max_exponent(value, 20, q_cap=10**6)
        # the 110001/10^6 convergent sits 10^-24 away: exponent exactly 24/6
        assert estimate == pytest.approx(4.0, abs=1e-6)
