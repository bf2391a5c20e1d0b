import math
from fractions import Fraction

import pytest

from liouville_minima import (
    ApproxTarget,
    QScale,
    QSequenceSpec,
    RationalTruncation,
    ResourceBudgetError,
    ValidationError,
    build_q_grid,
    point_exponent,
    psi_trajectory,
    psi_upper_bounds_from_witnesses,
    successive_minima_enumerate,
    truncate,
    truncation_candidates,
    unit_candidates,
    write_trajectory_csv,
    write_witness_dump,
)


def rational_target(frac: Fraction, k: int) -> ApproxTarget:
    """Target for an arbitrary rational in (0,1): a one-term chain whose
    truncation *is* the number (zero tail)."""
    spec = QSequenceSpec(
        kind="explicit-list", terms=(frac.denominator,), name="rational"
    )
    t = RationalTruncation(
        value=frac,
        N=1,
        tail_bound=Fraction(0),
        chain=(frac.denominator,),
        spec=spec,
    )
    return ApproxTarget.from_truncation(t, k)


@pytest.fixture(scope="module")
def classic_target_k1(classic_spec):
    return ApproxTarget.from_truncation(truncate(classic_spec, 3), 1)


class TestPointExponent:
    def test_hand_evaluated_witness(self, classic_target_k1):
        # |100*zeta - 11| = 10^-4 exactly: terms are 2/(8/3) - 1 = -1/4 and
        # -4/(8/3) + 1 = -1/2
        nu = point_exponent(classic_target_k1, QScale.power(10, 8, 3), (100, 11))
        assert nu == pytest.approx(-0.25, abs=1e-12)

    def test_exact_lattice_hit_drops_term(self):
        target = rational_target(Fraction(1, 3), 1)
        assert point_exponent(target, 3, (3, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_x_zero_unit_vector(self):
        target = rational_target(Fraction(4, 9), 2)
        nu = point_exponent(target, 10, (0, 1, 0))
        assert nu == pytest.approx(0.5, abs=1e-12)

    def test_zero_vector_rejected(self, classic_target_k1):
        with pytest.raises(ValidationError):
            point_exponent(classic_target_k1, 10, (0, 0))

    def test_wrong_length_rejected(self, classic_target_k1):
        with pytest.raises(ValidationError):
            point_exponent(classic_target_k1, 10, (1, 0, 0))

    def test_scale_coherence(self, classic_target_k1):
        # nu at a second scale must match the closed form rebuilt from the
        # exact constraint magnitudes
        v = (100, 11)
        for q_a, q_b in [(QScale(100), QScale(1000)), (QScale(50), QScale(10**4))]:
            nu_b = point_exponent(classic_target_k1, q_b, v)
            log_b = math.log(10) * q_b.log10()
            expect = max(
                math.log(100) / log_b - 1.0,
                math.log(1e-4) / log_b + 1.0,
            )
            assert nu_b == pytest.approx(expect, abs=1e-10)
            assert point_exponent(classic_target_k1, q_a, v) != pytest.approx(
                nu_b, abs=1e-6
            )


class TestEnumerate:
    def test_third_at_scale_three(self):
        result = successive_minima_enumerate(rational_target(Fraction(1, 3), 1), 3)
        assert result.psi == pytest.approx((0.0, 0.0), abs=1e-12)
        # (1,0), (2,1) and (3,1) all attain nu = 0 here; the documented
        # (nu, |x|, y) tie-break picks the two smallest-|x| vectors
        vectors = {w.vector() for w in result.witnesses}
        assert vectors == {(1, 0), (2, 1)}
        assert result.mode == "exact-enumeration"

    def test_classic_truncation_product_bound(self, classic_target_k1):
        result = successive_minima_enumerate(classic_target_k1, 100)
        psi1, psi2 = result.psi
        assert psi1 < 0 <= psi2
        product = math.exp(math.log(100) * (psi1 + psi2))
        assert 0.5 - 1e-9 <= product <= 1.0 + 1e-9

    def test_k2_desk_sample(self):
        result = successive_minima_enumerate(rational_target(Fraction(4, 9), 2), 10)
        assert result.psi[0] <= 0 <= result.psi[2] <= 0.5
        assert len(result.witnesses) == 3
        # frozen regression value computed by the exhaustive oracle
        assert result.psi[2] == pytest.approx(0.022878745280337565, abs=1e-9)

    def test_classic_k1_scale_1000(self, classic_spec):
        target = ApproxTarget.from_truncation(truncate(classic_spec, 4), 1)
        result = successive_minima_enumerate(target, 1000)
        assert result.psi[1] == pytest.approx(0.23325034389650467, abs=1e-9)

    def test_budget_error_mentions_witness_mode(self, classic_target_k1):
        with pytest.raises(ResourceBudgetError) as err:
            successive_minima_enumerate(classic_target_k1, 10**4, budget=10**3)
        assert "witness" in str(err.value)

    def test_pool_escalation_degenerate_target(self):
        # zeta = 1/2 at Q=500: nearly every candidate is an exact hit, the
        # clipped pool is rank-deficient and must escalate to exhaustive scan
        result = successive_minima_enumerate(rational_target(Fraction(1, 2), 1), 500)
        assert result.psi[0] == pytest.approx(-0.8884648606022436, abs=1e-10)
        assert result.psi[1] == pytest.approx(+0.8884648606022436, abs=1e-10)
        assert {w.vector() for w in result.witnesses} == {(2, 1), (1, 0)}

    def test_first_minimum_nonpositive_many_targets(self):
        for num, den in [(1, 7), (3, 8), (5, 11), (2, 9)]:
            for k in (1, 2):
                result = successive_minima_enumerate(
                    rational_target(Fraction(num, den), k), 50
                )
                assert result.psi[0] <= 1e-12
                for a, b in zip(result.psi, result.psi[1:]):
                    assert a <= b + 1e-15


class TestWitnessMode:
    def test_truncation_vectors_classic_deep_scale(self, classic_spec):
        t = truncate(classic_spec, 4)
        target = ApproxTarget.from_truncation(t, 1)
        result = psi_upper_bounds_from_witnesses(
            target, QScale.power(10, 12), truncation_candidates(t, 1)
        )
        # x = 10^6: both constraint terms equal exactly -1/2
        assert result.psi[0] == pytest.approx(-0.5, abs=1e-12)
        assert result.mode == "witness-upper-bound"

    def test_single_candidate_gives_inf_second_bound(self):
        target = rational_target(Fraction(4, 9), 1)
        result = psi_upper_bounds_from_witnesses(target, 10, [(1, 0)])
        assert math.isfinite(result.psi[0])
        assert math.isinf(result.psi[1])

    def test_empty_candidates_rejected(self):
        with pytest.raises(ValidationError):
            psi_upper_bounds_from_witnesses(rational_target(Fraction(1, 3), 1), 10, [])

    def test_witness_bounds_dominate_exact_values(self, classic_spec):
        t = truncate(classic_spec, 3)
        target = ApproxTarget.from_truncation(t, 1)
        pool = truncation_candidates(t, 1) + unit_candidates(1)
        for q in (10, 100, 316):
            exact = successive_minima_enumerate(target, q)
            bound = psi_upper_bounds_from_witnesses(target, q, pool)
            for upper, true in zip(bound.psi, exact.psi):
                assert upper >= true - 1e-10

    def test_duplicate_and_sign_canonicalization(self):
        target = rational_target(Fraction(1, 3), 1)
        result = psi_upper_bounds_from_witnesses(
            target, 3, [(3, 1), (-3, -1), (3, 1), (1, 0)]
        )
        assert result.psi == pytest.approx((0.0, 0.0), abs=1e-12)


class TestTrajectory:
    def test_rational_target_psi1_marches_to_minus_one(self):
        traj = psi_trajectory(rational_target(Fraction(1, 3), 1), [3, 9, 27])
        values = [s.result.psi[0] for s in traj.samples]
        assert values[0] > values[1] > values[2]
        assert values[2] == pytest.approx(math.log(3) / math.log(27) - 1, abs=1e-9)

    def test_empty_grid(self):
        traj = psi_trajectory(rational_target(Fraction(1, 3), 1), [])
        assert traj.samples == ()
        assert traj.extremes.window_size == 0

    def test_grid_must_increase(self):
        with pytest.raises(ValidationError):
            psi_trajectory(rational_target(Fraction(1, 3), 1), [9, 3])

    def test_bad_tail_fraction(self):
        with pytest.raises(ValidationError):
            psi_trajectory(rational_target(Fraction(1, 3), 1), [3], tail_fraction=0.0)

    def test_missing_samples_marked_not_fatal(self, classic_spec):
        target = ApproxTarget.from_truncation(truncate(classic_spec, 3), 1)
        traj = psi_trajectory(target, [10, 10**5], budget=10**3)
        assert traj.samples[0].result is not None
        assert traj.samples[1].result is None
        assert "budget" in traj.samples[1].note

    def test_auto_mode_switches_to_witnesses(self, classic_spec):
        t = truncate(classic_spec, 4)
        target = ApproxTarget.from_truncation(t, 1)
        traj = psi_trajectory(
            target,
            [10, 10**8],
            budget=10**3,
            witness_candidates=truncation_candidates(t, 1),
        )
        assert traj.samples[0].result.mode == "exact-enumeration"
        assert traj.samples[1].result.mode == "witness-upper-bound"

    def test_extremes_window_semantics(self, classic_spec):
        t = truncate(classic_spec, 4)
        target = ApproxTarget.from_truncation(t, 1)
        pool = truncation_candidates(t, 1)
        traj = psi_trajectory(
            target,
            [10, 100, 10**8],
            budget=10**6,
            witness_candidates=pool,
            tail_fraction=0.5,
        )
        # window = last ceil(3*0.5) = 2 samples: one exact, one witness
        ex = traj.extremes
        assert ex.window_size == 2
        assert ex.exact_in_window == 1
        exact_sample = traj.samples[1].result
        witness_sample = traj.samples[2].result
        for j in range(2):
            assert ex.lower[j] == min(
                exact_sample.psi[j], witness_sample.psi[j]
            )
            # upper bounds come from exact-mode samples only
            assert ex.upper[j] == exact_sample.psi[j]


class TestGrid:
    def test_log_uniform_endpoints_and_count(self):
        grid = build_q_grid(QScale(10), QScale.power(10, 5, 2), 16, extras=False)
        assert len(grid) == 16
        assert grid[0].equals(QScale(10))
        assert grid[-1].equals(QScale.power(10, 5, 2))
        logs = [q.log10() for q in grid]
        steps = [b - a for a, b in zip(logs, logs[1:])]
        assert all(step == pytest.approx(steps[0], abs=1e-9) for step in steps)

    def test_transition_extras(self):
        grid = build_q_grid(
            QScale(10), QScale.power(10, 4), 4, transition_terms=[10, 100, 10**6]
        )
        labels = {(q.num, q.den, str(q.base)) for q in grid}
        assert (3, 2, "10") in labels  # 10^(3/2) from q=10
        assert (3, 1, "10") in labels  # sqrt(10^6)
        for a, b in zip(grid, grid[1:]):
            assert a < b

    def test_extras_outside_range_dropped(self):
        grid = build_q_grid(QScale(10), QScale(100), 3, transition_terms=[10**6])
        assert all(q <= QScale(100) for q in grid)

    def test_min_points(self):
        with pytest.raises(ValidationError):
            build_q_grid(QScale(10), QScale(100), 1)

    def test_order_required(self):
        with pytest.raises(ValidationError):
            build_q_grid(QScale(100), QScale(10), 5)


class TestSerializationFiles:
    def test_csv_golden(self, tmp_path):
        traj = psi_trajectory(rational_target(Fraction(1, 3), 1), [3, 9])
        path = tmp_path / "t.csv"
        write_trajectory_csv(traj, path)
        text = path.read_text()
        lines = text.splitlines()
        assert lines[0] == "logQ,psi_1,psi_2,mode"
        assert len(lines) == 3
        first = lines[1].split(",")
        assert first[0] == "0.477121254720"[: len(first[0])] or float(
            first[0]
        ) == pytest.approx(math.log10(3), abs=1e-9)
        assert first[-1] == "exact-enumeration"
        assert text.endswith("\n") and "\r" not in text

    def test_csv_missing_row(self, tmp_path, classic_spec):
        target = ApproxTarget.from_truncation(truncate(classic_spec, 3), 1)
        traj = psi_trajectory(target, [10, 10**5], budget=10**3)
        path = tmp_path / "t.csv"
        write_trajectory_csv(traj, path)
        lines = path.read_text().splitlines()
        assert lines[2].endswith("missing")
        assert "nan" in lines[2]

    def test_witness_dump_format(self, tmp_path):
        traj = psi_trajectory(rational_target(Fraction(1, 3), 1), [3])
        path = tmp_path / "w.txt"
        write_witness_dump(traj, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        parts = lines[0].split(" ")
        assert len(parts) == 4  # logQ, j, x, y_1
        assert parts[1] == "1"
