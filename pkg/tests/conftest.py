import pytest

from liouville_minima import (
    ApproxTarget,
    QSequenceSpec,
    RunConfig,
    build_family,
    build_q_grid,
    error_and_exponents,
    psi_trajectory,
    q_terms,
    spectrum_from_extremes,
    truncate,
    truncation_candidates,
    unit_candidates,
    with_lower_bounds,
)


@pytest.fixture(scope="session")
def classic_spec():
    return QSequenceSpec(
        kind="base-power", base=10, exponent_rule="factorial", name="classic-L"
    )


@pytest.fixture(scope="session")
def classic_t4(classic_spec):
    return truncate(classic_spec, 4)


def run_preset_trajectory(spec, k, truncation_depth=4, budget=10**6):
    """The bundled per-dimension run, identical to the orchestrator's."""
    params = RunConfig(spec=spec, ks=(k,)).grid_for(k)
    t = truncate(spec, truncation_depth)
    target = ApproxTarget.from_truncation(t, k)
    grid = build_q_grid(
        params.q_min,
        params.q_max,
        params.points,
        transition_terms=q_terms(spec, truncation_depth),
    )
    pool = truncation_candidates(t, k) + unit_candidates(k)
    return psi_trajectory(
        target,
        grid,
        budget=budget,
        tail_fraction=params.tail_fraction,
        witness_candidates=pool,
        target_id=f"{spec.label()}:N={truncation_depth}:k={k}",
    )


@pytest.fixture(scope="session")
def preset_trajectories(classic_spec):
    return {k: run_preset_trajectory(classic_spec, k) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def deep_eta_tables(classic_spec):
    """Exponent tables of the deepest (n=6) witness family per dimension."""
    out = {}
    for k in (1, 2, 3):
        family = build_family(classic_spec, k, 6)
        out[k] = dict(error_and_exponents(family, N_extra=1).exponent_table)
    return out


@pytest.fixture(scope="session")
def preset_estimates(preset_trajectories, deep_eta_tables):
    out = {}
    for k, traj in preset_trajectories.items():
        est = spectrum_from_extremes(k, traj.extremes, provenance=traj.target_id)
        out[k] = with_lower_bounds(
            est, {1: deep_eta_tables[k][1]}, note="witness-family eta_1, n=6"
        )
    return out
