"""Run orchestration: configurations, presets, artifacts, and manifests.

A :class:`RunConfig` describes one batch of work over a divisibility-chain
spec: which dimensions k to process, which mode (trajectory CSVs, witness
certificates, consistency verification, or the full report), the scale grid
and window parameters, and the enumeration budget.  :func:`run` executes the
batch, writes every artifact under the output directory, and finishes with a
MANIFEST listing each artifact with its SHA-256 hash.

Exit status contract: 0 — everything passed; 1 — at least one hard rule
failed in a check suite; 2 — invalid input (raised as
:class:`ValidationError` before artifacts are written); 3 — the enumeration
budget was exceeded in strict-exact mode (partial artifacts are flushed and
the MANIFEST notes the incompleteness).

Identical configurations produce byte-identical CSVs and reports.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence, Union

from .errors import ResourceBudgetError, ValidationError
from .figures import render_trajectory_figure
from .logscale import QScale
from .minima import (
    DEFAULT_BUDGET,
    MODE_EXACT,
    ApproxTarget,
    Trajectory,
    build_q_grid,
    psi_trajectory,
    truncation_candidates,
    unit_candidates,
    write_trajectory_csv,
    write_witness_dump,
)
from .qchain import QSequenceSpec, q_terms, spec_to_text, truncate
from .transfer import (
    CheckReport,
    SpectrumEstimates,
    bounds_table,
    check_inequality_suite,
    golden_ratio_control,
    irrationality_exponent,
    psi_level_suite,
    spectrum_from_extremes,
    with_lower_bounds,
)
from .witnesses import (
    admissible_indices,
    build_family,
    certificate_text,
    certify,
    det_certificate,
    error_and_exponents,
)

MODE_TRAJECTORY = "trajectory"
MODE_WITNESS_RUN = "witness"
MODE_VERIFY = "verify"
MODE_FULL = "full-report"
_RUN_MODES = (MODE_TRAJECTORY, MODE_WITNESS_RUN, MODE_VERIFY, MODE_FULL)


@dataclass(frozen=True)
class GridParams:
    """Per-dimension trajectory grid and window parameters."""

    q_min: QScale
    q_max: QScale
    points: int
    tail_fraction: float


def _default_grid(k: int) -> GridParams:
    """Bundled per-dimension run windows.

    Each window ends inside a settled span of scales and starts past the
    near-scale transition dips, so the window extremes pair dips with crests
    of the same chain era; windows that straddle a transition without
    reaching its matching crest bias the sum-type consistency rules by up to
    the unimodular-handoff defect log 2 / log Q.  The enumeration stays
    inside the default budget at every sample.
    """
    if k == 1:
        return GridParams(QScale(10), QScale.power(10, 5, 2), 16, 0.4)
    if k == 2:
        return GridParams(QScale(10), QScale.power(10, 4), 13, 0.8)
    if k == 3:
        return GridParams(QScale(10), QScale.power(10, 7, 2), 21, 0.71)
    return GridParams(QScale(10), QScale.power(10, 3), 17, 0.7)


@dataclass(frozen=True)
class RunConfig:
    """Everything one batch run needs.

    Global grid fields (``q_min`` … ``tail_fraction``) are optional; when
    left unset each dimension uses its bundled default window.  ``strict_exact``
    turns budget-driven fallbacks into a resource failure (exit 3) instead of
    witness-mode degradation.
    """

    spec: QSequenceSpec
    ks: tuple = (1, 2, 3)
    mode: str = MODE_FULL
    out_dir: str = "artifacts"
    truncation_depth: int = 4
    witness_n_max: int = 6
    cf_depth: int = 20
    budget: int = DEFAULT_BUDGET
    q_min: Union[QScale, None] = None
    q_max: Union[QScale, None] = None
    q_points: Union[int, None] = None
    tail_fraction: Union[float, None] = None
    transition_extras: bool = True
    strict_exact: bool = False

    def __post_init__(self) -> None:
        if self.mode not in _RUN_MODES:
            raise ValidationError(
                f"unknown mode {self.mode!r}; expected one of {_RUN_MODES}"
            )
        if not self.ks:
            raise ValidationError("at least one dimension k is required")
        for k in self.ks:
            if not isinstance(k, int) or k < 1:
                raise ValidationError(f"dimensions must be positive integers, got {k!r}")
        if self.budget <= 0:
            raise ValidationError(f"budget must be positive, got {self.budget}")
        if self.truncation_depth < 2:
            raise ValidationError("truncation depth must be at least 2")
        if self.witness_n_max < 1:
            raise ValidationError("witness index limit must be at least 1")
        if self.cf_depth < 1:
            raise ValidationError("continued-fraction depth must be at least 1")
        if self.q_points is not None and self.q_points < 2:
            raise ValidationError("grid needs at least 2 points")
        if self.tail_fraction is not None and not 0 < self.tail_fraction <= 1:
            raise ValidationError("tail fraction must be in (0, 1]")

    def grid_for(self, k: int) -> GridParams:
        base = _default_grid(k)
        return GridParams(
            q_min=self.q_min if self.q_min is not None else base.q_min,
            q_max=self.q_max if self.q_max is not None else base.q_max,
            points=self.q_points if self.q_points is not None else base.points,
            tail_fraction=(
                self.tail_fraction
                if self.tail_fraction is not None
                else base.tail_fraction
            ),
        )


def presets() -> Mapping[str, RunConfig]:
    """Named ready-to-run configurations.

    ``classic-L`` is the base-10 factorial-exponent chain; ``cantor-L`` is
    the base-3 factorial-exponent chain whose value sits inside the
    middle-third Cantor set up to a rational transformation (which does not
    affect any of the constants computed here).
    """
    classic = QSequenceSpec(
        kind="base-power", base=10, exponent_rule="factorial", name="classic-L"
    )
    cantor = QSequenceSpec(
        kind="base-power", base=3, exponent_rule="factorial", name="cantor-L"
    )
    return {
        "classic-L": RunConfig(spec=classic),
        "cantor-L": RunConfig(spec=cantor),
    }


@dataclass(frozen=True)
class RunResult:
    """Outcome of :func:`run`: exit status plus what was written where."""

    exit_code: int
    out_dir: str
    artifacts: tuple
    overall: Union[str, None] = None
    notes: tuple = ()


def _f12(x) -> str:
    if x is None:
        return "none"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


class _Sink:
    """Collects artifacts and writes the MANIFEST."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.names = []

    def write_text(self, name: str, text: str) -> None:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self.names.append(name)

    def add_file(self, name: str) -> None:
        self.names.append(name)

    def manifest(self, status: str, notes: Sequence[str] = ()) -> None:
        lines = [f"status={status}"]
        for note in notes:
            lines.append(f"note={note}")
        for name in sorted(self.names):
            digest = hashlib.sha256((self.out_dir / name).read_bytes()).hexdigest()
            lines.append(f"{digest}  {name}")
        with open(self.out_dir / "MANIFEST", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _run_trajectory(config: RunConfig, k: int) -> Trajectory:
    t = truncate(config.spec, config.truncation_depth)
    target = ApproxTarget.from_truncation(t, k)
    grid_params = config.grid_for(k)
    transition_terms = q_terms(config.spec, config.truncation_depth)
    grid = build_q_grid(
        grid_params.q_min,
        grid_params.q_max,
        grid_params.points,
        transition_terms=transition_terms if config.transition_extras else (),
        extras=config.transition_extras,
    )
    pool = truncation_candidates(t, k) + unit_candidates(k)
    return psi_trajectory(
        target,
        grid,
        budget=config.budget,
        tail_fraction=grid_params.tail_fraction,
        witness_candidates=pool,
        target_id=f"{config.spec.label()}:N={config.truncation_depth}:k={k}",
    )


def _strict_check(config: RunConfig, k: int, traj: Trajectory) -> None:
    if not config.strict_exact:
        return
    for s in traj.samples:
        if s.result is None or s.result.mode != MODE_EXACT:
            raise ResourceBudgetError(
                f"strict-exact: sample at logQ={_f12(s.log10_q)} (k={k}) "
                f"not computed by exact enumeration within budget "
                f"{config.budget}"
            )


def _deep_bounds(config: RunConfig) -> dict:
    """Certified ordinary-constant lower bounds per (k, j) from the deepest
    witness family, plus the per-family eta tables for reporting.

    Returns {k: (n_used, {j: eta}, independent_note)}; dimensions where no
    family can be built are absent.
    """
    out = {}
    for k in sorted(set(config.ks)):
        n = config.witness_n_max
        try:
            fam = build_family(config.spec, k, n)
        except ValidationError:
            continue
        cert = det_certificate(fam)
        independent = bool(cert.conclusive) or cert.det_exact != 0
        if not independent:
            continue
        how = "mod-V certificate" if cert.conclusive else "exact determinant"
        exps = error_and_exponents(fam, N_extra=1)
        out[k] = (n, dict(exps.exponent_table), how)
    return out


def _estimates(
    config: RunConfig, trajectories: Mapping[int, Trajectory], deep: Mapping
) -> dict:
    ests = {}
    for k in sorted(set(config.ks)):
        traj = trajectories[k]
        grid_params = config.grid_for(k)
        prov = (
            f"{traj.target_id} window=last {traj.extremes.window_size} of "
            f"{len(traj.samples)} samples (tail {grid_params.tail_fraction:g})"
        )
        est = spectrum_from_extremes(k, traj.extremes, provenance=prov)
        if k in deep:
            n, etas, how = deep[k]
            est = with_lower_bounds(
                est, {1: etas[1]}, note=f"first-index lower bound from n={n} ({how})"
            )
        ests[k] = est
    return ests


def _estimates_text(ests: Mapping[int, SpectrumEstimates]) -> str:
    lines = []
    for k in sorted(ests):
        est = ests[k]
        lines.append(f"k={k}  ({est.provenance})")
        lines.append("  ordinary lambda_j : "
                     + " ".join(_f12(v) for v in est.lambda_j))
        lines.append("  uniform lambda_j  : "
                     + " ".join(_f12(v) for v in est.lambda_hat_j))
        lines.append("  linear-form w_j   : "
                     + " ".join(_f12(v) for v in est.w_j))
        lines.append("  linear-form w^_j  : "
                     + " ".join(_f12(v) for v in est.w_hat_j))
    return "\n".join(lines) + "\n"


def _liouville_table(ests: Mapping[int, SpectrumEstimates]) -> str:
    lines = [
        "Predicted constants for a Liouville-type value vs finite-scale estimates:",
        f"  {'quantity':<14}{'predicted':<34}estimate",
    ]
    for k in sorted(ests):
        est = ests[k]
        lines.append(f"  [k={k}]")
        lines.append(
            f"  {f'lambda_{k},1':<14}{'inf':<34}{_f12(est.ordinary(1))}"
        )
        lines.append(
            f"  {f'uniform_{k},1':<14}{_f12(Fraction(1, k)):<34}{_f12(est.uniform(1))}"
        )
        for j in range(2, k + 2):
            box = f"[{_f12(Fraction(1, k))}, {_f12(Fraction(1, j - 1))}]"
            lines.append(
                f"  {f'lambda_{k},{j}':<14}{box:<34}{_f12(est.ordinary(j))}"
            )
        for j in range(2, k + 2):
            lines.append(
                f"  {f'uniform_{k},{j}':<14}{'0':<34}{_f12(est.uniform(j))}"
            )
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> RunResult:
    """Execute one batch run; see the module docstring for the contract."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sink = _Sink(out_dir)
    notes = []
    ks = tuple(sorted(set(config.ks)))
    config = replace(config, ks=ks)

    want_traj = config.mode in (MODE_TRAJECTORY, MODE_VERIFY, MODE_FULL)
    want_wit = config.mode in (MODE_WITNESS_RUN, MODE_FULL)
    want_checks = config.mode in (MODE_VERIFY, MODE_FULL)

    trajectories: dict = {}
    try:
        if want_traj:
            for k in ks:
                traj = _run_trajectory(config, k)
                trajectories[k] = traj
                if config.mode != MODE_VERIFY:
                    name = f"trajectory_k{k}.csv"
                    write_trajectory_csv(traj, out_dir / name)
                    sink.add_file(name)
                    name = f"witnesses_k{k}.txt"
                    write_witness_dump(traj, out_dir / name)
                    sink.add_file(name)
                    name = f"figure_k{k}.png"
                    render_trajectory_figure(traj, out_dir / name)
                    sink.add_file(name)
                for s in traj.samples:
                    if s.result is None:
                        notes.append(
                            f"k={k} logQ={_f12(s.log10_q)}: sample missing ({s.note})"
                        )
                _strict_check(config, k, traj)
    except ResourceBudgetError as exc:
        notes.append(str(exc))
        sink.manifest("incomplete", notes)
        return RunResult(
            exit_code=3,
            out_dir=str(out_dir),
            artifacts=tuple(sorted(sink.names)),
            notes=tuple(notes),
        )

    if want_wit:
        summary_parts = []
        for k in ks:
            admissible = admissible_indices(config.spec, k, config.witness_n_max)
            if not admissible:
                summary_parts.append(
                    f"k={k}: no admissible chain index n <= {config.witness_n_max} "
                    f"(growth below k(k+1)+1); no conclusive mod-V certificate"
                )
            for n in admissible:
                fam = build_family(config.spec, k, n)
                cert = certify(fam, N_extra=1)
                name = f"certificate_k{k}_n{n}.txt"
                sink.write_text(name, certificate_text(fam, cert, compact=False))
                summary_parts.append(certificate_text(fam, cert, compact=True))
        sink.write_text("witness_summary.txt", "\n".join(summary_parts) + "\n")

    exit_code = 0
    overall = None
    if want_checks:
        deep = _deep_bounds(config)
        ests = _estimates(config, trajectories, deep)
        sink.write_text("estimates.txt", _estimates_text(ests))
        report = check_inequality_suite(
            ests, mode="liouville-target", k_set=list(ks)
        )
        sink.write_text("checks_constants.txt", report.to_text())
        sink.write_text("checks_constants.kv", report.to_kv())
        hard = list(report.hard_failures())
        minima_reports: dict = {}
        for k in ks:
            mrep = psi_level_suite(trajectories[k])
            minima_reports[k] = mrep
            sink.write_text(f"checks_minima_k{k}.txt", mrep.to_text())
            sink.write_text(f"checks_minima_k{k}.kv", mrep.to_kv())
            hard.extend(mrep.hard_failures())
        statuses = [report.overall] + [m.overall for m in minima_reports.values()]
        overall = (
            "fail" if hard else ("warn" if "warn" in statuses else "pass")
        )
        if hard:
            exit_code = 1
            notes.extend(f"hard failure: {r.rule_id}" for r in hard)

        if config.mode == MODE_FULL:
            deep_lines = []
            for k in sorted(deep):
                n, etas, how = deep[k]
                per_j = " ".join(f"eta_{j}={_f12(v)}" for j, v in sorted(etas.items()))
                deep_lines.append(f"k={k}: family n={n} ({how}): {per_j}")
            irr = irrationality_exponent(
                truncate(config.spec, config.truncation_depth), config.cf_depth
            )
            control = golden_ratio_control(config.cf_depth)
            summary = [
                f"spec={config.spec.label()}",
                spec_to_text(config.spec).rstrip(),
                f"truncation_depth={config.truncation_depth}",
                "",
                "== finite-scale constant estimates ==",
                _estimates_text(ests).rstrip(),
                "",
                "== deep witness lower-bound events ==",
                "\n".join(deep_lines) if deep_lines else "none available",
                "",
                "== target comparison ==",
                _liouville_table(ests).rstrip(),
                "",
                "== consistency suites ==",
                f"constants-level: overall {report.overall} "
                f"({len(report.hard_failures())} hard failures, {len(report)} rules)",
            ]
            for k in ks:
                mrep = minima_reports[k]
                summary.append(
                    f"minima-level k={k}: overall {mrep.overall} "
                    f"({len(mrep.hard_failures())} hard failures, {len(mrep)} rules)"
                )
            summary += [
                "",
                "== irrationality measure (lower-bound estimates) ==",
                f"truncation N={config.truncation_depth}: estimate "
                f"{_f12(irr.estimate)} via convergent "
                f"{irr.best[0]}/{irr.best[1]} (denominator cap {irr.q_cap})",
                f"golden-ratio control (depth {config.cf_depth}): "
                f"quotient estimate {_f12(control.quotient_estimate)}, "
                f"max-over-convergents {_f12(control.estimate)}",
                "",
                f"overall={overall}",
            ]
            sink.write_text("summary.txt", "\n".join(summary) + "\n")

    sink.manifest("complete", notes)
    return RunResult(
        exit_code=exit_code,
        out_dir=str(out_dir),
        artifacts=tuple(sorted(sink.names)),
        overall=overall,
        notes=tuple(notes),
    )
