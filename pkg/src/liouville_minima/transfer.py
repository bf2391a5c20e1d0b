"""Approximation constants, bound tables, and consistency-check suites.

This module converts window extremes of the successive-minima functions into
estimates of the simultaneous-approximation constants (ordinary and uniform),
derives the dual linear-form constants, tabulates the known exact bounds, and
evaluates two suites of consistency checks:

* :func:`check_inequality_suite` — rules phrased at the level of the
  approximation constants (monotone chains, Dirichlet floor, box bounds, the
  Davenport–Schmidt–Laurent cap, Schmidt–Summerer's lower bound, Bugeaud's
  dimension-division bound, cross-dimension monotonicity, and target values
  expected for Liouville-type numbers).
* :func:`psi_level_suite` — rules phrased directly at the level of the
  minima-function extremes (weighted dip/crest balance inequalities).

Infinite values are first-class: the convention 1/0 = inf and 1/inf = 0 is
honoured everywhere, and every rule defines its behaviour for infinite or
missing inputs explicitly.  Finite-window estimates of limits are heuristic
stand-ins, so rules based on them downgrade small violations to warnings
instead of hard failures; exact-arithmetic rules always fail hard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ValidationError
from .minima import PsiExtremes, Trajectory
from .qchain import RationalTruncation, q_terms

INF = math.inf

#: Violation size up to which an extremes-based rule reports ``warn``.
DEFAULT_SLACK = 0.05
#: Comparison tolerance for finite values in the constants-level suite.
DEFAULT_TOLERANCE = 1e-9
#: Comparison tolerance for the minima-level suite.
PSI_LEVEL_TOLERANCE = 1e-6
#: Ordinary-constant estimates at or below this level are considered too close
#: to the reliability threshold for the dimension-drop equality check.
EQUALITY_GATE = 1.0 + 0.1

Real = Union[float, Fraction]


def _require_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"dimension k must be a positive integer, got {k!r}")


def lambda_from_psi(psi: Real, k: int) -> Real:
    """Ordinary/uniform constant corresponding to a minima-function level.

    Implements the correspondence (1 + lambda) * (1 + psi) = (k+1)/k.  The
    boundary value ``psi == -1`` maps to ``inf`` (the 1/0 = inf convention)
    and ``psi == 1/k`` maps to ``0``.  Fraction input yields an exact Fraction
    result (except at the infinite boundary).

    Raises :class:`ValidationError` for ``psi < -1``, which is outside the
    range the minima functions can attain.
    """
    _require_k(k)
    if isinstance(psi, Fraction):
        if psi < -1:
            raise ValidationError(f"psi must be >= -1, got {psi}")
        if psi == -1:
            return INF
        return Fraction(k + 1, k) / (1 + psi) - 1
    psi = float(psi)
    if math.isnan(psi):
        raise ValidationError("psi must not be NaN")
    if psi < -1.0:
        raise ValidationError(f"psi must be >= -1, got {psi}")
    if psi == -1.0:
        return INF
    if math.isinf(psi):
        return -1.0  # limit of the correspondence as psi grows without bound
    return (k + 1) / (k * (1.0 + psi)) - 1.0


def psi_from_lambda(lam: Real, k: int) -> Real:
    """Inverse of :func:`lambda_from_psi` with the same conventions.

    ``lam == inf`` maps to ``-1``; ``lam == 1/k`` maps to ``0``.  Negative
    input raises :class:`ValidationError` (approximation constants are
    non-negative).
    """
    _require_k(k)
    if isinstance(lam, Fraction):
        if lam < 0:
            raise ValidationError(f"lambda must be >= 0, got {lam}")
        return Fraction(k + 1, k) / (1 + lam) - 1
    lam = float(lam)
    if math.isnan(lam):
        raise ValidationError("lambda must not be NaN")
    if lam < 0.0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    if math.isinf(lam):
        return -1.0
    return (k + 1) / (k * (1.0 + lam)) - 1.0


def _inverse(x: Union[Real, None]) -> Union[Real, None]:
    """Reciprocal with 1/0 = inf, 1/inf = 0, and None propagation."""
    if x is None:
        return None
    if isinstance(x, Fraction):
        if x == 0:
            return INF
        return 1 / x
    x = float(x)
    if x == 0.0:
        return INF
    if math.isinf(x):
        return 0.0
    return 1.0 / x


# ---------------------------------------------------------------------------
# Spectrum estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumEstimates:
    """Finite-scale estimates of the approximation constants for one k.

    ``lambda_j[i]`` estimates the ordinary constant of index ``j = i + 1``
    (derived from the lower extreme of the j-th minima function) and
    ``lambda_hat_j[i]`` the uniform constant (derived from the upper extreme).
    ``w_j`` / ``w_hat_j`` are the dual linear-form constants obtained by the
    reciprocal-with-index-reversal identities.  ``None`` marks a value the run
    could not estimate (no usable samples); ``inf`` is a legitimate value.
    ``provenance`` records where the numbers came from (run label, window).
    """

    k: int
    lambda_j: tuple
    lambda_hat_j: tuple
    w_j: tuple = field(default=())
    w_hat_j: tuple = field(default=())
    provenance: str = ""

    def __post_init__(self) -> None:
        _require_k(self.k)
        n = self.k + 1
        if len(self.lambda_j) != n or len(self.lambda_hat_j) != n:
            raise ValidationError(
                f"need {n} ordinary and uniform entries for k={self.k}"
            )

    def ordinary(self, j: int):
        """Ordinary-constant estimate for index j (1-based)."""
        return self.lambda_j[j - 1]

    def uniform(self, j: int):
        """Uniform-constant estimate for index j (1-based)."""
        return self.lambda_hat_j[j - 1]


def linear_form_constants(est: SpectrumEstimates) -> SpectrumEstimates:
    """Populate the dual linear-form constants on a copy of ``est``.

    The ordinary linear-form constant of index j is the reciprocal of the
    uniform simultaneous constant of index k+2-j, and vice versa, with the
    1/0 = inf and 1/inf = 0 conventions.
    """
    k = est.k
    # index k+2-j is 1-based; the tuples are 0-based, hence k+1-j
    w = tuple(_inverse(est.lambda_hat_j[k + 1 - j]) for j in range(1, k + 2))
    w_hat = tuple(_inverse(est.lambda_j[k + 1 - j]) for j in range(1, k + 2))
    return replace(est, w_j=w, w_hat_j=w_hat)


def spectrum_from_extremes(
    k: int, extremes: PsiExtremes, provenance: str = ""
) -> SpectrumEstimates:
    """Turn window extremes of the minima functions into constant estimates.

    Lower extremes give ordinary constants, upper extremes give uniform
    constants.  Missing extremes (``inf`` lower / ``-inf`` upper sentinels,
    meaning the window had no usable samples) yield ``None`` entries.
    """
    _require_k(k)
    if len(extremes.lower) != k + 1 or len(extremes.upper) != k + 1:
        raise ValidationError(
            f"extremes carry {len(extremes.lower)} levels, expected {k + 1}"
        )
    lam = []
    lam_hat = []
    for j0 in range(k + 1):
        lo = extremes.lower[j0]
        hi = extremes.upper[j0]
        lam.append(None if math.isinf(lo) and lo > 0 else lambda_from_psi(lo, k))
        lam_hat.append(None if math.isinf(hi) and hi < 0 else lambda_from_psi(hi, k))
    est = SpectrumEstimates(
        k=k,
        lambda_j=tuple(lam),
        lambda_hat_j=tuple(lam_hat),
        provenance=provenance,
    )
    return linear_form_constants(est)


def with_lower_bounds(
    est: SpectrumEstimates, bounds: Mapping[int, Real], note: str = "certified lower bounds"
) -> SpectrumEstimates:
    """Merge certified lower bounds into the ordinary-constant estimates.

    ``bounds`` maps the index j (1-based) to a certified lower bound for the
    ordinary constant; each estimate is replaced by the larger of the two.
    Uniform constants are left untouched (a lower-bound event at one scale
    says nothing about a uniform constant).
    """
    lam = list(est.lambda_j)
    for j, value in bounds.items():
        if not 1 <= j <= est.k + 1:
            raise ValidationError(f"index j={j} out of range for k={est.k}")
        current = lam[j - 1]
        merged = value if current is None else max(current, value)
        lam[j - 1] = merged
    prov = est.provenance
    if note:
        prov = f"{prov}; {note}" if prov else note
    merged_est = replace(est, lambda_j=tuple(lam), provenance=prov)
    return linear_form_constants(merged_est)


# ---------------------------------------------------------------------------
# Exact bound tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumBounds:
    """Exact known bounds for the constants of one dimension k.

    ``chi`` / ``phi`` are the trivial lower bounds for the ordinary / uniform
    constants; ``lambda_cap[j-1]`` is the upper bound 1/(j-1) for the ordinary
    constant (``inf`` at j=1); ``lambda_hat_cap[j-1]`` is 1/j for j <= k and
    1/k at j = k+1; ``uniform_first_cap`` is the Davenport–Schmidt–Laurent
    cap 1/ceil(k/2) on the first uniform constant.  All finite entries are
    exact Fractions.
    """

    k: int
    chi: tuple
    phi: tuple
    lambda_cap: tuple
    lambda_hat_cap: tuple
    uniform_first_cap: Fraction


def bounds_table(k: int) -> SpectrumBounds:
    """Exact rational bound table for dimension k."""
    _require_k(k)
    chi = tuple(
        Fraction(1, k) if j <= 2 else Fraction(0) for j in range(1, k + 2)
    )
    phi = tuple(
        Fraction(1, k) if j == 1 else Fraction(0) for j in range(1, k + 2)
    )
    lam_cap = tuple(
        INF if j == 1 else Fraction(1, j - 1) for j in range(1, k + 2)
    )
    lam_hat_cap = tuple(
        Fraction(1, j) if j <= k else Fraction(1, k) for j in range(1, k + 2)
    )
    return SpectrumBounds(
        k=k,
        chi=chi,
        phi=phi,
        lambda_cap=lam_cap,
        lambda_hat_cap=lam_hat_cap,
        uniform_first_cap=Fraction(1, math.ceil(k / 2)),
    )


# ---------------------------------------------------------------------------
# Check reports
# ---------------------------------------------------------------------------

STATUS_PASS = "pass"
STATUS_WARN = "warn"
STATUS_FAIL = "fail"
STATUS_NA = "not-applicable"


@dataclass(frozen=True)
class RuleResult:
    """Outcome of one rule: identifier, status, and the compared sides."""

    rule_id: str
    status: str
    lhs: object = None
    rhs: object = None
    tolerance: float = DEFAULT_TOLERANCE
    note: str = ""


@dataclass(frozen=True)
class CheckReport:
    """Bundle of rule results with an overall verdict."""

    results: tuple

    def __post_init__(self) -> None:
        seen = set()
        for r in self.results:
            if r.rule_id in seen:
                raise ValidationError(f"duplicate rule id {r.rule_id!r}")
            seen.add(r.rule_id)

    @property
    def overall(self) -> str:
        statuses = {r.status for r in self.results}
        if STATUS_FAIL in statuses:
            return STATUS_FAIL
        if STATUS_WARN in statuses:
            return STATUS_WARN
        return STATUS_PASS

    def hard_failures(self) -> tuple:
        return tuple(r for r in self.results if r.status == STATUS_FAIL)

    def __iter__(self):
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def find(self, rule_id: str) -> RuleResult:
        for r in self.results:
            if r.rule_id == rule_id:
                return r
        raise KeyError(rule_id)

    def to_text(self) -> str:
        """One rule per line: id, status, lhs, rhs (12 significant digits)."""
        lines = []
        for r in self.results:
            lines.append(
                f"{r.rule_id}  {r.status}  lhs={_num(r.lhs)}  rhs={_num(r.rhs)}"
                + (f"  note={r.note}" if r.note else "")
            )
        lines.append(f"overall  {self.overall}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        """Machine-readable key=value serialization."""
        lines = []
        for r in self.results:
            base = f"rule.{r.rule_id}"
            lines.append(f"{base}.status={r.status}")
            lines.append(f"{base}.lhs={_num(r.lhs)}")
            lines.append(f"{base}.rhs={_num(r.rhs)}")
            lines.append(f"{base}.tolerance={r.tolerance:g}")
            if r.note:
                lines.append(f"{base}.note={r.note}")
        lines.append(f"overall={self.overall}")
        return "\n".join(lines) + "\n"


def _num(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, Fraction):
        x = float(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def _flt(x):
    """Coerce estimate entries to float for rule evaluation (None passes)."""
    if x is None:
        return None
    if isinstance(x, Fraction):
        return float(x)
    return float(x)


class _Rules:
    """Accumulates rule results with shared tolerance/slack handling."""

    def __init__(self, slack: float, tolerance: float):
        self.slack = slack
        self.tolerance = tolerance
        self.results = []

    def add(self, result: RuleResult) -> None:
        self.results.append(result)

    def na(self, rule_id: str, note: str) -> None:
        self.add(RuleResult(rule_id, STATUS_NA, None, None, self.tolerance, note))

    def le(self, rule_id: str, lhs, rhs, *, hard: bool = False, note: str = "") -> None:
        """Rule lhs <= rhs.  Missing side -> not-applicable; violations warn
        within the slack unless ``hard``."""
        lhs = _flt(lhs)
        rhs = _flt(rhs)
        if lhs is None or rhs is None:
            self.na(rule_id, note or "estimate unavailable")
            return
        if lhs <= rhs + self.tolerance:
            status = STATUS_PASS
        else:
            excess = lhs - rhs
            if not hard and excess <= self.slack:
                status = STATUS_WARN
            else:
                status = STATUS_FAIL
        self.add(RuleResult(rule_id, status, lhs, rhs, self.tolerance, note))

    def ge(self, rule_id: str, lhs, rhs, *, hard: bool = False, note: str = "") -> None:
        lhs = _flt(lhs)
        rhs = _flt(rhs)
        if lhs is None or rhs is None:
            self.na(rule_id, note or "estimate unavailable")
            return
        if lhs >= rhs - self.tolerance:
            status = STATUS_PASS
        else:
            excess = rhs - lhs
            if not hard and excess <= self.slack:
                status = STATUS_WARN
            else:
                status = STATUS_FAIL
        self.add(RuleResult(rule_id, status, lhs, rhs, self.tolerance, note))

    def eq(self, rule_id: str, lhs, rhs, *, note: str = "") -> None:
        """Equality rule on estimates: pass at tolerance, warn within slack."""
        lhs = _flt(lhs)
        rhs = _flt(rhs)
        if lhs is None or rhs is None:
            self.na(rule_id, note or "estimate unavailable")
            return
        if math.isinf(lhs) or math.isinf(rhs):
            status = STATUS_PASS if lhs == rhs else STATUS_FAIL
        else:
            gap = abs(lhs - rhs)
            if gap <= self.tolerance:
                status = STATUS_PASS
            elif gap <= self.slack:
                status = STATUS_WARN
            else:
                status = STATUS_FAIL
        self.add(RuleResult(rule_id, status, lhs, rhs, self.tolerance, note))

    def verify_only(self, rule_id: str, lhs, target, *, note: str) -> None:
        """Target-proximity rule that cannot fail: out-of-range estimates are
        reported as not-applicable (the finite window cannot resolve them)."""
        lhs = _flt(lhs)
        target = _flt(target)
        if lhs is None or target is None:
            self.na(rule_id, "estimate unavailable")
            return
        gap = abs(lhs - target)
        if gap <= self.tolerance:
            self.add(RuleResult(rule_id, STATUS_PASS, lhs, target, self.tolerance, note))
        elif gap <= self.slack:
            self.add(RuleResult(rule_id, STATUS_PASS, lhs, target, self.tolerance,
                                (note + "; " if note else "") + "within slack"))
        else:
            self.add(RuleResult(rule_id, STATUS_NA, lhs, target, self.tolerance,
                                (note + "; " if note else "")
                                + "finite window cannot resolve the target"))

    def report(self) -> CheckReport:
        return CheckReport(results=tuple(self.results))


# ---------------------------------------------------------------------------
# Constants-level suite
# ---------------------------------------------------------------------------

MODE_LIOUVILLE = "liouville-target"
MODE_GENERIC = "generic"


def check_inequality_suite(
    estimates: Mapping[int, SpectrumEstimates],
    bounds: Union[Mapping[int, SpectrumBounds], None] = None,
    mode: str = MODE_LIOUVILLE,
    k_set: Union[Iterable[int], None] = None,
    slack: float = DEFAULT_SLACK,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CheckReport:
    """Evaluate every constants-level consistency rule over a set of dimensions.

    ``estimates`` maps k to :class:`SpectrumEstimates`; ``bounds`` maps k to
    :class:`SpectrumBounds` (computed on demand when omitted).  ``k_set``
    fixes the set of dimensions the report must cover — dimensions without
    estimates produce not-applicable entries rather than silent omissions.

    In ``liouville-target`` mode, target-value rules for Liouville-type
    numbers are evaluated in addition to the unconditional rules.  Rules that
    compare a finite-scale estimate against an infinite target are phrased as
    threshold rules, never equalities.
    """
    if mode not in (MODE_LIOUVILLE, MODE_GENERIC):
        raise ValidationError(f"unknown suite mode {mode!r}")
    ks = sorted(k_set) if k_set is not None else sorted(estimates)
    if not ks:
        raise ValidationError("no dimensions to check")
    bounds = dict(bounds) if bounds else {}
    for k in ks:
        if k not in bounds:
            bounds[k] = bounds_table(k)
    rules = _Rules(slack, tolerance)

    def est_or_none(k: int) -> Union[SpectrumEstimates, None]:
        return estimates.get(k)

    for k in ks:
        est = est_or_none(k)
        tab = bounds[k]
        missing = f"no estimates for k={k}"

        # Monotone chains in j for both families of constants.
        for j in range(1, k + 1):
            rid = f"ordinary-chain-monotone:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.ge(rid, est.ordinary(j), est.ordinary(j + 1))
            rid = f"uniform-chain-monotone:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.ge(rid, est.uniform(j), est.uniform(j + 1))

        # Ordinary constants dominate uniform ones at every index.
        for j in range(1, k + 2):
            rid = f"ordinary-above-uniform:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.ge(rid, est.ordinary(j), est.uniform(j))

        # Dirichlet floor for the first uniform constant.
        rid = f"dirichlet-uniform-floor:k={k}"
        if est is None:
            rules.na(rid, missing)
        else:
            rules.ge(rid, est.uniform(1), Fraction(1, k))

        # Box bounds: trivial floors and index caps for both families.
        for j in range(1, k + 2):
            rid = f"ordinary-floor:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.ge(rid, est.ordinary(j), tab.chi[j - 1])
            rid = f"ordinary-cap:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.le(rid, est.ordinary(j), tab.lambda_cap[j - 1])
            rid = f"uniform-floor:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.ge(rid, est.uniform(j), tab.phi[j - 1])
            rid = f"uniform-cap:k={k}:j={j}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.le(rid, est.uniform(j), tab.lambda_hat_cap[j - 1])

        # Davenport–Schmidt–Laurent cap on the first uniform constant.
        rid = f"davenport-schmidt-laurent-cap:k={k}"
        if est is None:
            rules.na(rid, missing)
        else:
            rules.le(rid, est.uniform(1), tab.uniform_first_cap)

        # First uniform constant against the reciprocal of the k=1 ordinary
        # constant (dimension-drop upper bound).
        rid = f"uniform-first-reciprocal-cap:k={k}"
        est1 = est_or_none(1)
        if est is None:
            rules.na(rid, missing)
        elif 1 not in ks or est1 is None or est1.ordinary(1) is None:
            rules.na(rid, "needs the k=1 ordinary constant")
        else:
            lam11 = _flt(est1.ordinary(1))
            cap = max(_flt(_inverse(lam11)), 1.0 / k)
            rules.le(rid, est.uniform(1), cap)

        # Dimension-drop equality, gated on a reliably large estimate.
        if k >= 2:
            rid = f"ordinary-first-dimension-drop:k={k}"
            if est is None:
                rules.na(rid, missing)
            elif 1 not in ks or est1 is None or est1.ordinary(1) is None:
                rules.na(rid, "needs the k=1 ordinary constant")
            else:
                lamk1 = _flt(est.ordinary(1))
                if lamk1 is None:
                    rules.na(rid, "estimate unavailable")
                elif math.isinf(lamk1) or lamk1 <= EQUALITY_GATE:
                    rules.na(
                        rid,
                        "equality checked only for finite estimates above "
                        f"{EQUALITY_GATE:g}",
                    )
                else:
                    rules.eq(rid, _flt(est1.ordinary(1)), k * lamk1 + k - 1)

        # Schmidt–Summerer lower bound for the first ordinary constant.
        if k >= 2:
            rid = f"schmidt-summerer-ordinary-floor:k={k}"
            if est is None:
                rules.na(rid, missing)
            else:
                lh = _flt(est.uniform(1))
                if lh is None:
                    rules.na(rid, "estimate unavailable")
                else:
                    denom = (k - 1) * (1.0 - lh)
                    rhs = INF if denom <= 0.0 else (lh * lh + (k - 2) * lh) / denom
                    rules.ge(rid, est.ordinary(1), rhs)

        if mode == MODE_LIOUVILLE:
            # Target values predicted for Liouville-type numbers.
            rid = f"liouville-uniform-first-target:k={k}"
            if est is None:
                rules.na(rid, missing)
            else:
                rules.eq(rid, est.uniform(1), Fraction(1, k),
                         note="target value for Liouville-type input")
            for j in range(2, k + 2):
                rid = f"liouville-uniform-higher-target:k={k}:j={j}"
                if est is None:
                    rules.na(rid, missing)
                else:
                    rules.verify_only(
                        rid, est.uniform(j), 0.0,
                        note="target value 0 for Liouville-type input",
                    )
            for j in range(2, k + 2):
                rid = f"liouville-ordinary-box:k={k}:j={j}"
                if est is None:
                    rules.na(rid, missing)
                else:
                    lam = _flt(est.ordinary(j))
                    if lam is None:
                        rules.na(rid, "estimate unavailable")
                    else:
                        lo = 1.0 / k
                        hi = _flt(tab.lambda_cap[j - 1])
                        below = lo - lam
                        above = lam - hi
                        worst = max(below, above)
                        if worst <= tolerance:
                            status = STATUS_PASS
                        elif worst <= slack:
                            status = STATUS_WARN
                        else:
                            status = STATUS_FAIL
                        rules.add(RuleResult(
                            rid, status, lam, hi, tolerance,
                            note=f"target interval [{lo:.12g}, {_num(hi)}]",
                        ))
            # The ordinary first constant has an infinite target; a finite run
            # can only report whether the estimate clears a threshold.
            rid = f"liouville-ordinary-first-threshold:k={k}"
            if est is None:
                rules.na(rid, missing)
            else:
                lam = _flt(est.ordinary(1))
                if lam is None:
                    rules.na(rid, "estimate unavailable")
                else:
                    threshold = 1.0 / k + slack
                    if lam >= threshold - tolerance:
                        rules.add(RuleResult(
                            rid, STATUS_PASS, lam, threshold, tolerance,
                            note="infinite target; threshold rule",
                        ))
                    else:
                        rules.add(RuleResult(
                            rid, STATUS_NA, lam, threshold, tolerance,
                            note="estimate below threshold; window too "
                                 "shallow to witness the infinite target",
                        ))

    # Cross-dimension monotonicity between consecutive dimensions.
    for idx in range(len(ks) - 1):
        ka, kb = ks[idx], ks[idx + 1]
        if kb != ka + 1:
            continue
        ea, eb = est_or_none(ka), est_or_none(kb)
        for j in range(1, ka + 2):
            rid = f"ordinary-cross-dim-monotone:j={j}:k={ka}-to-{kb}"
            if ea is None or eb is None:
                rules.na(rid, f"needs estimates for k={ka} and k={kb}")
            else:
                rules.ge(rid, ea.ordinary(j), eb.ordinary(j))
            rid = f"uniform-cross-dim-monotone:j={j}:k={ka}-to-{kb}"
            if ea is None or eb is None:
                rules.na(rid, f"needs estimates for k={ka} and k={kb}")
            else:
                rules.ge(rid, ea.uniform(j), eb.uniform(j))

    # Dimension-division lower bound across pairs of dimensions.
    for k in ks:
        for n in ks:
            if k < 2 or k * n not in ks:
                continue
            rid = f"bugeaud-division-floor:k={k}:n={n}"
            e_kn = est_or_none(k * n)
            e_n = est_or_none(n)
            if e_kn is None or e_n is None:
                rules.na(rid, f"needs estimates for k={k * n} and k={n}")
                continue
            lhs = _flt(e_kn.ordinary(1))
            lam_n = _flt(e_n.ordinary(1))
            if lhs is None or lam_n is None:
                rules.na(rid, "estimate unavailable")
            elif math.isinf(lhs) or math.isinf(lam_n):
                rules.na(rid, "skipped: side estimated as infinite")
            else:
                rules.ge(rid, lhs, (lam_n - k + 1) / k)

    return rules.report()


# ---------------------------------------------------------------------------
# Minima-level suite
# ---------------------------------------------------------------------------


def psi_level_suite(
    source: Union[Trajectory, PsiExtremes],
    k: Union[int, None] = None,
    slack: float = DEFAULT_SLACK,
    tolerance: float = PSI_LEVEL_TOLERANCE,
) -> CheckReport:
    """Evaluate the minima-level dip/crest balance rules on window extremes.

    ``source`` is either a :class:`Trajectory` (its extremes and k are used)
    or a :class:`PsiExtremes` with ``k`` given explicitly.  All rules compare
    finite-window stand-ins for asymptotic quantities, so violations within
    ``slack`` are warnings.
    """
    if isinstance(source, Trajectory):
        extremes = source.extremes
        k = source.k
    else:
        extremes = source
        if k is None:
            raise ValidationError("k is required when passing raw extremes")
    _require_k(k)
    if len(extremes.lower) != k + 1:
        raise ValidationError(
            f"extremes carry {len(extremes.lower)} levels, expected {k + 1}"
        )
    lo = extremes.lower
    hi = extremes.upper

    def have(*values) -> bool:
        return all(not math.isinf(v) for v in values)

    rules = _Rules(slack, tolerance)

    rid = f"first-crest-nonpositive:k={k}"
    if have(hi[0]):
        rules.le(rid, hi[0], 0.0)
    else:
        rules.na(rid, "no exact samples in the window")

    for j in range(0, k + 1):
        rid = f"crest-bound-from-first-dip:k={k}:j={j}"
        if have(lo[0], hi[j]):
            rules.le(rid, j * lo[0] + (k + 1 - j) * hi[j], 0.0)
        else:
            rules.na(rid, "window extremes unavailable")
        rid = f"dip-bound-from-first-crest:k={k}:j={j}"
        if have(hi[0], lo[j]):
            rules.le(rid, j * hi[0] + (k + 1 - j) * lo[j], 0.0)
        else:
            rules.na(rid, "window extremes unavailable")

    rid = f"first-crest-offsets-last-dip:k={k}"
    if have(hi[0], lo[k]):
        rules.ge(rid, hi[0] + k * lo[k], 0.0)
    else:
        rules.na(rid, "window extremes unavailable")

    rid = f"first-dip-offsets-crest-sum:k={k}"
    if have(lo[0], *hi[1:]):
        rules.ge(rid, lo[0] + sum(hi[1:]), 0.0)
    else:
        rules.na(rid, "window extremes unavailable")

    return rules.report()


# ---------------------------------------------------------------------------
# Irrationality-measure estimation via continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergentRecord:
    """One continued-fraction convergent with its error against the value."""

    index: int
    partial_quotient: int
    p: int
    q: int
    error: Fraction
    exponent: Union[float, None]


@dataclass(frozen=True)
class IrrationalityEstimate:
    """Lower-bound estimate of the irrationality measure of a rational stand-in.

    ``estimate`` is the maximum, over admissible convergents p/q (q at least 2,
    below the cap, with nonzero error), of log(1/|value - p/q|)/log q, and
    ``best`` is the convergent attaining it.  ``quotient_estimate`` is a
    secondary estimator from the partial quotients, max of
    2 + log(a_{n+1})/log(q_n); for values whose quotients stay bounded it
    converges where the primary max is dominated by early convergents.
    """

    estimate: Union[float, None]
    best: Union[tuple, None]
    quotient_estimate: Union[float, None]
    records: tuple
    depth_used: int
    q_cap: Union[int, None]


def continued_fraction_convergents(value: Fraction, depth: int):
    """Partial quotients and convergents of ``value`` up to ``depth`` terms.

    Returns a list of ``(a_n, p_n, q_n)`` starting at n=0 (so at most
    ``depth + 1`` entries); stops early when the expansion terminates.
    """
    if depth < 1:
        raise ValidationError(f"depth must be >= 1, got {depth}")
    num = value.numerator
    den = value.denominator
    records = []
    p_m1, q_m1 = 1, 0
    p_m2, q_m2 = 0, 1
    n = 0
    while den != 0 and n <= depth:
        a = num // den
        num, den = den, num - a * den
        p = a * p_m1 + p_m2
        q = a * q_m1 + q_m2
        records.append((a, p, q))
        p_m2, q_m2 = p_m1, q_m1
        p_m1, q_m1 = p, q
        n += 1
    return records


def _log_fraction(f: Fraction) -> float:
    return math.log(f.numerator) - math.log(f.denominator)


def irrationality_estimate(
    value: Fraction, depth: int, q_cap: Union[int, None] = None
) -> IrrationalityEstimate:
    """Estimate the irrationality measure of an irrational from a rational
    stand-in ``value`` using its continued-fraction convergents.

    Only convergents with denominator at least 2, ``q <= q_cap`` (when given),
    and nonzero error enter the maximum; the final convergent of a rational
    always has error zero and is excluded automatically.  Raises
    :class:`ValidationError` for integer input or when no admissible
    convergent exists (the expansion terminated too early).
    """
    if not isinstance(value, Fraction):
        value = Fraction(value)
    if value.denominator == 1:
        raise ValidationError("irrationality estimation needs a non-integer value")
    cf = continued_fraction_convergents(value, depth)
    depth_used = len(cf) - 1  # number of partial quotients beyond a_0
    records = []
    best = None
    best_exp = None
    quot_best = None
    for idx, (a, p, q) in enumerate(cf):
        err = abs(value - Fraction(p, q))
        exponent = None
        admissible = q >= 2 and (q_cap is None or q <= q_cap) and err > 0
        if admissible:
            exponent = -_log_fraction(err) / math.log(q)
            if best_exp is None or exponent > best_exp:
                best_exp = exponent
                best = (p, q)
        records.append(ConvergentRecord(idx, a, p, q, err, exponent))
        if idx + 1 < len(cf) and q >= 2 and (q_cap is None or q <= q_cap):
            a_next = cf[idx + 1][0]
            cand = 2.0 + math.log(a_next) / math.log(q)
            if quot_best is None or cand > quot_best:
                quot_best = cand
    if best_exp is None:
        raise ValidationError(
            "no admissible convergent: the expansion terminated before "
            "producing a denominator >= 2 below the cap with nonzero error"
        )
    return IrrationalityEstimate(
        estimate=best_exp,
        best=best,
        quotient_estimate=quot_best,
        records=tuple(records),
        depth_used=depth_used,
        q_cap=q_cap,
    )


def irrationality_exponent(t: RationalTruncation, depth: int) -> IrrationalityEstimate:
    """Irrationality-measure lower-bound estimate for a chain truncation.

    Convergents are computed for the truncation value and capped at the
    next-to-last chain denominator, so the truncation tail cannot distort the
    estimate.  Needs truncation depth at least 2.
    """
    if depth < 1:
        raise ValidationError(f"depth must be >= 1, got {depth}")
    if t.N < 2:
        raise ValidationError("truncation depth N >= 2 required for a cap")
    cap = q_terms(t.spec, t.N - 1)[-1]
    return irrationality_estimate(t.value, depth, q_cap=cap)


def golden_ratio_control(depth: int = 20) -> IrrationalityEstimate:
    """Control estimate on a Fibonacci-ratio stand-in for the golden mean.

    The stand-in is F_29/F_30, whose expansion shows partial quotient 1 at
    every depth reachable below 28, so the quotient-based estimator equals
    2.0 exactly — the classical value for badly approximable numbers.
    """
    a, b = 1, 1
    for _ in range(28):
        a, b = b, a + b
    return irrationality_estimate(Fraction(a, b), depth)
