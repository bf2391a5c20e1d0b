"""Successive-minima exponents of the parametric approximation body.

For a target vector (zeta, zeta^2, ..., zeta^k) and a scale Q > 1, a nonzero
integer vector v = (x, y_1, ..., y_k) is admitted at exponent nu when

    |x| <= Q^(1+nu)   and   |zeta^j x - y_j| <= Q^(-1/k+nu)  for all j.

The least admitting nu is ``point_exponent(v)``; the j-th successive-minimum
exponent psi_j(Q) is the smallest nu at which j linearly independent vectors
are admitted.  This module computes psi exactly by enumeration at desk scale
and as certified upper bounds from explicit witness vectors at any scale,
and aggregates Q-grids into trajectories with liminf/limsup-style extreme
estimates over a tail window.

Enumeration region.  It suffices to scan 0 <= x <= Q^(1+1/k) and, per
coordinate, only the two nearest integers y_j (plus the exact hit when
zeta^j x is integral, and the pure-y unit vectors): any candidate whose
coordinate distance exceeds 1 has nu > 1/k, while the unit vectors together
with (1, round(zeta), ..., round(zeta^k)) already supply k+1 independent
vectors with nu <= 1/k, so greedy selection never reaches a farther corner.
Candidates are ranked by a fast float exponent; only the handful of selected
witnesses get validated interval logarithms (1e-12).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ResourceBudgetError, ValidationError
from .logscale import INF, Interval, QScale, log_interval
from .qchain import PowerVector, RationalTruncation

__all__ = [
    "DEFAULT_BUDGET",
    "ApproxTarget",
    "LatticePoint",
    "MinimaResult",
    "TrajectorySample",
    "PsiExtremes",
    "Trajectory",
    "point_exponent",
    "point_exponent_interval",
    "successive_minima_enumerate",
    "psi_upper_bounds_from_witnesses",
    "psi_trajectory",
    "build_q_grid",
    "truncation_candidates",
    "unit_candidates",
    "write_trajectory_csv",
    "write_witness_dump",
]

DEFAULT_BUDGET = 10**6
_DEFAULT_POOL = 4096
_NU_TOLERANCE = 1e-12

MODE_EXACT = "exact-enumeration"
MODE_WITNESS = "witness-upper-bound"
MODE_MISSING = "missing"


@dataclass(frozen=True)
class ApproxTarget:
    """Approximation target (zeta, zeta^2, ..., zeta^k) as exact rationals."""

    k: int
    zeta_powers: PowerVector

    def __post_init__(self) -> None:
        if self.zeta_powers.k != self.k:
            raise ValidationError("power vector length must equal k")

    @staticmethod
    def from_truncation(t: RationalTruncation, k: int) -> "ApproxTarget":
        from .qchain import powers

        return ApproxTarget(k=k, zeta_powers=powers(t, k))

    @property
    def truncation(self) -> RationalTruncation:
        return self.zeta_powers.truncation

    def label(self) -> str:
        t = self.truncation
        return f"{t.spec.label()}:N={t.N}:k={self.k}"


@dataclass(frozen=True)
class LatticePoint:
    """Nonzero integer vector (x, y_1..y_k) with its admitting exponent."""

    x: int
    y: tuple[int, ...]
    nu: float

    def vector(self) -> tuple[int, ...]:
        return (self.x, *self.y)


@dataclass(frozen=True)
class MinimaResult:
    """psi_1(Q) <= ... <= psi_{k+1}(Q) with independent witness vectors."""

    Q: QScale
    psi: tuple[float, ...]
    witnesses: tuple[LatticePoint, ...]
    mode: str

    def __post_init__(self) -> None:
        for a, b in zip(self.psi, self.psi[1:]):
            if not (a <= b or (math.isinf(a) and math.isinf(b))):
                raise ValidationError(f"psi values must be non-decreasing, got {self.psi}")


@dataclass(frozen=True)
class TrajectorySample:
    Q: QScale
    log10_q: float
    result: MinimaResult | None
    note: str = ""


@dataclass(frozen=True)
class PsiExtremes:
    """Tail-window extreme estimates: lower from all computed samples,
    upper from exact-enumeration samples only (witness values only bound psi
    from above, so they may sharpen a minimum but never certify a maximum)."""

    lower: tuple[float, ...]
    upper: tuple[float | None, ...]
    window_size: int
    exact_in_window: int


@dataclass(frozen=True)
class Trajectory:
    target_id: str
    k: int
    samples: tuple[TrajectorySample, ...]
    extremes: PsiExtremes
    tail_fraction: float


# -- point exponent ----------------------------------------------------------


def _term_intervals(
    target: ApproxTarget, logQ: Interval, v: Sequence[int], width: float
) -> list[Interval]:
    k = target.k
    x, ys = v[0], v[1:]
    terms: list[Interval] = []
    if x != 0:
        ax = abs(x)
        if ax == 1:
            terms.append(Interval.exact(-1.0))
        else:
            terms.append(log_interval(ax, width).div_pos(logQ).shift(-1))
    inv_k = Fraction(1, k)
    for j in range(k):
        r = target.zeta_powers.entries[j] * x - ys[j]
        if r == 0:
            continue  # exact hit: this coordinate constrains nothing
        terms.append(log_interval(abs(r), width).div_pos(logQ).shift(inv_k))
    return terms


def point_exponent_interval(target: ApproxTarget, Q, v: Sequence[int]) -> Interval:
    """Validated interval for nu(v), refined below the 1e-12 contract."""
    Q = QScale.coerce(Q)
    vec = tuple(int(c) for c in v)
    if len(vec) != target.k + 1:
        raise ValidationError(f"vector must have length k+1 = {target.k + 1}")
    if all(c == 0 for c in vec):
        raise ValidationError("the zero vector has no admitting exponent")
    width = 1e-13
    for _ in range(6):
        logQ = Q.log_interval(width)
        terms = _term_intervals(target, logQ, vec, width)
        nu = terms[0]
        for term in terms[1:]:
            nu = nu.max_with(term)
        if nu.width() < _NU_TOLERANCE:
            return nu
        width /= 32.0
    raise ArithmeticError(f"point exponent failed to converge for v={vec} at Q={Q}")


def point_exponent(target: ApproxTarget, Q, v: Sequence[int]) -> float:
    """nu(v): least exponent at which v satisfies the parametric system.

    Correct to 1e-12; coordinates with an exact lattice hit drop out, and
    |x| = 0 drops the first constraint.
    """
    return point_exponent_interval(target, Q, v).mid()


# -- exact enumeration -------------------------------------------------------


def _echelon_try_insert(basis: list[list[Fraction]], vec: Sequence[int]) -> bool:
    """Reduce vec against the (row-echelon) basis; append if independent.

    Returns True when vec was independent and has been absorbed.
    """
    row = [Fraction(c) for c in vec]
    for brow in basis:
        pivot = next(i for i, c in enumerate(brow) if c != 0)
        if row[pivot] != 0:
            factor = row[pivot] / brow[pivot]
            row = [a - factor * b for a, b in zip(row, brow)]
    if all(c == 0 for c in row):
        return False
    basis.append(row)
    basis.sort(key=lambda r: next(i for i, c in enumerate(r) if c != 0))
    return True


def _greedy_select(
    ordered: Iterable[tuple[float, int, tuple[int, ...]]], need: int
) -> list[tuple[float, int, tuple[int, ...]]]:
    basis: list[list[Fraction]] = []
    chosen: list[tuple[float, int, tuple[int, ...]]] = []
    for nu, x, y in ordered:
        if _echelon_try_insert(basis, (x, *y)):
            chosen.append((nu, x, y))
            if len(chosen) == need:
                break
    return chosen


def _validated_psi(
    target: ApproxTarget, Q: QScale, chosen: list[tuple[float, int, tuple[int, ...]]]
) -> tuple[list[float], list[LatticePoint]]:
    psi: list[float] = []
    witnesses: list[LatticePoint] = []
    for _, x, y in chosen:
        nu = point_exponent(target, Q, (x, *y))
        if psi and nu < psi[-1]:
            if psi[-1] - nu > 4 * _NU_TOLERANCE:
                raise ArithmeticError(
                    f"selection order inconsistent with validated exponents at Q={Q}"
                )
            nu = psi[-1]  # clamp sub-tolerance inversions from float ranking
        psi.append(nu)
        witnesses.append(LatticePoint(x=x, y=y, nu=nu))
    return psi, witnesses


def _scan_candidates(
    target: ApproxTarget, Q: QScale, x_max: int, pool_limit: int | None
) -> tuple[list[tuple[float, int, tuple[int, ...]]], bool]:
    """Collect candidates as (nu_float, x, y) keeping the pool_limit smallest.

    Returns (pool, clipped).  With pool_limit None the scan is exhaustive.
    The float exponent ranks candidates; validated values are attached later.
    """
    k = target.k
    entries = target.zeta_powers.entries
    nums = [e.numerator for e in entries]
    dens = [e.denominator for e in entries]
    log_dens = [math.log(d) for d in dens]
    logQ = Q.log()
    inv_k = 1.0 / k

    heap: list[tuple[float, int, tuple[int, ...]]] = []  # negated keys, max-heap
    plain: list[tuple[float, int, tuple[int, ...]]] = []
    clipped = False

    def pool_max() -> float:
        return -heap[0][0]

    def offer(nu: float, x: int, y: tuple[int, ...]) -> None:
        nonlocal clipped
        if pool_limit is None:
            plain.append((nu, x, y))
            return
        item = (-nu, -x, tuple(-c for c in y))
        if len(heap) < pool_limit:
            heapq.heappush(heap, item)
        else:
            heapq.heappushpop(heap, item)  # either the new or an old item drops
            clipped = True

    for j in range(k):
        unit = tuple(1 if i == j else 0 for i in range(k))
        offer(inv_k, 0, unit)

    residues = [0] * k
    for x in range(1, x_max + 1):
        for j in range(k):
            r = residues[j] + nums[j]
            if r >= dens[j]:
                r -= dens[j]
            residues[j] = r
        term1 = math.log(x) / logQ - 1.0
        if pool_limit is not None and len(heap) == pool_limit and term1 > pool_max():
            break  # term1 only grows and the pool bar only drops
        # per-coordinate options: (term, y-offset) with offset from floor
        options: list[list[tuple[float, int]]] = []
        for j in range(k):
            r = residues[j]
            if r == 0:
                options.append([(NEG_INF_TERM, 0)])
            else:
                t_down = (math.log(r) - log_dens[j]) / logQ + inv_k
                t_up = (math.log(dens[j] - r) - log_dens[j]) / logQ + inv_k
                options.append([(t_down, 0), (t_up, 1)])
        floors: list[int] | None = None
        for combo in _combos(options):
            nu = term1
            for t, _ in combo:
                if t > nu:
                    nu = t
            if (
                pool_limit is not None
                and len(heap) == pool_limit
                and (nu, x) > (pool_max(), -heap[0][1])
            ):
                continue
            if floors is None:
                floors = [(nums[j] * x) // dens[j] for j in range(k)]
            y = tuple(floors[j] + combo[j][1] for j in range(k))
            offer(nu, x, y)

    if pool_limit is None:
        return plain, False
    pool = [(-nk, -nx, tuple(-c for c in ny)) for nk, nx, ny in heap]
    return pool, clipped


NEG_INF_TERM = -math.inf


def _combos(options: list[list[tuple[float, int]]]):
    # tiny cartesian product (k <= 3 in practice); avoids itertools overhead
    if len(options) == 1:
        for a in options[0]:
            yield (a,)
    elif len(options) == 2:
        for a in options[0]:
            for b in options[1]:
                yield (a, b)
    else:
        for a in options[0]:
            for rest in _combos(options[1:]):
                yield (a, *rest)


def successive_minima_enumerate(
    target: ApproxTarget,
    Q,
    *,
    budget: int = DEFAULT_BUDGET,
    pool_size: int = _DEFAULT_POOL,
) -> MinimaResult:
    """Exact psi_{k,j}(Q) for all j by exhaustive candidate enumeration.

    Candidates are ranked by (nu, |x|, y) lexicographically; the greedy walk
    over that order picks the first k+1 independent vectors, whose validated
    exponents are exactly the successive-minima values.  Raises
    ResourceBudgetError when the x-range exceeds ``budget``.
    """
    Q = QScale.coerce(Q)
    k = target.k
    x_max = Q.pow_floor(k + 1, k)
    if x_max > budget:
        raise ResourceBudgetError(
            f"enumeration needs x up to {x_max} > budget {budget}; "
            "use witness mode for this Q"
        )
    limit: int | None = pool_size
    while True:
        pool, clipped = _scan_candidates(target, Q, x_max, limit)
        pool.sort()
        chosen = _greedy_select(pool, k + 1)
        if len(chosen) == k + 1:
            break
        if not clipped:
            raise ArithmeticError(
                f"candidate region unexpectedly rank-deficient at Q={Q}"
            )
        limit = None if limit is not None and limit * 16 > x_max * 2**k else limit * 16
    psi, witnesses = _validated_psi(target, Q, chosen)
    if psi[0] > 1e-9:
        raise ArithmeticError(
            f"first minimum {psi[0]} positive at Q={Q}; enumeration is inconsistent"
        )
    return MinimaResult(Q=Q, psi=tuple(psi), witnesses=tuple(witnesses), mode=MODE_EXACT)


# -- witness upper bounds ----------------------------------------------------


def _canonical_vector(vec: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(c) for c in vec)
    for c in v:
        if c > 0:
            return v
        if c < 0:
            return tuple(-x for x in v)
    return v  # all zero; filtered by caller


def psi_upper_bounds_from_witnesses(
    target: ApproxTarget, Q, candidates: Iterable[Sequence[int]]
) -> MinimaResult:
    """Certified upper bounds psi_j(Q) <= nu_j from explicit vectors.

    Per j the bound is the minimal max-exponent over j independent
    candidates (greedy over the sorted exponents); +inf when fewer than j
    independent candidates exist.
    """
    Q = QScale.coerce(Q)
    k = target.k
    seen: set[tuple[int, ...]] = set()
    evaluated: list[tuple[float, int, tuple[int, ...]]] = []
    any_candidate = False
    for cand in candidates:
        any_candidate = True
        vec = _canonical_vector(cand)
        if len(vec) != k + 1:
            raise ValidationError(f"candidate {vec} must have length k+1 = {k + 1}")
        if all(c == 0 for c in vec):
            continue
        if vec in seen:
            continue
        seen.add(vec)
        nu = point_exponent(target, Q, vec)
        evaluated.append((nu, vec[0], vec[1:]))
    if not any_candidate:
        raise ValidationError("witness candidate list is empty")
    evaluated.sort()
    chosen = _greedy_select(evaluated, k + 1)
    psi, witnesses = _validated_psi(target, Q, chosen)
    while len(psi) < k + 1:
        psi.append(INF)
    return MinimaResult(Q=Q, psi=tuple(psi), witnesses=tuple(witnesses), mode=MODE_WITNESS)


def truncation_candidates(t: RationalTruncation, k: int) -> list[tuple[int, ...]]:
    """Default witness vectors from the chain itself: for each q_m the vector
    (q_m, round(zeta^j q_m)) chases all power coordinates at once."""
    from .qchain import powers

    pv = powers(t, k)
    out: list[tuple[int, ...]] = []
    for m in range(1, t.N + 1):
        x = t.q(m)
        y = tuple(_round_fraction(entry * x) for entry in pv.entries)
        out.append((x, *y))
    return out


def unit_candidates(k: int) -> list[tuple[int, ...]]:
    return [tuple(1 if i == j + 1 else 0 for i in range(k + 1)) for j in range(k)]


def _round_fraction(f: Fraction) -> int:
    # round half away from zero; exact halves cannot occur for our chains
    n, d = f.numerator, f.denominator
    if n >= 0:
        return (2 * n + d) // (2 * d)
    return -((2 * -n + d) // (2 * d))


# -- trajectories ------------------------------------------------------------


def psi_trajectory(
    target: ApproxTarget,
    q_grid: Sequence,
    *,
    budget: int = DEFAULT_BUDGET,
    tail_fraction: float = 0.5,
    witness_candidates: Iterable[Sequence[int]] | None = None,
    target_id: str | None = None,
) -> Trajectory:
    """One minima sample per grid point plus tail-window extreme estimates.

    Per point the mode is auto-selected: exact enumeration within budget,
    otherwise witness upper bounds from ``witness_candidates``; points that
    can be computed neither way are marked missing rather than aborting the
    run.  The extreme estimates are explicitly finite-scale stand-ins for
    liminf/limsup, taken over the trailing ``tail_fraction`` of the samples.
    """
    if not 0 < tail_fraction <= 1:
        raise ValidationError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    scales = [QScale.coerce(q) for q in q_grid]
    for a, b in zip(scales, scales[1:]):
        if not a < b:
            raise ValidationError("Q grid must be strictly increasing")
    k = target.k
    witness_pool = None
    if witness_candidates is not None:
        witness_pool = [tuple(int(c) for c in v) for v in witness_candidates]
    samples: list[TrajectorySample] = []
    for Q in scales:
        x_need = Q.pow_floor(k + 1, k)
        result: MinimaResult | None = None
        note = ""
        try:
            if x_need <= budget:
                result = successive_minima_enumerate(target, Q, budget=budget)
            elif witness_pool:
                result = psi_upper_bounds_from_witnesses(target, Q, witness_pool)
            else:
                note = f"budget exceeded (x_max={x_need} > {budget}); no witness candidates"
        except ResourceBudgetError as exc:
            note = str(exc)
        except ArithmeticError as exc:
            note = f"computation failed: {exc}"
        samples.append(
            TrajectorySample(Q=Q, log10_q=Q.log10(), result=result, note=note)
        )
    extremes = _extremes(samples, k, tail_fraction)
    return Trajectory(
        target_id=target_id or target.label(),
        k=k,
        samples=tuple(samples),
        extremes=extremes,
        tail_fraction=tail_fraction,
    )


def _extremes(samples: list[TrajectorySample], k: int, tail_fraction: float) -> PsiExtremes:
    count = len(samples)
    window = samples[count - max(1, math.ceil(count * tail_fraction)) :] if count else []
    lower: list[float] = []
    upper: list[float | None] = []
    exact_in_window = sum(
        1 for s in window if s.result is not None and s.result.mode == MODE_EXACT
    )
    for j in range(k + 1):
        lo = INF
        hi: float | None = None
        for s in window:
            if s.result is None:
                continue
            value = s.result.psi[j]
            if value < lo:
                lo = value
            if s.result.mode == MODE_EXACT:
                hi = value if hi is None else max(hi, value)
        lower.append(lo)
        upper.append(hi)
    return PsiExtremes(
        lower=tuple(lower),
        upper=tuple(upper),
        window_size=len(window),
        exact_in_window=exact_in_window,
    )


def build_q_grid(
    q_min,
    q_max,
    points: int,
    *,
    transition_terms: Sequence[int] = (),
    extras: bool = True,
) -> list[QScale]:
    """Log-uniform grid of exact scales plus transition extras.

    Grid points are powers 10**e with rational exponents e; endpoints that
    are not exact powers of 10 get snapped to exponent granularity 1/720.
    With ``extras`` on, every chain term q in ``transition_terms`` adds
    samples at q**(1/2), q, q**(3/2) that fall inside the range (the scales
    where chain transitions reshape the minima).
    """
    if points < 2:
        raise ValidationError(f"grid needs at least 2 points, got {points}")
    lo = QScale.coerce(q_min)
    hi = QScale.coerce(q_max)
    if not lo < hi:
        raise ValidationError("q_min must be strictly below q_max")
    e_lo = _log10_exponent(lo)
    e_hi = _log10_exponent(hi)
    grid = [
        QScale.power(10, num, den)
        for num, den in (
            _split(e_lo + (e_hi - e_lo) * Fraction(i, points - 1)) for i in range(points)
        )
    ]
    if extras:
        for term in transition_terms:
            if term < 2:
                continue
            for num, den in ((1, 2), (1, 1), (3, 2)):
                extra = QScale.power(term, num, den)
                if lo <= extra and extra <= hi:
                    grid.append(extra)
    grid.sort()
    deduped: list[QScale] = []
    for q in grid:
        if not deduped or not deduped[-1].equals(q):
            deduped.append(q)
    return deduped


def _split(f: Fraction) -> tuple[int, int]:
    return f.numerator, f.denominator


def _log10_exponent(q: QScale) -> Fraction:
    mid = q.log10_interval().mid()
    nearest = Fraction(round(mid * 720), 720)
    if nearest > 0 and QScale.power(10, nearest.numerator, nearest.denominator).equals(q):
        return nearest
    whole = round(mid)
    if whole > 0 and QScale.power(10, whole).equals(q):
        return Fraction(whole)
    return nearest


# -- serialization -----------------------------------------------------------


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """CSV with header logQ,psi_1,...,psi_{k+1},mode (12 significant digits;
    logQ is the base-10 logarithm of the sample scale)."""
    cols = ["logQ"] + [f"psi_{j}" for j in range(1, traj.k + 2)] + ["mode"]
    lines = [",".join(cols)]
    for s in traj.samples:
        if s.result is None:
            row = [_fmt(s.log10_q)] + ["nan"] * (traj.k + 1) + [MODE_MISSING]
        else:
            row = [_fmt(s.log10_q)] + [_fmt(p) for p in s.result.psi] + [s.result.mode]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_witness_dump(traj: Trajectory, path) -> None:
    """Side file: one witness vector per line, `logQ j x y_1 ... y_k`."""
    lines = []
    for s in traj.samples:
        if s.result is None:
            continue
        for j, w in enumerate(s.result.witnesses, start=1):
            coords = " ".join(str(c) for c in w.vector())
            lines.append(f"{_fmt(s.log10_q)} {j} {coords}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
