"""Explicit witness families certifying approximation events at deep scales.

A witness family packages the integers U = q_n, V = q_{n+1},
A = Σ_{l≤n} q_n/q_l of a divisibility chain together with a square integer
matrix E whose row j is an integer vector extremely close to
U^k V^{j-1} · (1, ζ, ζ², …, ζᵏ).  The rows are certified linearly
independent through the mod-V structure of E (reduced mod V the matrix is
upper triangular with diagonal U^k), the nearest-integer property of every
entry is verified by exact rational comparison against a chain truncation,
and the per-row approximation errors convert into certified finite-scale
lower-bound exponents for the ordinary approximation constants.

All integer arithmetic uses gmpy2 big integers internally (entries reach
hundreds of thousands of digits for deep chain indices) and exact rational
arithmetic for every comparison; nothing in this module rounds.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence, Union

import gmpy2

from .errors import AmbiguousRoundingError, ValidationError
from .qchain import QSequenceSpec, q_terms, truncate

_mpz = gmpy2.mpz
_mpq = gmpy2.mpq


def _to_mpq(f: Fraction):
    return _mpq(f.numerator, f.denominator)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class WitnessFamily:
    """Integers (U, V, A) and matrix E of one approximation witness.

    ``E`` is a (k+1) x (k+1) tuple-of-tuples of Python ints; row j (1-based)
    approximates U^k V^{j-1} (1, ζ, …, ζᵏ).  ``C_achieved`` is log V / log U
    — an exact Fraction for base-power chains (ratio of exponents), a float
    estimate otherwise.
    """

    spec: QSequenceSpec
    k: int
    n: int
    U: int
    V: int
    A: int
    E: tuple
    C_achieved: Union[Fraction, float]

    @property
    def label(self) -> str:
        return f"{self.spec.label()}:k={self.k}:n={self.n}"

    def row(self, j: int) -> tuple:
        """Row j (1-based) of E."""
        return self.E[j - 1]


def _closed_form_entry(k: int, U, V, A, j: int, m: int):
    """Entry (j, m) of E as an exact integer (binomial rearrangement)."""
    total = _mpz(0)
    for i in range(0, min(m - 1, j - 1) + 1):
        total += (
            math.comb(m - 1, i)
            * _mpz(U) ** (k - (m - 1 - i))
            * _mpz(A) ** (m - 1 - i)
            * _mpz(V) ** (j - 1 - i)
        )
    return total


def build_family(spec: QSequenceSpec, k: int, n: int) -> WitnessFamily:
    """Construct the witness family for dimension k at chain index n.

    Requires the chain prefix up to index n+2 (the default verification depth
    needs it).  Every entry is computed by the integer rearrangement of the
    closed form; the divisibility facts that make the entries integral are
    re-asserted rather than assumed.
    """
    if k < 1:
        raise ValidationError(f"dimension k must be >= 1, got {k}")
    if n < 1:
        raise ValidationError(f"chain index n must be >= 1, got {n}")
    q = q_terms(spec, n + 2)  # validates availability of the prefix
    U, V = q[n - 1], q[n]
    for ql in q[:n]:
        if U % ql != 0:
            raise ValidationError(
                f"chain term {ql} does not divide q_{n}={U}; "
                "divisibility invariant broken"
            )
    A = sum(U // ql for ql in q[:n])
    E = tuple(
        tuple(int(_closed_form_entry(k, U, V, A, j, m)) for m in range(1, k + 2))
        for j in range(1, k + 2)
    )
    for j in range(1, k + 2):
        first = E[j - 1][0]
        if first != U**k * V ** (j - 1):
            raise ValidationError("internal: row scale mismatch in witness matrix")
        if j >= 2 and first <= E[j - 2][0]:
            raise ValidationError("internal: row scales not strictly increasing")
    if spec.kind == "base-power":
        c_achieved: Union[Fraction, float] = Fraction(
            spec.exponent(n + 1), spec.exponent(n)
        )
    else:
        c_achieved = math.log(V) / math.log(U)
    return WitnessFamily(
        spec=spec, k=k, n=n, U=U, V=V, A=A, E=E, C_achieved=c_achieved
    )


# ---------------------------------------------------------------------------
# Nearest-integer verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundCheck:
    """Exact distance of one entry from its real target, with tail slack."""

    j: int
    m: int
    distance: Fraction
    slack: Fraction
    ok: bool


@dataclass(frozen=True)
class RoundingReport:
    """verify_round outcome: one verdict per matrix entry."""

    family_label: str
    N_used: int
    checks: tuple

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def verdict(self, j: int, m: int) -> bool:
        for c in self.checks:
            if c.j == j and c.m == m:
                return c.ok
        raise KeyError((j, m))


def _tail_bound(spec: QSequenceSpec, N: int) -> Fraction:
    """Exact upper bound for ζ - ζ_N (sum of the chain tail beyond N)."""
    try:
        q_next = q_terms(spec, N + 1)[-1]
        return Fraction(2, q_next)
    except ValidationError:
        # The chain prefix ends at N; growth at least doubles each term, so
        # the tail is below (1/q_{N+1})·2 <= 1/q_N.
        return Fraction(1, q_terms(spec, N)[-1])


def verify_round(family: WitnessFamily, N_extra: int = 1) -> RoundingReport:
    """Check that every E entry is the nearest integer to its real target.

    The target of entry (j, m) is U^k V^{j-1} ζ^{m-1} for the full chain
    value ζ; the check compares against the truncation at depth
    N = n + 1 + N_extra and propagates an exact tail slack.  If the slack
    makes any verdict ambiguous (the half-integer line falls inside the
    uncertainty band), an :class:`AmbiguousRoundingError` asks for a larger
    ``N_extra``.
    """
    if N_extra < 0:
        raise ValidationError(f"N_extra must be >= 0, got {N_extra}")
    N = family.n + 1 + N_extra
    t = truncate(family.spec, N)
    zeta = _to_mpq(t.value)
    tail_exact = _tail_bound(family.spec, N)
    # Power-of-two overestimate of the tail keeps every slack product a
    # cheap shift instead of a gcd on hundred-thousand-digit denominators.
    shift = (tail_exact.denominator // tail_exact.numerator).bit_length() - 1
    tail = _mpq(1, _mpz(1) << shift)
    if not zeta + tail < 1:
        tail = _to_mpq(tail_exact)  # fallback: exact tail (never hit in practice)
    half = _mpq(1, 2)
    checks = []
    for j in range(1, family.k + 2):
        x = _mpz(family.E[j - 1][0])
        power = _mpq(1)
        for m in range(1, family.k + 2):
            target = x * power
            distance = abs(target - family.E[j - 1][m - 1])
            # |ζ^{m-1} - ζ_N^{m-1}| <= (m-1)·(ζ_N + tail)^{m-2}·tail, and
            # ζ_N + tail < 1 collapses the middle factor to 1.
            if m >= 2:
                slack = x * (m - 1) * tail
            else:
                slack = _mpq(0)
            if distance + slack < half:
                ok = True
            elif distance - slack > half:
                ok = False
            else:
                raise AmbiguousRoundingError(
                    f"rounding of entry (j={j}, m={m}) of {family.label} is "
                    f"ambiguous at depth N={N}",
                    suggested_extra=N_extra + 1,
                )
            checks.append(
                RoundCheck(
                    j=j, m=m,
                    distance=_to_fraction(distance),
                    slack=_to_fraction(slack),
                    ok=ok,
                )
            )
            power *= zeta
    return RoundingReport(family_label=family.label, N_used=N, checks=tuple(checks))


# ---------------------------------------------------------------------------
# Certificates: errors, exponents, determinant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorEntry:
    """Exact error of one entry and its ratio to the row-1 scale U^k/V."""

    error: Fraction
    ratio: Fraction


@dataclass(frozen=True)
class Certificate:
    """Independence and approximation certificate for a witness family.

    Determinant parts: residue of det E mod V, the expected residue
    U^{k(k+1)} mod V, the conclusiveness flag (0 < U^{k(k+1)} < V, the regime
    in which the residue alone certifies independence), and the exact
    determinant from fraction-free elimination.  Approximation parts: exact
    error table with ratios to U^k/V, the observed implied constant
    kappa = max ratio, and the exponent table η_j with asymptotic targets
    1/(j-1).  Parts not produced by the originating operation are None.
    """

    family_label: str
    det_residue_mod_V: Union[int, None] = None
    expected: Union[int, None] = None
    conclusive: Union[bool, None] = None
    det_exact: Union[int, None] = None
    error_table: Union[Mapping, None] = None
    exponent_table: Union[Mapping, None] = None
    exponent_targets: Union[Mapping, None] = None
    kappa: Union[Fraction, None] = None
    N_used: Union[int, None] = None


def _det_cofactor(rows):
    """Exact determinant by cofactor expansion (matrices here are <= 4x4)."""
    size = len(rows)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = _mpz(0)
    sign = 1
    for col in range(size):
        minor = [
            [rows[r][c] for c in range(size) if c != col] for r in range(1, size)
        ]
        total += sign * rows[0][col] * _det_cofactor(minor)
        sign = -sign
    return total


def det_certificate(family: WitnessFamily) -> Certificate:
    """Determinant certificate: mod-V residue, expectation, exact value.

    The mod-V reduction of E is upper triangular with diagonal U^k, so the
    residue must equal U^{k(k+1)} mod V; when 0 < U^{k(k+1)} < V that residue
    is nonzero and certifies row independence by itself (conclusive).  The
    exact determinant is always computed as a fallback for the inconclusive
    regime.  Inconclusive is a status, not an error.
    """
    k = family.k
    V = _mpz(family.V)
    reduced = [[_mpz(e) % V for e in row] for row in family.E]
    # Structural check: below-diagonal entries vanish mod V, diagonal is U^k.
    diag = _mpz(family.U) ** k % V
    for j in range(1, k + 2):
        for m in range(1, k + 2):
            entry = reduced[j - 1][m - 1]
            if m < j and entry != 0:
                raise RuntimeError(
                    f"internal: entry (j={j}, m={m}) not divisible by V"
                )
            if m == j and entry != diag:
                raise RuntimeError(
                    f"internal: diagonal entry (j={j}) is not U^k mod V"
                )
    residue = int(_det_cofactor(reduced) % V)
    target = _mpz(family.U) ** (k * (k + 1))
    expected = int(target % V)
    conclusive = 0 < target < V
    det_exact = int(_det_cofactor([[_mpz(e) for e in row] for row in family.E]))
    if conclusive and (residue != expected or residue == 0):
        raise RuntimeError(
            "internal: conclusive certificate with mismatched or zero residue"
        )
    return Certificate(
        family_label=family.label,
        det_residue_mod_V=residue,
        expected=expected,
        conclusive=conclusive,
        det_exact=det_exact,
    )


def _log_fraction(f: Fraction) -> float:
    return math.log(f.numerator) - math.log(f.denominator)


def error_and_exponents(family: WitnessFamily, N_extra: int = 1) -> Certificate:
    """Exact error table, implied-constant audit, and exponent table.

    Errors are |E_{j,m} - U^k V^{j-1} ζ_N^{m-1}| at truncation depth
    N = n + 1 + N_extra, reported with their exact ratio to U^k/V (the
    magnitude the construction is designed to hit).  The exponent η_j is the
    worst approximation exponent among the first j rows measured against the
    row-j scale E_{j,1}; its asymptotic target is 1/(j-1) (infinite for
    j = 1, the 1/0 = inf convention).
    """
    if N_extra < 0:
        raise ValidationError(f"N_extra must be >= 0, got {N_extra}")
    N = family.n + 1 + N_extra
    zeta = _to_mpq(truncate(family.spec, N).value)
    k = family.k
    scale = _mpq(family.V, _mpz(family.U) ** k)  # reciprocal of U^k/V
    error_table = {}
    kappa = Fraction(0)
    for j in range(1, k + 2):
        x = _mpz(family.E[j - 1][0])
        power = _mpq(1)
        for m in range(1, k + 2):
            err = _to_fraction(abs(x * power - family.E[j - 1][m - 1]))
            ratio = _to_fraction(_to_mpq(err) * scale)
            error_table[(j, m)] = ErrorEntry(error=err, ratio=ratio)
            if ratio > kappa:
                kappa = ratio
            power *= zeta
    exponent_table = {}
    targets = {}
    for j in range(1, k + 2):
        log_scale = math.log(family.E[j - 1][0])
        best = math.inf
        for i in range(1, j + 1):
            for m in range(1, k + 1):
                err = error_table[(i, m + 1)].error
                if err == 0:
                    continue  # exact hit: contributes an infinite exponent
                best = min(best, -_log_fraction(err) / log_scale)
        exponent_table[j] = best
        targets[j] = math.inf if j == 1 else Fraction(1, j - 1)
    return Certificate(
        family_label=family.label,
        error_table=error_table,
        exponent_table=exponent_table,
        exponent_targets=targets,
        kappa=kappa,
        N_used=N,
    )


def certify(family: WitnessFamily, N_extra: int = 1) -> Certificate:
    """Full certificate: determinant parts plus error/exponent parts."""
    det_part = det_certificate(family)
    err_part = error_and_exponents(family, N_extra)
    return replace(
        det_part,
        error_table=err_part.error_table,
        exponent_table=err_part.exponent_table,
        exponent_targets=err_part.exponent_targets,
        kappa=err_part.kappa,
        N_used=err_part.N_used,
    )


# ---------------------------------------------------------------------------
# Lower-bound sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundEntry:
    """One family's certified exponent event for index j."""

    n: int
    eta: Union[float, None]
    independent: bool
    note: str = ""


@dataclass(frozen=True)
class LowerBoundReport:
    """η_j across a sequence of families sharing spec and dimension."""

    k: int
    j: int
    target: Union[Fraction, float]
    entries: tuple

    def values(self) -> tuple:
        return tuple(e.eta for e in self.entries if e.independent and e.eta is not None)


def lambda_lower_bounds(
    families: Sequence[WitnessFamily], j: int, N_extra: int = 1
) -> LowerBoundReport:
    """Certified finite-scale lower-bound exponents η_j over a family sequence.

    Families must share the chain spec and dimension and be given in
    increasing n.  Families whose rows fail the independence certificate are
    kept in the report as rejected entries.  For j beyond the number of rows
    the sequence is empty.  The target is the asymptotic limit 1/(j-1).
    """
    if not families:
        raise ValidationError("need at least one family")
    k = families[0].k
    spec = families[0].spec
    for fam in families[1:]:
        if fam.k != k or fam.spec != spec:
            raise ValidationError("families must share spec and dimension")
    if any(b.n <= a.n for a, b in zip(families, families[1:])):
        raise ValidationError("families must be ordered by increasing n")
    if j < 1:
        raise ValidationError(f"index j must be >= 1, got {j}")
    target = math.inf if j == 1 else Fraction(1, j - 1)
    if j > k + 1:
        return LowerBoundReport(k=k, j=j, target=target, entries=())
    entries = []
    for fam in families:
        cert = det_certificate(fam)
        independent = bool(cert.conclusive) or cert.det_exact != 0
        if not independent:
            entries.append(
                LowerBoundEntry(
                    n=fam.n, eta=None, independent=False,
                    note="rows not independent; family rejected",
                )
            )
            continue
        how = "mod-V certificate" if cert.conclusive else "exact determinant"
        exps = error_and_exponents(fam, N_extra)
        entries.append(
            LowerBoundEntry(
                n=fam.n,
                eta=exps.exponent_table[j],
                independent=True,
                note=f"independence via {how}",
            )
        )
    return LowerBoundReport(k=k, j=j, target=target, entries=tuple(entries))


def admissible_indices(
    spec: QSequenceSpec, k: int, n_max: int, n_min: int = 1
) -> list:
    """Chain indices n in [n_min, n_max] whose growth makes the mod-V
    determinant certificate conclusive (U^{k(k+1)} < V, i.e. the achieved
    growth constant exceeds k(k+1))."""
    out = []
    for n in range(n_min, n_max + 1):
        try:
            q = q_terms(spec, n + 1)
        except ValidationError:
            break
        U, V = q[n - 1], q[n]
        if 0 < _mpz(U) ** (k * (k + 1)) < V:
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _decimal(x: int) -> str:
    """Full decimal form of a big integer (lifting the str-digit guard)."""
    limit = sys.get_int_max_str_digits()
    needed = x.bit_length() // 3 + 32
    if limit != 0 and needed > limit:
        sys.set_int_max_str_digits(needed)
    return str(x)


def _int_repr(x: int, compact: bool) -> str:
    if not compact:
        return _decimal(x)
    digits = len(_decimal(abs(x))) if x else 1
    return f"<integer with {digits} digits>"


def _fraction_repr(f: Fraction, compact: bool) -> str:
    if not compact:
        return f"{_decimal(f.numerator)}/{_decimal(f.denominator)}"
    if f == 0:
        return "0"
    return f"~10^{_log_fraction(f) / math.log(10):.6f}"


def certificate_text(
    family: WitnessFamily, cert: Certificate, compact: bool = False
) -> str:
    """Structured text form of a certificate.

    The full variant prints every integer in decimal (possibly thousands of
    digits); the compact variant replaces huge integers with digit counts and
    errors with their base-10 magnitude.
    """
    lines = [
        f"family={family.label}",
        f"k={family.k}",
        f"n={family.n}",
        f"C_achieved={family.C_achieved}",
        f"U={_int_repr(family.U, compact)}",
        f"V={_int_repr(family.V, compact)}",
        f"A={_int_repr(family.A, compact)}",
    ]
    for j in range(1, family.k + 2):
        row = " ".join(_int_repr(e, compact) for e in family.E[j - 1])
        lines.append(f"E.row{j}={row}")
    if cert.det_residue_mod_V is not None:
        lines.append(f"det.residue_mod_V={_int_repr(cert.det_residue_mod_V, compact)}")
        lines.append(f"det.expected={_int_repr(cert.expected, compact)}")
        lines.append(f"det.conclusive={str(cert.conclusive).lower()}")
        lines.append(f"det.exact={_int_repr(cert.det_exact, compact)}")
    if cert.error_table is not None:
        lines.append(f"errors.N={cert.N_used}")
        lines.append(f"errors.kappa={_fraction_repr(cert.kappa, compact)}")
        for (j, m), entry in sorted(cert.error_table.items()):
            lines.append(
                f"errors.j{j}.m{m}={_fraction_repr(entry.error, compact)}"
                f" ratio={_fraction_repr(entry.ratio, compact)}"
            )
        for j, eta in sorted(cert.exponent_table.items()):
            tgt = cert.exponent_targets[j]
            tgt_s = "inf" if tgt == math.inf else f"{float(tgt):.12g}"
            lines.append(f"exponents.eta{j}={eta:.12g} target={tgt_s}")
    return "\n".join(lines) + "\n"
