"""Denominator chains and exact truncations of Liouville-type numbers.

A chain is a sequence of positive integers q_1 | q_2 | q_3 | ... with strict
growth.  The induced number is zeta = sum over l of 1/q_l; its depth-N
truncation is an exact rational with denominator q_N and a certified tail
bound.  Chains come in two kinds:

* ``base-power``: q_l = b**a_l for an integer base b >= 2 and strictly
  increasing exponents a_l (named rule ``factorial`` for a_l = l!, or an
  explicit exponent list);
* ``explicit-list``: a finite list of integers, validated eagerly.

Chains with q_1 = 1 are rejected: every consumer here assumes 0 < zeta < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError

__all__ = [
    "QSequenceSpec",
    "RationalTruncation",
    "PowerVector",
    "GrowthWitness",
    "q_terms",
    "truncate",
    "powers",
    "check_growth",
    "spec_to_text",
    "spec_from_text",
]

KIND_BASE_POWER = "base-power"
KIND_EXPLICIT = "explicit-list"
RULE_FACTORIAL = "factorial"
RULE_LIST = "list"


@dataclass(frozen=True)
class QSequenceSpec:
    """Generator of a divisibility chain q_1 | q_2 | ... .

    For ``base-power`` specs the prefix is validated lazily (factorial
    exponents explode, so only materialize what is used).  Explicit lists are
    validated eagerly on construction.
    """

    kind: str
    base: int | None = None
    exponent_rule: str | None = None
    exponents: tuple[int, ...] | None = None
    terms: tuple[int, ...] | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind == KIND_BASE_POWER:
            if self.base is None or self.base < 2:
                raise ValidationError("base-power spec requires an integer base >= 2")
            if self.exponent_rule == RULE_FACTORIAL:
                if self.exponents is not None:
                    raise ValidationError("factorial rule takes no exponent list")
            elif self.exponent_rule == RULE_LIST:
                if not self.exponents:
                    raise ValidationError("list rule requires a nonempty exponent list")
                object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
                self._validate_exponents(self.exponents)
            else:
                raise ValidationError(
                    f"unknown exponent rule {self.exponent_rule!r} "
                    f"(expected {RULE_FACTORIAL!r} or {RULE_LIST!r})"
                )
            if self.terms is not None:
                raise ValidationError("base-power spec does not take literal terms")
        elif self.kind == KIND_EXPLICIT:
            if not self.terms:
                raise ValidationError("explicit-list spec requires a nonempty term list")
            object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))
            self._validate_terms(self.terms)
        else:
            raise ValidationError(
                f"unknown spec kind {self.kind!r} "
                f"(expected {KIND_BASE_POWER!r} or {KIND_EXPLICIT!r})"
            )

    @staticmethod
    def _validate_exponents(exps: tuple[int, ...]) -> None:
        if exps[0] < 1:
            raise ValidationError("exponent a_1 must be a positive integer")
        for i in range(1, len(exps)):
            if exps[i] <= exps[i - 1]:
                raise ValidationError(
                    f"exponents must be strictly increasing; a_{i + 1}={exps[i]} "
                    f"does not exceed a_{i}={exps[i - 1]}"
                )

    @staticmethod
    def _validate_terms(terms: tuple[int, ...]) -> None:
        if terms[0] < 2:
            raise ValidationError(
                f"q_1 must be at least 2 (got {terms[0]}); chains with q_1 = 1 "
                "are rejected so that 0 < zeta < 1"
            )
        for i in range(1, len(terms)):
            prev, cur = terms[i - 1], terms[i]
            if cur <= prev:
                raise ValidationError(
                    f"terms must be strictly increasing; q_{i + 1}={cur} "
                    f"does not exceed q_{i}={prev}"
                )
            if cur % prev != 0:
                raise ValidationError(
                    f"divisibility violated at index {i + 1}: "
                    f"{cur} is not divisible by q_{i}={prev}"
                )

    # -- prefix access -------------------------------------------------------

    def max_length(self) -> int | None:
        """Longest available prefix, or None when unbounded."""
        if self.kind == KIND_EXPLICIT:
            return len(self.terms)
        if self.exponent_rule == RULE_LIST:
            return len(self.exponents)
        return None

    def exponent(self, l: int) -> int:
        if self.kind != KIND_BASE_POWER:
            raise ValidationError("only base-power specs have exponents")
        if self.exponent_rule == RULE_FACTORIAL:
            return math.factorial(l)
        if l > len(self.exponents):
            raise ValidationError(
                f"exponent list has {len(self.exponents)} entries; index {l} unavailable"
            )
        return self.exponents[l - 1]

    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == KIND_BASE_POWER:
            if self.exponent_rule == RULE_FACTORIAL:
                return f"base{self.base}-factorial"
            return f"base{self.base}-list{len(self.exponents)}"
        return f"explicit{len(self.terms)}"


def q_terms(spec: QSequenceSpec, N: int) -> list[int]:
    """First N chain terms; validated for divisibility and strict growth."""
    if N < 1:
        raise ValidationError(f"N must be a positive integer, got {N}")
    limit = spec.max_length()
    if limit is not None and N > limit:
        raise ValidationError(
            f"spec {spec.label()} provides only {limit} terms; {N} requested"
        )
    if spec.kind == KIND_EXPLICIT:
        return list(spec.terms[:N])
    terms = []
    prev_exp = 0
    for l in range(1, N + 1):
        e = spec.exponent(l)
        if e <= prev_exp:
            raise ValidationError(
                f"exponents must be strictly increasing; a_{l}={e} "
                f"does not exceed a_{l - 1}={prev_exp}"
            )
        prev_exp = e
        terms.append(spec.base**e)
    return terms


@dataclass(frozen=True)
class RationalTruncation:
    """Exact rational truncation zeta_N = sum_{l<=N} 1/q_l with tail bound.

    ``tail_bound`` is an exact rational upper bound on |zeta - zeta_N|; it is
    2/q_{N+1} when the chain continues and 0 when the chain is exhausted (the
    truncation then *is* the number).
    """

    value: Fraction
    N: int
    tail_bound: Fraction
    chain: tuple[int, ...]
    spec: QSequenceSpec = field(repr=False)

    def __post_init__(self) -> None:
        if not 0 < self.value < 1:
            raise ValidationError(f"truncation must satisfy 0 < zeta_N < 1, got {self.value}")
        if self.chain[-1] % self.value.denominator != 0:
            raise ValidationError("truncation denominator must divide q_N")

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def q(self, l: int) -> int:
        """Chain term q_l for l <= N."""
        if not 1 <= l <= self.N:
            raise ValidationError(f"q_{l} not materialized in a depth-{self.N} truncation")
        return self.chain[l - 1]


def truncate(spec: QSequenceSpec, N: int) -> RationalTruncation:
    """Exact depth-N truncation with certified tail bound."""
    chain = q_terms(spec, N)
    qN = chain[-1]
    total = sum(qN // ql for ql in chain)  # exact: every q_l divides q_N
    value = Fraction(total, qN)
    limit = spec.max_length()
    if limit is not None and N == limit:
        tail = Fraction(0)
    else:
        q_next = q_terms(spec, N + 1)[-1]
        tail = Fraction(2, q_next)
    return RationalTruncation(value=value, N=N, tail_bound=tail, chain=tuple(chain), spec=spec)


@dataclass(frozen=True)
class PowerVector:
    """Exact powers zeta_N^m for m = 1..k with per-entry tail bounds."""

    k: int
    entries: tuple[Fraction, ...]
    tail_bounds: tuple[Fraction, ...]
    truncation: RationalTruncation = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.entries) != self.k or len(self.tail_bounds) != self.k:
            raise ValidationError("power vector must have exactly k entries")
        base = self.entries[0]
        for m, entry in enumerate(self.entries, start=1):
            if entry != base**m:
                raise ValidationError(f"entry {m} is not the {m}-th power of entry 1")


def powers(t: RationalTruncation, k: int) -> PowerVector:
    """Power vector (zeta_N, ..., zeta_N^k) with exact tail bounds.

    |zeta^m - zeta_N^m| <= m * (zeta_N + tail)^(m-1) * tail, valid because
    0 < zeta_N <= zeta < 1.
    """
    if k < 1:
        raise ValidationError(f"k must be a positive integer, got {k}")
    entries = tuple(t.value**m for m in range(1, k + 1))
    upper = t.value + t.tail_bound
    tails = tuple(m * upper ** (m - 1) * t.tail_bound for m in range(1, k + 1))
    return PowerVector(k=k, entries=entries, tail_bounds=tails, truncation=t)


@dataclass(frozen=True)
class GrowthWitness:
    """Index n at which the chain grows fast enough for the witness builder.

    ratio1 = log q_{n+1} / log q_n must exceed C and
    ratio2 = log q_{n+2} / log q_{n+1} must exceed k + 1.
    Ratios are exact rationals for base-power chains and validated floats for
    explicit lists.
    """

    n: int
    ratio1: Fraction | float
    ratio2: Fraction | float
    C: Fraction
    k: int


def _log_ratio_exceeds(q_small: int, q_big: int, threshold: Fraction) -> bool:
    # log q_big / log q_small > s/t  <=>  q_big**t > q_small**s (q_small >= 2)
    s, t = threshold.numerator, threshold.denominator
    return q_big**t > q_small**s


def check_growth(spec: QSequenceSpec, k: int, C, n_max: int = 12) -> GrowthWitness | None:
    """Smallest n <= n_max passing both growth tests, or None.

    For base-power chains the log ratios are exponent ratios, compared as
    exact rationals without materializing the (potentially astronomically
    large) chain terms.
    """
    if k < 1:
        raise ValidationError(f"k must be a positive integer, got {k}")
    C = Fraction(C)
    if C <= 0:
        raise ValidationError(f"C must be positive, got {C}")
    limit = spec.max_length()
    for n in range(1, n_max + 1):
        if limit is not None and n + 2 > limit:
            return None
        if spec.kind == KIND_BASE_POWER:
            a_n, a_n1, a_n2 = (spec.exponent(m) for m in (n, n + 1, n + 2))
            r1: Fraction | float = Fraction(a_n1, a_n)
            r2: Fraction | float = Fraction(a_n2, a_n1)
            if not (r1 > C and r2 > k + 1):
                continue
        else:
            terms = q_terms(spec, n + 2)
            qn, qn1, qn2 = terms[n - 1], terms[n], terms[n + 1]
            if not _log_ratio_exceeds(qn, qn1, C):
                continue
            if not _log_ratio_exceeds(qn1, qn2, Fraction(k + 1)):
                continue
            from .logscale import log_interval

            r1 = log_interval(qn1).div_pos(log_interval(qn)).mid()
            r2 = log_interval(qn2).div_pos(log_interval(qn1)).mid()
        return GrowthWitness(n=n, ratio1=r1, ratio2=r2, C=C, k=k)
    return None


# -- key=value serialization -------------------------------------------------
#
# Grammar (one key=value per line; blank lines and #-comments ignored):
#
#   kind=base-power            kind=base-power           kind=explicit-list
#   base=10                    base=3                    terms=10,100,1000000
#   exponent_rule=factorial    exponent_rule=list
#                              exponents=1,2,6
#
# An optional name=... line attaches a human-readable label.


def spec_to_text(spec: QSequenceSpec) -> str:
    lines = [f"kind={spec.kind}"]
    if spec.name:
        lines.append(f"name={spec.name}")
    if spec.kind == KIND_BASE_POWER:
        lines.append(f"base={spec.base}")
        lines.append(f"exponent_rule={spec.exponent_rule}")
        if spec.exponent_rule == RULE_LIST:
            lines.append("exponents=" + ",".join(str(e) for e in spec.exponents))
    else:
        lines.append("terms=" + ",".join(str(t) for t in spec.terms))
    return "\n".join(lines) + "\n"


def _parse_kv_block(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in pairs:
            raise ValidationError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    return pairs


def _parse_int_list(value: str, what: str) -> tuple[int, ...]:
    items = [piece.strip() for piece in value.split(",") if piece.strip()]
    if not items:
        raise ValidationError(f"{what} list is empty")
    try:
        return tuple(int(piece) for piece in items)
    except ValueError as exc:
        raise ValidationError(f"{what} list contains a non-integer: {value!r}") from exc


def spec_from_text(text: str) -> QSequenceSpec:
    """Parse the key=value chain-spec grammar documented above."""
    pairs = _parse_kv_block(text)
    kind = pairs.pop("kind", None)
    if kind is None:
        raise ValidationError("spec text must contain a kind= line")
    name = pairs.pop("name", None)
    if kind == KIND_BASE_POWER:
        base_txt = pairs.pop("base", None)
        if base_txt is None:
            raise ValidationError("base-power spec requires a base= line")
        try:
            base = int(base_txt)
        except ValueError as exc:
            raise ValidationError(f"base must be an integer, got {base_txt!r}") from exc
        rule = pairs.pop("exponent_rule", None)
        if rule is None:
            raise ValidationError("base-power spec requires an exponent_rule= line")
        exponents = None
        if rule == RULE_LIST:
            exp_txt = pairs.pop("exponents", None)
            if exp_txt is None:
                raise ValidationError("exponent_rule=list requires an exponents= line")
            exponents = _parse_int_list(exp_txt, "exponent")
        if pairs:
            raise ValidationError(f"unexpected keys in spec: {sorted(pairs)}")
        return QSequenceSpec(
            kind=kind, base=base, exponent_rule=rule, exponents=exponents, name=name
        )
    if kind == KIND_EXPLICIT:
        terms_txt = pairs.pop("terms", None)
        if terms_txt is None:
            raise ValidationError("explicit-list spec requires a terms= line")
        if pairs:
            raise ValidationError(f"unexpected keys in spec: {sorted(pairs)}")
        return QSequenceSpec(kind=kind, terms=_parse_int_list(terms_txt, "term"), name=name)
    raise ValidationError(f"unknown spec kind {kind!r}")
