"""Reducibility witnesses and their finite-prefix checkers.

A Solovay-style witness is a staged partial function g on the dyadic
rationals in [0, 1) together with a positive rational constant c.  The
function is given declaratively:

* an input enumeration q_0, q_1, ... of dyadics with q_0 = 0 (the
  canonical order 0, 1/2, 1/4, 3/4, 1/8, 3/8, ... or that order with an
  explicit finite-prefix permutation);
* a definition-stage schedule telling at which stage each q_j becomes
  defined (affine in j, with finite overrides, "never" allowed);
* a value rule (affine in q, with finite table overrides) fixing
  g(q_j) once and for all -- values never change once defined.

An approximation-pair witness (S2aWitness) is two computable
approximations and a constant; the claimed relation between them is
checked prefix-wise against reference reals via enclosures.

All checkers are budgeted and three-valued: they certify a strict fact
from interval endpoints, certify its negation, or answer Unknown.  More
budget can only move Unknown to a certified verdict, never flip one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .approximations import Approximation
from .errors import InvalidScenario
from .reals import Interval, ReferenceReal, CutVerdict, enclose, left_cut_member

Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def canonical_point(j: int) -> Fraction:
    """j-th dyadic in the canonical order: 0, 1/2, 1/4, 3/4, 1/8, 3/8, ..."""
    if j < 0:
        raise ValueError("enumeration index must be >= 0")
    if j == 0:
        return ZERO
    level = j.bit_length()
    numerator = 2 * (j - (1 << (level - 1))) + 1
    return Q(numerator, 1 << level)


def canonical_index(q: Fraction) -> int | None:
    """Inverse of canonical_point on Q cap [0,1); None off the enumeration."""
    if q == ZERO:
        return 0
    if q < ZERO or q >= ONE:
        return None
    den = q.denominator
    if den & (den - 1) != 0:
        return None  # not dyadic
    level = den.bit_length() - 1
    return (1 << (level - 1)) + (q.numerator - 1) // 2


@dataclass(frozen=True)
class DyadicEnumeration:
    """Canonical dyadic order, optionally permuted on a finite prefix.

    ``prefix`` must be a permutation of the first len(prefix) canonical
    points and must keep 0 at index 0, so q_0 = 0 always holds.
    """

    prefix: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if not self.prefix:
            return
        if self.prefix[0] != ZERO:
            raise ValueError("enumeration prefix must keep 0 at index 0")
        expected = {canonical_point(j) for j in range(len(self.prefix))}
        if set(self.prefix) != expected or len(set(self.prefix)) != len(self.prefix):
            raise ValueError("prefix must permute the first canonical points")

    @cached_property
    def _prefix_index(self) -> dict[Fraction, int]:
        return {q: j for j, q in enumerate(self.prefix)}

    def point(self, j: int) -> Fraction:
        if j < len(self.prefix):
            return self.prefix[j]
        return canonical_point(j)

    def index_of(self, q: Fraction) -> int | None:
        if self.prefix:
            hit = self._prefix_index.get(q)
            if hit is not None:
                return hit
        j = canonical_index(q)
        if j is None:
            return None
        if j < len(self.prefix):
            # q is among the permuted points, so it was found above or
            # it is not actually in the prefix set (impossible after
            # validation); be defensive anyway.
            return self._prefix_index.get(q)
        return j


NEVER = None  # stage value meaning "never defined"


@dataclass(frozen=True)
class StageSchedule:
    """s_j = slope*j + offset with finite overrides; None means never."""

    slope: int = 0
    offset: int = 0
    overrides: tuple[tuple[int, int | None], ...] = ()

    def __post_init__(self) -> None:
        if self.slope < 0 or self.offset < 0:
            raise ValueError("stage schedule parameters must be >= 0")
        for j, s in self.overrides:
            if j < 0 or (s is not None and s < 0):
                raise ValueError("stage override out of range")

    @cached_property
    def _override_map(self) -> dict[int, int | None]:
        return dict(self.overrides)

    def stage_of(self, j: int) -> int | None:
        if j in self._override_map:
            return self._override_map[j]
        return self.slope * j + self.offset


@dataclass(frozen=True)
class ValueRule:
    """g(q_j) = u*q_j + v, with finite index-keyed table overrides.

    The affine part is validated to map [0,1) into [0,1):
    0 <= v < 1 and 0 <= u + v <= 1.
    """

    u: Fraction = Q(1, 2)
    v: Fraction = ZERO
    overrides: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        if not (ZERO <= self.v < ONE):
            raise ValueError(f"affine value rule escapes [0,1) at 0: v={self.v}")
        if not (ZERO <= self.u + self.v <= ONE):
            raise ValueError(f"affine value rule escapes [0,1): u+v={self.u + self.v}")
        for j, val in self.overrides:
            if j < 0 or not (ZERO <= val < ONE):
                raise ValueError("value override out of range")

    @cached_property
    def _override_map(self) -> dict[int, Fraction]:
        return dict(self.overrides)

    def value(self, j: int, q: Fraction) -> Fraction:
        hit = self._override_map.get(j)
        if hit is not None:
            return hit
        return self.u * q + self.v


@dataclass(frozen=True)
class StagedPartialFunction:
    enumeration: DyadicEnumeration = field(default_factory=DyadicEnumeration)
    schedule: StageSchedule = field(default_factory=StageSchedule)
    rule: ValueRule = field(default_factory=ValueRule)

    def __post_init__(self) -> None:
        if self.schedule.stage_of(0) is None:
            raise ValueError("q_0 = 0 must become defined at some finite stage")

    def value_at(self, j: int) -> Fraction:
        return self.rule.value(j, self.enumeration.point(j))


@dataclass(frozen=True)
class SolovayWitness:
    g: StagedPartialFunction
    c: Fraction

    def __post_init__(self) -> None:
        if self.c <= ZERO:
            raise ValueError(f"witness constant must be positive: {self.c}")


@dataclass(frozen=True)
class S2aWitness:
    alpha_approx: Approximation
    beta_approx: Approximation
    c: Fraction

    def __post_init__(self) -> None:
        if self.c <= ZERO:
            raise ValueError(f"witness constant must be positive: {self.c}")


def eval_staged(g: StagedPartialFunction, q: Fraction, stage: int) -> Fraction | None:
    """Value of g at q as of the given stage; None while still pending.

    Defined exactly when q = q_j for some j whose definition stage has
    arrived.  Monotone in stage, and the value never changes once
    defined.
    """
    j = g.enumeration.index_of(q)
    if j is None:
        return None
    s = g.schedule.stage_of(j)
    if s is None or s > stage:
        return None
    return g.value_at(j)


def enumerate_domain(g: StagedPartialFunction, stage: int) -> list[tuple[int, Fraction, Fraction]]:
    """Dovetailed finite domain at a stage: j <= stage with s_j <= stage.

    Returns (index, point, value) triples in ascending index order.
    """
    out: list[tuple[int, Fraction, Fraction]] = []
    for j in range(stage + 1):
        s = g.schedule.stage_of(j)
        if s is not None and s <= stage:
            out.append((j, g.enumeration.point(j), g.value_at(j)))
    return out


class SolovayVerdict(enum.Enum):
    HOLDS = "holds"
    FAILS_LOWER = "fails_lower"    # g(q) >= alpha certified
    FAILS_UPPER = "fails_upper"    # alpha - g(q) >= c*(beta - q) certified
    G_UNDEFINED = "g_undefined"
    UNKNOWN = "unknown"


def check_solovay_at(w: SolovayWitness, alpha: ReferenceReal, beta: ReferenceReal,
                     q: Fraction, stage: int, budget: int) -> SolovayVerdict:
    """Spot-check the Solovay condition 0 < alpha - g(q) < c*(beta - q).

    The caller must have certified q < beta; this is re-checked and a
    violation raises InvalidScenario.  Enclosures of alpha and beta at
    width <= 2**-budget drive the three-valued verdict.
    """
    if left_cut_member(beta, q, budget) is not CutVerdict.IN_LEFT_CUT:
        raise InvalidScenario(f"point {q} is not certified below the target real")
    value = eval_staged(w.g, q, stage)
    if value is None:
        return SolovayVerdict.G_UNDEFINED
    precision = Q(1, 2 ** budget)
    a = enclose(alpha, precision)
    b = enclose(beta, precision)
    if a.hi - value <= ZERO:
        return SolovayVerdict.FAILS_LOWER
    if a.lo - value >= w.c * (b.hi - q):
        return SolovayVerdict.FAILS_UPPER
    if a.lo - value > ZERO and a.hi - value < w.c * (b.lo - q):
        return SolovayVerdict.HOLDS
    return SolovayVerdict.UNKNOWN


class S2aVerdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class S2aStepCheck:
    """Per-index outcome of an approximation-pair prefix check.

    Error bounds are taken over the whole enclosure, so alpha_err_hi is
    a certified upper bound on |alpha - a_n| and beta_err_lo a certified
    lower bound on |beta - b_n| (and symmetrically).
    """

    n: int
    verdict: S2aVerdict
    alpha_err_lo: Fraction
    alpha_err_hi: Fraction
    beta_err_lo: Fraction
    beta_err_hi: Fraction
    alpha_width: Fraction
    beta_width: Fraction


def _abs_err_bounds(box: Interval, t: Fraction) -> tuple[Fraction, Fraction]:
    lo_d = abs(box.lo - t)
    hi_d = abs(box.hi - t)
    upper = max(lo_d, hi_d)
    lower = ZERO if box.contains(t) else min(lo_d, hi_d)
    return lower, upper


def check_s2a_prefix(w: S2aWitness, alpha: ReferenceReal, beta: ReferenceReal,
                     n_max: int, guard: int) -> list[S2aStepCheck]:
    """Check |alpha - a_n| <= c*(|beta - b_n| + 2**-n) for n = 0..n_max.

    Enclosures at width 2**-(n+guard) make both sides exact interval
    bounds; Holds and Fails are certified strictly, everything else is
    Unknown.  Larger guard can only sharpen Unknown entries.
    """
    if guard < 0:
        raise ValueError("guard must be >= 0")
    out: list[S2aStepCheck] = []
    for n in range(n_max + 1):
        precision = Q(1, 2 ** (n + guard))
        a_box = enclose(alpha, precision)
        b_box = enclose(beta, precision)
        a_n = w.alpha_approx.term(n)
        b_n = w.beta_approx.term(n)
        a_lo, a_hi = _abs_err_bounds(a_box, a_n)
        b_lo, b_hi = _abs_err_bounds(b_box, b_n)
        slack = Q(1, 2 ** n)
        if a_hi <= w.c * (b_lo + slack):
            verdict = S2aVerdict.HOLDS
        elif a_lo > w.c * (b_hi + slack):
            verdict = S2aVerdict.FAILS
        else:
            verdict = S2aVerdict.UNKNOWN
        out.append(S2aStepCheck(n, verdict, a_lo, a_hi, b_lo, b_hi,
                                a_box.width, b_box.width))
    return out


def check_strict_at(alpha: ReferenceReal, beta: ReferenceReal,
                    a: Fraction, b: Fraction, c: Fraction,
                    n: int, guard: int) -> S2aStepCheck:
    """Certify the strict bound |alpha - a| < c*(|beta - b| + 2**-n).

    Same enclosure discipline as check_s2a_prefix but with the strict
    comparison the step construction promises: Holds only when the
    certified upper error is strictly inside the bound, Fails only when
    the certified lower error already violates it.
    """
    if guard < 0:
        raise ValueError("guard must be >= 0")
    precision = Q(1, 2 ** (n + guard))
    a_box = enclose(alpha, precision)
    b_box = enclose(beta, precision)
    a_lo, a_hi = _abs_err_bounds(a_box, a)
    b_lo, b_hi = _abs_err_bounds(b_box, b)
    slack = Q(1, 2 ** n)
    if a_hi < c * (b_lo + slack):
        verdict = S2aVerdict.HOLDS
    elif a_lo >= c * (b_hi + slack):
        verdict = S2aVerdict.FAILS
    else:
        verdict = S2aVerdict.UNKNOWN
    return S2aStepCheck(n, verdict, a_lo, a_hi, b_lo, b_hi,
                        a_box.width, b_box.width)


@dataclass(frozen=True)
class LadderEntry:
    q: Fraction
    defined: bool
    bound: Fraction | None  # certified upper bound on |alpha - g(q)|


def check_translation_limit(w: SolovayWitness, alpha: ReferenceReal, beta: ReferenceReal,
                            ladder: list[Fraction], stage: int,
                            guard: int = 8) -> list[LadderEntry]:
    """Upper bounds on |alpha - g(q)| along a ladder climbing toward beta.

    Each ladder point must sit certified inside the left cut of beta.
    Entries where g is still pending at the stage come back undefined;
    the defined bounds are what a caller inspects for eventual decrease.
    """
    out: list[LadderEntry] = []
    for k, q in enumerate(ladder):
        if left_cut_member(beta, q, 64) is not CutVerdict.IN_LEFT_CUT:
            raise InvalidScenario(f"ladder point {q} is not certified below the target real")
        value = eval_staged(w.g, q, stage)
        if value is None:
            out.append(LadderEntry(q, False, None))
            continue
        box = enclose(alpha, Q(1, 2 ** (k + guard)))
        _, upper = _abs_err_bounds(box, value)
        out.append(LadderEntry(q, True, upper))
    return out
