"""Exact rational numerics: intervals, reference reals, enclosures.

A ReferenceReal is a small closed-form expression denoting a real in
[0, 1].  Every constructor keeps enough structure to produce, on
demand, a rational-endpoint interval that provably contains the value
(an *enclosure*).  Enclosures are the only way the rest of the package
ever looks at a reference real, so every downstream certification is a
finite exact-arithmetic fact about interval endpoints.

Supported constructors:

* ``ExactRational(v)``          -- the rational v itself
* ``DyadicSeries(exponents)``   -- sum of 2**(-e_k) over a strictly
  increasing positive integer sequence e_k, either the affine family
  e_k = s*k + t (s >= 1, t >= 1) or an explicit finite list
* ``Scale(inner, factor)``      -- factor * inner, factor in (0, 1]
* ``Average(left, right)``      -- (left + right) / 2
* ``Complement(inner)``         -- 1 - inner

Left-cut membership (is q strictly below the value?) is decided by
budgeted interval refinement and returns a three-valued verdict; ties
that the current enclosure cannot separate come back Unknown rather
than ever guessing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

Q = Fraction

ZERO = Q(0)
ONE = Q(1)


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: Fraction) -> bool:
        return self.lo <= q <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi


class CutVerdict(enum.Enum):
    """Verdict of a budgeted left-cut membership query."""

    IN_LEFT_CUT = "in_left_cut"          # certified q < value
    NOT_IN_LEFT_CUT = "not_in_left_cut"  # certified q >= value
    UNKNOWN = "unknown"                  # budget exhausted undecided


class ReferenceReal:
    """Base class for closed-form reals in [0, 1]; see module docstring."""

    __slots__ = ()


@dataclass(frozen=True)
class ExactRational(ReferenceReal):
    value: Fraction

    def __post_init__(self) -> None:
        if not (ZERO <= self.value <= ONE):
            raise ValueError(f"exact rational out of [0,1]: {self.value}")


@dataclass(frozen=True)
class AffineExponents:
    """e_k = s*k + t with integer s >= 1, t >= 1 (strictly increasing)."""

    s: int
    t: int

    def __post_init__(self) -> None:
        if self.s < 1 or self.t < 1:
            raise ValueError("affine exponent family needs s >= 1 and t >= 1")

    def exponent(self, k: int) -> int:
        return self.s * k + self.t

    def count(self) -> int | None:
        return None  # infinite


@dataclass(frozen=True)
class ListExponents:
    """Explicit finite strictly increasing positive exponent list."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = 0
        for e in self.values:
            if e <= prev:
                raise ValueError("exponent list must be strictly increasing and positive")
            prev = e

    def exponent(self, k: int) -> int:
        return self.values[k]

    def count(self) -> int | None:
        return len(self.values)


@dataclass(frozen=True)
class DyadicSeries(ReferenceReal):
    exponents: AffineExponents | ListExponents

    def partial_state(self, k: int) -> tuple[Fraction, Fraction]:
        """Partial sum of the first k terms and the exact tail bound used.

        After consuming K terms the remaining tail is at most
        2**(-e_{K-1}): exponents grow by at least one per term, so the
        tail is dominated by the geometric series with ratio 1/2
        starting one step past the last consumed exponent.  For an
        exhausted finite list the tail is exactly zero.
        """
        total = ZERO
        count = self.exponents.count()
        n = k if count is None else min(k, count)
        for j in range(n):
            total += Q(1, 2 ** self.exponents.exponent(j))
        if count is not None and n == count:
            return total, ZERO
        if n == 0:
            return ZERO, ONE
        return total, Q(1, 2 ** self.exponents.exponent(n - 1))


@dataclass(frozen=True)
class Scale(ReferenceReal):
    inner: ReferenceReal
    factor: Fraction

    def __post_init__(self) -> None:
        if not (ZERO < self.factor <= ONE):
            raise ValueError(f"scale factor must be in (0,1]: {self.factor}")


@dataclass(frozen=True)
class Average(ReferenceReal):
    left: ReferenceReal
    right: ReferenceReal


@dataclass(frozen=True)
class Complement(ReferenceReal):
    inner: ReferenceReal


def enclose(real: ReferenceReal, precision: Fraction) -> Interval:
    """Rational-endpoint interval containing the value, width <= precision.

    Repeated calls with shrinking precision return nested-or-equal
    intervals: every constructor derives its endpoints monotonically
    from its children's enclosures, and a dyadic series only ever adds
    partial-sum terms.
    """
    if precision <= ZERO:
        raise ValueError("precision must be positive")
    if isinstance(real, ExactRational):
        return Interval(real.value, real.value)
    if isinstance(real, DyadicSeries):
        count = real.exponents.count()
        total = ZERO
        k = 0
        while True:
            if count is not None and k == count:
                return Interval(total, total)
            exp = real.exponents.exponent(k)
            total += Q(1, 2 ** exp)
            k += 1
            bound = Q(1, 2 ** exp)
            if bound <= precision:
                return Interval(total, total + bound)
    if isinstance(real, Scale):
        inner = enclose(real.inner, precision / real.factor)
        return Interval(inner.lo * real.factor, inner.hi * real.factor)
    if isinstance(real, Average):
        left = enclose(real.left, precision)
        right = enclose(real.right, precision)
        return Interval((left.lo + right.lo) / 2, (left.hi + right.hi) / 2)
    if isinstance(real, Complement):
        inner = enclose(real.inner, precision)
        return Interval(ONE - inner.hi, ONE - inner.lo)
    raise TypeError(f"not a ReferenceReal: {real!r}")


def enclose_at_tick(real: ReferenceReal, tick: int) -> Interval:
    """Enclosure after a fixed number of refinement rounds.

    One tick buys one series term (one recursive refinement for the
    composite constructors).  Widths shrink to zero as ticks grow, and
    successive ticks give nested-or-equal intervals; this is the budget
    unit for left_cut_member.
    """
    if tick < 0:
        raise ValueError("tick must be >= 0")
    if isinstance(real, ExactRational):
        return Interval(real.value, real.value)
    if isinstance(real, DyadicSeries):
        total, bound = real.partial_state(tick)
        return Interval(total, total + bound)
    if isinstance(real, Scale):
        inner = enclose_at_tick(real.inner, tick)
        return Interval(inner.lo * real.factor, inner.hi * real.factor)
    if isinstance(real, Average):
        left = enclose_at_tick(real.left, tick)
        right = enclose_at_tick(real.right, tick)
        return Interval((left.lo + right.lo) / 2, (left.hi + right.hi) / 2)
    if isinstance(real, Complement):
        inner = enclose_at_tick(real.inner, tick)
        return Interval(ONE - inner.hi, ONE - inner.lo)
    raise TypeError(f"not a ReferenceReal: {real!r}")


def left_cut_member(real: ReferenceReal, q: Fraction, budget: int) -> CutVerdict:
    """Budgeted test of q < value.

    IN_LEFT_CUT is certified when some enclosure has q < lo;
    NOT_IN_LEFT_CUT when q >= hi (which covers the exact-rational tie
    q == value, since a point interval has hi == value).  Verdicts are
    monotone in budget: once certified, more budget never flips the
    answer, because enclosures are nested.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    for tick in range(1, budget + 1):
        box = enclose_at_tick(real, tick)
        if q < box.lo:
            return CutVerdict.IN_LEFT_CUT
        if q >= box.hi:
            return CutVerdict.NOT_IN_LEFT_CUT
    return CutVerdict.UNKNOWN


def certify_in_open_unit(real: ReferenceReal, budget: int = 64) -> bool:
    """True when refinement certifies 0 < value < 1 within the budget."""
    for tick in range(1, budget + 1):
        box = enclose_at_tick(real, tick)
        if box.lo > ZERO and box.hi < ONE:
            return True
        if box.hi <= ZERO or box.lo >= ONE:
            return False
    return False
