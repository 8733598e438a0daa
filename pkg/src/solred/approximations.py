"""Computable approximations: rational sequences with convergence claims.

An Approximation pairs a declarative term generator with a kind claim
(general / left-c.e. / right-c.e.) and, optionally, the reference real
the sequence is declared to converge to.  Kind claims are metadata:
they are checked on finite prefixes by check_kind_prefix, never
assumed.

Generators:

* ``AffineDyadic(u, v, w)``       -- term(n) = u - v * 2**(-w*n)
* ``AlternatingDyadic(u, v, w)``  -- term(n) = u + (-1)**n * v * 2**(-w*n)
* ``Table(entries, tail)``        -- explicit prefix, then the constant tail
* ``PrependGen(head, inner)``     -- head, then inner shifted by one
* ``PrefixMaxGen(inner)``         -- running maximum of inner
* ``ComplementGen(inner)``        -- 1 - inner
* ``WitnessImage(...)``           -- defined in the construction layer;
  any object with a ``term(n)`` method slots in here

All terms are exact rationals in [0, 1]; generator constructors
validate the range where it is decidable from the parameters.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

from .reals import Complement as ComplementReal
from .reals import ReferenceReal, enclose

Q = Fraction

ZERO = Q(0)
ONE = Q(1)


class Kind(enum.Enum):
    GENERAL = "general"
    LEFT_CE = "left_ce"      # claimed nondecreasing
    RIGHT_CE = "right_ce"    # claimed nonincreasing


@dataclass(frozen=True)
class DecayBound:
    """Declared convergence speed: bound(n) = v * 2**(-w*n)."""

    v: Fraction
    w: int

    def __post_init__(self) -> None:
        if self.v < ZERO:
            raise ValueError(f"decay coefficient must be >= 0: {self.v}")
        if self.w < 1:
            raise ValueError(f"decay exponent step must be >= 1: {self.w}")

    def at(self, n: int) -> Fraction:
        return self.v * Q(1, 2 ** (self.w * n))


def _check_unit(q: Fraction, what: str) -> None:
    if not (ZERO <= q <= ONE):
        raise ValueError(f"{what} out of [0,1]: {q}")


@dataclass(frozen=True)
class AffineDyadic:
    """term(n) = u - v * 2**(-w*n); all terms lie between u-v and u."""

    u: Fraction
    v: Fraction
    w: int

    def __post_init__(self) -> None:
        if self.w < 1:
            raise ValueError("decay rate w must be >= 1")
        _check_unit(self.u, "affine-dyadic u")
        _check_unit(self.u - self.v, "affine-dyadic first term")

    def term(self, n: int) -> Fraction:
        return self.u - self.v * Q(1, 2 ** (self.w * n))


@dataclass(frozen=True)
class AlternatingDyadic:
    """term(n) = u + (-1)**n * v * 2**(-w*n); oscillates around u."""

    u: Fraction
    v: Fraction
    w: int

    def __post_init__(self) -> None:
        if self.w < 1:
            raise ValueError("decay rate w must be >= 1")
        if self.v < ZERO:
            raise ValueError("oscillation amplitude must be >= 0")
        _check_unit(self.u + self.v, "alternating-dyadic upper excursion")
        _check_unit(self.u - self.v, "alternating-dyadic lower excursion")

    def term(self, n: int) -> Fraction:
        sign = 1 if n % 2 == 0 else -1
        return self.u + sign * self.v * Q(1, 2 ** (self.w * n))


@dataclass(frozen=True)
class Table:
    """Explicit finite prefix followed by a constant tail."""

    entries: tuple[Fraction, ...]
    tail: Fraction

    def __post_init__(self) -> None:
        for i, e in enumerate(self.entries):
            _check_unit(e, f"table entry {i}")
        _check_unit(self.tail, "table tail")

    def term(self, n: int) -> Fraction:
        if n < len(self.entries):
            return self.entries[n]
        return self.tail


@dataclass(frozen=True)
class PrependGen:
    head: Fraction
    inner: object

    def __post_init__(self) -> None:
        _check_unit(self.head, "prepended head")

    def term(self, n: int) -> Fraction:
        if n == 0:
            return self.head
        return self.inner.term(n - 1)


@dataclass(frozen=True)
class PrefixMaxGen:
    inner: object

    def term(self, n: int) -> Fraction:
        best = self.inner.term(0)
        for m in range(1, n + 1):
            t = self.inner.term(m)
            if t > best:
                best = t
        return best


@dataclass(frozen=True)
class ComplementGen:
    inner: object

    def term(self, n: int) -> Fraction:
        return ONE - self.inner.term(n)


@dataclass(frozen=True)
class Approximation:
    """A term generator plus a kind claim and optional declared metadata.

    limit and modulus are declarations, never trusted: the limit is
    exercised against enclosures by check_modulus_prefix and by the
    witness checks downstream, the kind by check_kind_prefix.
    """

    gen: object
    kind: Kind = Kind.GENERAL
    limit: ReferenceReal | None = None
    modulus: DecayBound | None = None

    def term(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("term index must be >= 0")
        value = self.gen.term(n)
        if not (ZERO <= value <= ONE):
            raise ValueError(f"approximation term {n} out of [0,1]: {value}")
        return value


def evaluate(a: Approximation, n: int) -> Fraction:
    return a.term(n)


def prefix_max(a: Approximation) -> Approximation:
    """Running maximum; the result is honestly nondecreasing (left-c.e. shape)."""
    return Approximation(gen=PrefixMaxGen(a.gen), kind=Kind.LEFT_CE, limit=a.limit)


def complement(a: Approximation) -> Approximation:
    """Termwise 1 - a; flips a monotonicity claim, mirrors the limit."""
    if a.kind is Kind.LEFT_CE:
        kind = Kind.RIGHT_CE
    elif a.kind is Kind.RIGHT_CE:
        kind = Kind.LEFT_CE
    else:
        kind = Kind.GENERAL
    limit = ComplementReal(a.limit) if a.limit is not None else None
    # |(1 - t) - (1 - L)| = |t - L|, so a declared decay bound carries over
    return Approximation(gen=ComplementGen(a.gen), kind=kind, limit=limit,
                         modulus=a.modulus)


def prepend(head: Fraction, a: Approximation) -> Approximation:
    """Shift the sequence right and start it at head; limit unchanged.

    The kind claim survives only when the head is consistent with it,
    otherwise the result is claimed general.
    """
    first = a.term(0)
    kind = a.kind
    if kind is Kind.LEFT_CE and head > first:
        kind = Kind.GENERAL
    elif kind is Kind.RIGHT_CE and head < first:
        kind = Kind.GENERAL
    return Approximation(gen=PrependGen(head, a.gen), kind=kind, limit=a.limit)


def with_kind(a: Approximation, kind: Kind) -> Approximation:
    return replace(a, kind=kind)


def check_modulus_prefix(a: Approximation, n_max: int) -> int | None:
    """First index n in 0..n_max where the declared decay bound breaks.

    Compares |term(n) - mid(enclose(limit, 2**-(n+10)))| against the
    declared bound; the midpoint sits within half that enclosure width
    of the true limit, so declared bounds should leave that much room.
    Requires both a declared limit and a declared modulus.
    """
    if a.limit is None or a.modulus is None:
        raise ValueError("modulus check needs a declared limit and modulus")
    if n_max < 0:
        raise ValueError("prefix length must be >= 0")
    for n in range(n_max + 1):
        box = enclose(a.limit, Q(1, 2 ** (n + 10)))
        mid = (box.lo + box.hi) / 2
        if abs(a.term(n) - mid) > a.modulus.at(n):
            return n
    return None


def check_kind_prefix(a: Approximation, n_max: int) -> int | None:
    """First index n in 1..n_max where the kind claim breaks, else None.

    A violation at n means the pair (term(n-1), term(n)) moves the
    wrong way.  GENERAL claims nothing and never produces a violation.
    """
    if n_max < 0:
        raise ValueError("prefix length must be >= 0")
    if a.kind is Kind.GENERAL:
        return None
    prev = a.term(0)
    for n in range(1, n_max + 1):
        cur = a.term(n)
        if a.kind is Kind.LEFT_CE and cur < prev:
            return n
        if a.kind is Kind.RIGHT_CE and cur > prev:
            return n
        prev = cur
    return None
