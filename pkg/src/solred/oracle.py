"""Brute-force cross-check for the step search.

Re-derives step hits with none of the incremental machinery the main
search uses: every stage rebuilds the domain from scratch, every
candidate index is tried in turn, and ladders are enumerated by plain
recursive backtracking in the same canonical order (ascending ladder
length, then lexicographic positions in the value-sorted domain).
Branches are cut only where a requirement clause is already
unsatisfiable; nothing is cached across stages or candidates.  The
test suite holds these hits to exact equality with search_step.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .approximations import Approximation
from .construction import RequirementTuple, check_requirement
from .witnesses import SolovayWitness, enumerate_domain

Q = Fraction

ZERO = Q(0)


@dataclass(frozen=True)
class OracleHit:
    stage: int
    index: int
    tup: RequirementTuple


def oracle_min_hit(n: int, prev_index: int, witness: SolovayWitness,
                   b: Approximation, stage_cap: int) -> OracleHit | None:
    """Minimal (stage, index, ladder) hit for step n, or None below the cap."""
    if n < 1:
        raise ValueError("searchable steps start at n = 1")
    if stage_cap < 0:
        raise ValueError("stage cap must be >= 0")
    gap_limit = Q(1, 2 ** (n + 1))
    for stage in range(1, stage_cap + 1):
        entries = sorted(enumerate_domain(witness.g, stage), key=lambda e: e[1])
        indices = [e[0] for e in entries]
        points = [e[1] for e in entries]
        values = [e[2] for e in entries]
        if not points or points[0] != ZERO:
            continue
        for i in range(prev_index + 1, stage + 1):
            b_val = b.term(i)
            tup = _first_ladder(n, b_val, witness.c, indices, points, values,
                                gap_limit)
            if tup is not None:
                return OracleHit(stage, i, tup)
    return None


def _first_ladder(n: int, b: Fraction, c: Fraction, indices: list[int],
                  points: list[Fraction], values: list[Fraction],
                  gap_limit: Fraction) -> RequirementTuple | None:
    cut = bisect_left(points, b)
    if cut < 3:
        return None
    win_lo = b - gap_limit
    if bisect_right(points, win_lo, 0, cut) >= cut:
        return None  # no domain point inside the window
    for ell in range(2, cut):
        if ell * gap_limit <= win_lo:
            continue  # ell hops below gap_limit cannot clear the window floor
        tup = _extend([0], ell, n, b, c, indices, points, values,
                      gap_limit, win_lo, cut)
        if tup is not None:
            return tup
    return None


def _extend(chosen: list[int], ell: int, n: int, b: Fraction, c: Fraction,
            indices: list[int], points: list[Fraction], values: list[Fraction],
            gap_limit: Fraction, win_lo: Fraction, cut: int
            ) -> RequirementTuple | None:
    depth = len(chosen) - 1
    if depth == ell:
        tup = RequirementTuple(
            tuple(indices[t] for t in chosen),
            tuple(points[t] for t in chosen),
            tuple(values[t] for t in chosen),
        )
        if check_requirement(n, b, c, tup) is None:
            return tup
        return None
    last = chosen[-1]
    remaining = ell - depth - 1  # positions still to pick after this one
    for p in range(last + 1, cut - remaining):
        if points[p] - points[last] >= gap_limit:
            break  # later positions only widen this hop
        if points[p] + remaining * gap_limit <= win_lo:
            continue  # even maximal hops from p leave the final below the window
        found = _extend(chosen + [p], ell, n, b, c, indices, points, values,
                        gap_limit, win_lo, cut)
        if found is not None:
            return found
    return None
