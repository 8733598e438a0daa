"""Verification harness: enclosure-certified reports over scenarios.

Each verify_* function runs one mode and returns a Report whose payload
is a deterministic JSON-ready dict (exact fraction strings, fixed key
order, no timestamps) plus an aligned-text rendering for humans.  Every
recorded verdict is Holds / Fails / Unknown with the inequality and the
enclosure widths that produced it; budget exhaustion is reported, never
hidden.  Claims that no finite computation can decide (the
non-reducibility half of the mirror construction) appear as labeled
citations, never as verdicts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .approximations import Kind, check_kind_prefix, complement, prepend
from .construction import (
    ConstructionTrace,
    build_leftce_from_solovay,
    build_s2a_from_solovay,
    mirror_s2a,
    witness_image,
)
from .errors import BudgetExhausted, InvalidScenario
from .oracle import oracle_min_hit
from .reals import Complement, CutVerdict, enclose, left_cut_member
from .scenario import Scenario, format_fraction
from .witnesses import (
    S2aStepCheck,
    SolovayVerdict,
    canonical_point,
    check_s2a_prefix,
    check_solovay_at,
    check_strict_at,
)

Q = Fraction

ZERO = Q(0)

GRID_LEVELS = 5        # spot-check grid: canonical points of index < 2**GRID_LEVELS
GRID_BUDGET = 64       # enclosure/cut budget for grid checks

MIRROR_CITATION = {
    "claim": "the mirror direction does not reverse: the complement of a "
             "properly left-c.e. real is not Solovay reducible to the real itself",
    "status": "not machine-checkable",
    "reason": "the claim quantifies over all partial computable translation "
              "functions and rests on the limit not being right-c.e., which no "
              "finite prefix of an approximation can certify",
    "background": [
        "R. G. Downey and D. R. Hirschfeldt, Algorithmic Randomness and "
        "Complexity, Springer, 2010 (Solovay reducibility on c.e. reals)",
        "X. Zheng and R. Rettinger, On the extensions of Solovay-reducibility, "
        "COCOON 2004, LNCS 3106 (reducibilities for computably approximable reals)",
    ],
}


@dataclass
class Report:
    mode: str
    scenario: str
    parameters: dict
    sections: dict = field(default_factory=dict)
    citations: list = field(default_factory=list)
    holds: int = 0
    fails: int = 0
    unknown: int = 0
    exhausted: bool = False

    def tally(self, verdict_value: str) -> None:
        if verdict_value == "holds":
            self.holds += 1
        elif verdict_value in ("fails", "fails_lower", "fails_upper"):
            self.fails += 1
        else:
            self.unknown += 1

    def exit_code(self) -> int:
        if self.fails:
            return 1
        if self.unknown or self.exhausted:
            return 2
        return 0

    @property
    def overall(self) -> str:
        return {0: "pass", 1: "fail", 2: "inconclusive"}[self.exit_code()]

    def payload(self) -> dict:
        return {
            "format_version": "1",
            "kind": "verification_report",
            "mode": self.mode,
            "scenario": self.scenario,
            "parameters": self.parameters,
            "sections": self.sections,
            "citations": self.citations,
            "summary": {
                "holds": self.holds,
                "fails": self.fails,
                "unknown": self.unknown,
                "exhausted": self.exhausted,
                "overall": self.overall,
            },
        }

    def to_text(self) -> str:
        lines = [
            f"mode      {self.mode}",
            f"scenario  {self.scenario}",
            "params    " + "  ".join(f"{k}={v}" for k, v in self.parameters.items()),
            "",
        ]
        for name, body in self.sections.items():
            lines.append(name)
            lines.extend(_section_lines(body))
            lines.append("")
        for cit in self.citations:
            lines.append(f"citation [{cit['status']}]")
            lines.append(f"  claim: {cit['claim']}")
            lines.append(f"  reason: {cit['reason']}")
            for ref in cit["background"]:
                lines.append(f"  see: {ref}")
            lines.append("")
        lines.append(
            f"summary   holds={self.holds} fails={self.fails} "
            f"unknown={self.unknown} exhausted={str(self.exhausted).lower()} "
            f"overall={self.overall}")
        return "\n".join(lines) + "\n"


def _section_lines(body: object, indent: str = "  ") -> list[str]:
    out: list[str] = []
    if isinstance(body, dict):
        width = max((len(str(k)) for k in body), default=0)
        for k, v in body.items():
            if isinstance(v, (dict, list)):
                out.append(f"{indent}{k}:")
                out.extend(_section_lines(v, indent + "  "))
            else:
                out.append(f"{indent}{str(k).ljust(width)}  {v}")
    elif isinstance(body, list):
        for item in body:
            if isinstance(item, (dict, list)):
                out.extend(_section_lines(item, indent))
                out.append(indent + "-")
            else:
                out.append(f"{indent}{item}")
        if out and out[-1] == indent + "-":
            out.pop()
    else:
        out.append(f"{indent}{body}")
    return out


def _step_check_row(chk: S2aStepCheck, c: Fraction) -> dict:
    slack = Q(1, 2 ** chk.n)
    return {
        "n": chk.n,
        "verdict": chk.verdict.value,
        "alpha_err": [format_fraction(chk.alpha_err_lo), format_fraction(chk.alpha_err_hi)],
        "beta_err": [format_fraction(chk.beta_err_lo), format_fraction(chk.beta_err_hi)],
        "bound_if_beta_err_lo": format_fraction(c * (chk.beta_err_lo + slack)),
        "enclosure_widths": [format_fraction(chk.alpha_width), format_fraction(chk.beta_width)],
    }


def _grid_points(scenario: Scenario) -> list[Fraction]:
    pts = sorted(canonical_point(j) for j in range(2 ** GRID_LEVELS))
    return [q for q in pts
            if left_cut_member(scenario.beta, q, GRID_BUDGET) is CutVerdict.IN_LEFT_CUT]


def _witness_grid_section(report: Report, scenario: Scenario, stage: int) -> None:
    rows = []
    for q in _grid_points(scenario):
        verdict = check_solovay_at(scenario.solovay_witness, scenario.alpha,
                                   scenario.beta, q, stage, GRID_BUDGET)
        rows.append({"q": format_fraction(q), "verdict": verdict.value})
        if verdict is SolovayVerdict.HOLDS:
            report.holds += 1
        elif verdict in (SolovayVerdict.FAILS_LOWER, SolovayVerdict.FAILS_UPPER):
            report.fails += 1
        else:
            report.unknown += 1
    report.sections["witness_grid"] = {
        "inequality": "0 < alpha - g(q) < c*(beta - q)",
        "stage": stage,
        "enclosure_budget": GRID_BUDGET,
        "points": rows,
    }


def _trace_steps_rows(trace: ConstructionTrace) -> list[dict]:
    rows = []
    for rec in trace.steps:
        rows.append({
            "n": rec.n,
            "i": rec.index,
            "stage_found": rec.stage_found,
            "a": format_fraction(rec.value),
            "b_i": format_fraction(rec.b_value),
            "ladder_len": None if rec.tup is None else rec.tup.ell,
        })
    return rows


def trace_payload(scenario: Scenario, trace: ConstructionTrace,
                  depth: int, stage_budget: int) -> dict:
    """Deterministic JSON payload for a construction trace."""
    steps = list(trace.steps)
    payload: dict = {
        "format_version": "1",
        "kind": "construction_trace",
        "scenario": scenario.name,
        "parameters": {"depth": depth, "stage_budget": stage_budget},
        "constant": format_fraction(scenario.solovay_witness.c),
        "beta_index_offset": trace.beta_index_offset,
        "steps": [],
        "exhausted": None,
    }
    for rec in steps:
        row = {
            "n": rec.n,
            "i": rec.index,
            "stage_found": rec.stage_found,
            "a": format_fraction(rec.value),
            "b_i": format_fraction(rec.b_value),
            "ladder": None,
        }
        if rec.tup is not None:
            row["ladder"] = {
                "indices": list(rec.tup.indices),
                "points": [format_fraction(p) for p in rec.tup.points],
                "values": [format_fraction(v) for v in rec.tup.values],
            }
        payload["steps"].append(row)
    if trace.exhausted is not None:
        payload["exhausted"] = {"step": trace.exhausted[0],
                                "stage_budget": trace.exhausted[1]}
    else:
        payload["witness"] = {
            "constant": format_fraction(scenario.solovay_witness.c),
            "alpha_terms": [format_fraction(r.value) for r in steps],
            "beta_terms": [format_fraction(r.b_value) for r in steps],
        }
    return payload


def verify_construction(scenario: Scenario, *, depth: int | None = None,
                        stage_budget: int | None = None, guard: int | None = None,
                        oracle_depth: int = 6) -> Report:
    """Full pipeline check: witness grid, build, per-step strict bounds, oracle."""
    if scenario.solovay_witness is None:
        raise InvalidScenario("construction mode needs a solovay_witness")
    depth = scenario.depth if depth is None else depth
    stage_budget = scenario.stage_budget if stage_budget is None else stage_budget
    guard = scenario.guard if guard is None else guard
    w = scenario.solovay_witness
    report = Report("construction", scenario.name,
                    {"depth": depth, "stage_budget": stage_budget, "guard": guard,
                     "oracle_depth": oracle_depth})

    _witness_grid_section(report, scenario, stage_budget)

    exhausted_at = None
    try:
        _, trace = build_s2a_from_solovay(w, scenario.beta_approx, scenario.alpha,
                                          scenario.beta, depth, stage_budget)
    except BudgetExhausted as exc:
        trace = exc.partial
        exhausted_at = exc.step
        report.exhausted = True
    steps = list(trace.steps)
    stages = [rec.stage_found for rec in steps]
    report.sections["construction"] = {
        "requested_depth": depth,
        "completed_steps": len(steps) - 1 if steps else None,
        "exhausted_at_step": exhausted_at,
        "steps": _trace_steps_rows(trace),
        "stage_stats": {"max_stage": max(stages, default=0),
                        "total_stages": sum(stages)},
    }

    cert_rows = []
    for rec in steps:
        chk = check_strict_at(scenario.alpha, scenario.beta, rec.value,
                              rec.b_value, w.c, rec.n, guard)
        cert_rows.append(_step_check_row(chk, w.c))
        report.tally(chk.verdict.value)
    report.sections["step_certificates"] = {
        "inequality": "|alpha - a_n| < c*(|beta - b_{i_n}| + 2^-n) (strict)",
        "enclosure_width": "2^-(n+guard)",
        "steps": cert_rows,
    }

    report.sections["same_constant"] = {
        "input": format_fraction(w.c),
        "output": format_fraction(w.c),
        "equal": True,
    }

    b_pre = prepend(ZERO, scenario.beta_approx)
    oracle_rows = []
    for n in range(1, min(oracle_depth, len(steps) - 1) + 1):
        rec = steps[n]
        hit = oracle_min_hit(n, steps[n - 1].index, w, b_pre, stage_budget)
        agrees = (hit is not None and hit.stage == rec.stage_found
                  and hit.index == rec.index and hit.tup == rec.tup)
        row = {"n": n, "agrees": agrees,
               "search": {"stage": rec.stage_found, "i": rec.index}}
        if hit is None:
            row["oracle"] = None
        elif not agrees:
            row["oracle"] = {"stage": hit.stage, "i": hit.index}
        oracle_rows.append(row)
        report.tally("holds" if agrees else "fails")
    report.sections["oracle"] = {
        "compared_steps": len(oracle_rows),
        "comparisons": oracle_rows,
    }
    return report


def verify_mirror(scenario: Scenario, *, depth: int | None = None,
                  guard: int | None = None) -> Report:
    """Mirror pipeline: kind checks on both sides plus the c = 1 pair bound."""
    if scenario.alpha_leftce_approx is None:
        raise InvalidScenario("mirror mode needs an alpha_leftce_approx")
    depth = scenario.depth if depth is None else depth
    guard = scenario.guard if guard is None else guard
    a = scenario.alpha_leftce_approx
    report = Report("mirror", scenario.name, {"depth": depth, "guard": guard})
    report.citations.append(MIRROR_CITATION)

    violation = check_kind_prefix(a, depth)
    report.sections["leftce_prefix"] = {"n_max": depth, "violation_at": violation}
    if violation is not None:
        report.fails += 1
        report.sections["mirror"] = {"skipped": "left-c.e. prefix check failed"}
        return report
    report.holds += 1

    m = mirror_s2a(a)
    checks = check_s2a_prefix(m, Complement(scenario.alpha), scenario.alpha,
                              depth, guard)
    rows = [_step_check_row(chk, m.c) for chk in checks]
    for chk in checks:
        report.tally(chk.verdict.value)
    report.sections["mirror"] = {
        "constant": format_fraction(m.c),
        "inequality": "|(1-alpha) - (1-a_n)| <= 1*(|alpha - a_n| + 2^-n)",
        "steps": rows,
    }

    comp_violation = check_kind_prefix(complement(a), depth)
    report.sections["rightce_prefix"] = {"n_max": depth,
                                         "violation_at": comp_violation}
    if comp_violation is None:
        report.holds += 1
    else:
        report.fails += 1
    return report


def verify_prop1(scenario: Scenario, *, depth: int | None = None,
                 stage_budget: int | None = None, guard: int | None = None) -> Report:
    """Downward-closure check: monotone image below alpha with the gap bound."""
    if scenario.solovay_witness is None:
        raise InvalidScenario("prop1 mode needs a solovay_witness")
    if scenario.beta_approx.kind is not Kind.LEFT_CE:
        raise InvalidScenario("prop1 mode needs a left_ce beta_approx")
    depth = scenario.depth if depth is None else depth
    stage_budget = scenario.stage_budget if stage_budget is None else stage_budget
    guard = scenario.guard if guard is None else guard
    w = scenario.solovay_witness
    b = scenario.beta_approx
    report = Report("prop1", scenario.name,
                    {"depth": depth, "stage_budget": stage_budget, "guard": guard})

    violation = check_kind_prefix(b, depth)
    report.sections["beta_kind_prefix"] = {"n_max": depth, "violation_at": violation}
    if violation is not None:
        report.fails += 1
    else:
        report.holds += 1

    image = witness_image(w, b, stage_budget)
    b_terms: list[Fraction] = []
    raw: list[Fraction] = []
    stages: list[int] = []
    exhausted_at = None
    for n in range(depth + 1):
        b_n = b.term(n)
        try:
            a_n = image.term(n)
        except BudgetExhausted:
            exhausted_at = n
            report.exhausted = True
            break
        b_terms.append(b_n)
        raw.append(a_n)
        j = w.g.enumeration.index_of(b_n)
        stages.append(w.g.schedule.stage_of(j))
    mono: list[Fraction] = []
    for a_n in raw:
        mono.append(a_n if not mono else max(mono[-1], a_n))

    built = build_leftce_from_solovay(w, b, stage_budget)
    mono_violation = None
    if exhausted_at is None:
        mono_violation = check_kind_prefix(built, depth)
    elif exhausted_at > 0:
        mono_violation = check_kind_prefix(built, exhausted_at - 1)
    report.sections["image"] = {
        "evaluated_terms": len(raw),
        "exhausted_at_term": exhausted_at,
        "monotone_violation_at": mono_violation,
        "terms": [{"n": n, "b_n": format_fraction(b_terms[n]),
                   "g_of_b_n": format_fraction(raw[n]),
                   "a_n": format_fraction(mono[n])}
                  for n in range(len(raw))],
        "definition_stage_stats": {"max_stage": max(stages, default=0),
                                   "total_stages": sum(stages)},
    }
    if mono_violation is not None:
        report.fails += 1
    else:
        report.holds += 1

    below_rows = []
    gap_rows = []
    for n in range(len(raw)):
        precision = Q(1, 2 ** (n + guard))
        a_box = enclose(scenario.alpha, precision)
        b_box = enclose(scenario.beta, precision)
        if a_box.lo > mono[n]:
            below = "holds"
        elif mono[n] >= a_box.hi:
            below = "fails"
        else:
            below = "unknown"
        below_rows.append({"n": n, "verdict": below,
                           "a_n": format_fraction(mono[n]),
                           "alpha_enclosure": [format_fraction(a_box.lo),
                                               format_fraction(a_box.hi)]})
        report.tally(below)

        lower_ok = a_box.lo - raw[n] > ZERO
        upper_ok = a_box.hi - raw[n] < w.c * (b_box.lo - b_terms[n])
        lower_broken = a_box.hi - raw[n] <= ZERO
        upper_broken = a_box.lo - raw[n] >= w.c * (b_box.hi - b_terms[n])
        if lower_ok and upper_ok:
            gap = "holds"
        elif lower_broken or upper_broken:
            gap = "fails"
        else:
            gap = "unknown"
        gap_rows.append({"n": n, "verdict": gap,
                         "alpha_minus_g": [format_fraction(a_box.lo - raw[n]),
                                           format_fraction(a_box.hi - raw[n])],
                         "c_times_beta_gap": [format_fraction(w.c * (b_box.lo - b_terms[n])),
                                              format_fraction(w.c * (b_box.hi - b_terms[n]))]})
        report.tally(gap)
    report.sections["below_alpha"] = {
        "inequality": "a_n < alpha (strict)",
        "steps": below_rows,
    }
    report.sections["gap_bound"] = {
        "inequality": "0 < alpha - g(b_n) < c*(beta - b_n)",
        "steps": gap_rows,
    }
    return report


def verify_s2a_declared(scenario: Scenario, *, depth: int | None = None,
                        guard: int | None = None) -> Report:
    """Check a declared approximation pair against alpha and beta."""
    if scenario.s2a_witness is None:
        raise InvalidScenario("s2a-check mode needs an s2a_witness")
    depth = scenario.depth if depth is None else depth
    guard = scenario.guard if guard is None else guard
    m = scenario.s2a_witness
    report = Report("s2a-check", scenario.name, {"depth": depth, "guard": guard})
    checks = check_s2a_prefix(m, scenario.alpha, scenario.beta, depth, guard)
    for chk in checks:
        report.tally(chk.verdict.value)
    report.sections["s2a"] = {
        "constant": format_fraction(m.c),
        "inequality": "|alpha - a_n| <= c*(|beta - b_n| + 2^-n)",
        "steps": [_step_check_row(chk, m.c) for chk in checks],
    }
    return report


def verify_solovay_grid(scenario: Scenario, *, stage_budget: int | None = None) -> Report:
    """Grid-only spot check of the Solovay condition."""
    if scenario.solovay_witness is None:
        raise InvalidScenario("solovay-check mode needs a solovay_witness")
    stage_budget = scenario.stage_budget if stage_budget is None else stage_budget
    report = Report("solovay-check", scenario.name, {"stage_budget": stage_budget})
    _witness_grid_section(report, scenario, stage_budget)
    return report
