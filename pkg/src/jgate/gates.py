"""Inequality gates for two-generator subgroups with a loxodromic generator.

Throughout, g = diag(lam, 1/lam) with |lam| > 1 and h = [[a, b], [c, d]]
is unimodular; mg = |lam - 1| + |1/lam - 1|.  Every gate here encodes a
necessary condition for <g, h> to be discrete and non-elementary, so a
gate that *fires* certifies the contrapositive: the group is elementary
or it is not discrete.  No gate ever certifies discreteness.

Gates
-----
* classical:   |tr^2(g) - 4| + |tr[g, h] - 2| >= 1 must hold for a
               discrete non-elementary group; firing means lhs < 1.
* generalized: when mg < 1, |abcd|^(1/2) >= (1 - mg)/mg^2 must hold
               *strictly*; equality is impossible, so the gate fires on
               lhs <= bound, equality included.
* corollaries: three companion bounds on |bc| and |1 + bc| that follow
               from the generalized gate via ad - bc = 1.

The conjugation step h1 = h g h^-1 has the closed form

    a1 = ad lam - bc / lam      b1 = -(lam - 1/lam) ab
    c1 = (lam - 1/lam) cd       d1 = ad / lam - bc lam

and satisfies b1 c1 = -(lam - 1/lam)^2 abcd.  The proof-chain report
recomputes the inequality ladder that links h to h1; when h satisfies
the gate hypothesis the ladder entries are theorems, so a violation
beyond tolerance would indicate an arithmetic bug, not new mathematics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import mat2c, moebius
from .errors import LambdaNotExpandingError, MgOutOfRangeError
from .mat2c import SL2Matrix, diagonal
from .moebius import MoebiusClass, classify, is_axis_preserving, mg_of

#: Relative margin for "equality fires": lhs <= bound within this margin
#: counts as at or below the bound.  Keeps boundary cases constructed by
#: numerical solves on the firing side regardless of last-bit rounding.
EQUALITY_MARGIN = 1e-12

#: Slack allowed when checking the proof-chain inequalities.
CHAIN_SLACK = 1e-10

#: |lhs - 1| below this counts as equality in the classical gate.
CLASSICAL_EQ_TOL = 1e-9

#: Iteration guardrails.
MAX_ITERATIONS = 10_000
OVERFLOW_LIMIT = 1e150


class GateTag(Enum):
    CLASSICAL_JORGENSEN = "ClassicalJorgensen"
    WJC = "WJC"
    COROLLARY_BC = "CorollaryBC"
    COROLLARY_ONE_PLUS_BC = "CorollaryOnePlusBC"
    COROLLARY_SUM = "CorollarySum"


class VerdictTag(Enum):
    NOT_APPLICABLE = "NotApplicable"
    INCONCLUSIVE = "Inconclusive"
    ELEMENTARY_OR_NON_DISCRETE = "ElementaryOrNonDiscrete"
    ELEMENTARY = "Elementary"
    NON_DISCRETE = "NonDiscrete"


@dataclass(frozen=True)
class GateReport:
    """One inequality test.

    ``fired`` means the necessary condition for "discrete and
    non-elementary" failed, so the conclusion (elementary or
    non-discrete) is forced.  ``comparison`` is the firing rule applied
    to (lhs, bound).  ``equality`` flags |lhs - bound| within the
    equality margin; for the classical gate, where equality is allowed
    but only for elliptic or parabolic g, ``kiikka_consistent`` records
    whether the generator's class matches that constraint.
    """

    gate: GateTag
    lhs: float
    bound: float
    fired: bool
    comparison: str
    equality: bool = False
    kiikka_consistent: bool | None = None


@dataclass(frozen=True)
class Verdict:
    """Outcome of a gate run.

    NOT_APPLICABLE carries a reason (hypothesis not met).  A fired gate
    refines to ELEMENTARY when h preserves the axis of g, and to
    NON_DISCRETE otherwise; the coarse ELEMENTARY_OR_NON_DISCRETE tag
    exists for consumers that do not want the refinement.
    """

    tag: VerdictTag
    reason: str | None = None
    reports: tuple[GateReport, ...] = ()

    @property
    def fired_gates(self) -> tuple[GateReport, ...]:
        return tuple(r for r in self.reports if r.fired)


@dataclass(frozen=True)
class ChainInequality:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class ProofChainReport:
    """Numeric audit of the conjugation-step inequality ladder.

    hypothesis_holds:  |abcd|^(1/2) <= (1 - mg)/mg^2 for the input h.
    ineq11:            |a1 d1|^(1/2) <= 1/mg
    ineq12:            |b1 c1|^(1/2) <= (1 - mg)/mg
    ineq3:             mg (1 + |b1 c1|^(1/2)) <= 1
    eq4_residual:      |(lam - 1/lam)^2 (1 + |b1 c1|) - 1|; this is 0
                       only in the boundary configuration that the
                       strictness theorem rules out, so it is reported,
                       not constrained.
    trace_identity_residual: |tr^2(g) - 4 - (lam - 1/lam)^2|.

    Under hypothesis_holds the three inequalities are theorems; see
    chain_consistent.
    """

    hypothesis_holds: bool
    h1: SL2Matrix
    ineq11: ChainInequality
    ineq12: ChainInequality
    ineq3: ChainInequality
    eq4_residual: float
    trace_identity_residual: float

    @property
    def chain_consistent(self) -> bool:
        """False only on an arithmetic bug: the ladder must hold whenever
        the hypothesis does."""
        if not self.hypothesis_holds:
            return True
        return self.ineq11.holds and self.ineq12.holds and self.ineq3.holds


@dataclass(frozen=True)
class IterationStep:
    index: int
    h: SL2Matrix
    off_diag: float
    comm_defect: float


@dataclass(frozen=True)
class IterationTrace:
    """Repeated conjugation h -> h g h^-1 with growth diagnostics.

    off_diag = |b| + |c| of the step; comm_defect is the max-entry norm
    of (h g - g h), zero exactly when the step has reached an element
    commuting with g.  overflow marks truncation at the entry-magnitude
    guard.
    """

    steps: tuple[IterationStep, ...]
    overflow: bool


def _fires(lhs: float, bound: float) -> bool:
    return lhs <= bound + EQUALITY_MARGIN * max(1.0, abs(bound))


def _is_equality(lhs: float, bound: float) -> bool:
    return abs(lhs - bound) <= EQUALITY_MARGIN * max(1.0, abs(bound))


def _require_expanding(lam: complex) -> complex:
    lam = complex(lam)
    if abs(lam) <= 1:
        raise LambdaNotExpandingError(f"|lambda| = {abs(lam)} is not > 1")
    return lam


def _require_mg(lam: complex) -> float:
    mg = mg_of(lam)
    if not 0 < mg < 1:
        raise MgOutOfRangeError(mg)
    return mg


def classical_jorgensen(g: SL2Matrix, h: SL2Matrix) -> GateReport:
    """Classical trace-form gate, valid for any pair of generators.

    lhs = |tr^2(g) - 4| + |tr[g, h] - 2|; a discrete non-elementary
    group needs lhs >= 1, so the gate fires when lhs < 1.  Equality is
    attainable, but only with g elliptic or parabolic; the report flags
    an equality that contradicts that.
    """
    lhs = abs(mat2c.trace(g) ** 2 - 4) + abs(mat2c.trace(mat2c.commutator(g, h)) - 2)
    equality = abs(lhs - 1.0) <= CLASSICAL_EQ_TOL
    consistent = None
    if equality:
        consistent = classify(g) in (MoebiusClass.ELLIPTIC, MoebiusClass.PARABOLIC)
    return GateReport(
        gate=GateTag.CLASSICAL_JORGENSEN,
        lhs=lhs,
        bound=1.0,
        fired=lhs < 1.0,
        comparison="<",
        equality=equality,
        kiikka_consistent=consistent,
    )


def wjc_bound(mg: float) -> float:
    """(1 - mg)/mg^2, the generalized gate's threshold; needs 0 < mg < 1."""
    if not 0 < mg < 1:
        raise MgOutOfRangeError(mg)
    return (1 - mg) / (mg * mg)


def wjc_gate(lam: complex, h: SL2Matrix) -> Verdict:
    """Generalized gate in the diagonal frame g = diag(lam, 1/lam).

    Fires when |abcd|^(1/2) <= (1 - mg)/mg^2.  The comparison is
    non-strict by design: boundary equality is impossible for a discrete
    non-elementary group, so equality inputs get the same verdict.  A
    fired gate yields ELEMENTARY when h preserves {0, infinity} and
    NON_DISCRETE otherwise; an unfired gate is INCONCLUSIVE (the
    condition is only necessary).  mg >= 1 is NOT_APPLICABLE.
    """
    lam = _require_expanding(lam)
    mg = mg_of(lam)
    if mg >= 1:
        return Verdict(VerdictTag.NOT_APPLICABLE, reason="MgNotLessThanOne")
    bound = wjc_bound(mg)
    lhs = math.sqrt(abs(h.a * h.b * h.c * h.d))
    report = GateReport(
        gate=GateTag.WJC,
        lhs=lhs,
        bound=bound,
        fired=_fires(lhs, bound),
        comparison="<=",
        equality=_is_equality(lhs, bound),
    )
    if not report.fired:
        return Verdict(VerdictTag.INCONCLUSIVE, reports=(report,))
    tag = VerdictTag.ELEMENTARY if is_axis_preserving(h) else VerdictTag.NON_DISCRETE
    return Verdict(tag, reports=(report,))


def corollary_gates(lam: complex, h: SL2Matrix) -> list[GateReport]:
    """Companion gates on |bc| and |1 + bc| (note ad - bc = 1).

    A discrete non-elementary group satisfies all three strictly:

        |bc|^(1/2)     > (1 - mg)/mg
        |1 + bc|^(1/2) > (1 - mg)/mg
        |1 + bc| + |bc| > 2 (1 - mg)/mg^2

    so each gate fires on lhs <= bound, equality included.
    """
    _require_expanding(lam)
    mg = _require_mg(lam)
    bc = h.b * h.c
    linear = (1 - mg) / mg
    seconds = 2 * (1 - mg) / (mg * mg)
    rows = [
        (GateTag.COROLLARY_BC, math.sqrt(abs(bc)), linear),
        (GateTag.COROLLARY_ONE_PLUS_BC, math.sqrt(abs(1 + bc)), linear),
        (GateTag.COROLLARY_SUM, abs(1 + bc) + abs(bc), seconds),
    ]
    return [
        GateReport(
            gate=tag,
            lhs=lhs,
            bound=bound,
            fired=_fires(lhs, bound),
            comparison="<=",
            equality=_is_equality(lhs, bound),
        )
        for tag, lhs, bound in rows
    ]


def conjugate_step(lam: complex, h: SL2Matrix) -> SL2Matrix:
    """h g h^-1 for g = diag(lam, 1/lam), by closed form.

    Agrees with the direct triple product entrywise to machine
    precision and keeps det = 1 exactly in exact arithmetic.
    """
    lam = _require_expanding(lam)
    inv = 1 / lam
    ad = h.a * h.d
    bc = h.b * h.c
    gap = lam - inv
    return SL2Matrix(
        ad * lam - bc * inv,
        -gap * h.a * h.b,
        gap * h.c * h.d,
        ad * inv - bc * lam,
    )


def proof_chain_report(lam: complex, h: SL2Matrix) -> ProofChainReport:
    """Evaluate the inequality ladder linking h to h1 = h g h^-1."""
    lam = _require_expanding(lam)
    mg = _require_mg(lam)
    bound = wjc_bound(mg)
    lhs = math.sqrt(abs(h.a * h.b * h.c * h.d))
    h1 = conjugate_step(lam, h)
    a1d1 = abs(h1.a * h1.d)
    b1c1 = abs(h1.b * h1.c)

    def checked(lhs_val: float, rhs_val: float) -> ChainInequality:
        return ChainInequality(lhs_val, rhs_val, lhs_val <= rhs_val + CHAIN_SLACK)

    ineq11 = checked(math.sqrt(a1d1), 1 / mg)
    ineq12 = checked(math.sqrt(b1c1), (1 - mg) / mg)
    ineq3 = checked(mg * (1 + math.sqrt(b1c1)), 1.0)

    gap_sq = (lam - 1 / lam) ** 2
    g = diagonal(lam)
    return ProofChainReport(
        hypothesis_holds=_fires(lhs, bound),
        h1=h1,
        ineq11=ineq11,
        ineq12=ineq12,
        ineq3=ineq3,
        eq4_residual=abs(gap_sq * (1 + b1c1) - 1),
        trace_identity_residual=abs(mat2c.trace(g) ** 2 - 4 - gap_sq),
    )


def iterate_conjugation(lam: complex, h: SL2Matrix, n: int) -> IterationTrace:
    """Iterate h -> h g h^-1 for n steps (step 0 is h itself).

    Entries can grow doubly exponentially when the gates stay quiet; the
    trace truncates, with overflow flagged, before any entry magnitude
    exceeds OVERFLOW_LIMIT.
    """
    lam = _require_expanding(lam)
    if n < 0 or n > MAX_ITERATIONS:
        raise ValueError(f"step count {n} outside [0, {MAX_ITERATIONS}]")
    g = diagonal(lam)

    def step_of(k: int, m: SL2Matrix) -> IterationStep:
        hg = mat2c.mul(m, g)
        gh = mat2c.mul(g, m)
        defect = max(abs(x - y) for x, y in zip(hg.entries, gh.entries))
        return IterationStep(k, m, abs(m.b) + abs(m.c), defect)

    steps = [step_of(0, h)]
    overflow = False
    current = h
    for k in range(1, n + 1):
        current = conjugate_step(lam, current)
        if current.max_abs > OVERFLOW_LIMIT:
            overflow = True
            break
        steps.append(step_of(k, current))
    return IterationTrace(steps=tuple(steps), overflow=overflow)
