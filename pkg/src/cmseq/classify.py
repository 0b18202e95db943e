"""Sequence-class verdicts from precision structure and Schur complements.

The class lattice for zero-mean nonsingular Gaussian sequences is

    Markov  =>  reciprocal  =>  (CM_L and CM_F),

with reciprocity *equivalent* to the conjunction of the two conditional-Markov
properties.  Each class is decided by inverting the covariance and running
pattern detection; interval-restricted conditional-Markov properties reduce to
pattern detection on a Schur complement of the precision (the marginal
precision of the times inside the interval).  Reciprocity is always computed
through two independent routes (cyclic-tridiagonal pattern vs the conjunction
of CM_L and CM_F) whose agreement is part of the contract.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import (
    BlockMatrix,
    ConditioningSide,
    IndexInterval,
    Keep,
    SequenceLaw,
    Tolerance,
    schur_complement,
)
from .patterns import PatternSpec, PatternWitness, detect

__all__ = [
    "UnsupportedIntervalError",
    "ReciprocalWitness",
    "IntervalClassEntry",
    "ClassificationReport",
    "classify_cmc",
    "classify_cm_interval",
    "classify_reciprocal",
    "classify_markov",
    "verify_composition",
    "full_report",
]


class UnsupportedIntervalError(ValueError):
    """Raised for intervals not anchored at a boundary of [0, N]."""


@dataclass(frozen=True)
class ReciprocalWitness:
    """Cyclic-pattern verdict plus the cross-route agreement bit.

    ``routes_agree`` records whether the cyclic-tridiagonal detection matched
    the independent CM_L-and-CM_F conjunction; disagreement signals a
    tolerance or implementation problem, not a property of the law.
    """

    conforms: bool
    worst_block: tuple[int, int] | None
    worst_ratio: float
    routes_agree: bool


@dataclass(frozen=True)
class IntervalClassEntry:
    interval: IndexInterval
    side: ConditioningSide
    witness: PatternWitness


@dataclass(frozen=True)
class ClassificationReport:
    """All class flags for one law, with numeric witnesses.

    ``consistency`` is true when the redundant routes agree everywhere:
    reciprocal == (cm_l and cm_f), and both interval-composition routes match
    the reciprocity verdict.
    """

    markov: PatternWitness
    reciprocal: ReciprocalWitness
    cm_l: PatternWitness
    cm_f: PatternWitness
    interval_cm: tuple[IntervalClassEntry, ...]
    consistency: bool


def _cm_pattern(side: ConditioningSide, n_last: int) -> PatternSpec:
    if side is ConditioningSide.LAST:
        return PatternSpec.cm_l(n_last)
    return PatternSpec.cm_f(n_last)


def classify_cmc(law: SequenceLaw, c: ConditioningSide, tol: Tolerance = Tolerance()) -> PatternWitness:
    """Is the law conditionally Markov over all of [0, N] given endpoint ``c``?

    Holds iff the precision matrix conforms to the corresponding pattern
    (full last block column for ``c=LAST``, full first block row for
    ``c=FIRST``, on top of the tridiagonal band).
    """
    return detect(law.precision(), _cm_pattern(c, law.n_last), tol)


def _interval_precision(a: BlockMatrix, interval: IndexInterval) -> BlockMatrix:
    """Marginal precision of the times in a boundary-anchored interval."""
    n_last = a.n_blocks - 1
    if interval.hi > n_last:
        raise UnsupportedIntervalError(
            f"interval {interval} exceeds n_last={n_last}"
        )
    if interval.lo == 0 and interval.hi == n_last:
        raise UnsupportedIntervalError(
            "interval covers all times; use the full-sequence classifiers"
        )
    if interval.lo == 0:
        return schur_complement(a, interval.hi, Keep.LEADING)
    if interval.hi == n_last:
        return schur_complement(a, interval.lo, Keep.TRAILING)
    raise UnsupportedIntervalError(
        f"interval {interval} touches neither boundary; only [0,k2] and [k1,N] "
        "intervals have a marginal-precision characterization"
    )


def classify_cm_interval(
    law: SequenceLaw,
    interval: IndexInterval,
    c: ConditioningSide,
    tol: Tolerance = Tolerance(),
) -> PatternWitness:
    """Is the law conditionally Markov on a boundary-anchored interval?

    Supported intervals are ``[0, k2]`` and ``[k1, N]`` with the interior
    endpoint in ``[1, N-1]``; the marginal precision of the interval is the
    corresponding Schur complement of the full precision, and the verdict is
    its pattern detection.  Other intervals raise
    :class:`UnsupportedIntervalError`.
    """
    delta = _interval_precision(law.precision(), interval)
    return detect(delta, _cm_pattern(c, interval.hi - interval.lo), tol)


def classify_markov(law: SequenceLaw, tol: Tolerance = Tolerance()) -> PatternWitness:
    """Is the law Markov?  Holds iff the precision is block tridiagonal."""
    return detect(law.precision(), PatternSpec.tridiagonal(law.n_last), tol)


def classify_reciprocal(law: SequenceLaw, tol: Tolerance = Tolerance()) -> ReciprocalWitness:
    """Is the law reciprocal?  Holds iff the precision is cyclic tridiagonal.

    The independent conjunction route (CM_L and CM_F) is always evaluated as
    well; ``routes_agree`` reports the comparison.
    """
    a = law.precision()
    return _reciprocal_from_precision(a, law.n_last, tol)


def _reciprocal_from_precision(a: BlockMatrix, n_last: int, tol: Tolerance) -> ReciprocalWitness:
    cyc = detect(a, PatternSpec.cyclic_tridiagonal(n_last), tol)
    via_cm = (
        detect(a, PatternSpec.cm_l(n_last), tol).conforms
        and detect(a, PatternSpec.cm_f(n_last), tol).conforms
    )
    return ReciprocalWitness(
        cyc.conforms, cyc.worst_block, cyc.worst_ratio, cyc.conforms == via_cm
    )


def _boundary_intervals(n_last: int):
    """All boundary-anchored intervals with an interior endpoint."""
    prefixes = [IndexInterval(0, k2) for k2 in range(1, n_last)]
    suffixes = [IndexInterval(k1, n_last) for k1 in range(1, n_last)]
    return prefixes, suffixes


def _composition_routes(a: BlockMatrix, n_last: int, tol: Tolerance):
    """The two interval-composition characterizations of reciprocity.

    Route (i): CM on [k1, N] given the first endpoint for every k1, together
    with CM_F and CM_L over the whole range.  Route (ii) is the time mirror:
    CM on [0, k2] given the last endpoint for every k2, together with CM_L
    and CM_F.
    """
    cm_l = detect(a, PatternSpec.cm_l(n_last), tol).conforms
    cm_f = detect(a, PatternSpec.cm_f(n_last), tol).conforms
    prefixes, suffixes = _boundary_intervals(n_last)
    route_first = cm_f and cm_l
    for iv in suffixes:
        if not route_first:
            break
        w = detect(
            _interval_precision(a, iv),
            _cm_pattern(ConditioningSide.FIRST, iv.hi - iv.lo),
            tol,
        )
        route_first = route_first and w.conforms
    route_last = cm_l and cm_f
    for iv in prefixes:
        if not route_last:
            break
        w = detect(
            _interval_precision(a, iv),
            _cm_pattern(ConditioningSide.LAST, iv.hi - iv.lo),
            tol,
        )
        route_last = route_last and w.conforms
    return route_first, route_last


def verify_composition(law: SequenceLaw, tol: Tolerance = Tolerance()) -> bool:
    """Cross-check reciprocity against both interval-composition routes.

    Returns true iff the cyclic-pattern verdict, the "CM on every [k1, N]
    from the first endpoint plus CM_F plus CM_L" route, and the mirrored
    "[0, k2] from the last endpoint" route all agree.
    """
    a = law.precision()
    recip = detect(a, PatternSpec.cyclic_tridiagonal(law.n_last), tol).conforms
    route_first, route_last = _composition_routes(a, law.n_last, tol)
    return recip == route_first and recip == route_last


def full_report(law: SequenceLaw, tol: Tolerance = Tolerance()) -> ClassificationReport:
    """Evaluate every class flag, interval flags, and the consistency bit."""
    n_last = law.n_last
    a = law.precision()
    markov = detect(a, PatternSpec.tridiagonal(n_last), tol)
    reciprocal = _reciprocal_from_precision(a, n_last, tol)
    cm_l = detect(a, PatternSpec.cm_l(n_last), tol)
    cm_f = detect(a, PatternSpec.cm_f(n_last), tol)
    entries = []
    prefixes, suffixes = _boundary_intervals(n_last)
    for iv in prefixes + suffixes:
        delta = _interval_precision(a, iv)
        for side in (ConditioningSide.FIRST, ConditioningSide.LAST):
            w = detect(delta, _cm_pattern(side, iv.hi - iv.lo), tol)
            entries.append(IntervalClassEntry(iv, side, w))
    route_first, route_last = _composition_routes(a, n_last, tol)
    consistency = (
        reciprocal.routes_agree
        and reciprocal.conforms == route_first
        and reciprocal.conforms == route_last
    )
    return ClassificationReport(
        markov=markov,
        reciprocal=reciprocal,
        cm_l=cm_l,
        cm_f=cm_f,
        interval_cm=tuple(entries),
        consistency=consistency,
    )
