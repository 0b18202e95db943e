"""Sparsity patterns of precision matrices and their detection.

Membership of a Gaussian law in the Markov / reciprocal / conditionally-Markov
families is equivalent to its precision matrix vanishing outside a specific
block-sparsity pattern:

* ``TRIDIAGONAL`` — block band ``|i - j| <= 1`` (Markov),
* ``CYCLIC_TRIDIAGONAL`` — band plus the two corner blocks ``(0, N)``,
  ``(N, 0)`` (reciprocal),
* ``CM_L`` — band plus a full last block column/row (conditioning on the last
  time),
* ``CM_F`` — band plus a full first block row/column starting at column 2
  (conditioning on the first time),
* ``CM_L_WITH_CM_F_TAIL`` — the CM_L pattern with last-column blocks kept
  only up to row ``k1``; the precision shape of laws that are CM_L and
  additionally conditionally Markov on ``[k1, N]`` from the first endpoint.

``detect`` measures how well a matrix conforms to a pattern: every block
outside the allowed support must be zero up to ``zero_tol`` relative to the
largest block norm of the matrix itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .blocks import BlockMatrix, Tolerance, symmetrize

__all__ = [
    "PatternKind",
    "PatternSpec",
    "PatternWitness",
    "allowed_support",
    "detect",
]


class PatternKind(Enum):
    TRIDIAGONAL = "tridiagonal"
    CYCLIC_TRIDIAGONAL = "cyclic_tridiagonal"
    CM_L = "cm_l"
    CM_F = "cm_f"
    CM_L_WITH_CM_F_TAIL = "cm_l_with_cm_f_tail"


@dataclass(frozen=True)
class PatternSpec:
    """A pattern kind instantiated for block indices ``0..n_last``.

    ``k1`` is meaningful only for ``CM_L_WITH_CM_F_TAIL`` (the last interior
    time whose last-column block may be nonzero) and must be None otherwise.
    """

    kind: PatternKind
    n_last: int
    k1: int | None = None

    def __post_init__(self):
        if self.n_last < 1:
            raise ValueError("n_last must be >= 1")
        if self.kind is PatternKind.CM_L_WITH_CM_F_TAIL:
            if self.k1 is None or not 0 <= self.k1 <= self.n_last:
                raise ValueError(
                    f"CM_L_WITH_CM_F_TAIL needs k1 in [0, {self.n_last}], got {self.k1}"
                )
        elif self.k1 is not None:
            raise ValueError(f"k1 is only valid for CM_L_WITH_CM_F_TAIL, got {self.k1}")

    @classmethod
    def tridiagonal(cls, n_last):
        return cls(PatternKind.TRIDIAGONAL, n_last)

    @classmethod
    def cyclic_tridiagonal(cls, n_last):
        return cls(PatternKind.CYCLIC_TRIDIAGONAL, n_last)

    @classmethod
    def cm_l(cls, n_last):
        return cls(PatternKind.CM_L, n_last)

    @classmethod
    def cm_f(cls, n_last):
        return cls(PatternKind.CM_F, n_last)

    @classmethod
    def cm_l_with_cm_f_tail(cls, n_last, k1):
        return cls(PatternKind.CM_L_WITH_CM_F_TAIL, n_last, k1)


@dataclass(frozen=True)
class PatternWitness:
    """Outcome of a pattern check.

    ``conforms`` is the verdict; ``worst_block`` and ``worst_ratio`` identify
    the largest off-pattern block (by Frobenius norm relative to the largest
    block in the matrix), or ``(None, 0.0)`` when the pattern has no
    off-pattern positions at this size.
    """

    conforms: bool
    worst_block: tuple[int, int] | None
    worst_ratio: float


def allowed_support(spec: PatternSpec) -> frozenset[tuple[int, int]]:
    """The set of block positions ``(i, j)`` a pattern allows to be nonzero."""
    n = spec.n_last
    band = {(i, j) for i in range(n + 1) for j in range(n + 1) if abs(i - j) <= 1}
    if spec.kind is PatternKind.TRIDIAGONAL:
        extra = set()
    elif spec.kind is PatternKind.CYCLIC_TRIDIAGONAL:
        extra = {(0, n), (n, 0)}
    elif spec.kind is PatternKind.CM_L:
        extra = {(k, n) for k in range(n - 1)} | {(n, k) for k in range(n - 1)}
    elif spec.kind is PatternKind.CM_F:
        extra = {(0, j) for j in range(2, n + 1)} | {(j, 0) for j in range(2, n + 1)}
    else:  # CM_L_WITH_CM_F_TAIL
        top = min(spec.k1, n - 2)
        extra = {(k, n) for k in range(top + 1)} | {(n, k) for k in range(top + 1)}
    return frozenset(band | extra)


def detect(m: BlockMatrix, spec: PatternSpec, tol: Tolerance = Tolerance()) -> PatternWitness:
    """Check whether a symmetric block matrix conforms to a sparsity pattern.

    Parameters
    ----------
    m : BlockMatrix
        Symmetric matrix (typically a precision or a Schur complement of one).
    spec : PatternSpec
        Pattern sized to the same block range (``spec.n_last ==
        m.n_blocks - 1``).
    tol : Tolerance
        ``zero_tol`` bounds the allowed relative Frobenius norm of
        off-pattern blocks.

    Returns
    -------
    PatternWitness
    """
    n_last = m.n_blocks - 1
    if spec.n_last != n_last:
        raise ValueError(
            f"pattern sized for n_last={spec.n_last} but matrix has n_last={n_last}"
        )
    symmetrize(m.data)  # raises NotSymmetricError on bad input
    support = allowed_support(spec)
    scale = m.max_block_norm()
    worst_block = None
    worst_ratio = 0.0
    for i in range(n_last + 1):
        for j in range(n_last + 1):
            if (i, j) in support:
                continue
            norm = m.block_norm(i, j)
            ratio = norm / scale if scale > 0 else 0.0
            if ratio > worst_ratio:
                worst_ratio = ratio
                worst_block = (i, j)
    return PatternWitness(worst_ratio <= tol.zero_tol, worst_block, worst_ratio)
