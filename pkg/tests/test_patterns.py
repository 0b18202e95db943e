"""Block-sparsity patterns of precision matrices and their detection."""

import numpy as np
import pytest

from cmseq import (
    BlockMatrix,
    NotSymmetricError,
    PatternKind,
    PatternSpec,
    Tolerance,
    allowed_support,
    detect,
)


def band(n):
    return {(i, j) for i in range(n + 1) for j in range(n + 1) if abs(i - j) <= 1}


def full(n):
    return {(i, j) for i in range(n + 1) for j in range(n + 1)}


def test_support_sets_small_cases():
    assert allowed_support(PatternSpec.tridiagonal(2)) == band(2)
    assert allowed_support(PatternSpec.cyclic_tridiagonal(3)) == band(3) | {(0, 3), (3, 0)}
    assert allowed_support(PatternSpec.cm_l(4)) == band(4) | {
        (0, 4), (4, 0), (1, 4), (4, 1), (2, 4), (4, 2),
    }
    assert allowed_support(PatternSpec.cm_f(4)) == band(4) | {
        (0, 2), (2, 0), (0, 3), (3, 0), (0, 4), (4, 0),
    }


def test_every_pattern_fills_up_at_two_steps():
    # with three times there is no room to distinguish the classes beyond
    # Markov: one extra corner block already completes the matrix
    for spec in (
        PatternSpec.cyclic_tridiagonal(2),
        PatternSpec.cm_l(2),
        PatternSpec.cm_f(2),
        PatternSpec.cm_l_with_cm_f_tail(2, 1),
    ):
        assert allowed_support(spec) == full(2)
    assert allowed_support(PatternSpec.tridiagonal(2)) != full(2)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_conditioning_pattern_intersection_is_cyclic(n):
    """The overlap of the two one-sided conditioning patterns is exactly the
    cyclic band — the support-level face of the class identity
    reciprocal == (conditionally Markov from the last) and (from the first)."""
    cm_l = allowed_support(PatternSpec.cm_l(n))
    cm_f = allowed_support(PatternSpec.cm_f(n))
    cyc = allowed_support(PatternSpec.cyclic_tridiagonal(n))
    assert cm_l & cm_f == cyc
    tri = allowed_support(PatternSpec.tridiagonal(n))
    assert tri < cyc < cm_l
    assert cyc < cm_f


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tail_pattern_interpolates(n):
    """The tail pattern walks monotonically from cyclic (k1=0, nothing below
    the corner survives in the last column) up to the full one-sided
    conditioning pattern (k1 >= n-2)."""
    tails = [allowed_support(PatternSpec.cm_l_with_cm_f_tail(n, k1)) for k1 in range(n)]
    for lo, hi in zip(tails, tails[1:]):
        assert lo <= hi
    assert tails[0] == allowed_support(PatternSpec.cyclic_tridiagonal(n))
    assert tails[-1] == allowed_support(PatternSpec.cm_l(n))


def test_pattern_spec_validation():
    with pytest.raises(ValueError):
        PatternSpec.cm_l_with_cm_f_tail(4, 5)
    with pytest.raises(ValueError):
        PatternSpec.cm_l_with_cm_f_tail(4, None)
    with pytest.raises(ValueError):
        PatternSpec(PatternKind.TRIDIAGONAL, 3, k1=1)
    with pytest.raises(ValueError):
        PatternSpec.tridiagonal(0)


def matrix_with_support(n, support, coupling=-0.31):
    m = np.zeros((n + 1, n + 1))
    for i, j in support:
        if i != j:
            m[i, j] = coupling
    np.fill_diagonal(m, np.abs(m).sum(axis=1) + 1.0)
    return BlockMatrix(m, 1)


@pytest.mark.parametrize(
    "spec",
    [
        PatternSpec.tridiagonal(5),
        PatternSpec.cyclic_tridiagonal(5),
        PatternSpec.cm_l(5),
        PatternSpec.cm_f(5),
        PatternSpec.cm_l_with_cm_f_tail(5, 2),
    ],
)
def test_detect_accepts_exact_support_and_flags_violations(spec):
    m = matrix_with_support(5, allowed_support(spec))
    assert detect(m, spec).conforms

    # an off-pattern block well above zero_tol must be caught and located
    off = sorted(set((i, j) for i in range(6) for j in range(6)) - allowed_support(spec))
    i, j = off[len(off) // 2]
    data = m.data.copy()
    data[i, j] = data[j, i] = 1e-5
    w = detect(BlockMatrix(data, 1), spec)
    assert not w.conforms
    assert w.worst_block in ((i, j), (j, i))
    assert w.worst_ratio > 1e-9


def test_detect_ratio_is_relative_to_largest_block():
    spec = PatternSpec.tridiagonal(3)
    m = matrix_with_support(3, allowed_support(spec)).data.copy()
    m[0, 2] = m[2, 0] = 1e-5
    w_small = detect(BlockMatrix(m, 1), spec)
    w_big = detect(BlockMatrix(1000.0 * m, 1), spec)
    assert w_small.worst_ratio == pytest.approx(w_big.worst_ratio, rel=1e-12)
    assert not w_small.conforms

    # same matrix, looser threshold: the verdict flips but the witness stays
    loose = detect(BlockMatrix(m, 1), spec, Tolerance(zero_tol=1e-2))
    assert loose.conforms
    assert loose.worst_block == w_small.worst_block


def test_detect_validates_input():
    spec = PatternSpec.tridiagonal(3)
    with pytest.raises(ValueError):
        detect(BlockMatrix(np.eye(3), 1), spec)  # 3 blocks, spec wants 4
    asym = np.eye(4)
    asym[0, 3] = 0.5
    with pytest.raises(NotSymmetricError):
        detect(BlockMatrix(asym, 1), spec)


def test_detect_block_granularity():
    """With d=2 the unit of sparsity is the 2x2 block: one stray scalar in an
    off-pattern block is a violation of the whole block."""
    spec = PatternSpec.tridiagonal(2)
    m = np.zeros((6, 6))
    np.fill_diagonal(m, 2.0)
    m[0, 5] = m[5, 0] = 0.7  # scalar inside block (0, 2)
    w = detect(BlockMatrix(m, 2), spec)
    assert not w.conforms
    assert w.worst_block in ((0, 2), (2, 0))
