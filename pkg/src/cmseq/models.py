"""White-noise dynamic models realizing conditionally-Markov Gaussian laws.

A CM_c law admits a representation

    x_k = G_trans[k] x_{k-1} + G_cond[k] x_c + e_k        (forward)
    x_k = G_trans[k] x_{k+1} + G_cond[k] x_c + e_k        (backward)

driven by independent zero-mean Gaussian noises e_k with SPD covariances
G_noise[k], plus a two-term boundary recursion tying x_0 and x_N together.
The gains are Gaussian conditional-expectation coefficients of x_k on
(x_neighbor, x_c); stacking the recursions into a unit-diagonal block matrix
SG gives the model's precision A = SG' G^{-1} SG where G is the block
diagonal of noise covariances.

The model family is exactly as expressive as the CM_c class: building a model
from a law and reassembling its precision reproduces the law *iff* the law is
CM_c for the chosen conditioning side.  For any SPD input the construction
still succeeds — the result is then the CM_c member matching the input's
relevant conditionals, not the input itself.

Reciprocity and Markovness of the *model's* law are decidable directly from
the parameters: an interior gain identity for reciprocity, plus one boundary
identity ("add-on") for Markovness, checked here with scale-free residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import cho_solve

from .blocks import (
    BlockMatrix,
    ConditioningSide,
    SequenceLaw,
    Tolerance,
    cholesky_spd,
    invert_spd,
)
from .patterns import PatternSpec, allowed_support

__all__ = [
    "BoundaryCondition",
    "LawClass",
    "ForwardCmcModel",
    "BackwardCmcModel",
    "CheckResult",
    "build_forward",
    "build_backward",
    "assemble_script_g",
    "assemble_script_g_backward",
    "assemble_precision",
    "assemble_precision_backward",
    "check_reciprocity_forward",
    "check_markov_forward",
    "check_reciprocity_backward",
    "check_markov_backward",
    "model_covariance",
    "random_law",
]


class BoundaryCondition(Enum):
    """Which endpoint is drawn first by the boundary recursion."""

    BC1 = "bc1"
    BC2 = "bc2"


class LawClass(Enum):
    """Law families the fixture generator can produce."""

    MARKOV = "markov"
    RECIPROCAL = "reciprocal"
    CM_L_ONLY = "cml"
    CM_F_ONLY = "cmf"
    GENERIC = "generic"


def _check_gain_grid(name, grid, expected_keys, d):
    if set(grid.keys()) != expected_keys:
        raise ValueError(
            f"{name} keys {sorted(grid.keys())} != expected {sorted(expected_keys)}"
        )
    for k, g in grid.items():
        if np.shape(g) != (d, d):
            raise ValueError(f"{name}[{k}] has shape {np.shape(g)}, expected {(d, d)}")


@dataclass(frozen=True)
class ForwardCmcModel:
    """Forward model x_k = G_trans[k] x_{k-1} + G_cond[k] x_c + e_k.

    Gains exist for k in (0, N] except the conditioning time; noise
    covariances exist for every k.  ``boundary_gain`` closes the loop for
    c=LAST (x_N regressed on x_0 under BC1, x_0 on x_N under BC2) and is
    absent for c=FIRST, where the chain starts at x_0 = e_0 and the k=1 step
    splits its x_0 weight equally between G_trans[1] and G_cond[1].
    """

    n_last: int
    dim: int
    c: ConditioningSide
    bc: BoundaryCondition
    g_trans: dict = field(repr=False)
    g_cond: dict = field(repr=False)
    g_noise: dict = field(repr=False)
    boundary_gain: np.ndarray | None = field(default=None, repr=False)

    @property
    def c_index(self):
        return 0 if self.c is ConditioningSide.FIRST else self.n_last

    def __post_init__(self):
        n, d = self.n_last, self.dim
        if n < 1 or d < 1:
            raise ValueError("need n_last >= 1 and dim >= 1")
        if self.c is ConditioningSide.FIRST and self.bc is not BoundaryCondition.BC1:
            raise ValueError("c=FIRST admits only BC1 (the chain starts at x_0 = e_0)")
        expected = set(range(1, n + 1)) - {self.c_index}
        _check_gain_grid("g_trans", self.g_trans, expected, d)
        _check_gain_grid("g_cond", self.g_cond, expected, d)
        _check_gain_grid("g_noise", self.g_noise, set(range(n + 1)), d)
        for k in range(n + 1):
            cholesky_spd(self.g_noise[k])  # noise covariances must be SPD
        if self.c is ConditioningSide.LAST:
            if self.boundary_gain is None or np.shape(self.boundary_gain) != (d, d):
                raise ValueError("c=LAST requires a d x d boundary_gain")
        else:
            if self.boundary_gain is not None:
                raise ValueError("boundary_gain is only meaningful for c=LAST")
            if not np.allclose(self.g_trans[1], self.g_cond[1]):
                raise ValueError("c=FIRST requires the equal split G_trans[1] == G_cond[1]")


@dataclass(frozen=True)
class BackwardCmcModel:
    """Backward model x_k = G_trans[k] x_{k+1} + G_cond[k] x_c + e_k.

    Time mirror of :class:`ForwardCmcModel`: gains exist for k in [0, N)
    except the conditioning time; ``boundary_gain`` exists for c=FIRST
    (x_0 on x_N under BC1, x_N on x_0 under BC2); for c=LAST the chain
    starts at x_N = e_N and the k=N-1 step splits its weight equally.
    """

    n_last: int
    dim: int
    c: ConditioningSide
    bc: BoundaryCondition
    g_trans: dict = field(repr=False)
    g_cond: dict = field(repr=False)
    g_noise: dict = field(repr=False)
    boundary_gain: np.ndarray | None = field(default=None, repr=False)

    @property
    def c_index(self):
        return 0 if self.c is ConditioningSide.FIRST else self.n_last

    def __post_init__(self):
        n, d = self.n_last, self.dim
        if n < 1 or d < 1:
            raise ValueError("need n_last >= 1 and dim >= 1")
        if self.c is ConditioningSide.LAST and self.bc is not BoundaryCondition.BC1:
            raise ValueError("c=LAST admits only BC1 (the chain starts at x_N = e_N)")
        expected = set(range(0, n)) - {self.c_index}
        _check_gain_grid("g_trans", self.g_trans, expected, d)
        _check_gain_grid("g_cond", self.g_cond, expected, d)
        _check_gain_grid("g_noise", self.g_noise, set(range(n + 1)), d)
        for k in range(n + 1):
            cholesky_spd(self.g_noise[k])
        if self.c is ConditioningSide.FIRST:
            if self.boundary_gain is None or np.shape(self.boundary_gain) != (d, d):
                raise ValueError("c=FIRST requires a d x d boundary_gain")
        else:
            if self.boundary_gain is not None:
                raise ValueError("boundary_gain is only meaningful for c=FIRST")
            if not np.allclose(self.g_trans[n - 1], self.g_cond[n - 1]):
                raise ValueError(
                    "c=LAST requires the equal split G_trans[N-1] == G_cond[N-1]"
                )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a parameter-condition check."""

    passed: bool
    worst_ratio: float
    worst_index: int | None


def _block(mat, d, i, j):
    return mat[i * d : (i + 1) * d, j * d : (j + 1) * d]


def _regress(mat, d, target, given):
    """Gaussian conditional coefficients of x_target on the listed times.

    Returns (one d x d gain per given time, conditional covariance).
    """
    ig = np.concatenate([np.arange(t * d, (t + 1) * d) for t in given])
    it = np.arange(target * d, (target + 1) * d)
    cross = mat[np.ix_(it, ig)]
    lower = cholesky_spd(mat[np.ix_(ig, ig)])
    gains = cho_solve((lower, True), cross.T).T
    noise = mat[np.ix_(it, it)] - gains @ cross.T
    noise = (noise + noise.T) / 2.0
    return [gains[:, i * d : (i + 1) * d].copy() for i in range(len(given))], noise


def build_forward(
    law: SequenceLaw,
    c: ConditioningSide,
    bc: BoundaryCondition = BoundaryCondition.BC1,
) -> ForwardCmcModel:
    """Extract the forward model of a law for conditioning side ``c``.

    Interior gains regress x_k on (x_{k-1}, x_c); the boundary pair follows
    the chosen recursion order: for c=LAST, BC1 starts at x_0 (so x_N is
    regressed on x_0) and BC2 starts at x_N; c=FIRST always starts at x_0
    and admits only BC1.  The model reproduces ``law`` exactly iff the law
    is CM_c for this side; it is a valid model of *some* CM_c law for every
    SPD input.
    """
    n, d = law.n_last, law.dim
    mat = law.covariance.data
    g_trans, g_cond, g_noise = {}, {}, {}
    if c is ConditioningSide.LAST:
        for k in range(1, n):
            (gt, gc), noise = _regress(mat, d, k, [k - 1, n])
            g_trans[k], g_cond[k], g_noise[k] = gt, gc, noise
        c00 = _block(mat, d, 0, 0)
        cnn = _block(mat, d, n, n)
        if bc is BoundaryCondition.BC1:
            g_noise[0] = c00.copy()
            (bg,), g_noise[n] = _regress(mat, d, n, [0])
        else:
            g_noise[n] = cnn.copy()
            (bg,), g_noise[0] = _regress(mat, d, 0, [n])
        return ForwardCmcModel(n, d, c, bc, g_trans, g_cond, g_noise, bg)
    # c = FIRST: x_0 = e_0, and the k=1 step sees x_{k-1} = x_c = x_0
    if bc is not BoundaryCondition.BC1:
        raise ValueError("c=FIRST admits only BC1")
    g_noise[0] = _block(mat, d, 0, 0).copy()
    (w,), g_noise[1] = _regress(mat, d, 1, [0])
    g_trans[1] = w / 2.0
    g_cond[1] = w / 2.0
    for k in range(2, n + 1):
        (gt, gc), noise = _regress(mat, d, k, [k - 1, 0])
        g_trans[k], g_cond[k], g_noise[k] = gt, gc, noise
    return ForwardCmcModel(n, d, c, bc, g_trans, g_cond, g_noise, None)


def build_backward(
    law: SequenceLaw,
    c: ConditioningSide,
    bc: BoundaryCondition = BoundaryCondition.BC1,
) -> BackwardCmcModel:
    """Time mirror of :func:`build_forward`: x_k regressed on (x_{k+1}, x_c)."""
    n, d = law.n_last, law.dim
    mat = law.covariance.data
    g_trans, g_cond, g_noise = {}, {}, {}
    if c is ConditioningSide.FIRST:
        for k in range(1, n):
            (gt, gc), noise = _regress(mat, d, k, [k + 1, 0])
            g_trans[k], g_cond[k], g_noise[k] = gt, gc, noise
        if bc is BoundaryCondition.BC1:
            g_noise[n] = _block(mat, d, n, n).copy()
            (bg,), g_noise[0] = _regress(mat, d, 0, [n])
        else:
            g_noise[0] = _block(mat, d, 0, 0).copy()
            (bg,), g_noise[n] = _regress(mat, d, n, [0])
        return BackwardCmcModel(n, d, c, bc, g_trans, g_cond, g_noise, bg)
    # c = LAST: x_N = e_N, and the k=N-1 step sees x_{k+1} = x_c = x_N
    if bc is not BoundaryCondition.BC1:
        raise ValueError("c=LAST admits only BC1 for the backward model")
    g_noise[n] = _block(mat, d, n, n).copy()
    (w,), g_noise[n - 1] = _regress(mat, d, n - 1, [n])
    g_trans[n - 1] = w / 2.0
    g_cond[n - 1] = w / 2.0
    for k in range(0, n - 1):
        (gt, gc), noise = _regress(mat, d, k, [k + 1, n])
        g_trans[k], g_cond[k], g_noise[k] = gt, gc, noise
    return BackwardCmcModel(n, d, c, bc, g_trans, g_cond, g_noise, None)


def assemble_script_g(model: ForwardCmcModel) -> BlockMatrix:
    """The unit-diagonal stacked-recursion matrix SG of a forward model.

    Row k carries -G_trans[k] at column k-1 and -G_cond[k] at the
    conditioning column; overlapping placements add (so the c=FIRST k=1 row
    carries -2 G_trans[1] at column 0).  The boundary row carries
    -boundary_gain at the opposite endpoint.
    """
    n, d = model.n_last, model.dim
    size = (n + 1) * d
    sg = np.eye(size)
    c_idx = model.c_index
    for k in model.g_trans:
        sg[k * d : (k + 1) * d, (k - 1) * d : k * d] -= model.g_trans[k]
        sg[k * d : (k + 1) * d, c_idx * d : (c_idx + 1) * d] -= model.g_cond[k]
    if model.c is ConditioningSide.LAST:
        if model.bc is BoundaryCondition.BC1:
            sg[n * d :, 0:d] -= model.boundary_gain
        else:
            sg[0:d, n * d :] -= model.boundary_gain
    return BlockMatrix(sg, d)


def assemble_script_g_backward(model: BackwardCmcModel) -> BlockMatrix:
    """Backward counterpart of :func:`assemble_script_g` (-G_trans at k+1)."""
    n, d = model.n_last, model.dim
    size = (n + 1) * d
    sg = np.eye(size)
    c_idx = model.c_index
    for k in model.g_trans:
        sg[k * d : (k + 1) * d, (k + 1) * d : (k + 2) * d] -= model.g_trans[k]
        sg[k * d : (k + 1) * d, c_idx * d : (c_idx + 1) * d] -= model.g_cond[k]
    if model.c is ConditioningSide.FIRST:
        if model.bc is BoundaryCondition.BC1:
            sg[0:d, n * d :] -= model.boundary_gain
        else:
            sg[n * d :, 0:d] -= model.boundary_gain
    return BlockMatrix(sg, d)


def _precision_from(sg: np.ndarray, g_noise: dict, n: int, d: int) -> BlockMatrix:
    noise_inv = np.zeros_like(sg)
    for k in range(n + 1):
        noise_inv[k * d : (k + 1) * d, k * d : (k + 1) * d] = invert_spd(g_noise[k])
    a = sg.T @ noise_inv @ sg
    return BlockMatrix((a + a.T) / 2.0, d)


def assemble_precision(model: ForwardCmcModel) -> BlockMatrix:
    """Precision matrix A = SG' G^{-1} SG of the model's own law."""
    sg = assemble_script_g(model)
    return _precision_from(sg.data, model.g_noise, model.n_last, model.dim)


def assemble_precision_backward(model: BackwardCmcModel) -> BlockMatrix:
    """Backward counterpart of :func:`assemble_precision`."""
    sg = assemble_script_g_backward(model)
    return _precision_from(sg.data, model.g_noise, model.n_last, model.dim)


def model_covariance(model) -> SequenceLaw:
    """The law realized by a model: inverse of its assembled precision."""
    if isinstance(model, ForwardCmcModel):
        a = assemble_precision(model)
    elif isinstance(model, BackwardCmcModel):
        a = assemble_precision_backward(model)
    else:
        raise TypeError(f"expected a forward or backward model, got {type(model)!r}")
    return SequenceLaw(invert_spd(a.data), model.dim)


def _identity_residuals(pairs, floor=0.0):
    """Max relative gap over (lhs, rhs) identity pairs, scale-free.

    The scale is the largest norm among all sides, floored at ``floor``.
    Each residual ``lhs - rhs`` is an off-pattern block of the assembled
    precision, so callers pass the precision magnitude ``max ||G_noise^-1||``
    as the floor: identities whose sides all vanish (e.g. every conditioning
    gain is zero) then pass instead of dividing rounding noise by itself.
    """
    scale = float(floor)
    for lhs, rhs in pairs.values():
        scale = max(scale, float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)))
    worst_ratio, worst_index = 0.0, None
    if scale == 0.0:
        return worst_ratio, worst_index
    for k, (lhs, rhs) in pairs.items():
        ratio = float(np.linalg.norm(lhs - rhs)) / scale
        if ratio > worst_ratio:
            worst_ratio, worst_index = ratio, k
    return worst_ratio, worst_index


def check_reciprocity_forward(model: ForwardCmcModel, tol: Tolerance = Tolerance()) -> CheckResult:
    """Interior parameter condition for the model's law to be reciprocal.

    Checks G_noise[k]^{-1} G_cond[k] = G_trans[k+1]' G_noise[k+1]^{-1} G_cond[k+1]
    over k in {1..N-2} for c=LAST and k in {2..N-1} for c=FIRST (the literal
    interior ranges; empty ranges pass vacuously).
    """
    n = model.n_last
    ks = range(1, n - 1) if model.c is ConditioningSide.LAST else range(2, n)
    pairs = {}
    floor = 0.0
    for k in ks:
        inv_k = invert_spd(model.g_noise[k])
        inv_next = invert_spd(model.g_noise[k + 1])
        floor = max(floor, float(np.linalg.norm(inv_k)), float(np.linalg.norm(inv_next)))
        lhs = inv_k @ model.g_cond[k]
        rhs = model.g_trans[k + 1].T @ inv_next @ model.g_cond[k + 1]
        pairs[k] = (lhs, rhs)
    worst_ratio, worst_index = _identity_residuals(pairs, floor)
    return CheckResult(bool(worst_ratio <= tol.residual_tol), worst_ratio, worst_index)


def check_markov_forward(model: ForwardCmcModel, tol: Tolerance = Tolerance()) -> CheckResult:
    """Boundary add-on turning a reciprocal model into a Markov one.

    Meaningful on top of a passing :func:`check_reciprocity_forward`.  For
    c=LAST the identity ties the boundary gain to the first interior step
    (one form per bc); for c=FIRST it requires the final conditioning gain to
    vanish.  Degenerate N=1 models (no interior step) pass trivially.
    """
    n = model.n_last
    if n == 1:
        return CheckResult(True, 0.0, None)
    if model.c is ConditioningSide.LAST:
        inv_1 = invert_spd(model.g_noise[1])
        if model.bc is BoundaryCondition.BC1:
            inv_b = invert_spd(model.g_noise[n])
            lhs = inv_b @ model.boundary_gain
            rhs = model.g_cond[1].T @ inv_1 @ model.g_trans[1]
        else:
            inv_b = invert_spd(model.g_noise[0])
            lhs = inv_b @ model.boundary_gain
            rhs = model.g_trans[1].T @ inv_1 @ model.g_cond[1]
        floor = max(float(np.linalg.norm(inv_b)), float(np.linalg.norm(inv_1)))
        worst_ratio, _ = _identity_residuals({0: (lhs, rhs)}, floor)
        return CheckResult(bool(worst_ratio <= tol.residual_tol), worst_ratio, 0)
    # c = FIRST: the last step must not look back at x_0 at all
    scale = float(
        max(
            max((np.linalg.norm(g) for g in model.g_trans.values()), default=0.0),
            max((np.linalg.norm(g) for g in model.g_cond.values()), default=0.0),
        )
    )
    resid = float(np.linalg.norm(model.g_cond[n]))
    ratio = resid / scale if scale > 0 else 0.0
    return CheckResult(bool(ratio <= tol.residual_tol), ratio, n)


def check_reciprocity_backward(model: BackwardCmcModel, tol: Tolerance = Tolerance()) -> CheckResult:
    """Backward interior reciprocity condition.

    Checks G_noise[k+1]^{-1} G_cond[k+1] = G_trans[k]' G_noise[k]^{-1} G_cond[k]
    over k in {1..N-2} for c=FIRST and k in {0..N-3} for c=LAST.
    """
    n = model.n_last
    ks = range(1, n - 1) if model.c is ConditioningSide.FIRST else range(0, n - 2)
    pairs = {}
    floor = 0.0
    for k in ks:
        inv_k = invert_spd(model.g_noise[k])
        inv_next = invert_spd(model.g_noise[k + 1])
        floor = max(floor, float(np.linalg.norm(inv_k)), float(np.linalg.norm(inv_next)))
        lhs = inv_next @ model.g_cond[k + 1]
        rhs = model.g_trans[k].T @ inv_k @ model.g_cond[k]
        pairs[k] = (lhs, rhs)
    worst_ratio, worst_index = _identity_residuals(pairs, floor)
    return CheckResult(bool(worst_ratio <= tol.residual_tol), worst_ratio, worst_index)


def check_markov_backward(model: BackwardCmcModel, tol: Tolerance = Tolerance()) -> CheckResult:
    """Backward boundary add-on for Markovness (mirror of the forward one)."""
    n = model.n_last
    if n == 1:
        return CheckResult(True, 0.0, None)
    if model.c is ConditioningSide.FIRST:
        inv_1 = invert_spd(model.g_noise[n - 1])
        if model.bc is BoundaryCondition.BC1:
            inv_b = invert_spd(model.g_noise[0])
            lhs = inv_b @ model.boundary_gain
            rhs = model.g_cond[n - 1].T @ inv_1 @ model.g_trans[n - 1]
        else:
            inv_b = invert_spd(model.g_noise[n])
            lhs = inv_b @ model.boundary_gain
            rhs = model.g_trans[n - 1].T @ inv_1 @ model.g_cond[n - 1]
        floor = max(float(np.linalg.norm(inv_b)), float(np.linalg.norm(inv_1)))
        worst_ratio, _ = _identity_residuals({0: (lhs, rhs)}, floor)
        return CheckResult(bool(worst_ratio <= tol.residual_tol), worst_ratio, 0)
    # c = LAST: the first step must not look ahead to x_N at all
    scale = float(
        max(
            max((np.linalg.norm(g) for g in model.g_trans.values()), default=0.0),
            max((np.linalg.norm(g) for g in model.g_cond.values()), default=0.0),
        )
    )
    resid = float(np.linalg.norm(model.g_cond[0]))
    ratio = resid / scale if scale > 0 else 0.0
    return CheckResult(bool(ratio <= tol.residual_tol), ratio, 0)


_CLASS_CODES = {
    LawClass.MARKOV: 0,
    LawClass.RECIPROCAL: 1,
    LawClass.CM_L_ONLY: 2,
    LawClass.CM_F_ONLY: 3,
    LawClass.GENERIC: 4,
}


def _rescale_to(block, target_norm):
    norm = np.linalg.norm(block)
    if norm == 0.0:
        d = block.shape[0]
        return (target_norm / np.sqrt(d)) * np.eye(d)
    return block * (target_norm / norm)


def random_law(law_class: LawClass, n_last: int, dim: int, seed: int) -> SequenceLaw:
    """Seeded random SPD law with an exact precision sparsity class.

    Off-diagonal precision blocks on the class's support are drawn uniform in
    [-0.5, 0.5] entrywise (exact zeros elsewhere); diagonal blocks are set to
    (1 + absolute row sum) * I, making the precision strictly diagonally
    dominant hence SPD.  For the RECIPROCAL class the corner block is forced
    to norm >= 0.1 so the law is verifiably non-Markov; CM_L_ONLY /
    CM_F_ONLY likewise force a non-corner boundary block (those classes need
    n_last >= 3 to exist).  Determinism depends only on
    (law_class, n_last, dim, seed).
    """
    n, d = int(n_last), int(dim)
    if n < 2:
        raise ValueError("random_law needs n_last >= 2")
    if d < 1:
        raise ValueError("random_law needs dim >= 1")
    if law_class in (LawClass.CM_L_ONLY, LawClass.CM_F_ONLY) and n < 3:
        raise ValueError(
            f"{law_class.value} laws need n_last >= 3: at n_last = 2 every "
            "conditioning pattern is already cyclic"
        )
    if law_class is LawClass.GENERIC:
        support = {(i, j) for i in range(n + 1) for j in range(n + 1)}
    else:
        spec = {
            LawClass.MARKOV: PatternSpec.tridiagonal(n),
            LawClass.RECIPROCAL: PatternSpec.cyclic_tridiagonal(n),
            LawClass.CM_L_ONLY: PatternSpec.cm_l(n),
            LawClass.CM_F_ONLY: PatternSpec.cm_f(n),
        }[law_class]
        support = allowed_support(spec)
    rng = np.random.default_rng([_CLASS_CODES[law_class], n, d, int(seed)])
    blocks = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) in support:
                blocks[(i, j)] = rng.uniform(-0.5, 0.5, (d, d))
    if law_class is LawClass.RECIPROCAL:
        if np.linalg.norm(blocks[(0, n)]) < 0.1:
            blocks[(0, n)] = _rescale_to(blocks[(0, n)], 0.3)
    elif law_class is LawClass.CM_L_ONLY:
        keys = [(k, n) for k in range(1, n - 1)]
        if max(np.linalg.norm(blocks[k]) for k in keys) < 0.1:
            blocks[keys[0]] = _rescale_to(blocks[keys[0]], 0.3)
    elif law_class is LawClass.CM_F_ONLY:
        keys = [(0, j) for j in range(2, n)]
        if max(np.linalg.norm(blocks[k]) for k in keys) < 0.1:
            blocks[keys[0]] = _rescale_to(blocks[keys[0]], 0.3)
    size = (n + 1) * d
    a = np.zeros((size, size))
    for (i, j), b in blocks.items():
        a[i * d : (i + 1) * d, j * d : (j + 1) * d] = b
        a[j * d : (j + 1) * d, i * d : (i + 1) * d] = b.T
    for i in range(n + 1):
        row_abs = sum(
            np.abs(a[i * d : (i + 1) * d, j * d : (j + 1) * d]).sum()
            for j in range(n + 1)
            if j != i
        )
        a[i * d : (i + 1) * d, i * d : (i + 1) * d] = (1.0 + row_abs) * np.eye(d)
    return SequenceLaw(invert_spd(a), d)
