"""Seeded trajectory sampling from dynamic models and Monte Carlo validation.

Each replicate owns an independent, deterministically derived random
substream (PCG64 seeded from ``SeedSequence(entropy=seed, spawn_key=(r,))``),
so batches are bit-identical regardless of evaluation order, parallelism, or
how many replicates surround a given one.  Within a replicate, one standard
normal vector is consumed per time step in the model's generation order
(boundary recursion first, then the chain).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import BlockMatrix, ConditioningSide, SequenceLaw, cholesky_spd
from .models import (
    BackwardCmcModel,
    BoundaryCondition,
    ForwardCmcModel,
    model_covariance,
)

__all__ = [
    "InsufficientSamplesError",
    "SampleBatch",
    "McValidationReport",
    "sample_forward",
    "sample_backward",
    "sample_covariance",
    "mc_validate",
]


class InsufficientSamplesError(ValueError):
    """Raised when an estimate is requested from too few replicates."""


@dataclass(frozen=True)
class SampleBatch:
    """A batch of independent trajectories drawn from one model.

    ``data`` has shape (n_replicates, n_last + 1, dim); regeneration from the
    same (model, n_replicates, seed) triple is bit-identical.
    """

    n_replicates: int
    n_last: int
    dim: int
    data: np.ndarray
    seed: int

    def __post_init__(self):
        expected = (self.n_replicates, self.n_last + 1, self.dim)
        if self.data.shape != expected:
            raise ValueError(f"data shape {self.data.shape} != expected {expected}")


@dataclass(frozen=True)
class McValidationReport:
    """Entrywise comparison of a sample covariance against the model's law."""

    passed: bool
    worst_abs_dev: float
    worst_entry: tuple[int, int]
    tol_abs: float
    n_replicates: int
    seed: int


def _generation_plan(model):
    """Ordered steps (time, [(gain, source_time), ...]) realizing the model.

    The first entries are the boundary recursion in its documented draw
    order; the remaining entries walk the chain.  Consuming one noise vector
    per entry, in order, reproduces the model's law exactly.
    """
    n = model.n_last
    if isinstance(model, ForwardCmcModel):
        interior = [
            (k, [(model.g_trans[k], k - 1), (model.g_cond[k], model.c_index)])
            for k in sorted(model.g_trans)
        ]
        if model.c is ConditioningSide.LAST:
            if model.bc is BoundaryCondition.BC1:
                head = [(0, []), (n, [(model.boundary_gain, 0)])]
            else:
                head = [(n, []), (0, [(model.boundary_gain, n)])]
        else:
            head = [(0, [])]
        return head + interior
    if isinstance(model, BackwardCmcModel):
        interior = [
            (k, [(model.g_trans[k], k + 1), (model.g_cond[k], model.c_index)])
            for k in sorted(model.g_trans, reverse=True)
        ]
        if model.c is ConditioningSide.FIRST:
            if model.bc is BoundaryCondition.BC1:
                head = [(n, []), (0, [(model.boundary_gain, n)])]
            else:
                head = [(0, []), (n, [(model.boundary_gain, 0)])]
        else:
            head = [(n, [])]
        return head + interior
    raise TypeError(f"expected a forward or backward model, got {type(model)!r}")


def _sample(model, n_replicates, seed):
    n, d = model.n_last, model.dim
    m = int(n_replicates)
    if m < 0:
        raise ValueError("n_replicates must be >= 0")
    plan = _generation_plan(model)
    steps = len(plan)
    # one lower Cholesky factor per noise covariance, fixed for the model
    factors = {k: cholesky_spd(model.g_noise[k]) for k in model.g_noise}
    # phase 1: per-replicate substreams produce the standard normal draws
    z = np.empty((m, steps, d))
    for r in range(m):
        gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(r,)))
        )
        z[r] = gen.standard_normal((steps, d))
    # phase 2: propagate all replicates through the recursions at once
    data = np.zeros((m, n + 1, d))
    for pos, (t, terms) in enumerate(plan):
        x = z[:, pos, :] @ factors[t].T
        for gain, src in terms:
            x = x + data[:, src, :] @ gain.T
        data[:, t, :] = x
    data.setflags(write=False)
    return SampleBatch(m, n, d, data, int(seed))


def sample_forward(model: ForwardCmcModel, n_replicates: int, seed: int) -> SampleBatch:
    """Draw i.i.d. trajectories from a forward model.

    Generation follows the boundary order: for c=LAST, BC1 draws x_0 then
    x_N then the interior chain, BC2 draws x_N first; for c=FIRST the chain
    runs x_0, x_1, ..., x_N.

    Parameters
    ----------
    model : ForwardCmcModel
    n_replicates : int
        Number of independent trajectories.
    seed : int
        Batch seed; replicate r uses the substream spawned at key (r,).

    Returns
    -------
    SampleBatch
    """
    if not isinstance(model, ForwardCmcModel):
        raise TypeError("sample_forward needs a ForwardCmcModel")
    return _sample(model, n_replicates, seed)


def sample_backward(model: BackwardCmcModel, n_replicates: int, seed: int) -> SampleBatch:
    """Draw i.i.d. trajectories from a backward model (time-mirrored order)."""
    if not isinstance(model, BackwardCmcModel):
        raise TypeError("sample_backward needs a BackwardCmcModel")
    return _sample(model, n_replicates, seed)


def sample_covariance(batch: SampleBatch) -> BlockMatrix:
    """Zero-mean sample covariance (1/M) sum x x' of a batch.

    No mean subtraction: the laws here are zero-mean by construction.
    """
    if batch.n_replicates < 2:
        raise InsufficientSamplesError(
            f"need at least 2 replicates, got {batch.n_replicates}"
        )
    flat = batch.data.reshape(batch.n_replicates, -1)
    cov = flat.T @ flat / batch.n_replicates
    return BlockMatrix((cov + cov.T) / 2.0, batch.dim)


def mc_validate(
    model,
    n_replicates: int,
    seed: int,
    tol_abs: float,
    reference: SequenceLaw | None = None,
) -> McValidationReport:
    """Sample the model and compare the sample covariance to its law entrywise.

    ``tol_abs`` must leave statistical headroom: at least
    ``4 * sqrt(2 / n_replicates) * max diagonal entry`` of the reference
    covariance (roughly four standard errors of a variance estimate).  Pass
    ``reference`` to compare against a different law than the model's own —
    e.g. to demonstrate that a perturbed model no longer matches the
    original.
    """
    if reference is None:
        reference = model_covariance(model)
    ref = reference.covariance.data
    floor = 4.0 * np.sqrt(2.0 / n_replicates) * float(np.max(np.diag(ref)))
    if tol_abs < floor:
        raise ValueError(
            f"tol_abs = {tol_abs} is below the statistical floor {floor:.3e} "
            f"for n_replicates = {n_replicates}"
        )
    if isinstance(model, ForwardCmcModel):
        batch = sample_forward(model, n_replicates, seed)
    else:
        batch = sample_backward(model, n_replicates, seed)
    dev = np.abs(sample_covariance(batch).data - ref)
    worst_flat = int(np.argmax(dev))
    worst_entry = np.unravel_index(worst_flat, dev.shape)
    worst = float(dev[worst_entry])
    return McValidationReport(
        passed=worst <= tol_abs,
        worst_abs_dev=worst,
        worst_entry=(int(worst_entry[0]), int(worst_entry[1])),
        tol_abs=float(tol_abs),
        n_replicates=int(n_replicates),
        seed=int(seed),
    )
