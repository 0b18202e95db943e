"""JSON file schemas for laws, models, reports, and sample batches.

All files carry ``schema_version: "1"`` and are emitted with sorted keys and
2-space indentation, so identical content produces identical bytes.  Floats
use Python's shortest round-trip representation, which parses back to the
bit-identical double.  Malformed content raises :class:`SchemaError` naming
the offending field; numeric preconditions (symmetry, positive definiteness)
surface as the core error types so callers can distinguish bad files from
bad matrices.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .blocks import ConditioningSide, SequenceLaw, Tolerance
from .classify import ClassificationReport
from .models import (
    BackwardCmcModel,
    BoundaryCondition,
    ForwardCmcModel,
)
from .simulate import SampleBatch

__all__ = [
    "SchemaError",
    "SCHEMA_VERSION",
    "load_law",
    "save_law",
    "load_model",
    "save_model",
    "classification_report_dict",
    "save_batch_csv",
    "save_batch_json",
    "dump_json",
]

SCHEMA_VERSION = "1"


class SchemaError(ValueError):
    """A file does not match its schema; the message names the field."""


def dump_json(path, obj):
    """Write ``obj`` as deterministic JSON (sorted keys, trailing newline)."""
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2))
        fh.write("\n")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"file: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"file: {path} is not valid JSON: {exc}") from exc


def _require(obj, fld, kind):
    if not isinstance(obj, dict):
        raise SchemaError("file: top level must be an object")
    if fld not in obj:
        raise SchemaError(f"{fld}: missing")
    val = obj[fld]
    if kind is int:
        # bool is an int subclass; reject it explicitly
        if isinstance(val, bool) or not isinstance(val, int):
            raise SchemaError(f"{fld}: expected an integer, got {type(val).__name__}")
    elif not isinstance(val, kind):
        raise SchemaError(f"{fld}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _check_version(obj):
    version = _require(obj, "schema_version", str)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"schema_version: unsupported value {version!r}")


def _as_matrix(fld, raw, shape):
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{fld}: not a numeric array: {exc}") from exc
    if arr.shape != shape:
        raise SchemaError(f"{fld}: shape {arr.shape} != expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{fld}: contains non-finite values")
    return arr


def load_law(path) -> SequenceLaw:
    """Read a law file: covariance plus dimensions, validated SPD."""
    obj = _load_json(path)
    _check_version(obj)
    n = _require(obj, "N", int)
    d = _require(obj, "d", int)
    if n < 1 or d < 1:
        raise SchemaError("N: need N >= 1 and d >= 1")
    size = (n + 1) * d
    cov = _as_matrix("covariance", _require(obj, "covariance", list), (size, size))
    return SequenceLaw(cov, d)  # NotSymmetric / NotPositiveDefinite propagate


def save_law(path, law: SequenceLaw):
    dump_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "N": law.n_last,
            "d": law.dim,
            "covariance": law.covariance.data.tolist(),
        },
    )


def _gain_grid_to_json(grid):
    return {str(k): np.asarray(v).tolist() for k, v in sorted(grid.items())}


def _gain_grid_from_json(fld, raw, d):
    if not isinstance(raw, dict):
        raise SchemaError(f"{fld}: expected an object keyed by time index")
    grid = {}
    for key, val in raw.items():
        try:
            k = int(key)
        except ValueError as exc:
            raise SchemaError(f"{fld}: key {key!r} is not a time index") from exc
        grid[k] = _as_matrix(f"{fld}[{key}]", val, (d, d))
    return grid


def save_model(path, model):
    if isinstance(model, ForwardCmcModel):
        kind = "forward"
    elif isinstance(model, BackwardCmcModel):
        kind = "backward"
    else:
        raise TypeError(f"expected a forward or backward model, got {type(model)!r}")
    obj = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "N": model.n_last,
        "d": model.dim,
        "c": model.c.value,
        "bc": model.bc.value,
        "g_trans": _gain_grid_to_json(model.g_trans),
        "g_cond": _gain_grid_to_json(model.g_cond),
        "g_noise": _gain_grid_to_json(model.g_noise),
        "boundary_gain": None
        if model.boundary_gain is None
        else np.asarray(model.boundary_gain).tolist(),
    }
    dump_json(path, obj)


def load_model(path):
    """Read a model file into a ForwardCmcModel or BackwardCmcModel."""
    obj = _load_json(path)
    _check_version(obj)
    kind = _require(obj, "kind", str)
    if kind not in ("forward", "backward"):
        raise SchemaError(f"kind: expected 'forward' or 'backward', got {kind!r}")
    n = _require(obj, "N", int)
    d = _require(obj, "d", int)
    if n < 1 or d < 1:
        raise SchemaError("N: need N >= 1 and d >= 1")
    c_raw = _require(obj, "c", str)
    try:
        c = ConditioningSide(c_raw)
    except ValueError as exc:
        raise SchemaError(f"c: expected 'first' or 'last', got {c_raw!r}") from exc
    bc_raw = _require(obj, "bc", str)
    try:
        bc = BoundaryCondition(bc_raw)
    except ValueError as exc:
        raise SchemaError(f"bc: expected 'bc1' or 'bc2', got {bc_raw!r}") from exc
    g_trans = _gain_grid_from_json("g_trans", _require(obj, "g_trans", dict), d)
    g_cond = _gain_grid_from_json("g_cond", _require(obj, "g_cond", dict), d)
    g_noise = _gain_grid_from_json("g_noise", _require(obj, "g_noise", dict), d)
    bg_raw = obj.get("boundary_gain")
    bg = None if bg_raw is None else _as_matrix("boundary_gain", bg_raw, (d, d))
    cls = ForwardCmcModel if kind == "forward" else BackwardCmcModel
    try:
        return cls(n, d, c, bc, g_trans, g_cond, g_noise, bg)
    except ValueError as exc:
        # structural problems (bad key ranges, wrong bc combination) are
        # schema errors; SPD failures raise NotPositiveDefiniteError instead
        raise SchemaError(f"model: {exc}") from exc


def _witness_dict(witness):
    return {
        "holds": witness.conforms,
        "worst_block": None if witness.worst_block is None else list(witness.worst_block),
        "worst_ratio": witness.worst_ratio,
    }


def classification_report_dict(law: SequenceLaw, report: ClassificationReport, tol: Tolerance):
    """Plain-dict form of a classification report, ready for JSON."""
    reciprocal = _witness_dict(report.reciprocal)
    reciprocal["routes_agree"] = report.reciprocal.routes_agree
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "classification_report",
        "N": law.n_last,
        "d": law.dim,
        "zero_tol": tol.zero_tol,
        "residual_tol": tol.residual_tol,
        "markov": _witness_dict(report.markov),
        "reciprocal": reciprocal,
        "cm_l": _witness_dict(report.cm_l),
        "cm_f": _witness_dict(report.cm_f),
        "interval_cm": [
            {
                "interval": [entry.interval.lo, entry.interval.hi],
                "side": entry.side.value,
                **_witness_dict(entry.witness),
            }
            for entry in report.interval_cm
        ],
        "consistency": report.consistency,
    }


def save_batch_csv(path, batch: SampleBatch):
    """One row per (replicate, time): replicate, k, x_1..x_d.  No header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for r in range(batch.n_replicates):
            for k in range(batch.n_last + 1):
                writer.writerow(
                    [r, k] + [repr(float(v)) for v in batch.data[r, k]]
                )


def save_batch_json(path, batch: SampleBatch):
    dump_json(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "sample_batch",
            "M": batch.n_replicates,
            "N": batch.n_last,
            "d": batch.dim,
            "seed": batch.seed,
            "data": batch.data.tolist(),
        },
    )
