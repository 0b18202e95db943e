"""Small reference laws used by tests, demos, and the shipped example files."""

from __future__ import annotations

import numpy as np

from .blocks import SequenceLaw

__all__ = [
    "ar1_covariance",
    "ar1_law",
    "identity_law",
    "cyclic_example_precision",
    "cyclic_example_law",
    "cml_example_precision",
    "cml_example_law",
]


def ar1_covariance(n_last, a=0.5):
    """Scalar stationary AR(1) covariance, C[i, j] = a^|i-j|, unit variance."""
    idx = np.arange(n_last + 1)
    return a ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def ar1_law(n_last, a=0.5) -> SequenceLaw:
    """The scalar AR(1) law — the canonical Markov example."""
    return SequenceLaw(ar1_covariance(n_last, a), 1)


def identity_law(n_last, dim=1) -> SequenceLaw:
    """White noise: every class flag holds trivially."""
    return SequenceLaw(np.eye((n_last + 1) * dim), dim)


def cyclic_example_precision():
    """Scalar N=3 cyclic tridiagonal precision: reciprocal but not Markov.

    Diagonal 2, off-diagonal -0.5, corner -0.3.
    """
    a = 2.0 * np.eye(4)
    for i in range(3):
        a[i, i + 1] = a[i + 1, i] = -0.5
    a[0, 3] = a[3, 0] = -0.3
    return a


def cyclic_example_law() -> SequenceLaw:
    return SequenceLaw.from_precision(cyclic_example_precision(), 1)


def cml_example_precision():
    """The cyclic example plus a (1, 3) entry: conditionally Markov from the
    last time only (not reciprocal, not conditionally Markov from the first).
    """
    a = cyclic_example_precision()
    a[1, 3] = a[3, 1] = -0.2
    return a


def cml_example_law() -> SequenceLaw:
    return SequenceLaw.from_precision(cml_example_precision(), 1)
