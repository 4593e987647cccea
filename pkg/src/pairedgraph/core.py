"""Domain types for paired multivariate samples.

Nodes are 0-based rows of the pooled matrix: rows 0..n-1 hold the first
sample, rows n..2n-1 the second, and row i is paired with row i +/- n.
User-facing messages and files report 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ValidationError",
    "PairedSample",
    "PooledIndex",
    "Assignment",
    "pool",
    "identity_assignment",
]


class ValidationError(ValueError):
    """Input violates a documented precondition."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def _check_matrix(arr, name: str) -> np.ndarray:
    mat = np.asarray(arr, dtype=float)
    if mat.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {mat.shape}")
    bad = np.argwhere(~np.isfinite(mat))
    if bad.size:
        row, col = bad[0]
        raise ValidationError(
            f"non-finite entry in {name} at row {row + 1}, column {col + 1}"
        )
    return mat


@dataclass(frozen=True)
class PairedSample:
    """n pairs of d-dimensional observations, one (x row, y row) per pair."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = _check_matrix(self.x, "x")
        y = _check_matrix(self.y, "y")
        if x.shape != y.shape:
            raise ValidationError(
                f"x and y must have identical shape, got {x.shape} and {y.shape}"
            )
        if x.shape[0] < 1:
            raise ValidationError("at least one pair is required")
        if x.shape[1] < 1:
            raise ValidationError("dimension must be at least 1")
        object.__setattr__(self, "x", _readonly(x))
        object.__setattr__(self, "y", _readonly(y))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class PooledIndex:
    """Pairing structure of the pooled matrix: node i is paired with i +/- n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError("pair count must be positive")

    @property
    def n_nodes(self) -> int:
        return 2 * self.n

    def partner(self, i: int) -> int:
        if not 0 <= i < self.n_nodes:
            raise ValidationError(f"node {i} out of range for {self.n} pairs")
        return i + self.n if i < self.n else i - self.n

    def partner_array(self) -> np.ndarray:
        """partner of every node, as one vector."""
        nodes = np.arange(self.n_nodes)
        return (nodes + self.n) % self.n_nodes


@dataclass(frozen=True)
class Assignment:
    """Sample labels (1 or 2) for every pooled node, one of each per pair."""

    labels: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int8)
        if labels.ndim != 1 or labels.size == 0 or labels.size % 2:
            raise ValidationError("labels must be a flat vector of even length")
        if not np.isin(labels, (1, 2)).all():
            raise ValidationError("labels must be 1 or 2")
        n = labels.size // 2
        if not np.array_equal(labels[:n] + labels[n:], np.full(n, 3, np.int8)):
            raise ValidationError("each pair must receive one label 1 and one label 2")
        object.__setattr__(self, "labels", _readonly(labels))

    @property
    def n(self) -> int:
        return self.labels.size // 2


def pool(sample: PairedSample) -> tuple[np.ndarray, PooledIndex]:
    """Stack the two samples into one matrix: x rows first, then y rows."""
    pooled = np.vstack([sample.x, sample.y])
    pooled.setflags(write=False)
    return pooled, PooledIndex(sample.n)


def identity_assignment(index: PooledIndex) -> Assignment:
    """The observed labeling: first n rows are sample 1, the rest sample 2."""
    return Assignment(np.repeat(np.int8([1, 2]), index.n))
