"""Edge counts for a given labeling and the three standardized statistics.

z_m targets mean alternatives (rejects for large values), z_s targets scale
alternatives (rejects for large |z_s|), and z_g is the quadratic form in
(R1, R2) combining both; whenever both directions are nondegenerate,
z_g = z_m^2 + z_s^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Assignment, ValidationError
from .moments import CrossPairGraph, NullMoments

__all__ = [
    "VARIANCE_FLOOR",
    "DegenerateNullError",
    "EdgeCounts",
    "StatisticTriple",
    "count_edges",
    "statistics",
]

# Null variances are integer multiples of 1/4, so anything below this floor
# is an exact zero up to rounding.
VARIANCE_FLOOR = 1e-12


class DegenerateNullError(RuntimeError):
    """A requested statistic has zero null variance and is undefined."""

    def __init__(self, flags: tuple[str, ...]) -> None:
        super().__init__(
            f"degenerate null for statistic(s) {', '.join(flags)}: "
            "the corresponding null variance is zero (a denser graph, for "
            "example a larger k, usually removes the degeneracy)"
        )
        self.flags = flags


@dataclass(frozen=True)
class EdgeCounts:
    """Cross-pair edges with both endpoints in sample 1 (r1) or sample 2 (r2)."""

    r1: int
    r2: int


@dataclass(frozen=True)
class StatisticTriple:
    """The three test statistics; None marks a degenerate (undefined) one."""

    z_m: float | None
    z_s: float | None
    z_g: float | None
    degenerate_flags: tuple[str, ...] = ()

    def require(self, which: str) -> float:
        """Value of statistic ``which`` in {'m', 's', 'g'}, or raise."""
        value = {"m": self.z_m, "s": self.z_s, "g": self.z_g}[which]
        if value is None:
            raise DegenerateNullError(self.degenerate_flags)
        return value


def count_edges(cross: CrossPairGraph, assignment: Assignment) -> EdgeCounts:
    """One pass over the cross-pair edges."""
    labels = assignment.labels
    if labels.size != cross.n_nodes:
        raise ValidationError(
            f"assignment has {labels.size} labels but the graph has "
            f"{cross.n_nodes} nodes"
        )
    if cross.n_edges == 0:
        return EdgeCounts(0, 0)
    lu = labels[cross.edges[:, 0]]
    lv = labels[cross.edges[:, 1]]
    r1 = int(np.count_nonzero((lu == 1) & (lv == 1)))
    r2 = int(np.count_nonzero((lu == 2) & (lv == 2)))
    return EdgeCounts(r1, r2)


def statistics(counts: EdgeCounts, moments: NullMoments) -> StatisticTriple:
    """Standardize the observed counts against the null moments.

    Statistics whose null variance vanishes are returned as None and named in
    ``degenerate_flags`` rather than silently propagating NaN.
    """
    flags = []
    var_sum = moments.var_sum
    var_diff = moments.var_diff
    det = var_sum * var_diff / 4.0  # = det(sigma_r)

    z_m = z_s = z_g = None
    if var_sum >= VARIANCE_FLOOR:
        z_m = (counts.r1 + counts.r2 - 2.0 * moments.e_r1) / math.sqrt(var_sum)
    else:
        flags.append("m")
    if var_diff >= VARIANCE_FLOOR:
        z_s = (counts.r1 - counts.r2) / math.sqrt(var_diff)
    else:
        flags.append("s")
    if det >= VARIANCE_FLOOR:
        v1 = counts.r1 - moments.e_r1
        v2 = counts.r2 - moments.e_r1
        z_g = (
            moments.var_r1 * (v1 * v1 + v2 * v2) - 2.0 * moments.cov_r12 * v1 * v2
        ) / det
    else:
        flags.append("g")
    return StatisticTriple(z_m=z_m, z_s=z_s, z_g=z_g, degenerate_flags=tuple(flags))
