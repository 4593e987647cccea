"""Asymptotic and permutation p-values, plus the exhaustive small-n check.

Permutation p-values condition on the graph: each of the 2^n within-pair
swaps only changes the labels, so one iteration costs a single vectorized
pass over the cross-pair edges. For n at or below the exact threshold all
2^n swaps are enumerated; beyond it, swaps are sampled with a seeded PCG64
generator and the add-one estimator (1 + #{stat >= observed}) / (1 + B) is
reported, which can never return 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import PooledIndex, ValidationError
from .graph import DisconnectedError, SimilarityGraph, build_kmst, distance_matrix
from .moments import (
    CrossPairGraph,
    NullMoments,
    census_q3,
    condition_diagnostics,
    extract_cross_pair_graph,
    null_moments,
)
from .stats import VARIANCE_FLOOR, StatisticTriple

__all__ = [
    "DEFAULT_EXACT_THRESHOLD",
    "RNG_ALGORITHM",
    "ExactTooLargeError",
    "PValueReport",
    "normal_sf",
    "chi2_2_sf",
    "asymptotic_pvalues",
    "permutation_pvalues",
    "exhaustive_edge_counts",
    "exhaustive_null_moments",
    "OracleSummary",
    "run_oracle_validation",
]

DEFAULT_EXACT_THRESHOLD = 20
RNG_ALGORITHM = "PCG64"
_CHUNK = 1 << 14


class ExactTooLargeError(ValidationError):
    """Exact enumeration was requested beyond the configured threshold."""


@dataclass(frozen=True)
class PValueReport:
    """Asymptotic and/or permutation p-values; None marks an undefined one."""

    p_m_asym: float | None = None
    p_s_asym: float | None = None
    p_g_asym: float | None = None
    p_m_perm: float | None = None
    p_s_perm: float | None = None
    p_g_perm: float | None = None
    n_permutations: int | None = None
    mode: str | None = None  # "exact" or "monte-carlo"
    seed: int | None = None
    rng_algorithm: str | None = None

    def merged_with(self, other: "PValueReport") -> "PValueReport":
        """Fill this report's unset fields from ``other``."""
        updates = {
            name: getattr(other, name)
            for name in self.__dataclass_fields__
            if getattr(self, name) is None
        }
        return replace(self, **updates)


def normal_sf(x: float) -> float:
    """Standard normal survival function P(Z >= x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def chi2_2_sf(x: float) -> float:
    """Chi-square(2 df) survival function, exp(-x/2) in closed form."""
    if x < 0:
        raise ValidationError("chi-square survival function needs x >= 0")
    return math.exp(-0.5 * x)


def asymptotic_pvalues(s: StatisticTriple) -> PValueReport:
    """Normal / chi-square tail areas for the defined statistics.

    z_m is one-sided (reject large), z_s two-sided, z_g upper chi-square.
    """
    return PValueReport(
        p_m_asym=None if s.z_m is None else normal_sf(s.z_m),
        p_s_asym=None if s.z_s is None else 2.0 * normal_sf(abs(s.z_s)),
        p_g_asym=None if s.z_g is None else chi2_2_sf(s.z_g),
    )


def _flip_layout(cross: CrossPairGraph, n: int):
    """Per-edge (pair id, side) lookups for the swap-vector representation.

    A swap vector assigns each pair a bit; bit False keeps the first-sample
    node labeled 1. A node is labeled 1 exactly when its side (0 for rows
    below n, 1 otherwise) equals its pair's bit.
    """
    u, v = cross.edges[:, 0], cross.edges[:, 1]
    return (
        np.where(u < n, u, u - n),
        u >= n,
        np.where(v < n, v, v - n),
        v >= n,
    )


def _counts_for_flips(layout, flips: np.ndarray):
    """(r1, r2) for a batch of swap vectors; one vectorized edge pass each."""
    pu, su, pv, sv = layout
    lu = flips[:, pu] == su
    lv = flips[:, pv] == sv
    r1 = (lu & lv).sum(axis=1)
    r2 = (~lu & ~lv).sum(axis=1)
    return r1.astype(np.int64), r2.astype(np.int64)


def _stat_arrays(r1, r2, moments: NullMoments):
    """Vectorized (z_m, |z_s|, z_g) with None for degenerate directions."""
    z_m = abs_z_s = z_g = None
    if moments.var_sum >= VARIANCE_FLOOR:
        z_m = (r1 + r2 - 2.0 * moments.e_r1) / math.sqrt(moments.var_sum)
    if moments.var_diff >= VARIANCE_FLOOR:
        abs_z_s = np.abs((r1 - r2) / math.sqrt(moments.var_diff))
    det = moments.var_sum * moments.var_diff / 4.0
    if det >= VARIANCE_FLOOR:
        v1 = r1 - moments.e_r1
        v2 = r2 - moments.e_r1
        z_g = (
            moments.var_r1 * (v1 * v1 + v2 * v2) - 2.0 * moments.cov_r12 * v1 * v2
        ) / det
    return z_m, abs_z_s, z_g


def _enumerated_flip_chunks(n: int):
    total = 1 << n
    step = min(total, _CHUNK)
    bits = np.arange(n, dtype=np.uint64)
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.uint64)
        yield ((codes[:, None] >> bits) & np.uint64(1)).astype(bool)


def permutation_pvalues(
    cross: CrossPairGraph,
    index: PooledIndex,
    moments: NullMoments,
    *,
    n_perm: int = 10000,
    seed: int | None = None,
    mode: str = "auto",
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
    strict: bool = False,
) -> PValueReport:
    """Permutation p-values for the observed (identity) labeling.

    ``mode`` is "exact", "monte-carlo", or "auto" (exact when n is at or
    below ``exact_threshold``). Exact mode counts swaps whose statistic is
    >= the observed one (or > with ``strict=True``) out of all 2^n.
    """
    n = index.n
    if cross.n_nodes != index.n_nodes:
        raise ValidationError("cross-pair graph does not match the pooled index")
    if mode not in ("auto", "exact", "monte-carlo"):
        raise ValidationError(f"unknown permutation mode {mode!r}")
    if mode == "auto":
        mode = "exact" if n <= exact_threshold else "monte-carlo"
    if mode == "exact" and n > exact_threshold:
        raise ExactTooLargeError(
            f"exact enumeration needs 2^{n} assignments; the threshold is "
            f"n <= {exact_threshold}"
        )
    if mode == "monte-carlo" and n_perm < 1:
        raise ValidationError("monte-carlo needs at least one permutation")

    layout = _flip_layout(cross, n) if cross.n_edges else None
    identity = np.zeros((1, n), dtype=bool)

    def batch_stats(flips):
        if layout is None:
            z = np.zeros(flips.shape[0])
            return _stat_arrays(z.astype(np.int64), z.astype(np.int64), moments)
        r1, r2 = _counts_for_flips(layout, flips)
        return _stat_arrays(r1, r2, moments)

    obs_m, obs_s, obs_g = (
        None if a is None else float(a[0]) for a in batch_stats(identity)
    )

    hits = np.zeros(3, dtype=np.int64)
    observed = (obs_m, obs_s, obs_g)

    def tally(flips):
        for slot, (stat, obs) in enumerate(zip(batch_stats(flips), observed)):
            if stat is None:
                continue
            hits[slot] += np.count_nonzero(stat > obs if strict else stat >= obs)

    if mode == "exact":
        total = 1 << n
        for flips in _enumerated_flip_chunks(n):
            tally(flips)
        denom = total
        extra = 0
    else:
        rng = np.random.default_rng(seed)
        remaining = n_perm
        while remaining > 0:
            block = min(remaining, _CHUNK)
            flips = rng.integers(0, 2, size=(block, n), dtype=np.uint8).astype(bool)
            tally(flips)
            remaining -= block
        denom = n_perm + 1
        extra = 1

    def pvalue(slot, obs):
        if obs is None:
            return None
        return (extra + int(hits[slot])) / denom

    return PValueReport(
        p_m_perm=pvalue(0, obs_m),
        p_s_perm=pvalue(1, obs_s),
        p_g_perm=pvalue(2, obs_g),
        n_permutations=(1 << n) if mode == "exact" else n_perm,
        mode=mode,
        seed=seed,
        rng_algorithm=RNG_ALGORITHM if mode == "monte-carlo" else None,
    )


def exhaustive_edge_counts(
    cross: CrossPairGraph,
    index: PooledIndex,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
):
    """(r1, r2) for every one of the 2^n swaps, in code order."""
    n = index.n
    if n > exact_threshold:
        raise ExactTooLargeError(
            f"exhaustive enumeration limited to n <= {exact_threshold}, got {n}"
        )
    if cross.n_edges == 0:
        z = np.zeros(1 << n, dtype=np.int64)
        return z, z.copy()
    layout = _flip_layout(cross, n)
    parts = [_counts_for_flips(layout, flips) for flips in _enumerated_flip_chunks(n)]
    r1 = np.concatenate([p[0] for p in parts])
    r2 = np.concatenate([p[1] for p in parts])
    return r1, r2


def exhaustive_null_moments(
    cross: CrossPairGraph,
    index: PooledIndex,
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD,
) -> NullMoments:
    """Empirical moments over the full swap set (population normalization)."""
    r1, r2 = exhaustive_edge_counts(cross, index, exact_threshold)
    r1 = r1.astype(float)
    r2 = r2.astype(float)
    e1 = r1.mean()
    var1 = float(np.mean((r1 - e1) ** 2))
    cov = float(np.mean((r1 - e1) * (r2 - r2.mean())))
    return NullMoments(
        e_r1=float(e1),
        var_r1=var1,
        cov_r12=cov,
        var_sum=float(np.var(r1 + r2)),
        var_diff=float(np.var(r1 - r2)),
    )


@dataclass(frozen=True)
class OracleSummary:
    """Result of the randomized analytic-vs-exhaustive validation sweep."""

    instances: int
    seed: int
    max_moment_error: float
    max_identity_residual: float
    census_mismatches: int
    tolerance: float

    @property
    def ok(self) -> bool:
        return (
            self.max_moment_error <= self.tolerance
            and self.max_identity_residual <= self.tolerance
            and self.census_mismatches == 0
        )


def _random_cross_pair_edges(rng: np.random.Generator, n: int) -> np.ndarray:
    """A random admissible cross-pair edge set on 2n nodes."""
    nodes = 2 * n
    iu, iv = np.triu_indices(nodes, 1)
    admissible = iv != iu + n
    iu, iv = iu[admissible], iv[admissible]
    keep = rng.random(iu.size) < rng.uniform(0.15, 0.7)
    return np.stack([iu[keep], iv[keep]], axis=1)


def run_oracle_validation(
    instances: int = 200,
    *,
    min_pairs: int = 2,
    max_pairs: int = 10,
    max_dim: int = 5,
    max_k: int = 3,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> OracleSummary:
    """Compare analytic moments with exhaustive enumeration on random inputs.

    Even-numbered instances build a k-MST on random data; odd-numbered ones
    draw a random admissible cross-pair edge set directly. Also accumulates
    the worst |z_g - z_m^2 - z_s^2| over all swaps of nondegenerate
    instances and cross-checks the pair-of-pairs census of q3.
    """
    if instances < 1:
        raise ValidationError("instance count must be positive")
    if not 1 <= min_pairs <= max_pairs:
        raise ValidationError("need 1 <= min_pairs <= max_pairs")
    if max_pairs > DEFAULT_EXACT_THRESHOLD:
        raise ExactTooLargeError(
            f"max_pairs={max_pairs} exceeds the exact threshold "
            f"{DEFAULT_EXACT_THRESHOLD}"
        )
    rng = np.random.default_rng(seed)
    max_moment_error = 0.0
    max_residual = 0.0
    census_mismatches = 0

    for i in range(instances):
        n = int(rng.integers(min_pairs, max_pairs + 1))
        index = PooledIndex(n)
        if i % 2 == 0:
            d = int(rng.integers(1, max_dim + 1))
            k = int(rng.integers(1, min(max_k, n) + 1))
            pooled = rng.standard_normal((2 * n, d))
            dist = distance_matrix(pooled)
            # Successive MSTs can run out of edges at a node on tiny inputs;
            # fall back to a sparser multiplicity instead of skipping.
            while True:
                try:
                    graph = build_kmst(dist, k)
                    break
                except DisconnectedError:
                    k -= 1
        else:
            graph = SimilarityGraph(_random_cross_pair_edges(rng, n), 2 * n)
        cross = extract_cross_pair_graph(graph, index)

        analytic = null_moments(cross, index)
        empirical = exhaustive_null_moments(cross, index)
        for field in ("e_r1", "var_r1", "cov_r12", "var_sum", "var_diff"):
            err = abs(getattr(analytic, field) - getattr(empirical, field))
            max_moment_error = max(max_moment_error, err)

        if condition_diagnostics(cross, index).q3 != census_q3(cross, index):
            census_mismatches += 1

        r1, r2 = exhaustive_edge_counts(cross, index)
        z_m, abs_z_s, z_g = _stat_arrays(r1, r2, analytic)
        if z_m is not None and abs_z_s is not None and z_g is not None:
            residual = float(np.max(np.abs(z_g - z_m**2 - abs_z_s**2)))
            max_residual = max(max_residual, residual)

    return OracleSummary(
        instances=instances,
        seed=seed,
        max_moment_error=max_moment_error,
        max_identity_residual=max_residual,
        census_mismatches=census_mismatches,
        tolerance=tolerance,
    )
