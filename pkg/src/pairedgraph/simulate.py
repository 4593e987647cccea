"""Data generators and the Monte Carlo size/power harness.

A scenario draws n pairs (X_i, Y_i) whose stacked 2d-vector follows a
multivariate normal, a multivariate t with 3 degrees of freedom, or a
multivariate log-normal law, parameterized by the stacked mean (nu1, nu2)
and the block covariance [[gamma1, gamma12], [gamma12, gamma2]]. The t3
sampler is scaled so its *variance* (not its scale matrix) equals the block
covariance. Replicate r uses the independent stream default_rng([seed, r]),
so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import SingularCovarianceError, hotelling_paired
from .core import PairedSample, ValidationError, identity_assignment, pool
from .graph import build_kmst, distance_matrix
from .inference import asymptotic_pvalues
from .moments import extract_cross_pair_graph, null_moments
from .stats import count_edges, statistics

__all__ = [
    "GeneratorSpec",
    "StudyResult",
    "scalar_block_spec",
    "generate",
    "run_size_study",
    "run_power_study",
    "load_scenario",
    "run_scenario",
    "results_to_csv",
]

_FAMILIES = ("normal", "t3", "lognormal")
GRAPH_TESTS = ("z_m", "z_s", "z_g")


@dataclass(frozen=True)
class GeneratorSpec:
    """Distribution family plus stacked mean and block covariance."""

    family: str
    nu1: np.ndarray
    nu2: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma12: np.ndarray
    n: int
    d: int

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValidationError(
                f"unknown family {self.family!r}; expected one of {_FAMILIES}"
            )
        if self.n < 1 or self.d < 1:
            raise ValidationError("need n >= 1 pairs and d >= 1 dimensions")
        d = self.d
        for name in ("nu1", "nu2"):
            vec = np.asarray(getattr(self, name), dtype=float).ravel()
            if vec.size != d:
                raise ValidationError(f"{name} must have length d={d}")
            object.__setattr__(self, name, vec)
        for name in ("gamma1", "gamma2", "gamma12"):
            mat = np.asarray(getattr(self, name), dtype=float)
            if mat.shape != (d, d):
                raise ValidationError(f"{name} must be a {d}x{d} matrix")
            object.__setattr__(self, name, mat)
        # The stacked covariance must be symmetric PSD; symmetry of the whole
        # block matrix forces gamma12 itself to be symmetric.
        full = self.stacked_cov()
        if not np.allclose(full, full.T, rtol=0.0, atol=1e-12):
            raise ValidationError("block covariance is not symmetric")

    def stacked_cov(self) -> np.ndarray:
        top = np.hstack([self.gamma1, self.gamma12])
        bottom = np.hstack([self.gamma12, self.gamma2])
        return np.vstack([top, bottom])

    def stacked_mean(self) -> np.ndarray:
        return np.concatenate([self.nu1, self.nu2])

    def mean_diff_norm(self) -> float:
        """Realized ||nu1 - nu2||, for checking against a target."""
        return float(np.linalg.norm(self.nu1 - self.nu2))


def _cov_factor(spec: GeneratorSpec) -> np.ndarray:
    """A factor L with L L' equal to the stacked covariance; PSD validated."""
    full = spec.stacked_cov()
    sym = (full + full.T) / 2.0
    try:
        return np.linalg.cholesky(sym)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(sym)
        floor = -1e-10 * max(1.0, float(vals[-1]))
        if vals[0] < floor:
            raise ValidationError(
                "block covariance is not positive semi-definite "
                f"(minimum eigenvalue {vals[0]:.3e})"
            ) from None
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def scalar_block_spec(
    family: str,
    n: int,
    d: int,
    *,
    mean_diff_norm: float = 0.0,
    var1: float = 1.0,
    var2: float = 1.0,
    rho12: float = 0.6,
) -> GeneratorSpec:
    """Scenario with scalar-times-identity blocks.

    The mean difference is spread uniformly over coordinates: nu1 - nu2 =
    delta * ones with delta = mean_diff_norm / sqrt(d), so the Euclidean norm
    of the shift equals the requested target. gamma12 = rho12 *
    sqrt(var1 * var2) * I keeps the per-coordinate cross correlation at
    rho12 for any variance scaling.
    """
    eye = np.eye(d)
    delta = mean_diff_norm / math.sqrt(d)
    return GeneratorSpec(
        family=family,
        nu1=np.full(d, delta),
        nu2=np.zeros(d),
        gamma1=var1 * eye,
        gamma2=var2 * eye,
        gamma12=rho12 * math.sqrt(var1 * var2) * eye,
        n=n,
        d=d,
    )


def generate(spec: GeneratorSpec, seed) -> PairedSample:
    """Draw one paired sample; ``seed`` is anything default_rng accepts."""
    return _generate(spec, np.random.default_rng(seed), _cov_factor(spec))


def _generate(
    spec: GeneratorSpec, rng: np.random.Generator, factor: np.ndarray
) -> PairedSample:
    n, d = spec.n, spec.d
    z = rng.standard_normal((n, 2 * d))
    rows = z @ factor.T
    if spec.family == "t3":
        # variance-targeted t3: nu + L z / sqrt(w), w ~ chi2(3), E(1/w) = 1
        w = rng.chisquare(3, size=n)
        rows /= np.sqrt(w)[:, None]
    rows += spec.stacked_mean()
    if spec.family == "lognormal":
        rows = np.exp(rows)
    return PairedSample(x=rows[:, :d], y=rows[:, d:])


@dataclass(frozen=True)
class StudyResult:
    """Rejection tallies for one scenario."""

    scenario: str
    mode: str  # "size" or "power"
    replicates: int
    seed: int
    k: int
    levels: tuple[float, ...]
    rejections: dict  # test -> {level -> count}
    valid: dict  # test -> replicates where the statistic was defined
    degenerate: dict  # test -> replicates where it was not
    realized_mean_diff_norm: float

    def proportion(self, test: str, level: float) -> float:
        if self.valid[test] == 0:
            return float("nan")
        return self.rejections[test][level] / self.valid[test]

    @property
    def tests(self) -> tuple[str, ...]:
        return tuple(sorted(self.rejections))


def _run_study(
    spec: GeneratorSpec,
    replicates: int,
    k: int,
    seed: int,
    levels,
    mode: str,
    scenario: str,
    with_hotelling: bool,
) -> StudyResult:
    if replicates < 1:
        raise ValidationError("replicate count must be positive")
    levels = tuple(sorted(float(a) for a in levels))
    if not levels or any(not 0 < a <= 1 for a in levels):
        raise ValidationError("levels must lie in (0, 1]")
    tests = list(GRAPH_TESTS) + (["ht"] if with_hotelling else [])
    rejections = {t: {a: 0 for a in levels} for t in tests}
    valid = {t: 0 for t in tests}
    degenerate = {t: 0 for t in tests}
    factor = _cov_factor(spec)

    for rep in range(replicates):
        rng = np.random.default_rng([seed, rep])
        sample = _generate(spec, rng, factor)
        pooled, index = pool(sample)
        cross = extract_cross_pair_graph(
            build_kmst(distance_matrix(pooled), k), index
        )
        moments = null_moments(cross, index)
        triple = statistics(count_edges(cross, identity_assignment(index)), moments)
        pvals = asymptotic_pvalues(triple)
        for test, p in (
            ("z_m", pvals.p_m_asym),
            ("z_s", pvals.p_s_asym),
            ("z_g", pvals.p_g_asym),
        ):
            if p is None:
                degenerate[test] += 1
                continue
            valid[test] += 1
            for a in levels:
                rejections[test][a] += p <= a
        if with_hotelling:
            try:
                p = hotelling_paired(sample).p
            except SingularCovarianceError:
                degenerate["ht"] += 1
            else:
                valid["ht"] += 1
                for a in levels:
                    rejections["ht"][a] += p <= a

    return StudyResult(
        scenario=scenario,
        mode=mode,
        replicates=replicates,
        seed=seed,
        k=k,
        levels=levels,
        rejections=rejections,
        valid=valid,
        degenerate=degenerate,
        realized_mean_diff_norm=spec.mean_diff_norm(),
    )


def run_size_study(
    spec: GeneratorSpec,
    replicates: int = 1000,
    k: int = 5,
    seed: int = 0,
    levels=(0.05, 0.1),
    scenario: str = "size",
) -> StudyResult:
    """Empirical size: rejection rates of asymptotic p-values under the null."""
    if not (
        np.array_equal(spec.nu1, spec.nu2)
        and np.array_equal(spec.gamma1, spec.gamma2)
    ):
        raise ValidationError(
            "size study needs a null scenario: nu1 == nu2 and gamma1 == gamma2"
        )
    return _run_study(
        spec, replicates, k, seed, levels, "size", scenario, with_hotelling=False
    )


def run_power_study(
    spec: GeneratorSpec,
    replicates: int = 1000,
    k: int = 5,
    seed: int = 0,
    levels=(0.05, 0.1),
    scenario: str = "power",
) -> StudyResult:
    """Estimated power; includes the Hotelling baseline whenever d < n."""
    return _run_study(
        spec,
        replicates,
        k,
        seed,
        levels,
        "power",
        scenario,
        with_hotelling=spec.d < spec.n,
    )


# --- scenario files ---------------------------------------------------------

_SCENARIO_KEYS = {
    "scenario": str,
    "mode": str,
    "family": str,
    "n": int,
    "d": int,
    "mean_diff_norm": float,
    "var1": float,
    "var2": float,
    "rho12": float,
    "k": int,
    "replicates": int,
    "seed": int,
    "levels": str,
}

_SCENARIO_DEFAULTS = {
    "mean_diff_norm": 0.0,
    "var1": 1.0,
    "var2": 1.0,
    "rho12": 0.6,
    "k": 5,
    "replicates": 1000,
    "seed": 0,
    "levels": "0.05, 0.1",
}


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    spec: GeneratorSpec
    k: int
    replicates: int
    seed: int
    levels: tuple[float, ...]


def load_scenario(path) -> Scenario:
    """Parse a flat ``key = value`` scenario file."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ValidationError(f"{path}: line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in text.split("=", 1))
        if key not in _SCENARIO_KEYS:
            raise ValidationError(f"{path}: line {lineno}: invalid scenario key {key!r}")
        if key in raw:
            raise ValidationError(f"{path}: line {lineno}: duplicate key {key!r}")
        raw[key] = value

    merged = dict(_SCENARIO_DEFAULTS)
    merged.update(raw)
    for key in ("scenario", "mode", "family", "n", "d"):
        if key not in merged:
            raise ValidationError(f"{path}: missing required key {key!r}")
    try:
        values = {key: _SCENARIO_KEYS[key](val) for key, val in merged.items()}
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    if values["mode"] not in ("size", "power"):
        raise ValidationError(f"{path}: mode must be 'size' or 'power'")
    try:
        levels = tuple(float(tok) for tok in values["levels"].split(",") if tok.strip())
    except ValueError:
        raise ValidationError(f"{path}: levels must be comma-separated numbers") from None

    spec = scalar_block_spec(
        values["family"],
        values["n"],
        values["d"],
        mean_diff_norm=values["mean_diff_norm"],
        var1=values["var1"],
        var2=values["var2"],
        rho12=values["rho12"],
    )
    return Scenario(
        name=values["scenario"],
        mode=values["mode"],
        spec=spec,
        k=values["k"],
        replicates=values["replicates"],
        seed=values["seed"],
        levels=levels,
    )


def run_scenario(scenario: Scenario) -> StudyResult:
    runner = run_size_study if scenario.mode == "size" else run_power_study
    return runner(
        scenario.spec,
        replicates=scenario.replicates,
        k=scenario.k,
        seed=scenario.seed,
        levels=scenario.levels,
        scenario=scenario.name,
    )


def results_to_csv(results) -> str:
    """One CSV row per (scenario, test, level); deterministic formatting."""
    lines = [
        "scenario,mode,test,level,rejections,valid,replicates,degenerate,proportion,seed"
    ]
    for res in results:
        for test in res.tests:
            for level in res.levels:
                prop = res.proportion(test, level)
                lines.append(
                    ",".join(
                        [
                            res.scenario,
                            res.mode,
                            test,
                            format(level, ".17g"),
                            str(res.rejections[test][level]),
                            str(res.valid[test]),
                            str(res.replicates),
                            str(res.degenerate[test]),
                            format(prop, ".17g"),
                            str(res.seed),
                        ]
                    )
                )
    return "\n".join(lines) + "\n"
