"""Sampling experiments: coefficient statistics of random Gram matrices.

Each replicate draws n i.i.d. columns, forms G = A^T A, and extracts the
sign-adjusted coefficients of its characteristic polynomial (b_i) and/or
permanental polynomial (d_i). Normalized by C(n, i), their replicate means
are compared against the exact expectations a_i and p_i via z-scores.

Two contracts shape the implementation:

* Exactness. The b_i are computed exactly at any n: the nonzero spectrum
  of the n x n Gram matrix A^T A equals that of the t x t matrix A A^T, so
  power sums of the small matrix plus Newton's identities give every b_i,
  including exact zeros past the rank. No floating-point fallback exists,
  and the report's mode field says so.
* Determinism. Replicate r uses an RNG seeded by a documented split
  (SplitMix64 of the master seed and r), and aggregation reduces replicate
  results in index order. Reports are therefore byte-identical no matter
  how many workers ran.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from random import Random

from .models import Model, moment_matrix, sample_vector
from .matrices import ExactMatrix
from .oracles import GuardExceeded, OP_BUDGET, permanental_op_cost, permanental_poly_coeffs
from .sequences import ExpectedSequence, expected_det_recursion, expected_perm_recursion
from .traces import traces_by_power

_MASK64 = (1 << 64) - 1
# Reserved stream index for the acceptance suite's single statistical retry;
# replicate streams use indices 0..reps-1 and can never collide with it.
_RETRY_INDEX = (1 << 62) + 20240801

KINDS = ("det", "perm", "both")


def derive_seed(seed: int, index: int) -> int:
    """Stream seed for a (master seed, index) pair: SplitMix64 finalizer.

    This is the documented splitting function behind replicate streams;
    serial and parallel runs draw identical samples because each replicate
    owns the stream derived from its index.
    """
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def retry_seed(seed: int) -> int:
    """Fresh master seed for the one permitted statistical retry."""
    return derive_seed(seed, _RETRY_INDEX)


@dataclass(frozen=True)
class SimulationConfig:
    model: Model
    n: int
    reps: int
    max_index: int
    kind: str
    seed: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not 0 <= self.max_index <= self.n:
            raise ValueError(f"need 0 <= max_index <= n, got {self.max_index} with n={self.n}")
        if self.kind not in KINDS:
            raise ValueError(f'kind must be one of {KINDS}, got {self.kind!r}')
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def wants_det(self) -> bool:
        return self.kind in ("det", "both")

    @property
    def wants_perm(self) -> bool:
        return self.kind in ("perm", "both")


@dataclass(frozen=True)
class CoefficientStats:
    """Aggregated statistics of one normalized coefficient across replicates."""

    index: int
    normalized_mean: float
    normalized_stddev: float | None
    exact_value: Fraction
    z_score: float | None


@dataclass(frozen=True)
class SimulationReport:
    n: int
    reps: int
    seed: int
    max_index: int
    kind: str
    mode: str
    det_stats: tuple[CoefficientStats, ...] | None
    perm_stats: tuple[CoefficientStats, ...] | None
    det_replicates: tuple[tuple[Fraction, ...], ...] | None
    perm_replicates: tuple[tuple[Fraction, ...], ...] | None

    def stats_for(self, kind: str) -> tuple[CoefficientStats, ...]:
        stats = self.det_stats if kind == "det" else self.perm_stats if kind == "perm" else None
        if stats is None:
            raise ValueError(f"report holds no {kind!r} statistics")
        return stats

    def replicates_for(self, kind: str) -> tuple[tuple[Fraction, ...], ...]:
        rows = self.det_replicates if kind == "det" else self.perm_replicates if kind == "perm" else None
        if rows is None:
            raise ValueError(f"report holds no {kind!r} replicate values")
        return rows


def sample_gram(model: Model, n: int, rng: Random) -> ExactMatrix:
    """G = A^T A for n freshly drawn columns; integer entries for count models."""
    columns = [sample_vector(model, rng) for _ in range(n)]
    return ExactMatrix.from_rows(_gram_entries(columns))


def _gram_entries(columns: list[tuple]) -> list[list]:
    n = len(columns)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ci = columns[i]
        for j in range(i, n):
            dot = sum(a * b for a, b in zip(ci, columns[j]))
            out[i][j] = dot
            out[j][i] = dot
    return out


def _elementary_from_power_sums(power_sums: list, count: int) -> list[Fraction]:
    """Newton's identities, power sums -> elementary symmetric functions."""
    elem: list[Fraction] = [Fraction(1)]
    for k in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            term = elem[k - i] * power_sums[i - 1]
            acc += term if i % 2 == 1 else -term
        elem.append(acc / k)
    return elem


def _char_coefficient_values(columns: list[tuple], max_index: int) -> tuple[Fraction, ...]:
    """b_1..b_max_index of gram(columns), exactly, at any n.

    Works on W = A A^T (t x t, t the column dimension): its power sums equal
    those of the Gram matrix, and elementary symmetric functions of a
    spectrum ignore extra zero eigenvalues, so e_k(G) = e_k(W) for k up to
    n, with e_k(W) = 0 past the rank. Cost is O(t^2 n + t^3 max_index).
    """
    if max_index == 0:
        return ()
    t = len(columns[0])
    w = [[sum(col[i] * col[j] for col in columns) for j in range(t)] for i in range(t)]
    power = w
    power_sums = [sum(power[i][i] for i in range(t))]
    for _ in range(1, max_index):
        power = [
            [sum(power[i][k] * w[k][j] for k in range(t)) for j in range(t)]
            for i in range(t)
        ]
        power_sums.append(sum(power[i][i] for i in range(t)))
    return tuple(_elementary_from_power_sums(power_sums, max_index)[1:])


def _replicate_worker(args: tuple) -> tuple[tuple[Fraction, ...] | None, tuple[Fraction, ...] | None]:
    model, n, max_index, kind, op_budget, stream_seed = args
    rng = Random(stream_seed)
    columns = [sample_vector(model, rng) for _ in range(n)]
    det_values = perm_values = None
    if kind in ("det", "both"):
        det_values = _char_coefficient_values(columns, max_index) if n else ()
    if kind in ("perm", "both"):
        g = ExactMatrix.from_rows(_gram_entries(columns)) if n else ExactMatrix(())
        perm_values = permanental_poly_coeffs(g, max_index, op_budget=op_budget)[1:]
    return det_values, perm_values


def _aggregate(
    raw_rows: list[tuple[Fraction, ...]],
    n: int,
    max_index: int,
    exact_seq: ExpectedSequence,
) -> tuple[tuple[CoefficientStats, ...], tuple[tuple[Fraction, ...], ...]]:
    reps = len(raw_rows)
    normalized = tuple(
        tuple(row[i - 1] / comb(n, i) for i in range(1, max_index + 1)) for row in raw_rows
    )
    stats = []
    for i in range(1, max_index + 1):
        values = [row[i - 1] for row in normalized]
        mean = sum(values, Fraction(0)) / reps
        exact = exact_seq[i]
        if reps > 1:
            variance = sum(((v - mean) ** 2 for v in values), Fraction(0)) / (reps - 1)
            stddev: float | None = sqrt(float(variance))
        else:
            stddev = None
        if stddev:
            z: float | None = float(mean - exact) / (stddev / sqrt(reps))
        else:
            z = None
        stats.append(
            CoefficientStats(
                index=i,
                normalized_mean=float(mean),
                normalized_stddev=stddev,
                exact_value=exact,
                z_score=z,
            )
        )
    return tuple(stats), normalized


def simulate(config: SimulationConfig, *, threads: int = 1, op_budget: int = OP_BUDGET) -> SimulationReport:
    """Run the replicates and aggregate coefficient statistics.

    The permanental op budget is checked before any sampling starts, so a
    doomed run fails immediately. ``threads`` > 1 fans replicates out to
    worker processes; the report is identical either way.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if config.wants_perm and config.max_index > 0:
        for i, cost in enumerate(permanental_op_cost(config.n, config.max_index), start=1):
            if cost > op_budget:
                raise GuardExceeded(
                    f"permanental run refused before sampling: index i = {i} at "
                    f"n = {config.n} needs ~{cost} ops, budget is {op_budget}"
                )
    work = [
        (config.model, config.n, config.max_index, config.kind, op_budget, derive_seed(config.seed, r))
        for r in range(config.reps)
    ]
    if threads == 1:
        results = [_replicate_worker(item) for item in work]
    else:
        chunk = max(1, config.reps // (threads * 4))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replicate_worker, work, chunksize=chunk))

    traces = traces_by_power(moment_matrix(config.model), config.max_index)
    det_stats = perm_stats = det_replicates = perm_replicates = None
    if config.wants_det:
        exact = expected_det_recursion(traces, config.max_index)
        det_stats, det_replicates = _aggregate(
            [r[0] for r in results], config.n, config.max_index, exact
        )
    if config.wants_perm:
        exact = expected_perm_recursion(traces, config.max_index)
        perm_stats, perm_replicates = _aggregate(
            [r[1] for r in results], config.n, config.max_index, exact
        )
    return SimulationReport(
        n=config.n,
        reps=config.reps,
        seed=config.seed,
        max_index=config.max_index,
        kind=config.kind,
        mode="exact",
        det_stats=det_stats,
        perm_stats=perm_stats,
        det_replicates=det_replicates,
        perm_replicates=perm_replicates,
    )


def stddev_trend(
    model: Model,
    n_list: list[int],
    reps: int,
    index: int,
    kind: str,
    seed: int,
    *,
    threads: int = 1,
    op_budget: int = OP_BUDGET,
) -> list[tuple[int, float]]:
    """Normalized stddev of coefficient ``index`` across increasing n.

    One simulate run per n, each on its own derived seed stream. ``kind``
    must be det or perm; a combined trajectory has no meaning here.
    """
    if kind not in ("det", "perm"):
        raise ValueError(f'trend kind must be "det" or "perm", got {kind!r}')
    if list(n_list) != sorted(set(n_list)) or not n_list:
        raise ValueError("n_list must be non-empty and strictly increasing")
    if index < 1:
        raise ValueError("coefficient index must be >= 1")
    points = []
    for n in n_list:
        config = SimulationConfig(
            model=model, n=n, reps=reps, max_index=index, kind=kind, seed=derive_seed(seed, n)
        )
        report = simulate(config, threads=threads, op_budget=op_budget)
        stddev = report.stats_for(kind)[index - 1].normalized_stddev
        points.append((n, 0.0 if stddev is None else stddev))
    return points
