"""
Shannon and Simpson diversity with bootstrap / rarefaction estimates.

Replicate ``i`` of a run draws from its own generator seeded with
``SeedSequence(seed, spawn_key=(i,))``, so the replicate values depend on
nothing but ``(seed, i)``: chunks can run on any number of threads and the
estimate comes out bitwise identical.
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Iterable, Optional, Union

import numpy as np

from analysis.distributions import TypeDistribution
from errors import BadIterations, BadTargetN, EmptyDistribution
from thread_manager import ThreadManager

debug = logging.getLogger("ergdiv")

MAX_ITERATIONS = 10_000
CHUNK_SIZE = 250
SEED_MASK = (1 << 64) - 1


class Metric(Enum):
    SHANNON = "shannon"
    SIMPSON = "simpson"


class Resample(Enum):
    AUTO = "auto"
    WITH = "with"
    WITHOUT = "without"


def _counts_array(d: TypeDistribution) -> np.ndarray:
    if d.N < 1:
        raise EmptyDistribution("distribution has no tokens", corpus=d.name or None)
    return np.fromiter(d.counts.values(), dtype=np.int64, count=d.S)


def _shannon(counts: np.ndarray) -> float:
    counts = counts[counts > 0]
    p = counts / counts.sum()
    return max(0.0, float(-np.sum(p * np.log(p))))


def _simpson(counts: np.ndarray) -> float:
    p = counts / counts.sum()
    return max(0.0, float(1.0 - np.sum(p * p)))


_METRICS = {
    Metric.SHANNON: _shannon,
    Metric.SIMPSON: _simpson,
}


def shannon(d: TypeDistribution) -> float:
    """H' = -sum p ln p, in nats"""
    return _shannon(_counts_array(d))


def simpson(d: TypeDistribution) -> float:
    """D = 1 - sum p^2 (plug-in, no finite-sample correction)"""
    return _simpson(_counts_array(d))


def richness(d: TypeDistribution) -> int:
    return d.S


def common_target_n(distributions: Iterable[TypeDistribution]) -> int:
    """Rarefaction depth for a comparison: the smallest N among the distributions"""
    sizes = [d.N for d in distributions]
    if not sizes or min(sizes) < 1:
        raise EmptyDistribution("cannot rarefy to an empty distribution")
    return min(sizes)


@dataclass(frozen=True)
class DiversityEstimate:
    metric: Metric
    point: float
    boot_mean: float
    ci_low: float
    ci_high: float
    iterations: int
    target_n: int
    seed: int
    resample: Resample
    N: int
    S: int
    ci_adjusted: bool = False

    def to_row(self) -> Dict[str, object]:
        row = asdict(self)
        row["metric"] = self.metric.value
        row["resample"] = self.resample.value
        return row


def _without_replacement(resample: Resample, target_n: int, n: int) -> bool:
    if resample is Resample.AUTO:
        return target_n < n
    return resample is Resample.WITHOUT


def bootstrap_replicates(
    d: TypeDistribution,
    metric: Union[str, Metric],
    target_n: Optional[int] = None,
    iterations: int = MAX_ITERATIONS,
    seed: int = 0,
    resample: Union[str, Resample] = Resample.AUTO,
    threads: Optional[ThreadManager] = None,
) -> np.ndarray:
    """
    Metric value of every replicate, in replicate order.

    Without replacement a replicate is a multivariate hypergeometric draw
    of ``target_n`` of the N tokens; with replacement it is a multinomial
    draw of ``target_n`` tokens from the relative frequencies.

    Raises:
        BadIterations: iterations outside 1..10000
        BadTargetN: target_n outside 1..N
    """
    metric = Metric(metric)
    resample = Resample(resample)
    counts = _counts_array(d)
    n = int(counts.sum())
    target_n = n if target_n is None else int(target_n)

    if not 1 <= iterations <= MAX_ITERATIONS:
        raise BadIterations(f"iterations must be in 1..{MAX_ITERATIONS}, got {iterations}", iterations=iterations)
    if not 1 <= target_n <= n:
        raise BadTargetN(f"target_n must be in 1..{n}, got {target_n}", target_n=target_n, corpus=d.name or None)

    fn = _METRICS[metric]
    hypergeometric = _without_replacement(resample, target_n, n)
    p = counts / n
    entropy = int(seed) & SEED_MASK

    def run_chunk(bounds):
        start, stop = bounds
        values = np.empty(stop - start, dtype=np.float64)
        for offset, i in enumerate(range(start, stop)):
            rng = np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=(i,)))
            if hypergeometric:
                draw = rng.multivariate_hypergeometric(counts, target_n)
            else:
                draw = rng.multinomial(target_n, p)
            values[offset] = fn(draw)
        return values

    chunks = [(start, min(start + CHUNK_SIZE, iterations)) for start in range(0, iterations, CHUNK_SIZE)]
    if threads is None:
        parts = [run_chunk(c) for c in chunks]
    else:
        parts = threads.map_ordered(run_chunk, chunks, label=lambda c: f"replicates {c[0]}..{c[1] - 1}")
    return np.concatenate(parts)


def bootstrap_diversity(
    d: TypeDistribution,
    metric: Union[str, Metric],
    target_n: Optional[int] = None,
    iterations: int = MAX_ITERATIONS,
    seed: int = 0,
    resample: Union[str, Resample] = Resample.AUTO,
    threads: Optional[ThreadManager] = None,
) -> DiversityEstimate:
    """
    Point value on the full distribution plus the replicate mean and the
    2.5/97.5 percentile interval. ``target_n`` defaults to N.
    """
    metric = Metric(metric)
    resample = Resample(resample)
    target_n = d.N if target_n is None else int(target_n)
    values = bootstrap_replicates(d, metric, target_n, iterations, seed, resample, threads)

    ci_low, ci_high = (float(v) for v in np.percentile(values, [2.5, 97.5]))
    if values.min() == values.max():
        boot_mean = float(values[0])
    else:
        boot_mean = float(np.mean(values))

    # a few rare extreme replicates can pull the mean past a percentile bound
    adjusted = not ci_low <= boot_mean <= ci_high
    if adjusted:
        debug.warning(f"{d}: {metric.value} replicate mean {boot_mean:.6f} lies outside "
                      f"[{ci_low:.6f}, {ci_high:.6f}]; widening the interval to include it")
        ci_low, ci_high = min(ci_low, boot_mean), max(ci_high, boot_mean)

    return DiversityEstimate(
        metric=metric,
        point=_METRICS[metric](_counts_array(d)),
        boot_mean=boot_mean,
        ci_low=ci_low,
        ci_high=ci_high,
        iterations=iterations,
        target_n=target_n,
        seed=seed,
        resample=resample,
        N=d.N,
        S=d.S,
        ci_adjusted=adjusted,
    )


def max_shannon(d: TypeDistribution) -> float:
    """Upper bound ln S"""
    return math.log(d.S) if d.S else 0.0
