"""
Parse-rate and parse-cost aggregates.

An item counts as parsed when the parser returned an analysis within its
resource limits (``parsed`` and not ``exceeded_limit``). Over-limit items
are unparsed, counted under over_limit and kept out of the cost means.

Aggregation goes through ``ParseAggregate``, a bag of sum/count pairs that
adds up shard by shard in any order.
"""

import logging
import math
from dataclasses import dataclass, fields
from typing import Iterable, Optional, Tuple

from errors import EmptyCorpus
from profiles.models import Corpus, ItemRecord, SourceKind

debug = logging.getLogger("ergdiv")

SHORT_MAX_TOKENS = 15
LENGTH_BINS: Tuple[Tuple[int, int], ...] = ((31, 35), (36, 40), (41, 45), (46, 50))


def _is_parsed(item: ItemRecord) -> bool:
    return item.parsed and not item.exceeded_limit


def _mean(total: float, count: int) -> Optional[float]:
    return total / count if count else None


@dataclass(frozen=True)
class ParseAggregate:
    items: int = 0
    parsed: int = 0
    tokens: int = 0
    short: int = 0
    fragments: int = 0
    over_limit: int = 0
    cpu_sum: float = 0.0
    cpu_count: int = 0
    mem_sum: float = 0.0
    mem_count: int = 0

    @classmethod
    def from_items(cls, items: Iterable[ItemRecord]) -> 'ParseAggregate':
        totals = dict(items=0, parsed=0, tokens=0, short=0, fragments=0, over_limit=0, cpu_count=0, mem_count=0)
        cpu, mem = [], []
        for item in items:
            totals["items"] += 1
            totals["tokens"] += item.token_count
            totals["short"] += item.token_count <= SHORT_MAX_TOKENS
            totals["over_limit"] += item.exceeded_limit
            if not _is_parsed(item):
                continue
            totals["parsed"] += 1
            totals["fragments"] += item.fragment
            if item.cpu_seconds is not None:
                cpu.append(item.cpu_seconds)
            if item.memory_gb is not None:
                mem.append(item.memory_gb)
        totals["cpu_count"] = len(cpu)
        totals["mem_count"] = len(mem)
        return cls(cpu_sum=math.fsum(cpu), mem_sum=math.fsum(mem), **totals)

    def __add__(self, other: 'ParseAggregate') -> 'ParseAggregate':
        return ParseAggregate(**{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)})


def merge_aggregates(parts: Iterable[ParseAggregate]) -> ParseAggregate:
    total = ParseAggregate()
    for part in parts:
        total = total + part
    return total


@dataclass(frozen=True)
class ParseStats:
    name: str
    items: int
    parsed_pct: float
    mean_tokens: float
    short_pct: float
    fragment_pct: Optional[float]
    mean_cpu: Optional[float]
    mean_mem: Optional[float]
    over_limit_pct: float
    ram_limit_gb: Optional[float] = None
    year_tag: str = ""
    source_kind: SourceKind = SourceKind.HUMAN

    @classmethod
    def from_aggregate(cls, name: str, agg: ParseAggregate, ram_limit_gb: Optional[float] = None,
                       year_tag: str = "", source_kind: SourceKind = SourceKind.HUMAN) -> 'ParseStats':
        if agg.items < 1:
            raise EmptyCorpus(f"corpus '{name}' has no items", corpus=name)
        fragment_pct = _mean(100.0 * agg.fragments, agg.parsed)
        return cls(
            name=name,
            items=agg.items,
            parsed_pct=100.0 * agg.parsed / agg.items,
            mean_tokens=agg.tokens / agg.items,
            short_pct=100.0 * agg.short / agg.items,
            fragment_pct=fragment_pct,
            mean_cpu=_mean(agg.cpu_sum, agg.cpu_count),
            mean_mem=_mean(agg.mem_sum, agg.mem_count),
            over_limit_pct=100.0 * agg.over_limit / agg.items,
            ram_limit_gb=ram_limit_gb,
            year_tag=year_tag,
            source_kind=source_kind,
        )


def aggregate_stats(corpus: Corpus, ram_limit_gb: Optional[float] = None) -> ParseStats:
    """
    Table-of-parsing-statistics row for one corpus.

    Percentages of parsed, short and over-limit items are over all items;
    fragments are a share of the parsed items; cpu and memory means are over
    parsed items that carry the field and are None when none do.
    """
    if not corpus.items:
        raise EmptyCorpus(f"corpus '{corpus.name}' has no items", corpus=corpus.name)
    stats = ParseStats.from_aggregate(corpus.name, ParseAggregate.from_items(corpus.items), ram_limit_gb,
                                      corpus.year_tag, corpus.source_kind)
    debug.debug(f"Parse stats for {corpus.name}: {stats.parsed_pct:.1f}% parsed of {stats.items}")
    return stats


@dataclass(frozen=True)
class LengthBin:
    low: int
    high: int
    count: int
    mean_cpu: Optional[float]
    mean_mem: Optional[float]

    @property
    def label(self) -> str:
        return f"{self.low}-{self.high}"


@dataclass(frozen=True)
class LengthBinTable:
    name: str
    bins: Tuple[LengthBin, ...]

    @property
    def total(self) -> int:
        return sum(b.count for b in self.bins)


def bin_for(token_count: int) -> Optional[Tuple[int, int]]:
    for low, high in LENGTH_BINS:
        if low <= token_count <= high:
            return low, high
    return None


def binned_costs(corpus: Corpus) -> LengthBinTable:
    """Mean cpu/memory of parsed 31-50 token items in four fixed bins"""
    if not corpus.items:
        raise EmptyCorpus(f"corpus '{corpus.name}' has no items", corpus=corpus.name)

    members = {b: [] for b in LENGTH_BINS}
    for item in corpus.items:
        if not _is_parsed(item):
            continue
        key = bin_for(item.token_count)
        if key is not None:
            members[key].append(item)

    bins = []
    for (low, high), items in members.items():
        cpu = [i.cpu_seconds for i in items if i.cpu_seconds is not None]
        mem = [i.memory_gb for i in items if i.memory_gb is not None]
        bins.append(LengthBin(low, high, len(items), _mean(math.fsum(cpu), len(cpu)),
                              _mean(math.fsum(mem), len(mem))))
    return LengthBinTable(corpus.name, tuple(bins))


@dataclass(frozen=True)
class RelativeProfile:
    name: str
    reference: str
    length_ratio: float
    short_factor: Optional[float]
    fragment_factor: Optional[float]


def _factor(reference: Optional[float], value: Optional[float]) -> Optional[float]:
    if reference is None or value is None or value == 0:
        return None
    return reference / value


def relative_profile(stats: ParseStats, reference: ParseStats) -> RelativeProfile:
    """
    How a corpus differs from a reference corpus: ratio of mean sentence
    lengths, and by what factor the reference's share of short sentences and
    of fragments exceeds this corpus's (None when this corpus has none).
    """
    return RelativeProfile(
        name=stats.name,
        reference=reference.name,
        length_ratio=stats.mean_tokens / reference.mean_tokens if reference.mean_tokens else math.nan,
        short_factor=_factor(reference.short_pct, stats.short_pct),
        fragment_factor=_factor(reference.fragment_pct, stats.fragment_pct),
    )
