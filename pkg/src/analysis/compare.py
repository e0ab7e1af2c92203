"""
Distinctive-type ranking between two corpora or pooled groups.

With the ``jsd`` statistic every label of the union support gets

    c(t) = 1/2 p1 ln(p1/m) + 1/2 p2 ln(p2/m),   m = (p1 + p2) / 2

and the c(t) add up to the Jensen-Shannon divergence of the two
distributions. ``freq-delta`` uses c(t) = 1/2 |p1 - p2| instead, which adds
up to the total variation distance.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from analysis.distributions import PunctFilter, TypeDistribution, relative_frequencies
from errors import BadTopK, CategoryMismatch, UnknownLabel
from profiles.models import Category, Corpus

debug = logging.getLogger("ergdiv")

LN2 = math.log(2.0)


class Statistic(Enum):
    JSD = "jsd"
    FREQ_DELTA = "freq-delta"


class PreferredBy(Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class TypeContribution:
    label: str
    contribution: float
    preferred_by: PreferredBy
    p_first: float
    p_second: float
    tie: bool = False


@dataclass(frozen=True)
class ComparisonReport:
    first_name: str
    second_name: str
    category: Category
    punct_filter: PunctFilter
    statistic: Statistic
    total: float
    contributions: Tuple[TypeContribution, ...]
    top_k: int

    @property
    def total_jsd(self) -> float:
        return self.total

    @property
    def ranked(self) -> Tuple[TypeContribution, ...]:
        return self.contributions[:self.top_k]

    def preferred_name(self, contribution: TypeContribution) -> str:
        if contribution.preferred_by is PreferredBy.FIRST:
            return self.first_name
        return self.second_name


def _check_compatible(d1: TypeDistribution, d2: TypeDistribution) -> None:
    if d1.category is not d2.category or d1.punct_filter is not d2.punct_filter:
        raise CategoryMismatch(
            f"cannot compare {d1.category.value}/{d1.punct_filter.value} with "
            f"{d2.category.value}/{d2.punct_filter.value}",
            first=d1.name, second=d2.name)


def _aligned(d1: TypeDistribution, d2: TypeDistribution) -> Tuple[List[str], List[float], List[float]]:
    _check_compatible(d1, d2)
    p1 = relative_frequencies(d1)
    p2 = relative_frequencies(d2)
    labels = sorted(set(p1) | set(p2))
    return labels, [p1.get(t, 0.0) for t in labels], [p2.get(t, 0.0) for t in labels]


def _entropy(ps) -> float:
    return -math.fsum(p * math.log(p) for p in ps if p > 0.0)


def _xlogx_over(p: float, m: float) -> float:
    # 0 ln(0/m) := 0
    return p * math.log(p / m) if p > 0.0 else 0.0


def jsd(d1: TypeDistribution, d2: TypeDistribution) -> float:
    """
    Jensen-Shannon divergence in nats, mixture weight 1/2, clamped to [0, ln 2].

    Raises:
        CategoryMismatch: different category or punctuation filter
        EmptyDistribution: either side has no tokens
    """
    _, p1, p2 = _aligned(d1, d2)
    mix = [(a + b) / 2.0 for a, b in zip(p1, p2)]
    value = _entropy(mix) - (_entropy(p1) + _entropy(p2)) / 2.0
    return min(max(value, 0.0), LN2)


def _contributions(statistic: Statistic, labels, p1, p2) -> Dict[str, float]:
    result = {}
    for label, a, b in zip(labels, p1, p2):
        if statistic is Statistic.JSD:
            m = (a + b) / 2.0
            value = 0.5 * _xlogx_over(a, m) + 0.5 * _xlogx_over(b, m)
        else:
            value = 0.5 * abs(a - b)
        result[label] = max(value, 0.0)
    return result


def rank_distinctive(
    d1: TypeDistribution,
    d2: TypeDistribution,
    top_k: int = 10,
    statistic: Union[str, Statistic] = Statistic.JSD,
    first_name: Optional[str] = None,
    second_name: Optional[str] = None,
) -> ComparisonReport:
    """
    Per-label contributions sorted by contribution descending, ties broken by
    label. Every label of the union support is kept in ``contributions``;
    ``ranked`` is the top_k slice.
    """
    statistic = Statistic(statistic)
    if top_k < 1:
        raise BadTopK(f"top_k must be >= 1, got {top_k}", top_k=top_k)

    labels, p1, p2 = _aligned(d1, d2)
    values = _contributions(statistic, labels, p1, p2)

    contributions = []
    ties = 0
    for label, a, b in zip(labels, p1, p2):
        tie = a == b
        ties += tie
        contributions.append(TypeContribution(
            label=label,
            contribution=values[label],
            preferred_by=PreferredBy.FIRST if a >= b else PreferredBy.SECOND,
            p_first=a,
            p_second=b,
            tie=tie,
        ))
    contributions.sort(key=lambda c: (-c.contribution, c.label))

    if statistic is Statistic.JSD:
        total = jsd(d1, d2)
    else:
        total = math.fsum(values.values())

    report = ComparisonReport(
        first_name=first_name or d1.name,
        second_name=second_name or d2.name,
        category=d1.category,
        punct_filter=d1.punct_filter,
        statistic=statistic,
        total=total,
        contributions=tuple(contributions),
        top_k=top_k,
    )
    if ties:
        debug.debug(f"{report.first_name} vs {report.second_name}: {ties} labels with equal frequency")
    debug.info(f"Compared {report.first_name} vs {report.second_name} "
               f"({d1.category.value}/{d1.punct_filter.value}): {statistic.value} = {total:.6f}")
    return report


def find_examples(corpus: Corpus, label: str, category: Union[str, Category], k: int = 3) -> List[str]:
    """
    Up to ``k`` sentences whose label multiset contains ``label``, shortest
    first, then by id.

    Raises:
        BadTopK: k < 1
        UnknownLabel: no item of the corpus carries the label
    """
    category = Category(category)
    if k < 1:
        raise BadTopK(f"k must be >= 1, got {k}", k=k)

    matches = [item for item in corpus.items if label in item.labels(category)]
    if not matches:
        raise UnknownLabel(f"label '{label}' does not occur in {corpus.name}", label=label, corpus=corpus.name)
    matches.sort(key=lambda item: (item.token_count, item.id))
    return [item.sentence for item in matches[:k]]
