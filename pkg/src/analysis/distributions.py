"""
Type frequency distributions.

A distribution pools the labels of every parsed item of a corpus (or of
several corpora) into one table of counts. Distributions are immutable;
``merge`` is the reduction used both for group pooling and for combining
shards built in parallel.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import pandas as pd

from errors import CategoryMismatch, EmptyDistribution, FilterOnConstructions, IoError, MalformedRecord
from profiles.models import UNKNOWN_LEXTYPE, Category, Corpus
from profiles.punctuation import PunctuationConfig, classify_punctuation, load_punctuation_config
from utils import write_csv

debug = logging.getLogger("ergdiv")


class PunctFilter(Enum):
    ALL = "all"
    PUNCT_ONLY = "punct_only"
    NO_PUNCT = "no_punct"


@dataclass(frozen=True)
class TypeDistribution:
    category: Category
    counts: Mapping[str, int] = field(default_factory=dict)
    source: Tuple[str, ...] = ()
    punct_filter: PunctFilter = PunctFilter.ALL

    def __post_init__(self):
        cleaned = {label: int(n) for label, n in sorted(self.counts.items()) if n}
        if any(n < 0 for n in cleaned.values()):
            raise ValueError("counts must be positive")
        object.__setattr__(self, 'counts', MappingProxyType(cleaned))

    @classmethod
    def empty(cls, category: Category, punct_filter: PunctFilter = PunctFilter.ALL,
              source: Tuple[str, ...] = ()) -> 'TypeDistribution':
        return cls(category, {}, source, punct_filter)

    @property
    def N(self) -> int:
        return sum(self.counts.values())

    @property
    def S(self) -> int:
        return len(self.counts)

    @property
    def name(self) -> str:
        return "+".join(self.source)

    def is_empty(self) -> bool:
        return not self.counts

    def __str__(self) -> str:
        return f"{self.name} {self.category.value}/{self.punct_filter.value} (N={self.N}, S={self.S})"


def build_distribution(
    corpus: Corpus,
    category: Union[str, Category],
    punct_filter: Union[str, PunctFilter] = PunctFilter.ALL,
    punct_config: Optional[PunctuationConfig] = None,
    include_unknown: bool = False,
    allow_empty: bool = False,
) -> TypeDistribution:
    """
    Count the labels of every parsed item of ``corpus``.

    Raises:
        FilterOnConstructions: a punctuation filter on construction labels
        EmptyDistribution: nothing contributes and ``allow_empty`` is False
    """
    category = Category(category)
    punct_filter = PunctFilter(punct_filter)
    if category is Category.CONSTRUCTION and punct_filter is not PunctFilter.ALL:
        raise FilterOnConstructions(
            f"filter '{punct_filter.value}' only applies to lexical types", corpus=corpus.name)
    if punct_filter is not PunctFilter.ALL and punct_config is None:
        punct_config = load_punctuation_config()

    counts: Counter = Counter()
    for item in corpus.parsed_items:
        counts.update(item.labels(category))

    if category is Category.LEXTYPE and not include_unknown:
        counts.pop(UNKNOWN_LEXTYPE, None)

    if punct_filter is not PunctFilter.ALL:
        keep_punct = punct_filter is PunctFilter.PUNCT_ONLY
        counts = Counter({label: n for label, n in counts.items()
                          if classify_punctuation(label, punct_config) == keep_punct})

    dist = TypeDistribution(category, counts, (corpus.name,), punct_filter)
    if dist.is_empty() and not allow_empty:
        raise EmptyDistribution(
            f"no parsed items contribute {category.value} labels ({punct_filter.value})", corpus=corpus.name)
    debug.debug(f"Built distribution {dist}")
    return dist


def merge(d1: TypeDistribution, d2: TypeDistribution) -> TypeDistribution:
    """Pointwise sum of two distributions over the same category and filter"""
    if d1.category is not d2.category or d1.punct_filter is not d2.punct_filter:
        raise CategoryMismatch(
            f"cannot merge {d1.category.value}/{d1.punct_filter.value} with "
            f"{d2.category.value}/{d2.punct_filter.value}",
            first=d1.name, second=d2.name)
    counts = Counter(d1.counts)
    counts.update(d2.counts)
    return TypeDistribution(d1.category, counts, d1.source + d2.source, d1.punct_filter)


def pool(distributions: Iterable[TypeDistribution]) -> TypeDistribution:
    """Fold ``merge`` over a group of distributions"""
    distributions = list(distributions)
    if not distributions:
        raise EmptyDistribution("cannot pool an empty group")
    return reduce(merge, distributions)


def relative_frequencies(d: TypeDistribution) -> Dict[str, float]:
    n = d.N
    if n < 1:
        raise EmptyDistribution("distribution has no tokens", corpus=d.name or None)
    return {label: count / n for label, count in d.counts.items()}


# =========================================================================
# CSV
# =========================================================================

def _header(d: TypeDistribution) -> str:
    return (f"# category={d.category.value},filter={d.punct_filter.value},"
            f"N={d.N},S={d.S},source={d.name}\n")


def write_distribution_csv(d: TypeDistribution, path: Union[str, Path]) -> Path:
    """``label,count`` rows sorted by label under a ``#`` provenance line"""
    frame = pd.DataFrame({"label": list(d.counts.keys()), "count": list(d.counts.values())},
                         columns=["label", "count"])
    return write_csv(frame, path, preamble=_header(d))


def read_distribution_csv(path: Union[str, Path]) -> TypeDistribution:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            first = f.readline().rstrip("\n")
        frame = pd.read_csv(path, skiprows=1, dtype={"label": str, "count": "int64"},
                            keep_default_na=False)
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}", path=str(path)) from e
    except ValueError as e:
        raise MalformedRecord(f"bad distribution rows: {e}", line=2, path=str(path)) from e

    if not first.startswith("# "):
        raise MalformedRecord("missing provenance header", line=1, path=str(path))
    meta = dict(part.split("=", 1) for part in first[2:].split(",") if "=" in part)
    try:
        category = Category(meta["category"])
        punct_filter = PunctFilter(meta["filter"])
    except (KeyError, ValueError) as e:
        raise MalformedRecord(f"bad provenance header: {first}", line=1, path=str(path)) from e

    source = tuple(s for s in meta.get("source", "").split("+") if s)
    d = TypeDistribution(category, dict(zip(frame["label"], frame["count"].tolist())), source, punct_filter)
    if "N" in meta and int(meta["N"]) != d.N:
        raise MalformedRecord(f"header says N={meta['N']} but rows sum to {d.N}", line=1, path=str(path))
    return d
