"""
Profile Data Models

Dataclasses for parsed corpora: item records, derivation trees, the
entry -> lexical type map and the corpus container. All of them are frozen;
once loaded a corpus can be shared freely between threads.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

UNKNOWN_LEXTYPE = "__unknown_lextype__"


# ============================================================================
# Enums
# ============================================================================

class SourceKind(Enum):
    """Who wrote the corpus"""
    HUMAN = "human"
    LLM = "llm"


class Category(Enum):
    """Which label multiset a distribution is built from"""
    CONSTRUCTION = "construction"
    LEXTYPE = "lextype"


class CorpusFormat(Enum):
    """On-disk formats accepted by load_corpus"""
    JSONL = "jsonl"
    DERIVATIONS = "derivations+lexicon"


# ============================================================================
# Item records
# ============================================================================

@dataclass(frozen=True)
class ItemRecord:
    """One sentence with its parse outcome, labels and resource costs"""
    id: str
    sentence: str
    token_count: int
    parsed: bool
    fragment: bool = False
    exceeded_limit: bool = False
    cpu_seconds: Optional[float] = None
    memory_gb: Optional[float] = None
    construction_labels: Tuple[str, ...] = ()
    lextype_labels: Tuple[str, ...] = ()

    def labels(self, category: Category) -> Tuple[str, ...]:
        if category is Category.CONSTRUCTION:
            return self.construction_labels
        return self.lextype_labels

    def label_counts(self, category: Category) -> Counter:
        return Counter(self.labels(category))

    @staticmethod
    def _labels_from(value: Any) -> Tuple[str, ...]:
        # Multisets arrive either as a flat list or as a {label: count} map
        if isinstance(value, dict):
            expanded: List[str] = []
            for label in sorted(value):
                expanded.extend([label] * int(value[label]))
            return tuple(expanded)
        return tuple(value or ())

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ItemRecord':
        """Create an ItemRecord from a JSONL record (already schema-checked)"""
        cpu = data.get('cpu_seconds')
        mem = data.get('memory_gb')
        return cls(
            id=str(data['id']),
            sentence=data['sentence'],
            token_count=int(data['token_count']),
            parsed=bool(data['parsed']),
            fragment=bool(data.get('fragment', False)),
            exceeded_limit=bool(data.get('exceeded_limit', False)),
            cpu_seconds=float(cpu) if cpu is not None else None,
            memory_gb=float(mem) if mem is not None else None,
            construction_labels=cls._labels_from(data.get('construction_labels')),
            lextype_labels=cls._labels_from(data.get('lextype_labels')),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'sentence': self.sentence,
            'token_count': self.token_count,
            'parsed': self.parsed,
            'fragment': self.fragment,
            'exceeded_limit': self.exceeded_limit,
            'cpu_seconds': self.cpu_seconds,
            'memory_gb': self.memory_gb,
            'construction_labels': list(self.construction_labels),
            'lextype_labels': list(self.lextype_labels),
        }

    def invariant_violation(self) -> Optional[str]:
        """Return a description of the first broken invariant, or None"""
        if not self.id:
            return "id must be non-empty"
        if self.token_count < 0:
            return "token_count must be >= 0"
        if self.sentence.strip() and self.token_count < 1:
            return "token_count must be >= 1 for a non-empty sentence"
        if not self.parsed and (self.construction_labels or self.lextype_labels):
            return "unparsed items must carry empty label multisets"
        if self.cpu_seconds is not None and self.cpu_seconds < 0:
            return "cpu_seconds must be >= 0"
        if self.memory_gb is not None and self.memory_gb < 0:
            return "memory_gb must be >= 0"
        return None


# ============================================================================
# Derivation trees
# ============================================================================

@dataclass(frozen=True)
class DerivationTree:
    """
    A derivation node.

    Internal nodes have a label and children; leaves carry the surface token
    (their label is the token too). ``node_id`` and ``attrs`` hold the extra
    atoms of the grammar's native export (edge id, score, span, token data)
    verbatim so the canonical form keeps them.
    """
    label: str
    children: Tuple['DerivationTree', ...] = ()
    surface: Optional[str] = None
    node_id: Optional[str] = None
    attrs: Tuple[str, ...] = ()

    @classmethod
    def leaf(cls, surface: str, attrs: Tuple[str, ...] = ()) -> 'DerivationTree':
        return cls(label=surface, surface=surface, attrs=attrs)

    @property
    def is_leaf(self) -> bool:
        return self.surface is not None

    @property
    def is_preterminal(self) -> bool:
        return not self.is_leaf and bool(self.children) and all(c.is_leaf for c in self.children)

    def iter_nodes(self) -> Iterator['DerivationTree']:
        """Pre-order traversal without recursion (trees can be deep)"""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> List[str]:
        return [n.surface for n in self.iter_nodes() if n.is_leaf]

    def node_count(self) -> int:
        return sum(1 for _ in self.iter_nodes())


# ============================================================================
# Lexicon
# ============================================================================

@dataclass(frozen=True)
class LexiconMap:
    """Lexical entry name -> lexical type label"""
    entries: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'entries', MappingProxyType(dict(self.entries)))

    def get(self, entry: str) -> Optional[str]:
        return self.entries.get(entry)

    def __len__(self) -> int:
        return len(self.entries)


# ============================================================================
# Corpus
# ============================================================================

@dataclass(frozen=True)
class Corpus:
    """A named profile: every item of one dataset, in file order"""
    name: str
    source_kind: SourceKind
    year_tag: str
    items: Tuple[ItemRecord, ...]
    unknown_lextypes: int = 0

    def __len__(self) -> int:
        return len(self.items)

    @property
    def parsed_items(self) -> Tuple[ItemRecord, ...]:
        return tuple(item for item in self.items if item.parsed)

    def __str__(self) -> str:
        return f"{self.name} ({self.source_kind.value}, {self.year_tag}, {len(self.items)} items)"
