"""Corpus profiles: item records, derivations, lexicon and punctuation config."""
from profiles.derivation import extract_labels, parse_derivation, serialize_derivation
from profiles.loader import export_jsonl, load_corpus, load_lexicon
from profiles.models import (
    UNKNOWN_LEXTYPE,
    Category,
    Corpus,
    CorpusFormat,
    DerivationTree,
    ItemRecord,
    LexiconMap,
    SourceKind,
)
from profiles.punctuation import PunctuationConfig, classify_punctuation, load_punctuation_config

__all__ = [
    'UNKNOWN_LEXTYPE', 'Category', 'Corpus', 'CorpusFormat', 'DerivationTree', 'ItemRecord', 'LexiconMap',
    'SourceKind', 'PunctuationConfig', 'classify_punctuation', 'export_jsonl', 'extract_labels',
    'load_corpus', 'load_lexicon', 'load_punctuation_config', 'parse_derivation', 'serialize_derivation',
]
