"""
Corpus ingestion.

Two on-disk formats are accepted:

- ``jsonl``: one item record per line with pre-extracted labels (the
  interchange format; the only format that can carry unparsed items and
  parse costs).
- ``derivations+lexicon``: one derivation per line, optionally prefixed by
  ``id<TAB>``, plus a lexicon map that turns preterminal entry names into
  lexical types.
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

import fastjsonschema
import regex

from errors import ConfigError, DerivationSyntaxError, DuplicateId, EmptyCorpus, IoError, MalformedRecord
from profiles.derivation import extract_labels, parse_derivation
from profiles.models import UNKNOWN_LEXTYPE, Corpus, CorpusFormat, ItemRecord, LexiconMap, SourceKind
from utils import atomic_write_text, get_file

debug = logging.getLogger("ergdiv")

ITEM_SCHEMA_FILE = "config/item_record.schema.json"

# entry := lextype & [ ... ].
_TDL_ENTRY = regex.compile(r'^\s*([^\s:]+)\s*:=\s*([^\s&]+)\s*&')


@lru_cache(maxsize=1)
def _item_validator():
    with open(get_file(ITEM_SCHEMA_FILE)) as f:
        schema = json.load(f)
    return fastjsonschema.compile(schema)


def _read_lines(path: Path) -> List[str]:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read().splitlines()
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}", path=str(path)) from e


# =========================================================================
# Lexicon
# =========================================================================

def load_lexicon(path: Union[str, Path]) -> LexiconMap:
    """
    Load the entry -> lextype map.

    Two-column ``entry<TAB>lextype`` files are the documented format; grammar
    lexicon sources (``.tdl``) are read by picking ``entry := lextype &``
    definition heads.
    """
    path = Path(path)
    entries: Dict[str, str] = {}
    is_tdl = path.suffix.lower() == ".tdl"

    for lineno, line in enumerate(_read_lines(path), start=1):
        if is_tdl:
            match = _TDL_ENTRY.match(line)
            if not match:
                continue
            entry, lextype = match.group(1), match.group(2)
        else:
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            columns = line.rstrip('\n').split('\t')
            if len(columns) != 2 or not columns[0].strip() or not columns[1].strip():
                raise MalformedRecord("expected 'entry<TAB>lextype'", line=lineno, path=str(path))
            entry, lextype = columns[0].strip(), columns[1].strip()

        if entry in entries:
            raise DuplicateId(entry, line=lineno, path=str(path))
        entries[entry] = lextype

    debug.info(f"Loaded lexicon {path.name}: {len(entries)} entries")
    return LexiconMap(entries)


# =========================================================================
# Corpora
# =========================================================================

def _items_from_jsonl(path: Path) -> List[ItemRecord]:
    validator = _item_validator()
    items: List[ItemRecord] = []
    seen = set()

    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise MalformedRecord(f"invalid JSON: {e.msg}", line=lineno, path=str(path)) from e
        try:
            validator(data)
        except fastjsonschema.JsonSchemaException as e:
            raise MalformedRecord(e.message, line=lineno, path=str(path)) from e

        item = ItemRecord.from_dict(data)
        problem = item.invariant_violation()
        if problem:
            raise MalformedRecord(problem, line=lineno, path=str(path))
        if item.id in seen:
            raise DuplicateId(item.id, line=lineno, path=str(path))
        seen.add(item.id)
        items.append(item)

    return items


def _items_from_derivations(path: Path, lexicon: LexiconMap, skip_root: bool) -> List[ItemRecord]:
    items: List[ItemRecord] = []
    seen = set()

    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        item_id, sep, text = line.partition('\t')
        # a tab inside the derivation itself is not an id separator
        if not sep or '(' in item_id:
            item_id, text = str(lineno), line
        item_id = item_id.strip()
        if not text.strip():
            raise MalformedRecord(f"item '{item_id}' has no derivation", line=lineno, path=str(path))

        try:
            tree = parse_derivation(text)
        except DerivationSyntaxError as e:
            raise MalformedRecord(e.message, line=lineno, path=str(path), offset=e.offset, cause=e.code) from e

        labels = extract_labels(tree, lexicon, skip_root=skip_root)
        tokens = tree.leaves()
        if item_id in seen:
            raise DuplicateId(item_id, line=lineno, path=str(path))
        seen.add(item_id)
        items.append(ItemRecord(
            id=item_id,
            sentence=" ".join(tokens),
            token_count=len(tokens),
            parsed=True,
            construction_labels=tuple(sorted(labels.constructions.elements())),
            lextype_labels=tuple(sorted(labels.lextypes.elements())),
        ))

    return items


def load_corpus(
    path: Union[str, Path],
    format: Union[str, CorpusFormat] = CorpusFormat.JSONL,
    name: Optional[str] = None,
    kind: Union[str, SourceKind] = SourceKind.HUMAN,
    year: str = "",
    lexicon: Optional[LexiconMap] = None,
    allow_empty: bool = False,
    skip_root: bool = False,
) -> Corpus:
    """
    Load one corpus file into a Corpus, items in file order.

    Raises:
        IoError: unreadable file
        MalformedRecord: a line that fails the schema, the item invariants or
            the derivation grammar (the line number is kept)
        DuplicateId: an id seen twice
        EmptyCorpus: no items and ``allow_empty`` is False
    """
    path = Path(path)
    fmt = CorpusFormat(format)
    name = name or path.stem

    if fmt is CorpusFormat.JSONL:
        items = _items_from_jsonl(path)
    else:
        if lexicon is None:
            raise ConfigError(f"corpus '{name}' uses derivations but no lexicon was given", corpus=name)
        items = _items_from_derivations(path, lexicon, skip_root)

    if not name:
        raise ConfigError("corpus name must be non-empty", path=str(path))
    if not items and not allow_empty:
        raise EmptyCorpus(f"corpus '{name}' has no items", corpus=name, path=str(path))

    unknown = sum(item.lextype_labels.count(UNKNOWN_LEXTYPE) for item in items)
    if unknown:
        debug.warning(f"Corpus {name}: {unknown} lexical entries missing from the lexicon")

    corpus = Corpus(
        name=name,
        source_kind=SourceKind(kind),
        year_tag=str(year),
        items=tuple(items),
        unknown_lextypes=unknown,
    )
    debug.info(f"Loaded corpus {corpus}")
    return corpus


def export_jsonl(corpus: Corpus, path: Union[str, Path]) -> Path:
    """Write the corpus as canonical JSONL item records"""
    lines = [json.dumps(item.to_dict(), ensure_ascii=False) for item in corpus.items]
    path = atomic_write_text(path, "".join(line + "\n" for line in lines))
    debug.info(f"Exported {len(lines)} items of {corpus.name} to {path}")
    return path
