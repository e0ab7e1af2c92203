"""
Post-processing of generated leads: strip labels and extra paragraphs, then
split the lead into sentences for the parser.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Union

import regex

from errors import EmptyAfterCleaning, IoError
from utils import get_file

debug = logging.getLogger("ergdiv")

DEFAULT_ABBREVIATIONS_FILE = "config/abbreviations.txt"

_LABEL = regex.compile(r"^(Lead|Paragraph|Output)\s*:")
_PARAGRAPH_BREAK = regex.compile(r"\n[ \t\r\f\v]*\n")

_CLOSERS = "\"'”’)]"

# terminator run, optional closing quotes/brackets, then whitespace or end of text
_BOUNDARY = regex.compile(r"[.!?]+[" + regex.escape(_CLOSERS) + r"]*(?=\s|$)")
_OPENERS = "\"'“‘(["


def clean_output(raw: str) -> str:
    """
    Reduce a completion to the lead paragraph: trim, drop any leading
    ``Lead:``/``Paragraph:``/``Output:`` label, keep the first paragraph.

    Raises:
        EmptyAfterCleaning: nothing is left
    """
    text = (raw or "").strip()
    while True:
        match = _LABEL.match(text)
        if not match:
            break
        text = text[match.end():].strip()

    text = _PARAGRAPH_BREAK.split(text, maxsplit=1)[0].strip()
    if not text:
        raise EmptyAfterCleaning("completion is empty once labels and whitespace are removed")
    return text


@lru_cache(maxsize=4)
def _load_abbreviations(path: str) -> FrozenSet[str]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise IoError(f"cannot read abbreviations: {e}", path=path) from e
    entries = frozenset(line.strip() for line in lines if line.strip() and not line.lstrip().startswith('#'))
    debug.debug(f"Loaded {len(entries)} abbreviations from {path}")
    return entries


def load_abbreviations(path: Union[str, Path, None] = None) -> FrozenSet[str]:
    return _load_abbreviations(str(path) if path else get_file(DEFAULT_ABBREVIATIONS_FILE))


def _token_before(text: str, end: int) -> str:
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end].lstrip(_OPENERS)


def segment_sentences(paragraph: str, abbreviations: Optional[Iterable[str]] = None) -> List[str]:
    """
    Split on sentence-final punctuation followed by whitespace or the end of
    the text. A lone '.' closing a listed abbreviation is not a boundary, and
    neither is a decimal point (no whitespace after it).
    """
    abbreviations = load_abbreviations() if abbreviations is None else frozenset(abbreviations)

    sentences = []
    start = 0
    for match in _BOUNDARY.finditer(paragraph):
        terminator = match.group().rstrip(_CLOSERS)
        if terminator == "." and _token_before(paragraph, match.start() + 1) in abbreviations:
            continue
        sentence = paragraph[start:match.end()].strip()
        if sentence:
            sentences.append(sentence)
        start = match.end()

    tail = paragraph[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
