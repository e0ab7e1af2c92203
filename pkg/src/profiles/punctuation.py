"""
Punctuation lexical-type classification.

Which lexical types count as punctuation is configuration, not code: the
shipped ``config/punctuation.patterns`` holds one glob per line.
"""

import fnmatch
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

import regex

from errors import InvalidPattern, IoError
from utils import get_file

debug = logging.getLogger("ergdiv")

DEFAULT_PATTERNS_FILE = "config/punctuation.patterns"


@dataclass(frozen=True)
class PunctuationConfig:
    patterns: Tuple[str, ...]
    compiled: Tuple[regex.Pattern, ...]

    @classmethod
    def from_patterns(cls, patterns: Iterable[str]) -> 'PunctuationConfig':
        patterns = tuple(patterns)
        return cls(patterns, tuple(_compile(p) for p in patterns))

    def __len__(self) -> int:
        return len(self.patterns)


def _has_unclosed_class(pattern: str) -> bool:
    i = 0
    while i < len(pattern):
        if pattern[i] == '[':
            j = i + 1
            if j < len(pattern) and pattern[j] in '!^':
                j += 1
            if j < len(pattern) and pattern[j] == ']':
                j += 1
            close = pattern.find(']', j)
            if close == -1:
                return True
            i = close + 1
        else:
            i += 1
    return False


def _compile(pattern: str) -> regex.Pattern:
    if not pattern:
        raise InvalidPattern("empty pattern")
    if any(c.isspace() for c in pattern):
        raise InvalidPattern(f"pattern '{pattern}' contains whitespace", pattern=pattern)
    if _has_unclosed_class(pattern):
        raise InvalidPattern(f"pattern '{pattern}' has an unclosed '['", pattern=pattern)
    try:
        return regex.compile(fnmatch.translate(pattern))
    except regex.error as e:
        raise InvalidPattern(f"pattern '{pattern}' does not compile: {e}", pattern=pattern) from e


def load_punctuation_config(path: Union[str, Path, None] = None) -> PunctuationConfig:
    """Read one glob per line; blank lines and '#' comments are ignored"""
    path = Path(path) if path else Path(get_file(DEFAULT_PATTERNS_FILE))
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise IoError(f"cannot read punctuation patterns: {e}", path=str(path)) from e

    patterns = []
    compiled = []
    for lineno, line in enumerate(lines, start=1):
        text = line.split('#', 1)[0].strip()
        if not text:
            continue
        try:
            compiled.append(_compile(text))
        except InvalidPattern as e:
            raise e.with_context(path=str(path), line=lineno)
        patterns.append(text)

    config = PunctuationConfig(tuple(patterns), tuple(compiled))
    debug.debug(f"Loaded {len(config)} punctuation patterns from {path}")
    return config


def classify_punctuation(lextype: str, config: PunctuationConfig) -> bool:
    """True iff the label matches any configured pattern"""
    return any(p.match(lextype) for p in config.compiled)
