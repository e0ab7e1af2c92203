"""
Derivation tree reader/writer.

Accepts the simple export layout

    (np (det ("the")) (n ("dog")))

as well as the grammar's native layout, where internal nodes carry an edge
id, score and span and leaves carry token data:

    (root_strict (1403 sb-hd_mc_c 0.1 0 2 (21 the_1 0 0 1 ("the" 17 "token [ ]")) ...))

Extra atoms are preserved verbatim in ``node_id``/``attrs`` so that
``parse_derivation(serialize_derivation(t)) == t`` for every tree.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional

from errors import EmptyInput, EmptyLabel, UnbalancedParens, UnexpectedToken
from profiles.models import UNKNOWN_LEXTYPE, DerivationTree, LexiconMap

# token kinds
T_OPEN, T_CLOSE, T_STRING, T_ATOM = range(4)

_ATOM_SPECIALS = set('()"\\')


class _Token(NamedTuple):
    kind: int
    raw: str
    value: str
    offset: int


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


def _tokenize(text: str) -> Iterator[_Token]:
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == '(':
            yield _Token(T_OPEN, c, c, i)
            i += 1
        elif c == ')':
            yield _Token(T_CLOSE, c, c, i)
            i += 1
        elif c == '"':
            start = i
            i += 1
            chars = []
            while True:
                if i >= n:
                    raise UnexpectedToken("unterminated string", offset=_byte_offset(text, start))
                c = text[i]
                if c == '\\' and i + 1 < n:
                    chars.append(text[i + 1])
                    i += 2
                elif c == '"':
                    i += 1
                    break
                else:
                    chars.append(c)
                    i += 1
            yield _Token(T_STRING, text[start:i], ''.join(chars), start)
        else:
            start = i
            chars = []
            while i < n:
                c = text[i]
                if c == '\\' and i + 1 < n:
                    chars.append(text[i + 1])
                    i += 2
                elif c.isspace() or c in '()"':
                    break
                else:
                    chars.append(c)
                    i += 1
            yield _Token(T_ATOM, text[start:i], ''.join(chars), start)


@dataclass
class _Frame:
    offset: int
    parts: List[object] = field(default_factory=list)


def _is_integer(raw: str) -> bool:
    return raw.lstrip('-').isdigit()


def _build_node(text: str, frame: _Frame) -> DerivationTree:
    parts = frame.parts
    if not parts:
        raise EmptyLabel("empty node", offset=_byte_offset(text, frame.offset + 1))

    head = parts[0]
    if isinstance(head, _Token) and head.kind == T_STRING:
        if head.value == "":
            raise EmptyLabel("empty surface token", offset=_byte_offset(text, head.offset))
        attrs = []
        for part in parts[1:]:
            if not isinstance(part, _Token):
                raise UnexpectedToken("leaf cannot have children", offset=_byte_offset(text, frame.offset))
            attrs.append(part.raw)
        return DerivationTree.leaf(head.value, tuple(attrs))

    if not isinstance(head, _Token):
        raise EmptyLabel("node has no label", offset=_byte_offset(text, frame.offset + 1))

    atoms: List[_Token] = []
    children: List[DerivationTree] = []
    for part in parts:
        if isinstance(part, DerivationTree):
            children.append(part)
        elif children:
            raise UnexpectedToken(f"atom '{part.raw}' after children", offset=_byte_offset(text, part.offset))
        elif part.kind == T_STRING:
            raise UnexpectedToken("quoted string inside an internal node", offset=_byte_offset(text, part.offset))
        else:
            atoms.append(part)

    if not children:
        raise UnexpectedToken(f"node '{atoms[0].raw}' has neither children nor a surface token",
                              offset=_byte_offset(text, frame.offset))

    node_id = None
    if len(atoms) >= 2 and _is_integer(atoms[0].raw):
        node_id = atoms[0].raw
        atoms = atoms[1:]

    label = atoms[0].value
    if not label:
        raise EmptyLabel("empty label", offset=_byte_offset(text, atoms[0].offset))

    return DerivationTree(
        label=label,
        children=tuple(children),
        node_id=node_id,
        attrs=tuple(a.raw for a in atoms[1:]),
    )


def parse_derivation(text: str) -> DerivationTree:
    """
    Parse one parenthesized derivation.

    Raises:
        EmptyInput: nothing but whitespace
        UnbalancedParens: a stray ')' or input ending inside a node
        EmptyLabel: a node without a label or an empty surface token
        UnexpectedToken: anything else that does not fit the grammar
    """
    if not text or not text.strip():
        raise EmptyInput("empty derivation", offset=0)

    stack: List[_Frame] = []
    root: Optional[DerivationTree] = None

    for token in _tokenize(text):
        if token.kind == T_CLOSE and not stack:
            raise UnbalancedParens("unexpected ')'", offset=_byte_offset(text, token.offset))
        if root is not None:
            raise UnexpectedToken("trailing input after derivation", offset=_byte_offset(text, token.offset))

        if token.kind == T_OPEN:
            stack.append(_Frame(token.offset))
        elif token.kind == T_CLOSE:
            node = _build_node(text, stack.pop())
            if stack:
                stack[-1].parts.append(node)
            else:
                root = node
        else:
            if not stack:
                raise UnexpectedToken(f"atom '{token.raw}' outside of parentheses",
                                      offset=_byte_offset(text, token.offset))
            stack[-1].parts.append(token)

    if stack:
        raise UnbalancedParens(f"{len(stack)} unclosed '('", offset=_byte_offset(text, len(text)))
    return root


def _escape_atom(label: str) -> str:
    out = []
    for c in label:
        if c in _ATOM_SPECIALS or c.isspace():
            out.append('\\')
        out.append(c)
    return ''.join(out)


def _escape_string(surface: str) -> str:
    return '"' + surface.replace('\\', '\\\\').replace('"', '\\"') + '"'


def serialize_derivation(tree: DerivationTree) -> str:
    """Canonical form: single spaces, leaves as ("surface" attrs...)"""
    if tree.is_leaf:
        return "(" + " ".join([_escape_string(tree.surface), *tree.attrs]) + ")"
    label = _escape_atom(tree.label)
    if _is_integer(label):
        # a bare integer in first position reads back as a node id
        label = "\\" + label
    head = [label, *tree.attrs]
    if tree.node_id is not None:
        head.insert(0, tree.node_id)
    return "(" + " ".join(head + [serialize_derivation(c) for c in tree.children]) + ")"


class ExtractedLabels(NamedTuple):
    constructions: Counter
    lextypes: Counter

    @property
    def unknown(self) -> int:
        return self.lextypes.get(UNKNOWN_LEXTYPE, 0)


def extract_labels(tree: DerivationTree, lexicon: LexiconMap, skip_root: bool = False) -> ExtractedLabels:
    """
    Split a derivation into construction labels (internal nodes above the
    preterminals) and lexical types (preterminal entry names mapped through
    the lexicon). Entries missing from the lexicon count under
    ``__unknown_lextype__``.
    """
    constructions: Counter = Counter()
    lextypes: Counter = Counter()

    for node in tree.iter_nodes():
        if node.is_leaf:
            continue
        if node.is_preterminal:
            lextypes[lexicon.get(node.label) or UNKNOWN_LEXTYPE] += 1
        elif not (skip_root and node is tree):
            constructions[node.label] += 1

    return ExtractedLabels(constructions, lextypes)
