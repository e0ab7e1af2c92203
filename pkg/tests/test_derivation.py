import random

import pytest

from errors import EmptyInput, EmptyLabel, UnbalancedParens, UnexpectedToken
from profiles.derivation import extract_labels, parse_derivation, serialize_derivation
from profiles.models import UNKNOWN_LEXTYPE, DerivationTree, LexiconMap

SIMPLE = '(np (det ("the")) (n ("dog")))'
NATIVE = ('(root_strict (1403 sb-hd_mc_c 0.1 0 2 (21 the_1 0 0 1 ("the" 17 "token [ ]")) '
          '(22 bark_v1 0 1 2 ("barked" 18 "token [ ]"))))')

LEXICON = LexiconMap({"det": "d_-_the_le", "the_1": "d_-_the_le", "bark_v1": "v_-_le"})


def test_parse_simple_layout():
    tree = parse_derivation(SIMPLE)
    assert tree.label == "np"
    assert [c.label for c in tree.children] == ["det", "n"]
    assert tree.leaves() == ["the", "dog"]
    assert tree.children[0].is_preterminal
    assert not tree.is_preterminal


def test_parse_native_layout_keeps_extra_atoms():
    tree = parse_derivation(NATIVE)
    head = tree.children[0]
    assert head.label == "sb-hd_mc_c"
    assert head.node_id == "1403"
    assert head.attrs == ("0.1", "0", "2")
    the = head.children[0]
    assert (the.label, the.node_id, the.attrs) == ("the_1", "21", ("0", "0", "1"))
    assert the.children[0].surface == "the"
    assert the.children[0].attrs == ("17", '"token [ ]"')
    assert tree.leaves() == ["the", "barked"]


def test_serialize_is_canonical_and_reparses():
    text = serialize_derivation(parse_derivation('(np   (det ("the"))\n (n ("dog")))'))
    assert text == SIMPLE
    assert parse_derivation(NATIVE) == parse_derivation(serialize_derivation(parse_derivation(NATIVE)))


def test_escaped_labels_and_surfaces():
    tree = DerivationTree("a (b) c", (DerivationTree("x\\y", (DerivationTree.leaf('say "hi"'),)),))
    assert parse_derivation(serialize_derivation(tree)) == tree


@pytest.mark.parametrize("text, error, offset", [
    ("", EmptyInput, 0),
    ("   \n", EmptyInput, 0),
    ('(a ("x")', UnbalancedParens, 8),
    ('(a ("x")))', UnbalancedParens, 9),
    ('(é ("x")))', UnbalancedParens, 10),
    ("(a ())", EmptyLabel, 4),
    ('(a (""))', EmptyLabel, 4),
    ("(a)", UnexpectedToken, 0),
    ('(a ("x")) (b ("y"))', UnexpectedToken, 10),
    ('(a ("x)', UnexpectedToken, 4),
])
def test_syntax_errors_carry_byte_offsets(text, error, offset):
    with pytest.raises(error) as exc:
        parse_derivation(text)
    assert exc.value.offset == offset


def _random_label(rng):
    if rng.random() < 0.15:
        return str(rng.randint(-99, 9999))
    first = rng.choice("abcdefghijklmnopqrstuvwxyz")
    rest = "".join(rng.choice("abcxyz_-+.() \t\\\"") for _ in range(rng.randint(0, 6)))
    return first + rest


def _random_tree(rng, max_depth=12, depth=0):
    if depth >= max_depth or rng.random() < 0.45:
        surface = "".join(rng.choice('ab "\\()\té') for _ in range(rng.randint(1, 5)))
        attrs = tuple(str(rng.randint(0, 99)) for _ in range(rng.randint(0, 2)))
        return DerivationTree.leaf(surface, attrs)
    children = tuple(_random_tree(rng, max_depth, depth + 1) for _ in range(rng.randint(1, 3)))
    node_id = str(rng.randint(0, 9999)) if rng.random() < 0.5 else None
    attrs = tuple(rng.choice([f"{rng.random():.2f}", str(rng.randint(0, 40))]) for _ in range(rng.randint(0, 2)))
    return DerivationTree(_random_label(rng), children, node_id=node_id, attrs=attrs)


def _random_trees(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        tree = _random_tree(rng)
        yield tree if not tree.is_leaf else DerivationTree("root", (tree,))


def _depth(tree):
    return 1 + max((_depth(c) for c in tree.children), default=0)


def test_random_trees_survive_serialization():
    deepest = 0
    for tree in _random_trees(7, 10_000):
        assert parse_derivation(serialize_derivation(tree)) == tree
        deepest = max(deepest, _depth(tree))
    assert 10 <= deepest <= 13


def test_integer_like_labels_are_not_read_as_node_ids():
    tree = DerivationTree("12", (DerivationTree.leaf("x"),), attrs=("0.5",))
    text = serialize_derivation(tree)
    assert text == '(\\12 0.5 ("x"))'
    assert parse_derivation(text) == tree

    negative = DerivationTree("-3", (tree,), node_id="40", attrs=("7",))
    assert parse_derivation(serialize_derivation(negative)) == negative
    # a plain integer label with nothing after it was never ambiguous
    assert parse_derivation('(12 ("x"))').label == "12"


def test_every_internal_node_is_counted_once():
    lexicon = LexiconMap({"a": "a_le", "b": "b_le"})
    for tree in _random_trees(8, 2000):
        labels = extract_labels(tree, lexicon)
        internal = tree.node_count() - len(tree.leaves())
        assert sum(labels.constructions.values()) + sum(labels.lextypes.values()) == internal

        skipped = extract_labels(tree, lexicon, skip_root=True)
        root_share = 0 if tree.is_preterminal else 1
        assert sum(skipped.constructions.values()) == sum(labels.constructions.values()) - root_share


def test_extract_labels_splits_constructions_and_lextypes():
    labels = extract_labels(parse_derivation(NATIVE), LEXICON)
    assert dict(labels.constructions) == {"root_strict": 1, "sb-hd_mc_c": 1}
    assert dict(labels.lextypes) == {"d_-_the_le": 1, "v_-_le": 1}
    assert labels.unknown == 0


def test_extract_labels_skip_root_and_unknown_entries():
    labels = extract_labels(parse_derivation(SIMPLE), LEXICON, skip_root=True)
    assert dict(labels.constructions) == {}
    assert labels.lextypes[UNKNOWN_LEXTYPE] == 1
    assert labels.unknown == 1
