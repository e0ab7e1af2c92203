import json

import pytest

from conftest import write_jsonl
from errors import ConfigError, DuplicateId, EmptyCorpus, InvalidPattern, MalformedRecord
from profiles.loader import export_jsonl, load_corpus, load_lexicon
from profiles.models import UNKNOWN_LEXTYPE, Category, CorpusFormat, SourceKind
from profiles.punctuation import PunctuationConfig, classify_punctuation, load_punctuation_config


def test_load_jsonl_corpus(tmp_path, human_records):
    path = write_jsonl(tmp_path / "nyt.jsonl", human_records)
    corpus = load_corpus(path, name="nyt", kind="human", year="2023")

    assert corpus.name == "nyt"
    assert corpus.source_kind is SourceKind.HUMAN
    assert len(corpus) == 6
    assert [i.id for i in corpus.items] == ["h1", "h2", "h3", "h4", "h5", "h6"]
    # a {label: count} map expands to a sorted flat multiset
    assert corpus.items[1].labels(Category.CONSTRUCTION) == ("hd-cmp_u_c", "hd-cmp_u_c", "sb-hd_mc_c")
    assert corpus.items[3].parsed is False
    assert corpus.unknown_lextypes == 1


def test_name_defaults_to_file_stem(tmp_path, human_records):
    corpus = load_corpus(write_jsonl(tmp_path / "gpt-4o-2025.jsonl", human_records))
    assert corpus.name == "gpt-4o-2025"


def test_bad_json_reports_line(tmp_path, human_records):
    path = write_jsonl(tmp_path / "bad.jsonl", human_records[:2])
    with open(path, "a") as f:
        f.write("{not json\n")
    with pytest.raises(MalformedRecord) as exc:
        load_corpus(path)
    assert exc.value.line == 3


@pytest.mark.parametrize("record", [
    {"id": "x", "sentence": "a b", "token_count": -1, "parsed": True},
    {"id": "", "sentence": "a b", "token_count": 2, "parsed": True},
    {"id": "x", "sentence": "a b", "token_count": 2},
    {"id": "x", "sentence": "a b", "token_count": 2, "parsed": True, "cpu_seconds": -0.5},
    {"id": "x", "sentence": "a b", "token_count": 0, "parsed": True},
    {"id": "x", "sentence": "a b", "token_count": 2, "parsed": False, "construction_labels": ["c"]},
])
def test_invalid_records_are_rejected(tmp_path, record):
    path = write_jsonl(tmp_path / "bad.jsonl", [record])
    with pytest.raises(MalformedRecord) as exc:
        load_corpus(path)
    assert exc.value.line == 1


def test_duplicate_id(tmp_path, human_records):
    path = write_jsonl(tmp_path / "dup.jsonl", human_records + [human_records[0]])
    with pytest.raises(DuplicateId) as exc:
        load_corpus(path)
    assert exc.value.item_id == "h1"
    assert exc.value.context["line"] == 7


def test_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("\n")
    with pytest.raises(EmptyCorpus):
        load_corpus(path)
    assert len(load_corpus(path, allow_empty=True)) == 0


def test_derivation_corpus_with_lexicon(tmp_path):
    (tmp_path / "lex.tsv").write_text("# entry\tlextype\nthe_1\td_-_the_le\nbark_v1\tv_-_le\n")
    (tmp_path / "gen.derivations").write_text(
        's1\t(root (sb-hd (the_1 ("the")) (bark_v1 ("barked"))))\n'
        '\n'
        's2\t(root (sb-hd (dog_n1 ("dog")) (bark_v1 ("barks"))))\n'
    )
    corpus = load_corpus(tmp_path / "gen.derivations", CorpusFormat.DERIVATIONS, name="gen",
                         kind="llm", lexicon=load_lexicon(tmp_path / "lex.tsv"))

    assert [i.id for i in corpus.items] == ["s1", "s2"]
    first = corpus.items[0]
    assert first.sentence == "the barked"
    assert first.token_count == 2
    assert first.construction_labels == ("root", "sb-hd")
    assert first.lextype_labels == ("d_-_the_le", "v_-_le")
    assert corpus.items[1].lextype_labels == (UNKNOWN_LEXTYPE, "v_-_le")
    assert corpus.unknown_lextypes == 1

    skipped = load_corpus(tmp_path / "gen.derivations", "derivations+lexicon",
                          lexicon=load_lexicon(tmp_path / "lex.tsv"), skip_root=True)
    assert skipped.items[0].construction_labels == ("sb-hd",)


def test_derivation_errors_keep_line_and_offset(tmp_path):
    (tmp_path / "bad.derivations").write_text('a\t(root (x ("y")))\nb\t(root (x ("y"))\n')
    with pytest.raises(MalformedRecord) as exc:
        load_corpus(tmp_path / "bad.derivations", CorpusFormat.DERIVATIONS, lexicon=load_lexicon_of({}, tmp_path))
    assert exc.value.line == 2
    assert exc.value.context["cause"] == "UnbalancedParens"


def test_tabs_inside_derivations_are_not_id_separators(tmp_path):
    (tmp_path / "tabs.derivations").write_text(
        '(root (x_1 ("New\tYork")))\n'
        's2\t(root (x_1 ("a\tb")))\n'
    )
    corpus = load_corpus(tmp_path / "tabs.derivations", CorpusFormat.DERIVATIONS,
                         lexicon=load_lexicon_of({"x_1": "n_-_pn_le"}, tmp_path))
    assert [i.id for i in corpus.items] == ["1", "s2"]
    assert [i.sentence for i in corpus.items] == ["New\tYork", "a\tb"]
    assert corpus.items[0].lextype_labels == ("n_-_pn_le",)


def test_derivations_need_a_lexicon(tmp_path):
    (tmp_path / "x.derivations").write_text('(root (x ("y")))\n')
    with pytest.raises(ConfigError):
        load_corpus(tmp_path / "x.derivations", CorpusFormat.DERIVATIONS)


def load_lexicon_of(entries, tmp_path):
    path = tmp_path / "lexicon.tsv"
    path.write_text("".join(f"{k}\t{v}\n" for k, v in entries.items()))
    return load_lexicon(path)


def test_tdl_lexicon_and_duplicates(tmp_path):
    (tmp_path / "lexicon.tdl").write_text(
        'dog_n1 := n_-_c_le &\n  [ STEM < "dog" > ].\n\nbark_v1 := v_-_le & [ STEM < "bark" > ].\n'
    )
    lexicon = load_lexicon(tmp_path / "lexicon.tdl")
    assert lexicon.get("dog_n1") == "n_-_c_le"
    assert lexicon.get("bark_v1") == "v_-_le"
    assert len(lexicon) == 2

    (tmp_path / "dup.tsv").write_text("a\tx_le\na\ty_le\n")
    with pytest.raises(DuplicateId):
        load_lexicon(tmp_path / "dup.tsv")

    (tmp_path / "bad.tsv").write_text("a x_le\n")
    with pytest.raises(MalformedRecord):
        load_lexicon(tmp_path / "bad.tsv")


def test_export_jsonl_reloads_to_the_same_items(tmp_path):
    (tmp_path / "g.derivations").write_text('s1\t(root (x_1 ("a")) (y_1 ("b")))\n')
    corpus = load_corpus(tmp_path / "g.derivations", CorpusFormat.DERIVATIONS,
                         lexicon=load_lexicon_of({"x_1": "x_le"}, tmp_path))
    out = export_jsonl(corpus, tmp_path / "export" / "g.jsonl")
    assert json.loads(out.read_text().splitlines()[0])["lextype_labels"] == [UNKNOWN_LEXTYPE, "x_le"]
    assert load_corpus(out).items == corpus.items


# ---------------------------------------------------------------------------
# punctuation patterns
# ---------------------------------------------------------------------------

def test_default_punctuation_patterns():
    config = load_punctuation_config()
    assert classify_punctuation("pt_comma_le", config)
    assert classify_punctuation("punct_period_le", config)
    assert classify_punctuation("x_pct_le", config)
    assert not classify_punctuation("n_-_c_le", config)
    assert not classify_punctuation("xpt_le", config)


def test_patterns_file_comments_and_errors(tmp_path):
    path = tmp_path / "p.patterns"
    path.write_text("# comment\n\npt_*   # trailing\n")
    config = load_punctuation_config(path)
    assert config.patterns == ("pt_*",)

    path.write_text("pt_*\n[abc\n")
    with pytest.raises(InvalidPattern) as exc:
        load_punctuation_config(path)
    assert exc.value.context["line"] == 2

    with pytest.raises(InvalidPattern):
        PunctuationConfig.from_patterns(["a b"])
    with pytest.raises(InvalidPattern):
        PunctuationConfig.from_patterns([""])
