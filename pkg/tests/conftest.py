import json
import sys
from pathlib import Path

import pytest

# Add src to path (go up one directory from tests/ to project root, then into src/)
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from profiles.models import Corpus, ItemRecord, SourceKind  # noqa: E402


def item(item_id, sentence="a b c", token_count=None, parsed=True, constructions=(), lextypes=(), **kwargs):
    if token_count is None:
        token_count = len(sentence.split())
    return ItemRecord(
        id=item_id,
        sentence=sentence,
        token_count=token_count,
        parsed=parsed,
        construction_labels=tuple(constructions),
        lextype_labels=tuple(lextypes),
        **kwargs,
    )


def corpus(name, items, kind=SourceKind.HUMAN, year="2023"):
    return Corpus(name=name, source_kind=kind, year_tag=year, items=tuple(items))


def write_jsonl(path, records):
    path = Path(path)
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture
def make_item():
    return item


@pytest.fixture
def make_corpus():
    return corpus


@pytest.fixture
def human_records():
    """Six items of a small human-written corpus"""
    return [
        {"id": "h1", "sentence": "The dog barked .", "token_count": 4, "parsed": True,
         "cpu_seconds": 1.0, "memory_gb": 0.5,
         "construction_labels": ["sb-hd_mc_c", "hd-cmp_u_c"], "lextype_labels": ["d_-_the_le", "n_-_c_le", "pt_period_le"]},
        {"id": "h2", "sentence": "A cat sat on the mat .", "token_count": 7, "parsed": True,
         "cpu_seconds": 2.0, "memory_gb": 1.5,
         "construction_labels": {"sb-hd_mc_c": 1, "hd-cmp_u_c": 2}, "lextype_labels": ["d_-_the_le", "n_-_c_le", "pt_period_le"]},
        {"id": "h3", "sentence": "Markets fell sharply on Monday .", "token_count": 6, "parsed": True, "fragment": True,
         "construction_labels": ["frag_np"], "lextype_labels": ["n_-_pn_le", "v_-_le"]},
        {"id": "h4", "sentence": "Unparsed sentence here .", "token_count": 4, "parsed": False},
        {"id": "h5", "sentence": "Too long to parse .", "token_count": 5, "parsed": True, "exceeded_limit": True,
         "construction_labels": ["sb-hd_mc_c"], "lextype_labels": ["n_-_c_le"]},
        {"id": "h6", "sentence": "Officials said so .", "token_count": 4, "parsed": True,
         "cpu_seconds": 3.0, "memory_gb": 1.0,
         "construction_labels": ["sb-hd_mc_c"], "lextype_labels": ["n_-_c_le", "v_-_le", "__unknown_lextype__"]},
    ]


@pytest.fixture
def llm_records():
    return [
        {"id": "g1", "sentence": "In a stunning turn , officials said .", "token_count": 8, "parsed": True,
         "construction_labels": ["hd-aj_int-unsl_c", "sb-hd_mc_c"], "lextype_labels": ["p_np_i_le", "pt_comma_le"]},
        {"id": "g2", "sentence": "In a move , leaders agreed .", "token_count": 7, "parsed": True,
         "construction_labels": ["hd-aj_int-unsl_c", "sb-hd_mc_c"], "lextype_labels": ["p_np_i_le", "pt_comma_le"]},
        {"id": "g3", "sentence": "Leaders agreed .", "token_count": 3, "parsed": True,
         "construction_labels": ["sb-hd_mc_c"], "lextype_labels": ["n_-_c_le", "v_-_le"]},
    ]
