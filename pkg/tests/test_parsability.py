import random

import pytest

from analysis.parsability import (
    ParseAggregate,
    aggregate_stats,
    bin_for,
    binned_costs,
    merge_aggregates,
    relative_profile,
)
from conftest import corpus, item
from errors import EmptyCorpus
from profiles.models import SourceKind
from report.tables import MISSING, bins_text, parse_row_text, parse_stats_frame, parse_stats_text

GOLDEN_ROW = "nyt-2023-human     1000   93.4  22.33     33     13   11.5    2.3    4.3"


def golden_items():
    """1000 items: 934 parsed, 43 over the limit, 23 failed; 330 short; 121 fragments; 22330 tokens"""
    items = []
    for i in range(1000):
        if i < 330:
            tokens = 10
        elif i < 330 + 270:
            tokens = 29
        else:
            tokens = 28
        parsed = i < 977
        items.append(item(
            f"{i:04d}",
            " ".join(["w"] * tokens),
            parsed=parsed,
            fragment=i < 121,
            exceeded_limit=934 <= i < 977,
            cpu_seconds=11.5 if parsed else None,
            memory_gb=2.3 if parsed else None,
        ))
    return items


def test_golden_row():
    stats = aggregate_stats(corpus("nyt-2023-human", golden_items()), ram_limit_gb=21)
    assert stats.items == 1000
    assert stats.parsed_pct == pytest.approx(93.4)
    assert stats.mean_tokens == pytest.approx(22.33)
    assert stats.short_pct == pytest.approx(33.0)
    assert stats.fragment_pct == pytest.approx(100 * 121 / 934)
    assert stats.over_limit_pct == pytest.approx(4.3)
    assert parse_row_text(stats) == GOLDEN_ROW


def test_stats_do_not_depend_on_item_order():
    items = golden_items()
    shuffled = items[:]
    random.Random(3).shuffle(shuffled)
    assert aggregate_stats(corpus("a", items)) == aggregate_stats(corpus("a", shuffled))


def test_shards_add_up_to_the_whole():
    items = golden_items()
    whole = ParseAggregate.from_items(items)
    parts = [ParseAggregate.from_items(items[i:i + 97]) for i in range(0, len(items), 97)]
    merged = merge_aggregates(parts)
    assert (merged.items, merged.parsed, merged.tokens, merged.fragments) == (
        whole.items, whole.parsed, whole.tokens, whole.fragments)
    assert merged.cpu_sum == pytest.approx(whole.cpu_sum)


def test_all_short_and_missing_costs():
    stats = aggregate_stats(corpus("s", [item("1", "a b"), item("2", "a b c", parsed=False)]))
    assert stats.short_pct == 100.0
    assert stats.parsed_pct == 50.0
    assert stats.mean_cpu is None
    assert stats.mean_mem is None
    assert parse_row_text(stats).split()[-3:-1] == [MISSING, MISSING]


def test_fragment_share_without_parsed_items_is_missing():
    stats = aggregate_stats(corpus("f", [item("1", parsed=False)]))
    assert stats.parsed_pct == 0.0
    assert stats.fragment_pct is None


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        aggregate_stats(corpus("e", []))
    with pytest.raises(EmptyCorpus):
        binned_costs(corpus("e", []))


@pytest.mark.parametrize("tokens, expected", [
    (30, None), (31, (31, 35)), (33, (31, 35)), (35, (31, 35)), (36, (36, 40)),
    (45, (41, 45)), (50, (46, 50)), (51, None),
])
def test_bin_membership(tokens, expected):
    assert bin_for(tokens) == expected


def test_binned_costs():
    items = [
        item("a", " ".join(["w"] * 33), cpu_seconds=10.0, memory_gb=1.0),
        item("b", " ".join(["w"] * 34), cpu_seconds=14.0, memory_gb=2.0),
        item("c", " ".join(["w"] * 30), cpu_seconds=99.0),
        item("d", " ".join(["w"] * 48), cpu_seconds=5.0),
        item("e", " ".join(["w"] * 44), parsed=False),
        item("f", " ".join(["w"] * 40), exceeded_limit=True, cpu_seconds=80.0),
    ]
    table = binned_costs(corpus("c", items))
    first, second, third, fourth = table.bins
    assert (first.label, first.count, first.mean_cpu, first.mean_mem) == ("31-35", 2, 12.0, 1.5)
    assert (second.count, second.mean_cpu) == (0, None)
    assert third.count == 0
    assert (fourth.count, fourth.mean_cpu, fourth.mean_mem) == (1, 5.0, None)
    assert table.total == 3
    assert table.total <= len([i for i in items if i.parsed and not i.exceeded_limit])

    text = bins_text([table]).splitlines()
    assert text[0].startswith("Dataset")
    assert "31-35 Time" in text[0]
    assert text[1].split() == ["c", "12", "1.5", MISSING, MISSING, MISSING, MISSING, "5", MISSING]


def test_relative_profile():
    reference = aggregate_stats(corpus("human", [
        item("1", "a " * 9 + "a", fragment=True), item("2", " ".join(["w"] * 30)),
    ]))
    llm = aggregate_stats(corpus("llm", [item("1", " ".join(["w"] * 20)), item("2", " ".join(["w"] * 20))]))
    profile = relative_profile(llm, reference)
    assert profile.length_ratio == pytest.approx(1.0)
    assert profile.short_factor is None
    assert profile.fragment_factor is None

    profile = relative_profile(reference, reference)
    assert (profile.short_factor, profile.fragment_factor) == (1.0, 1.0)


def test_rows_keep_input_order_under_year_headers():
    stats = [
        aggregate_stats(corpus("gpt-2025", [item("1")], kind=SourceKind.LLM, year="2025"), 31),
        aggregate_stats(corpus("nyt-2025", [item("1")], year="2025"), 31),
        aggregate_stats(corpus("nyt-2023", [item("1")], year="2023"), 21),
        aggregate_stats(corpus("gpt-2023", [item("1")], kind=SourceKind.LLM, year="2023"), 21),
        aggregate_stats(corpus("llama-2025", [item("1")], kind=SourceKind.LLM, year="2025"), 31),
    ]
    lines = parse_stats_text(stats).splitlines()
    assert lines[0].split() == ["Dataset", "Items", "Parsed", "Length", "Short", "Frgmt", "Time", "Space", ">Limit"]
    assert lines[1] == "2025 (RAM limit 31G)"
    assert [line.split()[0] for line in lines[2:4]] == ["gpt-2025", "nyt-2025"]
    assert lines[4] == "2023 (RAM limit 21G)"
    assert [line.split()[0] for line in lines[5:7]] == ["nyt-2023", "gpt-2023"]
    assert lines[7] == "2025 (RAM limit 31G)"
    assert lines[8].startswith("llama-2025")
    assert len(lines) == 9

    assert list(parse_stats_frame(stats)["corpus"]) == ["gpt-2025", "nyt-2025", "nyt-2023", "gpt-2023", "llama-2025"]
