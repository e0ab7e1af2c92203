"""
Table builders: pandas frames for the CSV outputs and fixed-width / rich
text renditions for people.
"""

import io
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd
from rich import box
from rich.console import Console
from rich.table import Table

from analysis.compare import ComparisonReport
from analysis.diversity import DiversityEstimate
from analysis.parsability import LENGTH_BINS, LengthBinTable, ParseStats, RelativeProfile

MISSING = "—"

DIVERSITY_COLUMNS = ["corpus", "category", "filter", "metric", "point", "boot_mean", "ci_low", "ci_high",
                     "ci_adjusted", "target_n", "iterations", "seed", "N", "S", "resample"]
COMPARE_COLUMNS = ["rank", "label", "contribution", "preferred_by", "p_first", "p_second", "preferred_name",
                   "tie", "examples"]
PARSE_COLUMNS = ["corpus", "items", "parsed_pct", "mean_tokens", "short_pct", "fragment_pct", "mean_cpu",
                 "mean_mem", "over_limit_pct", "year", "ram_limit_gb"]
SUMMARY_COLUMNS = ["corpus", "kind", "year", "sentences", "parsed", "construction_N", "construction_S",
                   "lextype_N", "lextype_S", "unknown_lextypes"]


def _fmt(value: Optional[float], spec: str) -> str:
    return MISSING if value is None else format(value, spec)


def _render(table: Table, width: int = 200) -> str:
    console = Console(file=io.StringIO(), width=width, color_system=None, force_terminal=False)
    console.print(table)
    return console.file.getvalue()


# =========================================================================
# Corpus summary
# =========================================================================

def summary_frame(rows: Sequence[Dict[str, object]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=SUMMARY_COLUMNS)


def summary_table(rows: Sequence[Dict[str, object]]) -> Table:
    table = Table(title="Corpora", box=box.SIMPLE)
    for title in ("Dataset", "Kind", "Year", "# Sent.", "Parsed", "Constr. N", "Constr. S", "Lextype N",
                  "Lextype S", "Unknown"):
        table.add_column(title, justify="left" if title in ("Dataset", "Kind", "Year") else "right")
    for row in rows:
        table.add_row(*(str(row[c]) for c in SUMMARY_COLUMNS))
    return table


# =========================================================================
# Diversity
# =========================================================================

def diversity_frame(rows: Iterable[Dict[str, object]]) -> pd.DataFrame:
    """One row per corpus, highest point value first"""
    frame = pd.DataFrame(list(rows), columns=DIVERSITY_COLUMNS)
    return frame.sort_values(["point", "corpus"], ascending=[False, True], kind="mergesort").reset_index(drop=True)


def diversity_row(corpus: str, category: str, punct_filter: str, estimate: DiversityEstimate) -> Dict[str, object]:
    row = estimate.to_row()
    row.update(corpus=corpus, category=category, filter=punct_filter)
    return row


# =========================================================================
# Comparison
# =========================================================================

def comparison_frame(report: ComparisonReport, examples: Dict[str, List[str]]) -> pd.DataFrame:
    rows = []
    for rank, c in enumerate(report.ranked, start=1):
        rows.append({
            "rank": rank,
            "label": c.label,
            "contribution": c.contribution,
            "preferred_by": c.preferred_by.value,
            "p_first": c.p_first,
            "p_second": c.p_second,
            "preferred_name": report.preferred_name(c),
            "tie": c.tie,
            "examples": " | ".join(examples.get(c.label, [])),
        })
    return pd.DataFrame(rows, columns=COMPARE_COLUMNS)


def comparison_text(report: ComparisonReport, examples: Dict[str, List[str]]) -> str:
    """Type / Preferred by / Example sentence / Constituent (left blank)"""
    title = (f"{report.first_name} vs {report.second_name}: {report.category.value}/{report.punct_filter.value}, "
             f"{report.statistic.value} = {report.total:.6f}")
    table = Table(title=title, box=box.SIMPLE, show_lines=False)
    table.add_column("Type", no_wrap=True)
    table.add_column("Preferred by", no_wrap=True)
    table.add_column("Contribution", justify="right")
    table.add_column("Example sentence")
    table.add_column("Constituent")
    for c in report.ranked:
        sentences = examples.get(c.label) or [""]
        preferred = report.preferred_name(c) + (" (tie)" if c.tie else "")
        table.add_row(c.label, preferred, f"{c.contribution:.6f}", sentences[0], "")
        for sentence in sentences[1:]:
            table.add_row("", "", "", sentence, "")
    return _render(table)


# =========================================================================
# Parsability
# =========================================================================

# (title, width, display format)
_PARSE_LAYOUT = (
    ("Dataset", 16, None),
    ("Items", 6, "d"),
    ("Parsed", 6, ".1f"),
    ("Length", 6, ".2f"),
    ("Short", 6, ".0f"),
    ("Frgmt", 6, ".0f"),
    ("Time", 6, ".1f"),
    ("Space", 6, ".1f"),
    (">Limit", 6, ".1f"),
)


def parse_row_text(stats: ParseStats) -> str:
    values = (stats.name, stats.items, stats.parsed_pct, stats.mean_tokens, stats.short_pct, stats.fragment_pct,
              stats.mean_cpu, stats.mean_mem, stats.over_limit_pct)
    cells = []
    for (_, width, spec), value in zip(_PARSE_LAYOUT, values):
        if spec is None:
            cells.append(f"{value:<{width}}")
        else:
            cells.append(f"{_fmt(value, spec):>{width}}")
    return " ".join(cells)


def _parse_header() -> str:
    cells = [f"{title:<{w}}" if spec is None else f"{title:>{w}}" for title, w, spec in _PARSE_LAYOUT]
    return " ".join(cells)


def _group_header(year: str, ram_limit: Optional[float]) -> str:
    label = year or "(no year)"
    return f"{label} (RAM limit {ram_limit:g}G)" if ram_limit is not None else label


def parse_stats_text(stats: Sequence[ParseStats]) -> str:
    """Rows in the given order, with a year header wherever the year changes"""
    lines = [_parse_header()]
    year: Optional[str] = None
    for s in stats:
        if s.year_tag != year:
            year = s.year_tag
            lines.append(_group_header(year, s.ram_limit_gb))
        lines.append(parse_row_text(s))
    return "\n".join(lines) + "\n"


def parse_stats_frame(stats: Sequence[ParseStats]) -> pd.DataFrame:
    rows = [{
        "corpus": s.name,
        "items": s.items,
        "parsed_pct": s.parsed_pct,
        "mean_tokens": s.mean_tokens,
        "short_pct": s.short_pct,
        "fragment_pct": s.fragment_pct,
        "mean_cpu": s.mean_cpu,
        "mean_mem": s.mean_mem,
        "over_limit_pct": s.over_limit_pct,
        "year": s.year_tag,
        "ram_limit_gb": s.ram_limit_gb,
    } for s in stats]
    return pd.DataFrame(rows, columns=PARSE_COLUMNS)


def bins_frame(tables: Sequence[LengthBinTable]) -> pd.DataFrame:
    rows = []
    for t in tables:
        for b in t.bins:
            rows.append({"corpus": t.name, "bin": b.label, "count": b.count, "mean_cpu": b.mean_cpu,
                         "mean_mem": b.mean_mem})
    return pd.DataFrame(rows, columns=["corpus", "bin", "count", "mean_cpu", "mean_mem"])


def bins_text(tables: Sequence[LengthBinTable]) -> str:
    head = [f"{'Dataset':<16}"]
    for low, high in LENGTH_BINS:
        head.append(f"{f'{low}-{high} Time':>13} {'Space':>5}")
    lines = [" ".join(head)]
    for t in tables:
        cells = [f"{t.name:<16}"]
        for b in t.bins:
            cells.append(f"{_fmt(b.mean_cpu, '.0f'):>13} {_fmt(b.mean_mem, '.1f'):>5}")
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def relative_frame(profiles: Sequence[RelativeProfile]) -> pd.DataFrame:
    rows = [{"corpus": p.name, "reference": p.reference, "length_ratio": p.length_ratio,
             "short_factor": p.short_factor, "fragment_factor": p.fragment_factor} for p in profiles]
    return pd.DataFrame(rows, columns=["corpus", "reference", "length_ratio", "short_factor", "fragment_factor"])
