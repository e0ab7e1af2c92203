import argparse
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd

from errors import IoError, UsageError

debug = logging.getLogger("ergdiv")


def get_file(path):
    dir = os.path.dirname(os.path.dirname(__file__))
    return os.path.join(dir, path)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write ``text`` to ``path`` through a temp file in the same directory and
    an ``os.replace``, so readers never see a half-written file.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}", path=str(path)) from e
    debug.debug(f"Wrote {path} ({len(text)} chars)")
    return path


def write_csv(frame: pd.DataFrame, path: Union[str, Path], preamble: str = "") -> Path:
    """Byte-stable CSV: fixed column order, %.6f floats, \\n line endings, atomic replace"""
    text = frame.to_csv(index=False, float_format="%.6f", lineterminator="\n")
    return atomic_write_text(path, preamble + text)


class _Parser(argparse.ArgumentParser):
    # argparse would print usage and exit(2); the CLI reports errors as one JSON line instead
    def error(self, message):
        raise UsageError(message, usage=self.format_usage().strip())


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError(f"'{value}' must be >= 1")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ergdiv", description="Construction and lexical-type diversity of parsed corpora")

    parser.add_argument("--config", action="store", help="Run config JSON (Default: config/config.json)",
                        default=None, type=str)
    parser.add_argument("--seed", action="store", help="Seed for every resampling step (overrides config)",
                        default=None, type=int)
    parser.add_argument("--out", action="store", help="Output directory (overrides config)", default=None, type=str)
    parser.add_argument("--threads", action="store", help="Worker threads for corpora and replicates (Default: 1)",
                        default=None, type=_positive_int)
    parser.add_argument("--loglevel", action="store",
                        help="log level to display (DEBUG,INFO,WARN,ERROR,CRITICAL) - DEBUG shows the most, CRITICAL the least",
                        type=str)
    parser.add_argument("--logtofile", action="store_true", help="Also write ergdiv.log", default=False)

    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    ingest = sub.add_parser("ingest", help="Load every configured corpus and summarise it")
    ingest.add_argument("--export", action="store", help="Directory to export derivation corpora as JSONL",
                        default=None, type=str)

    diversity = sub.add_parser("diversity", help="Shannon/Simpson figure data with bootstrap intervals")
    diversity.add_argument("--iterations", action="store", help="Bootstrap replicates (1..10000)", default=None,
                           type=int)
    diversity.add_argument("--target-n", action="store", help="Tokens per replicate (Default: smallest corpus N)",
                           default=None, type=int)
    diversity.add_argument("--resample", action="store", choices=["auto", "with", "without"], default=None,
                           help="Replicate draw scheme (Default: auto)")
    diversity.add_argument("--include-unknown", action="store_true", default=None,
                           help="Count the unknown-lextype bucket in lextype distributions")

    compare = sub.add_parser("compare", help="Rank the types that separate two corpora or groups")
    compare.add_argument("--stat", action="store", choices=["jsd", "freq-delta"], default=None,
                         help="Per-type contribution statistic (Default: jsd)")
    compare.add_argument("--top-k", action="store", help="Types per report (Default: 10)", default=None,
                         type=int)
    compare.add_argument("--examples", action="store", help="Example sentences per type (Default: 3)",
                         default=None, type=int)
    compare.add_argument("--pair", action="append", nargs=2, metavar=("FIRST", "SECOND"), default=None,
                         help="Compare two corpora or groups by name (repeatable, overrides config)")
    compare.add_argument("--include-unknown", action="store_true", default=None,
                         help="Count the unknown-lextype bucket in lextype distributions")

    sub.add_parser("parsability", help="Parse-rate and parse-cost tables")

    generate = sub.add_parser("generate", help="Generate lead paragraphs for a task file")
    generate.add_argument("--tasks", action="store", help="Task JSONL (Default: <out>/tasks.jsonl)", default=None,
                          type=str)
    generate.add_argument("--model", action="store", help="Model name sent to the endpoint", default=None, type=str)
    generate.add_argument("--endpoint", action="store", help="Chat-completion endpoint URL", default=None, type=str)
    generate.add_argument("--replay", action="store", help="Answer requests from this replay file only",
                          default=None, type=str)
    generate.add_argument("--record", action="store", help="Append live request/response pairs to this file",
                          default=None, type=str)
    generate.add_argument("--concurrency", action="store", help="Requests in flight (Default: 4)", default=None,
                          type=_positive_int)

    fetch = sub.add_parser("fetch-headlines", help="Build generation tasks from the news archive")
    fetch.add_argument("--months", action="store", help="Month range, e.g. 2023-01:2023-03", default=None,
                       type=str)
    fetch.add_argument("--endpoint", action="store", help="Archive endpoint template", default=None, type=str)
    fetch.add_argument("--tasks", action="store", help="Where to write the task JSONL (Default: <out>/tasks.jsonl)",
                       default=None, type=str)

    return parser


def args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
