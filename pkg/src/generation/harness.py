"""
Generation runs: tasks in, cleaned and segmented leads out.

Tasks run concurrently; the result file is written once, sorted by
source_id, so it does not depend on which request finished first.
"""

import json
import logging
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Union

from errors import BadTask, EmptyAfterCleaning, IoError, MalformedRecord
from generation.cleaning import clean_output, load_abbreviations, segment_sentences
from generation.client import ChatClient
from generation.models import GenerationResult, GenerationTask
from thread_manager import ThreadManager
from utils import atomic_write_text

debug = logging.getLogger("ergdiv")


def load_tasks(path: Union[str, Path]) -> List[GenerationTask]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise IoError(f"cannot read task file: {e}", path=str(path)) from e

    tasks = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            task = GenerationTask.from_dict(json.loads(line)).validate()
        except json.JSONDecodeError as e:
            raise MalformedRecord(f"invalid JSON: {e.msg}", line=lineno, path=str(path)) from e
        except BadTask as e:
            raise e.with_context(line=lineno, path=str(path))
        if task.source_id in seen:
            raise BadTask(f"duplicate source_id '{task.source_id}'", line=lineno, path=str(path))
        seen.add(task.source_id)
        tasks.append(task)
    debug.info(f"Loaded {len(tasks)} tasks from {path}")
    return tasks


def _jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


def write_tasks(tasks: Sequence[GenerationTask], path: Union[str, Path]) -> Path:
    return atomic_write_text(path, _jsonl(t.to_dict() for t in tasks))


def write_results(results: Sequence[GenerationResult], path: Union[str, Path]) -> Path:
    ordered = sorted(results, key=lambda r: r.source_id)
    return atomic_write_text(path, _jsonl(r.to_dict() for r in ordered))


def generate_one(client: ChatClient, task: GenerationTask,
                 abbreviations: Optional[FrozenSet[str]] = None) -> GenerationResult:
    raw = client.generate(task)
    cleaned = clean_output(raw)
    return GenerationResult(
        source_id=task.source_id,
        model=client.config.model,
        raw=raw,
        cleaned=cleaned,
        sentences=tuple(segment_sentences(cleaned, abbreviations)),
    )


def run_generation(
    tasks: Sequence[GenerationTask],
    client: ChatClient,
    concurrency: int = 4,
    abbreviations: Optional[FrozenSet[str]] = None,
) -> List[GenerationResult]:
    """
    Generate every task with at most ``concurrency`` requests in flight.

    A completion that is empty once cleaned is logged and left out; any other
    error stops the run.
    """
    abbreviations = load_abbreviations() if abbreviations is None else abbreviations
    for task in tasks:
        task.validate()

    def run(task):
        try:
            return generate_one(client, task, abbreviations)
        except EmptyAfterCleaning as e:
            debug.warning(f"Task {task.source_id}: {e.message}")
            return None

    with ThreadManager(concurrency, name="generate") as pool:
        results = pool.map_ordered(run, tasks, label=lambda t: t.source_id)

    kept = sorted((r for r in results if r is not None), key=lambda r: r.source_id)
    debug.info(f"Generated {len(kept)} of {len(tasks)} leads with {client.config.model}")
    return kept
