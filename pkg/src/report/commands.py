"""
Subcommand implementations. Each command takes the resolved RunConfig and
the parsed arguments, writes its outputs into the output directory and
returns the paths it wrote.
"""

import logging
import tempfile
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import diskcache as dc
import regex
from rich.console import Console

from analysis.compare import find_examples, rank_distinctive
from analysis.distributions import PunctFilter, TypeDistribution, build_distribution, pool, write_distribution_csv
from analysis.diversity import bootstrap_diversity, common_target_n
from analysis.parsability import aggregate_stats, binned_costs, relative_profile
from data.run_config import CorpusSpec, RunConfig
from errors import ConfigError, ErgDivError, UsageError
from generation.archive import ArchiveClient, fetch_headlines, parse_months
from generation.client import ChatClient
from generation.harness import load_tasks, run_generation, write_results, write_tasks
from generation.replay import ReplayStore
from profiles.loader import export_jsonl, load_corpus, load_lexicon
from profiles.models import Category, Corpus, CorpusFormat, LexiconMap
from profiles.punctuation import PunctuationConfig, load_punctuation_config
from report import tables
from thread_manager import ThreadManager
from utils import atomic_write_text, write_csv

debug = logging.getLogger("ergdiv")

console = Console()

_UNSAFE = regex.compile(r"[^A-Za-z0-9._-]+")


def _safe(name: str) -> str:
    return _UNSAFE.sub("_", name)


def write_provenance(config: RunConfig) -> Path:
    return atomic_write_text(config.output_dir / "run_config.json", config.to_json())


# =========================================================================
# Loading
# =========================================================================

def load_corpora(config: RunConfig, threads: ThreadManager) -> Dict[str, Corpus]:
    """Every configured corpus, loaded in parallel, keyed by name in config order"""
    if not config.corpora:
        raise UsageError("no corpora configured")

    lexicons: Dict[Path, LexiconMap] = {}
    for spec in config.corpora:
        if spec.lexicon is not None and spec.lexicon not in lexicons:
            lexicons[spec.lexicon] = load_lexicon(spec.lexicon)

    def load(spec: CorpusSpec) -> Corpus:
        try:
            return load_corpus(spec.path, spec.format, name=spec.name, kind=spec.kind, year=spec.year,
                               lexicon=lexicons.get(spec.lexicon), skip_root=config.skip_root)
        except ErgDivError as e:
            raise e.with_context(corpus=spec.name)

    loaded = threads.map_ordered(load, config.corpora, label=lambda s: s.name)
    return {c.name: c for c in loaded}


def _punctuation(config: RunConfig) -> PunctuationConfig:
    return load_punctuation_config(config.punctuation_patterns)


def _distribution(corpus: Corpus, category: Category, punct_filter: PunctFilter, punct: PunctuationConfig,
                  include_unknown: bool, allow_empty: bool = False) -> TypeDistribution:
    try:
        return build_distribution(corpus, category, punct_filter, punct, include_unknown, allow_empty)
    except ErgDivError as e:
        raise e.with_context(corpus=corpus.name)


# =========================================================================
# ingest
# =========================================================================

def write_distributions(config: RunConfig, corpora: Dict[str, Corpus]) -> List[Path]:
    """distributions/<corpus>_<category>_<filter>.csv for every corpus and configured diversity slice"""
    punct = _punctuation(config)
    written = []
    for corpus in corpora.values():
        for category, punct_filter in config.diversity.slices:
            d = _distribution(corpus, category, punct_filter, punct, config.diversity.include_unknown, True)
            name = f"{_safe(corpus.name)}_{category.value}_{punct_filter.value}.csv"
            written.append(write_distribution_csv(d, config.output_dir / "distributions" / name))
    return written


def cmd_ingest(config: RunConfig, args) -> List[Path]:
    with ThreadManager(config.threads) as threads:
        corpora = load_corpora(config, threads)

    rows = []
    for corpus in corpora.values():
        constructions = _distribution(corpus, Category.CONSTRUCTION, PunctFilter.ALL, None, False, True)
        lextypes = _distribution(corpus, Category.LEXTYPE, PunctFilter.ALL, None, False, True)
        rows.append({
            "corpus": corpus.name,
            "kind": corpus.source_kind.value,
            "year": corpus.year_tag,
            "sentences": len(corpus),
            "parsed": len(corpus.parsed_items),
            "construction_N": constructions.N,
            "construction_S": constructions.S,
            "lextype_N": lextypes.N,
            "lextype_S": lextypes.S,
            "unknown_lextypes": corpus.unknown_lextypes,
        })

    written = [write_provenance(config), write_csv(tables.summary_frame(rows), config.output_dir / "corpora.csv")]
    console.print(tables.summary_table(rows))

    written.extend(write_distributions(config, corpora))

    export = getattr(args, "export", None)
    if export:
        for spec in config.corpora:
            if spec.format is CorpusFormat.DERIVATIONS:
                written.append(export_jsonl(corpora[spec.name], Path(export) / f"{_safe(spec.name)}.jsonl"))
    return written


# =========================================================================
# diversity
# =========================================================================

def cmd_diversity(config: RunConfig, args) -> List[Path]:
    """One CSV per (category, filter, metric), a row per corpus, rarefied to the smallest N"""
    settings = config.diversity
    written = [write_provenance(config)]
    punct = _punctuation(config)

    with ThreadManager(config.threads) as threads:
        corpora = load_corpora(config, threads)

        for category, punct_filter in settings.slices:
            dists = [_distribution(c, category, punct_filter, punct, settings.include_unknown)
                     for c in corpora.values()]
            target_n = settings.target_n or common_target_n(dists)

            for metric in settings.metrics:
                rows = []
                for dist in dists:
                    try:
                        estimate = bootstrap_diversity(dist, metric, target_n, settings.iterations, config.seed,
                                                       settings.resample, threads)
                    except ErgDivError as e:
                        raise e.with_context(corpus=dist.name)
                    rows.append(tables.diversity_row(dist.name, category.value, punct_filter.value, estimate))
                    debug.info(f"{dist.name} {category.value}/{punct_filter.value} {metric.value}: "
                               f"{estimate.point:.6f} [{estimate.ci_low:.6f}, {estimate.ci_high:.6f}]")

                path = config.output_dir / f"diversity_{category.value}_{punct_filter.value}_{metric.value}.csv"
                written.append(write_csv(tables.diversity_frame(rows), path))
    return written


# =========================================================================
# compare
# =========================================================================

def _pairs(config: RunConfig) -> Sequence[Tuple[str, str]]:
    if config.compare.pairs:
        return config.compare.pairs
    if len(config.corpora) == 2:
        return ((config.corpora[0].name, config.corpora[1].name),)
    if len(config.corpora) < 2:
        raise UsageError("comparison needs two corpora or groups")
    raise UsageError("several corpora configured: name the pairs with --pair or compare.pairs")


def _pooled_corpus(name: str, corpora: Sequence[Corpus]) -> Corpus:
    if len(corpora) == 1:
        return corpora[0]
    items = tuple(item for c in corpora for item in c.items)
    return Corpus(name, corpora[0].source_kind, corpora[0].year_tag, items)


def _examples(report, side_corpora: Dict[str, Corpus], category: Category, k: int) -> Dict[str, List[str]]:
    examples = {}
    for c in report.ranked:
        corpus = side_corpora[report.preferred_name(c)]
        try:
            examples[c.label] = find_examples(corpus, c.label, category, k)
        except ErgDivError as e:
            debug.warning(f"No example for {c.label} in {corpus.name}: {e.message}")
            examples[c.label] = []
    return examples


def cmd_compare(config: RunConfig, args) -> List[Path]:
    """A ComparisonReport CSV and text table per pair and slice; groups are pooled first"""
    settings = config.compare
    pairs = _pairs(config)
    for first, second in pairs:
        if first == second:
            raise UsageError(f"cannot compare '{first}' with itself")

    written = [write_provenance(config)]
    punct = _punctuation(config)
    with ThreadManager(config.threads) as threads:
        corpora = load_corpora(config, threads)

    for first, second in pairs:
        sides = {name: [corpora[m] for m in config.members(name)] for name in (first, second)}
        side_corpora = {name: _pooled_corpus(name, members) for name, members in sides.items()}

        for category, punct_filter in settings.slices:
            d1, d2 = (pool(_distribution(c, category, punct_filter, punct, settings.include_unknown)
                           for c in sides[name]) for name in (first, second))
            report = rank_distinctive(d1, d2, settings.top_k, settings.stat, first, second)
            examples = _examples(report, side_corpora, category, settings.examples)

            stem = f"compare_{_safe(first)}_vs_{_safe(second)}_{category.value}_{punct_filter.value}"
            written.append(write_csv(tables.comparison_frame(report, examples), config.output_dir / f"{stem}.csv"))
            written.append(atomic_write_text(config.output_dir / f"{stem}.txt",
                                             tables.comparison_text(report, examples)))
    return written


# =========================================================================
# parsability
# =========================================================================

def cmd_parsability(config: RunConfig, args) -> List[Path]:
    written = [write_provenance(config)]
    with ThreadManager(config.threads) as threads:
        corpora = load_corpora(config, threads)

    stats = []
    bins = []
    for spec in config.corpora:
        corpus = corpora[spec.name]
        stats.append(aggregate_stats(corpus, spec.ram_limit_gb or config.ram_limit_for_year(spec.year)))
        bins.append(binned_costs(corpus))

    out = config.output_dir
    text = tables.parse_stats_text(stats)
    written.append(write_csv(tables.parse_stats_frame(stats), out / "parsability.csv"))
    written.append(atomic_write_text(out / "parsability.txt", text))
    written.append(write_csv(tables.bins_frame(bins), out / "length_bins.csv"))
    written.append(atomic_write_text(out / "length_bins.txt", tables.bins_text(bins)))

    if config.parsability_reference:
        reference = next(s for s in stats if s.name == config.parsability_reference)
        profiles = [relative_profile(s, reference) for s in stats if s is not reference]
        written.append(write_csv(tables.relative_frame(profiles), out / "relative_profile.csv"))

    console.print(text, markup=False, highlight=False)
    return written


# =========================================================================
# generate / fetch-headlines
# =========================================================================

def _tasks_path(config: RunConfig) -> Path:
    return config.tasks_path or config.output_dir / "tasks.jsonl"


def cmd_generate(config: RunConfig, args, transport=None) -> List[Path]:
    tasks = load_tasks(_tasks_path(config))

    replay: Optional[ReplayStore] = None
    if getattr(args, "replay", None):
        if not Path(args.replay).exists():
            raise ConfigError(f"replay file {args.replay} does not exist", path=args.replay)
        replay = ReplayStore(args.replay)
    record = ReplayStore(args.record) if getattr(args, "record", None) else None

    client = ChatClient(config.generation, replay=replay, record=record, transport=transport)
    try:
        results = run_generation(tasks, client, concurrency=config.generation.concurrency)
    finally:
        client.close()

    results_path = config.results_path or config.output_dir / f"results_{_safe(config.generation.model)}.jsonl"
    return [write_provenance(config), write_results(results, results_path)]


def cmd_fetch_headlines(config: RunConfig, args, transport=None) -> List[Path]:
    settings = config.archive
    if not settings.months:
        raise UsageError("no months given: use --months or archive.months")
    months = parse_months(settings.months)

    cache_dir = settings.cache_dir or Path(tempfile.gettempdir()) / "ergdiv_cache"
    with dc.Cache(str(cache_dir)) as cache:
        client = ArchiveClient(settings.endpoint, settings.key_env, cache=cache, cache_ttl=settings.cache_ttl,
                               timeout=settings.timeout, transport=transport)
        try:
            tasks = fetch_headlines(client, months)
        finally:
            client.close()

    return [write_provenance(config), write_tasks(tasks, _tasks_path(config))]


COMMANDS = {
    "ingest": cmd_ingest,
    "diversity": cmd_diversity,
    "compare": cmd_compare,
    "parsability": cmd_parsability,
    "generate": cmd_generate,
    "fetch-headlines": cmd_fetch_headlines,
}
