import argparse
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from analysis.compare import Statistic
from analysis.distributions import PunctFilter
from analysis.diversity import MAX_ITERATIONS, Metric, Resample
from errors import ConfigError
from generation.archive import DEFAULT_ENDPOINT
from generation.models import GenerationConfig
from profiles.models import Category, CorpusFormat, SourceKind
from utils import get_file

from .validate_json import validate_conf

debug = logging.getLogger("ergdiv")

DEFAULT_CONFIG = "config/config.json"
SCHEMA_FILE = "config/config.schema.json"

DEFAULT_DIVERSITY_SLICES = (
    (Category.CONSTRUCTION, PunctFilter.ALL),
    (Category.LEXTYPE, PunctFilter.ALL),
    (Category.LEXTYPE, PunctFilter.PUNCT_ONLY),
    (Category.LEXTYPE, PunctFilter.NO_PUNCT),
)
DEFAULT_COMPARE_SLICES = (
    (Category.CONSTRUCTION, PunctFilter.ALL),
    (Category.LEXTYPE, PunctFilter.ALL),
)

Slice = Tuple[Category, PunctFilter]


@dataclass(frozen=True)
class CorpusSpec:
    name: str
    path: Path
    format: CorpusFormat = CorpusFormat.JSONL
    kind: SourceKind = SourceKind.HUMAN
    year: str = ""
    lexicon: Optional[Path] = None
    ram_limit_gb: Optional[float] = None


@dataclass(frozen=True)
class DiversitySettings:
    slices: Tuple[Slice, ...] = DEFAULT_DIVERSITY_SLICES
    metrics: Tuple[Metric, ...] = (Metric.SHANNON, Metric.SIMPSON)
    iterations: int = MAX_ITERATIONS
    target_n: Optional[int] = None
    resample: Resample = Resample.AUTO
    include_unknown: bool = False


@dataclass(frozen=True)
class CompareSettings:
    pairs: Tuple[Tuple[str, str], ...] = ()
    slices: Tuple[Slice, ...] = DEFAULT_COMPARE_SLICES
    stat: Statistic = Statistic.JSD
    top_k: int = 10
    examples: int = 3
    include_unknown: bool = False


@dataclass(frozen=True)
class ArchiveSettings:
    endpoint: str = DEFAULT_ENDPOINT
    key_env: str = "NYT_API_KEY"
    months: Optional[str] = None
    cache_dir: Optional[Path] = None
    cache_ttl: int = 604800
    timeout: float = 30.0


@dataclass(frozen=True)
class RunConfig:
    """The fully resolved run: config file values, defaults and CLI overrides"""
    config_path: Optional[Path]
    debug: bool = False
    loglevel: str = "INFO"
    seed: int = 0
    threads: int = 1
    output_dir: Path = Path("out")
    punctuation_patterns: Optional[Path] = None
    skip_root: bool = False
    corpora: Tuple[CorpusSpec, ...] = ()
    groups: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    diversity: DiversitySettings = DiversitySettings()
    compare: CompareSettings = CompareSettings()
    parsability_reference: Optional[str] = None
    generation: GenerationConfig = GenerationConfig()
    tasks_path: Optional[Path] = None
    results_path: Optional[Path] = None
    archive: ArchiveSettings = ArchiveSettings()

    # ------------------------------------------------------------------
    # lookups
    # ------------------------------------------------------------------

    @property
    def corpus_names(self) -> List[str]:
        return [c.name for c in self.corpora]

    def members(self, name: str) -> Tuple[str, ...]:
        """Corpus names behind a corpus or group name"""
        if name in self.groups:
            return self.groups[name]
        if name in self.corpus_names:
            return (name,)
        raise ConfigError(f"'{name}' is neither a corpus nor a group", name=name)

    def ram_limit_for_year(self, year: str) -> Optional[float]:
        limits = {c.ram_limit_gb for c in self.corpora if c.year == year and c.ram_limit_gb is not None}
        return max(limits) if limits else None

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form written to run_config.json"""
        def convert(value):
            if isinstance(value, Path):
                return str(value)
            if hasattr(value, "value") and not isinstance(value, (int, float, str)):
                return value.value
            if isinstance(value, dict):
                return {k: convert(v) for k, v in value.items()}
            if isinstance(value, (list, tuple)):
                return [convert(v) for v in value]
            return value
        return convert(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------
# loading
# ----------------------------------------------------------------------

def _slices(raw: Optional[List[Dict[str, str]]], default: Tuple[Slice, ...]) -> Tuple[Slice, ...]:
    if not raw:
        return default
    return tuple((Category(s["category"]), PunctFilter(s.get("filter", "all"))) for s in raw)


def _resolve(base: Path, value: Optional[str]) -> Optional[Path]:
    if value is None:
        return None
    path = Path(value)
    return path if path.is_absolute() else base / path


def _corpora(base: Path, raw: List[Dict[str, Any]]) -> Tuple[CorpusSpec, ...]:
    specs = []
    seen = set()
    for entry in raw:
        name = entry["name"]
        if name in seen:
            raise ConfigError(f"corpus name '{name}' is used twice", corpus=name)
        seen.add(name)

        spec = CorpusSpec(
            name=name,
            path=_resolve(base, entry["path"]),
            format=CorpusFormat(entry.get("format", "jsonl")),
            kind=SourceKind(entry.get("kind", "human")),
            year=str(entry.get("year", "")),
            lexicon=_resolve(base, entry.get("lexicon")),
            ram_limit_gb=entry.get("ram_limit_gb"),
        )
        if not spec.path.exists():
            raise ConfigError(f"corpus file {spec.path} does not exist", corpus=name, path=str(spec.path))
        if spec.format is CorpusFormat.DERIVATIONS:
            if spec.lexicon is None:
                raise ConfigError(f"corpus '{name}' uses derivations but names no lexicon", corpus=name)
            if not spec.lexicon.exists():
                raise ConfigError(f"lexicon {spec.lexicon} does not exist", corpus=name, path=str(spec.lexicon))
        specs.append(spec)
    return tuple(specs)


def _groups(raw: Dict[str, List[str]], corpus_names: List[str]) -> Dict[str, Tuple[str, ...]]:
    groups = {}
    for name, members in raw.items():
        if name in corpus_names:
            raise ConfigError(f"group '{name}' has the same name as a corpus", group=name)
        unknown = [m for m in members if m not in corpus_names]
        if unknown:
            raise ConfigError(f"group '{name}' names unknown corpora: {', '.join(unknown)}", group=name)
        groups[name] = tuple(members)
    return groups


def load_run_config(path: Optional[str] = None) -> RunConfig:
    """
    Read, schema-check and resolve a run config. Relative paths inside the
    file are taken relative to the file itself.

    Raises:
        ConfigError: unreadable or invalid file, unknown names, missing paths
    """
    config_path = Path(path) if path else Path(get_file(DEFAULT_CONFIG))
    raw = validate_conf(str(config_path), get_file(SCHEMA_FILE))
    base = config_path.resolve().parent

    corpora = _corpora(base, raw.get("corpora", []))
    names = [c.name for c in corpora]
    groups = _groups(raw.get("groups", {}), names)

    div = raw.get("diversity", {})
    diversity = DiversitySettings(
        slices=_slices(div.get("slices"), DEFAULT_DIVERSITY_SLICES),
        metrics=tuple(Metric(m) for m in div.get("metrics", ["shannon", "simpson"])),
        iterations=div.get("iterations", MAX_ITERATIONS),
        target_n=div.get("target_n"),
        resample=Resample(div.get("resample", "auto")),
        include_unknown=div.get("include_unknown", False),
    )

    cmp_raw = raw.get("compare", {})
    compare = CompareSettings(
        pairs=tuple((a, b) for a, b in cmp_raw.get("pairs", [])),
        slices=_slices(cmp_raw.get("slices"), DEFAULT_COMPARE_SLICES),
        stat=Statistic(cmp_raw.get("stat", "jsd")),
        top_k=cmp_raw.get("top_k", 10),
        examples=cmp_raw.get("examples", 3),
        include_unknown=cmp_raw.get("include_unknown", False),
    )

    gen_raw = dict(raw.get("generation", {}))
    tasks_path = _resolve(base, gen_raw.pop("tasks", None))
    results_path = _resolve(base, gen_raw.pop("results", None))
    generation = GenerationConfig.from_dict(gen_raw)

    arc = raw.get("archive", {})
    archive = ArchiveSettings(
        endpoint=arc.get("endpoint", DEFAULT_ENDPOINT),
        key_env=arc.get("key_env", "NYT_API_KEY"),
        months=arc.get("months"),
        cache_dir=_resolve(base, arc.get("cache_dir")),
        cache_ttl=arc.get("cache_ttl", 604800),
        timeout=arc.get("timeout", 30.0),
    )

    config = RunConfig(
        config_path=config_path,
        debug=raw.get("debug", False),
        loglevel=raw.get("loglevel", "INFO"),
        seed=raw.get("seed", 0),
        threads=raw.get("threads", 1),
        output_dir=_resolve(base, raw.get("output_dir", "out")),
        punctuation_patterns=_resolve(base, raw.get("punctuation_patterns")),
        skip_root=raw.get("skip_root", False),
        corpora=corpora,
        groups=groups,
        diversity=diversity,
        compare=compare,
        parsability_reference=raw.get("parsability", {}).get("reference"),
        generation=generation,
        tasks_path=tasks_path,
        results_path=results_path,
        archive=archive,
    )
    _check_names(config)
    debug.debug(f"Loaded run config {config_path}: {len(corpora)} corpora, {len(groups)} groups")
    return config


def _check_names(config: RunConfig) -> None:
    for first, second in config.compare.pairs:
        config.members(first)
        config.members(second)
    if config.parsability_reference is not None and config.parsability_reference not in config.corpus_names:
        raise ConfigError(f"parsability reference '{config.parsability_reference}' is not a corpus",
                          name=config.parsability_reference)


def apply_args(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Command-line flags win over the config file"""
    top = {}
    if getattr(args, "seed", None) is not None:
        top["seed"] = args.seed
    if getattr(args, "out", None) is not None:
        top["output_dir"] = Path(args.out)
    if getattr(args, "threads", None) is not None:
        top["threads"] = args.threads
    if getattr(args, "loglevel", None):
        top["loglevel"] = args.loglevel.upper()

    div = {}
    if getattr(args, "iterations", None) is not None:
        div["iterations"] = args.iterations
    if getattr(args, "target_n", None) is not None:
        div["target_n"] = args.target_n
    if getattr(args, "resample", None) is not None:
        div["resample"] = Resample(args.resample)
    if args.command == "diversity" and getattr(args, "include_unknown", None):
        div["include_unknown"] = True
    if div:
        top["diversity"] = replace(config.diversity, **div)

    cmp = {}
    if getattr(args, "stat", None) is not None:
        cmp["stat"] = Statistic(args.stat)
    if getattr(args, "top_k", None) is not None:
        cmp["top_k"] = args.top_k
    if getattr(args, "examples", None) is not None:
        cmp["examples"] = args.examples
    if getattr(args, "pair", None):
        cmp["pairs"] = tuple((a, b) for a, b in args.pair)
    if args.command == "compare" and getattr(args, "include_unknown", None):
        cmp["include_unknown"] = True
    if cmp:
        top["compare"] = replace(config.compare, **cmp)

    gen = {}
    if args.command == "generate":
        if args.model:
            gen["model"] = args.model
        if args.endpoint:
            gen["endpoint"] = args.endpoint
        if args.concurrency:
            gen["concurrency"] = args.concurrency
    if gen:
        top["generation"] = replace(config.generation, **gen)
    if getattr(args, "tasks", None):
        top["tasks_path"] = Path(args.tasks)

    arc = {}
    if args.command == "fetch-headlines":
        if args.months:
            arc["months"] = args.months
        if args.endpoint:
            arc["endpoint"] = args.endpoint
    if arc:
        top["archive"] = replace(config.archive, **arc)

    config = replace(config, **top) if top else config
    _check_names(config)
    return config
