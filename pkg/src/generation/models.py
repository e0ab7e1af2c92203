"""
Generation Data Models

Dataclasses for the lead-generation pipeline: tasks built from archive
articles, the sampling configuration and the per-task results.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from errors import BadTask, ConfigError

# ============================================================================
# Tasks
# ============================================================================

@dataclass(frozen=True)
class GenerationTask:
    """One article to re-write: its headline and the first three words of its lead"""
    headline: str
    lead_three_words: str
    source_id: str

    @classmethod
    def from_lead(cls, headline: str, lead: str, source_id: str) -> 'GenerationTask':
        return cls(headline.strip(), " ".join(lead.split()[:3]), source_id)

    def validate(self) -> 'GenerationTask':
        if not self.headline.strip():
            raise BadTask("headline is empty", source_id=self.source_id)
        words = self.lead_three_words.split()
        if len(words) != 3:
            raise BadTask(f"lead_three_words must have exactly 3 tokens, got {len(words)}",
                          source_id=self.source_id)
        if not self.source_id:
            raise BadTask("source_id is empty")
        return self

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GenerationTask':
        try:
            return cls(
                headline=str(data['headline']),
                lead_three_words=str(data['lead_three_words']),
                source_id=str(data['source_id']),
            )
        except KeyError as e:
            raise BadTask(f"task record is missing {e.args[0]}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source_id': self.source_id,
            'headline': self.headline,
            'lead_three_words': self.lead_three_words,
        }


# ============================================================================
# Sampling configuration
# ============================================================================

# config name -> OpenAI chat-completion field
WIRE_NAMES = {
    'temperature': 'temperature',
    'top_p': 'top_p',
    'top_k': 'top_k',
    'repetition_penalty': 'repetition_penalty',
    'max_new_tokens': 'max_tokens',
    'num_return_sequences': 'n',
    'num_beams': 'num_beams',
}


@dataclass(frozen=True)
class GenerationConfig:
    """Sampling fields default to the values the published leads were generated with"""
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4o"
    api_key_env: Optional[str] = "OPENAI_API_KEY"
    temperature: float = 0.7
    top_p: float = 0.92
    top_k: int = 50
    repetition_penalty: float = 1.05
    max_new_tokens: int = 1000
    num_return_sequences: int = 1
    num_beams: int = 1
    unsupported_params: Tuple[str, ...] = ()
    concurrency: int = 4
    timeout: float = 60.0
    max_retries: int = 5

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GenerationConfig':
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown generation settings: {', '.join(sorted(unknown))}")
        values = dict(data)
        if 'unsupported_params' in values:
            values['unsupported_params'] = tuple(values['unsupported_params'])
        return cls(**values)

    def sampling_fields(self) -> Dict[str, Any]:
        """Every sampling field under its wire name, minus the ones the endpoint rejects"""
        dropped = set(self.unsupported_params)
        return {wire: getattr(self, name) for name, wire in WIRE_NAMES.items()
                if name not in dropped and wire not in dropped}


# ============================================================================
# Results
# ============================================================================

@dataclass(frozen=True)
class GenerationResult:
    source_id: str
    model: str
    raw: str
    cleaned: str
    sentences: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source_id': self.source_id,
            'model': self.model,
            'raw': self.raw,
            'cleaned': self.cleaned,
            'sentences': list(self.sentences),
        }
