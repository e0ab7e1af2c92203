"""
Error types shared by every package.

Each error carries a stable ``code`` plus whatever context identifies the
failing input (line, byte offset, corpus name, ...). ``main.py`` is the only
place that catches these; it turns them into a single-line JSON message.
"""

from typing import Any, Dict, Optional


class ErgDivError(Exception):
    """Base exception for all toolkit errors."""

    code = "Error"
    exit_code = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = {k: v for k, v in context.items() if v is not None}

    def with_context(self, **context: Any) -> "ErgDivError":
        """Attach more context (e.g. the corpus name) while propagating."""
        for key, value in context.items():
            if value is not None:
                self.context.setdefault(key, value)
        return self

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": self.message}
        payload.update(self.context)
        return payload

    def __str__(self) -> str:
        if self.context:
            details = ", ".join(f"{k}={v}" for k, v in self.context.items())
            return f"{self.code}: {self.message} ({details})"
        return f"{self.code}: {self.message}"


# =========================================================================
# Derivation parsing
# =========================================================================

class DerivationSyntaxError(ErgDivError):
    code = "DerivationSyntax"

    def __init__(self, message: str, offset: int, **context: Any):
        super().__init__(message, offset=offset, **context)
        self.offset = offset


class UnbalancedParens(DerivationSyntaxError):
    code = "UnbalancedParens"


class EmptyInput(DerivationSyntaxError):
    code = "EmptyInput"


class EmptyLabel(DerivationSyntaxError):
    code = "EmptyLabel"


class UnexpectedToken(DerivationSyntaxError):
    code = "UnexpectedToken"


# =========================================================================
# Ingestion
# =========================================================================

class IoError(ErgDivError):
    code = "Io"


class MalformedRecord(ErgDivError):
    code = "MalformedRecord"

    def __init__(self, message: str, line: int, **context: Any):
        super().__init__(message, line=line, **context)
        self.line = line


class DuplicateId(ErgDivError):
    code = "DuplicateId"

    def __init__(self, item_id: str, **context: Any):
        super().__init__(f"duplicate id '{item_id}'", id=item_id, **context)
        self.item_id = item_id


class InvalidPattern(ErgDivError):
    code = "InvalidPattern"


# =========================================================================
# Analysis
# =========================================================================

class FilterOnConstructions(ErgDivError):
    code = "FilterOnConstructions"


class EmptyDistribution(ErgDivError):
    code = "EmptyDistribution"


class CategoryMismatch(ErgDivError):
    code = "CategoryMismatch"


class BadTargetN(ErgDivError):
    code = "BadTargetN"


class BadIterations(ErgDivError):
    code = "BadIterations"


class BadTopK(ErgDivError):
    code = "BadTopK"


class UnknownLabel(ErgDivError):
    code = "UnknownLabel"


class EmptyCorpus(ErgDivError):
    code = "EmptyCorpus"


# =========================================================================
# Generation
# =========================================================================

class BadTask(ErgDivError):
    code = "BadTask"


class TransportError(ErgDivError):
    code = "Transport"


class AuthFailure(ErgDivError):
    code = "AuthFailure"


class RateLimited(ErgDivError):
    code = "RateLimited"

    def __init__(self, message: str, retry_after: Optional[float] = None, **context: Any):
        super().__init__(message, retry_after=retry_after, **context)
        self.retry_after = retry_after


class MalformedResponse(ErgDivError):
    code = "MalformedResponse"


class EmptyAfterCleaning(ErgDivError):
    code = "EmptyAfterCleaning"


class ReplayMiss(ErgDivError):
    code = "ReplayMiss"


# =========================================================================
# Configuration / CLI
# =========================================================================

class ConfigError(ErgDivError):
    code = "ConfigError"


class UsageError(ErgDivError):
    code = "UsageError"
    exit_code = 2
