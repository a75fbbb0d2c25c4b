"""Three-valued results for fuel-bounded procedures, and the package's exceptions."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class SymdynError(Exception):
    """Base class for errors raised by this package."""


class UndecidableContextError(SymdynError):
    """An operation needing a decidable word problem got a presented group."""


class InconsistentPatternError(SymdynError):
    pass


class AlphabetMismatchError(SymdynError):
    pass


class EmptySubshiftError(SymdynError):
    pass


class OracleViolationError(SymdynError):
    """A language oracle accepted a pattern none of whose one-cell extensions it accepts."""


class UncertifiedLanguageError(SymdynError):
    pass


class DocumentError(SymdynError):
    """Malformed JSON document; ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class Status(enum.Enum):
    YES = "certified-yes"
    NO = "certified-no"
    UNKNOWN = "unknown"


EXIT_CODES = {Status.YES: 0, Status.NO: 1, Status.UNKNOWN: 2}


@dataclass
class FuelVerdict:
    """Outcome of a semi-decision.

    ``certificate`` is attached whenever the verdict can be replayed; ``witness``
    carries the surviving object of an inconclusive search (an extension, a word).
    """

    status: Status
    certificate: Any = None
    witness: Any = None
    detail: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    @property
    def yes(self) -> bool:
        return self.status is Status.YES

    @property
    def no(self) -> bool:
        return self.status is Status.NO

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def __repr__(self) -> str:
        extra = f", detail={self.detail!r}" if self.detail else ""
        return f"FuelVerdict({self.status.value}{extra})"
