from typing import Literal, Optional

from pydantic import BaseModel, Field


class Diagnostic(BaseModel):
    """A single message about an input file or a diagram/configuration pair."""

    severity: Literal["error", "warning", "note"] = Field(
        default="error", description="How serious the finding is"
    )
    message: str = Field(description="Human readable description")
    line: Optional[int] = Field(default=None, description="1-based source line")
    column: Optional[int] = Field(default=None, description="1-based source column")

    @classmethod
    def error(cls, message: str, line: Optional[int] = None, column: Optional[int] = None) -> "Diagnostic":
        return cls(severity="error", message=message, line=line, column=column)

    @classmethod
    def note(cls, message: str) -> "Diagnostic":
        return cls(severity="note", message=message)

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.line}:{self.column}: {self.severity}: {self.message}"
        return f"{self.severity}: {self.message}"


class CdodError(ValueError):
    """Base class for all errors raised by cdod. Carries the CLI exit code."""

    exit_code = 3

    def __init__(self, message: str, diagnostics: Optional[list[Diagnostic]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or [Diagnostic.error(message)]


class DiagramError(CdodError):
    """Syntax or well-formedness errors in a class or object diagram."""

    def __init__(self, diagnostics: list[Diagnostic], source: str = "diagram"):
        lines = "\n".join(str(d) for d in diagnostics)
        super().__init__(f"invalid {source}:\n{lines}", diagnostics)


class ConfigError(CdodError):
    """Syntax errors, missing keys or violated constraints in a semantic configuration."""

    def __init__(self, diagnostics: list[Diagnostic]):
        lines = "\n".join(str(d) for d in diagnostics)
        super().__init__(f"invalid configuration:\n{lines}", diagnostics)


class ScopeError(CdodError):
    """A scope that cannot host the objects declared in the object diagram."""


class EngineDivergence(CdodError):
    """Two engines reached different verdicts on the same scope."""

    exit_code = 4


class SoundnessError(CdodError):
    """A witness produced by an engine failed the membership re-check."""

    exit_code = 4
