"""Exception hierarchy shared by the pipeline stages and the CLI."""

from pathlib import Path
from typing import Optional, Union

from ._compat import Literal


class CinenetError(Exception):
    """Base class for every error raised by cinenet."""


class ArgumentError(CinenetError, ValueError):
    """A precondition on an argument does not hold."""


class UsageError(CinenetError):
    """The command line was used incorrectly."""


class FormatError(CinenetError):
    """Input does not follow the expected file format."""

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
    ) -> None:
        self.message = message
        self.path = None if path is None else str(path)
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.path is not None:
            where = self.path
            if self.line is not None:
                where += f":{self.line}"
            where += ": "
        elif self.line is not None:
            where = f"line {self.line}: "
        return where + self.message


class ExactTestUnavailable(CinenetError):
    """The exact rank-sum method refuses the input; use the approximation."""

    def __init__(self, reason: Literal["ties", "size"], message: str) -> None:
        self.reason = reason
        super().__init__(message)


class DegenerateDistributionError(CinenetError):
    """The null distribution of U has zero variance (all values tied)."""


class InsufficientDataError(CinenetError):
    """Too few defined points to run a test."""


class MissingArtifactError(CinenetError):
    """An upstream file the command depends on does not exist."""

    def __init__(self, path: Union[str, Path]) -> None:
        self.path = str(path)
        super().__init__(f"missing upstream artifact: {self.path}")


__all__ = [
    "CinenetError",
    "ArgumentError",
    "UsageError",
    "FormatError",
    "ExactTestUnavailable",
    "DegenerateDistributionError",
    "InsufficientDataError",
    "MissingArtifactError",
]
