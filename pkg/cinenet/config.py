"""Analysis defaults.

The window and alpha follow the published analysis (1980 to 2017, p < 0.06).
The country-list threshold is arbitrary; every artifact records the value used.
"""

from dataclasses import dataclass

from ._compat import Final
from .errors import ArgumentError

DEFAULT_YEAR_FROM: Final = 1980
DEFAULT_YEAR_TO: Final = 2017
DEFAULT_MIN_TOTAL: Final = 1000
DEFAULT_ALPHA: Final = 0.06


@dataclass(frozen=True)
class AnalysisConfig:
    year_from: int = DEFAULT_YEAR_FROM
    year_to: int = DEFAULT_YEAR_TO
    min_total: int = DEFAULT_MIN_TOTAL
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self) -> None:
        if self.year_from > self.year_to:
            raise ArgumentError(
                f"inverted year range: {self.year_from} > {self.year_to}"
            )
        if self.min_total < 0:
            raise ArgumentError(f"min_total must be >= 0, got {self.min_total}")
        check_alpha(self.alpha)


def check_alpha(alpha: float) -> None:
    if not 0 < alpha <= 1:
        raise ArgumentError(f"alpha must lie in (0, 1], got {alpha}")
