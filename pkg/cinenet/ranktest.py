"""
Rank-sum (Mann-Whitney U) tests, the per-year significance scan and box
summaries.

The exact null distribution of U comes from the subset-count recursion

    f(m, n, k) = f(m - 1, n, k - n) + f(m, n - 1, k),   f(m, n, 0) = 1

which counts the rank subsets of size m (out of m + n) with statistic k.
One-sided p-values are upper tails for "sample 1 shifted up", the observed
point mass included. Two-sided p-values double the smaller tail, capped at 1.
"""

import csv
import json
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, sqrt
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from scipy import stats

from ._compat import Final, Self
from .config import check_alpha
from .errors import (
    ArgumentError,
    DegenerateDistributionError,
    ExactTestUnavailable,
    InsufficientDataError,
)
from .indicator import IndicatorSeries, RhoPoint, format_real

logger = logging.getLogger(__name__)

Real = Union[float, int, Fraction]

# Largest enumeration allowed: the one at n1 + n2 = 25.
EXACT_MAX_SIZE: Final = 25
EXACT_SUBSET_LIMIT: Final = comb(EXACT_MAX_SIZE, EXACT_MAX_SIZE // 2)

MIN_SCAN_POINTS: Final = 3

BOX_HEADER: Final = (
    "year",
    "min",
    "q1",
    "median",
    "q3",
    "max",
    "lower_fence",
    "upper_fence",
    "n_outliers",
)


class Method(str, Enum):
    EXACT = "exact"
    NORMAL_APPROX = "normal_approx"
    # All values tied; reported by scan_years only.
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class RankTestResult:
    """Outcome of one rank-sum test.

    ``u_statistic`` is U of sample 1, the number of (sample 1, sample 2) pairs
    where the sample 1 value is larger, ties counting one half. The exact
    method also keeps its p-values as fractions.
    """

    u_statistic: float
    n1: int
    n2: int
    p_one_sided: float
    p_two_sided: float
    method: Method
    tie_correction_applied: bool = False
    p_one_sided_exact: Optional[Fraction] = None
    p_two_sided_exact: Optional[Fraction] = None


@dataclass(frozen=True)
class ScanEntry:
    year: int
    avg_rho: Fraction
    result: RankTestResult


@dataclass(frozen=True)
class ScanReport:
    focal: str
    alpha: float
    p_floor: float
    entries: Tuple[ScanEntry, ...]
    significant_years: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "focal": self.focal,
            "alpha": self.alpha,
            "p_floor": _rounded(self.p_floor),
            "entries": [
                {
                    "year": entry.year,
                    "avg_rho": _rounded(entry.avg_rho),
                    "u": _rounded(entry.result.u_statistic),
                    "p_one_sided": _rounded(entry.result.p_one_sided),
                    "p_two_sided": _rounded(entry.result.p_two_sided),
                    "method": entry.result.method.value,
                }
                for entry in self.entries
            ],
            "significant_years": list(self.significant_years),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Self:
        data = json.loads(text)
        entries = []
        for item in data["entries"]:
            result = RankTestResult(
                u_statistic=float(item["u"]),
                n1=1,
                n2=len(data["entries"]) - 1,
                p_one_sided=float(item["p_one_sided"]),
                p_two_sided=float(item["p_two_sided"]),
                method=Method(item["method"]),
            )
            entries.append(ScanEntry(int(item["year"]), Fraction(str(item["avg_rho"])), result))
        return cls(
            focal=data["focal"],
            alpha=float(data["alpha"]),
            p_floor=float(data["p_floor"]),
            entries=tuple(entries),
            significant_years=tuple(int(year) for year in data["significant_years"]),
        )


@dataclass(frozen=True)
class BoxSummary:
    year: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    lower_fence: float
    upper_fence: float
    outliers: Tuple[float, ...]


def _rounded(value: Real) -> float:
    return float(format_real(value))


def _as_array(values: Sequence[Real], name: str) -> np.ndarray:
    if len(values) == 0:
        raise ArgumentError(f"{name} is empty")
    array = np.asarray([float(v) for v in values], dtype=float)
    if np.isnan(array).any():
        raise ArgumentError(f"{name} contains NaN")
    return array


def _rank_codes(sample1: Sequence[Real], sample2: Sequence[Real]) -> np.ndarray:
    """Both samples, each value replaced by its position among the distinct values.

    Positions come from comparing the values themselves, so fractions that
    differ beyond float precision stay apart and equal values stay tied.
    """
    combined: List[Real] = []
    for values, name in ((sample1, "sample1"), (sample2, "sample2")):
        if len(values) == 0:
            raise ArgumentError(f"{name} is empty")
        # NaN is the only value unequal to itself.
        if any(v != v for v in values):
            raise ArgumentError(f"{name} contains NaN")
        combined.extend(values)
    position = {value: i for i, value in enumerate(sorted(set(combined)))}
    return np.asarray([position[v] for v in combined], dtype=float)


def _u_statistic(combined: np.ndarray, n1: int) -> float:
    ranks = stats.rankdata(combined)
    return float(ranks[:n1].sum() - n1 * (n1 + 1) / 2)


@lru_cache(maxsize=128)
def _u_counts(m: int, n: int) -> Tuple[int, ...]:
    # Rolls over n; table[j] holds f(j, n, .) for the current n.
    dtype = np.int64 if comb(m + n, m) < 2**62 else object
    table = [np.ones(1, dtype=dtype) for _ in range(m + 1)]
    for size in range(1, n + 1):
        for j in range(1, m + 1):
            counts = np.zeros(j * size + 1, dtype=dtype)
            counts[: len(table[j])] += table[j]
            counts[size : size + len(table[j - 1])] += table[j - 1]
            table[j] = counts
    return tuple(int(c) for c in table[m])


def u_distribution(n1: int, n2: int) -> Tuple[int, ...]:
    """Number of rank assignments giving each U in ``0 .. n1 * n2`` under the null."""
    if n1 < 0 or n2 < 0:
        raise ArgumentError("sample sizes must be non-negative")
    return _u_counts(min(n1, n2), max(n1, n2))


def mann_whitney_exact(sample1: Sequence[Real], sample2: Sequence[Real]) -> RankTestResult:
    """Exact rank-sum test by enumeration of the null distribution of U.

    Refuses (``ExactTestUnavailable``) when values are tied or the enumeration
    is larger than the one at n1 + n2 = 25; a single observation against any
    number of values is always small enough.
    """
    combined = _rank_codes(sample1, sample2)
    n1, n2 = len(sample1), len(sample2)

    if len(np.unique(combined)) != len(combined):
        raise ExactTestUnavailable("ties", "tied values; exact enumeration needs distinct ranks")
    if comb(n1 + n2, min(n1, n2)) > EXACT_SUBSET_LIMIT:
        raise ExactTestUnavailable(
            "size", f"n1={n1}, n2={n2} exceeds the exact enumeration limit"
        )

    u = int(round(_u_statistic(combined, n1)))
    counts = u_distribution(n1, n2)
    total = comb(n1 + n2, n1)
    upper = Fraction(sum(counts[u:]), total)
    lower = Fraction(sum(counts[: u + 1]), total)
    two_sided = min(Fraction(1), 2 * min(upper, lower))

    return RankTestResult(
        u_statistic=float(u),
        n1=n1,
        n2=n2,
        p_one_sided=float(upper),
        p_two_sided=float(two_sided),
        method=Method.EXACT,
        tie_correction_applied=False,
        p_one_sided_exact=upper,
        p_two_sided_exact=two_sided,
    )


def mann_whitney_approx(sample1: Sequence[Real], sample2: Sequence[Real]) -> RankTestResult:
    """Normal approximation with continuity and midrank tie corrections."""
    combined = _rank_codes(sample1, sample2)
    n1, n2 = len(sample1), len(sample2)
    n = n1 + n2

    _, tie_sizes = np.unique(combined, return_counts=True)
    tie_term = float((tie_sizes**3 - tie_sizes).sum())
    variance = n1 * n2 / 12 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0:
        raise DegenerateDistributionError("all values are tied; U has zero variance")
    sd = sqrt(variance)

    u = _u_statistic(combined, n1)
    mean = n1 * n2 / 2
    z_upper = (u - mean - 0.5) / sd
    z_two = max(abs(u - mean) - 0.5, 0.0) / sd

    return RankTestResult(
        u_statistic=u,
        n1=n1,
        n2=n2,
        p_one_sided=float(stats.norm.sf(z_upper)),
        p_two_sided=float(min(1.0, 2 * stats.norm.sf(z_two))),
        method=Method.NORMAL_APPROX,
        tie_correction_applied=tie_term > 0,
    )


def mann_whitney(sample1: Sequence[Real], sample2: Sequence[Real]) -> RankTestResult:
    """Exact test when it accepts the input, otherwise the approximation."""
    try:
        return mann_whitney_exact(sample1, sample2)
    except ExactTestUnavailable as exc:
        logger.debug("exact test refused (%s); using normal approximation", exc.reason)
        return mann_whitney_approx(sample1, sample2)


def p_floor(n_points: int) -> float:
    """Smallest two-sided p a single year can reach among ``n_points`` years."""
    if n_points < 1:
        raise ArgumentError("need at least one point")
    return min(1.0, 2 / n_points)


def scan_years(series: IndicatorSeries, alpha: float) -> ScanReport:
    """Test every defined year's average rho against all the other years."""
    check_alpha(alpha)
    years = series.defined_years
    if len(years) < MIN_SCAN_POINTS:
        raise InsufficientDataError(
            f"{series.focal}: {len(years)} defined years, at least {MIN_SCAN_POINTS} needed"
        )

    entries = []
    for year in years:
        others = [series.avg_rho[other] for other in years if other != year]
        try:
            result = mann_whitney([series.avg_rho[year]], others)
        except DegenerateDistributionError:
            result = RankTestResult(
                u_statistic=len(others) / 2,
                n1=1,
                n2=len(others),
                p_one_sided=1.0,
                p_two_sided=1.0,
                method=Method.DEGENERATE,
            )
        entries.append(ScanEntry(year, series.avg_rho[year], result))

    floor = p_floor(len(years))
    significant = tuple(entry.year for entry in entries if entry.result.p_two_sided < alpha)
    if floor >= alpha:
        logger.warning(
            "%s: p floor %.4f over %d years is not below alpha %.4f; nothing can be significant",
            series.focal,
            floor,
            len(years),
            alpha,
        )
    logger.info("%s: %d significant years at alpha %s", series.focal, len(significant), alpha)
    return ScanReport(series.focal, alpha, floor, tuple(entries), significant)


def box_summary(values: Sequence[Real], year: int) -> BoxSummary:
    """Five-number summary with 1.5 IQR fences; quartiles interpolate at (n - 1) p."""
    array = np.sort(_as_array(values, "values"))
    q1, median, q3 = np.percentile(array, [25, 50, 75])
    iqr = q3 - q1
    lower = q1 - 1.5 * iqr
    upper = q3 + 1.5 * iqr
    outliers = tuple(float(v) for v in array if v < lower or v > upper)
    return BoxSummary(
        year=year,
        minimum=float(array[0]),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        maximum=float(array[-1]),
        lower_fence=float(lower),
        upper_fence=float(upper),
        outliers=outliers,
    )


def box_summaries(points: Iterable[RhoPoint]) -> List[BoxSummary]:
    """One summary per year over that year's partner rho values."""
    by_year: Dict[int, List[Fraction]] = {}
    for point in points:
        by_year.setdefault(point.year_i, []).append(point.rho)
    return [box_summary(by_year[year], year) for year in sorted(by_year)]


def write_box_summaries(summaries: Iterable[BoxSummary], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(BOX_HEADER)
    for box in summaries:
        writer.writerow(
            (
                box.year,
                *(
                    format_real(v)
                    for v in (
                        box.minimum,
                        box.q1,
                        box.median,
                        box.q3,
                        box.maximum,
                        box.lower_fence,
                        box.upper_fence,
                    )
                ),
                len(box.outliers),
            )
        )
