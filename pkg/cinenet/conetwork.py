"""
Per-year country co-occurrence networks.

For every movie of a year, each region it was published in gains one on the
diagonal, and every unordered pair of its regions gains one on the symmetric
off-diagonal entry. Networks are stored sparsely (diagonal plus
``(a, b) -> count`` with ``a < b``); a dense view is available for export.
"""

import csv
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import (
    BinaryIO,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    TextIO,
    Tuple,
    Union,
)

import numpy as np

from ._compat import Final, Self, TypeAlias
from .errors import ArgumentError, FormatError
from .ingest import MovieRecord

logger = logging.getLogger(__name__)

Pair: TypeAlias = Tuple[str, str]

MATRIX_HEADER: Final = ("year", "country_a", "country_b", "count")
TOTALS_HEADER: Final = ("country", "total")


def _pair(a: str, b: str) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class YearNetwork:
    """Symmetric country x country movie counts for one year.

    ``diagonal[a]`` is the number of movies published in ``a`` that year;
    ``pairs[(a, b)]`` (``a < b``) the number published in both. Zero entries
    are not stored.
    """

    year: int
    diagonal: Mapping[str, int] = field(default_factory=dict)
    pairs: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for code, count in self.diagonal.items():
            if count <= 0:
                raise ArgumentError(f"{self.year}: diagonal of {code} must be positive")
        for (a, b), count in self.pairs.items():
            if not a < b:
                raise ArgumentError(f"{self.year}: pair key ({a}, {b}) is not ordered")
            if count <= 0:
                raise ArgumentError(f"{self.year}: pair ({a}, {b}) must be positive")
            if count > min(self.diagonal.get(a, 0), self.diagonal.get(b, 0)):
                raise ArgumentError(
                    f"{self.year}: pair ({a}, {b}) = {count} exceeds a diagonal entry"
                )

    @property
    def countries(self) -> Tuple[str, ...]:
        return tuple(sorted(self.diagonal))

    def is_empty(self) -> bool:
        return not self.diagonal

    def count(self, a: str, b: str) -> int:
        if a == b:
            return self.diagonal.get(a, 0)
        return self.pairs.get(_pair(a, b), 0)

    def to_dense(self, order: Optional[Sequence[str]] = None) -> np.ndarray:
        """Dense symmetric matrix indexed by ``order`` (default: ``countries``)."""
        order = self.countries if order is None else tuple(order)
        index = {code: i for i, code in enumerate(order)}
        matrix = np.zeros((len(order), len(order)), dtype=np.int64)
        for code, count in self.diagonal.items():
            if code in index:
                matrix[index[code], index[code]] = count
        for (a, b), count in self.pairs.items():
            if a in index and b in index:
                matrix[index[a], index[b]] = count
                matrix[index[b], index[a]] = count
        return matrix


@dataclass(frozen=True)
class CountryList:
    """Countries whose total movie count over the window exceeds ``threshold``."""

    members: Tuple[str, ...]
    threshold: int
    totals: Mapping[str, int]

    def __contains__(self, code: object) -> bool:
        return code in self.members

    def to_json(self) -> str:
        return json.dumps(
            {
                "threshold": self.threshold,
                "members": list(self.members),
                "totals": {code: self.totals[code] for code in _by_total(self.totals)},
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> Self:
        data = json.loads(text)
        return cls(tuple(data["members"]), int(data["threshold"]), dict(data["totals"]))


def _accumulate(year: int, movies: Iterable[MovieRecord]) -> YearNetwork:
    # Identical region sets contribute identically; count each distinct set once.
    shapes = Counter(movie.regions for movie in movies)
    diagonal: Counter = Counter()
    pairs: Counter = Counter()
    for regions, n_movies in shapes.items():
        codes = sorted(regions)
        for code in codes:
            diagonal[code] += n_movies
        for pair in combinations(codes, 2):
            pairs[pair] += n_movies
    return YearNetwork(year, dict(diagonal), dict(pairs))


def build_year_network(records: Iterable[MovieRecord], year: int) -> YearNetwork:
    """Count one year's movies: each movie adds one per region and one per region pair."""
    return _accumulate(year, (record for record in records if record.year == year))


def build_all_years(
    records: Iterable[MovieRecord], year_from: int, year_to: int
) -> List[YearNetwork]:
    """One network per year of ``[year_from, year_to]``, in year order."""
    if year_from > year_to:
        raise ArgumentError(f"inverted year range: {year_from} > {year_to}")
    by_year: Dict[int, List[MovieRecord]] = defaultdict(list)
    for record in records:
        if year_from <= record.year <= year_to:
            by_year[record.year].append(record)
    networks = [
        _accumulate(year, by_year.get(year, ())) for year in range(year_from, year_to + 1)
    ]
    logger.info(
        "built %d year networks %d-%d from %d movies",
        len(networks),
        year_from,
        year_to,
        sum(len(movies) for movies in by_year.values()),
    )
    return networks


def country_totals(networks: Iterable[YearNetwork]) -> Dict[str, int]:
    """Sum of each country's diagonal over all years; absent countries are omitted."""
    totals: Counter = Counter()
    for network in networks:
        totals.update(network.diagonal)
    return dict(totals)


def _by_total(totals: Mapping[str, int]) -> List[str]:
    return sorted(totals, key=lambda code: (-totals[code], code))


def filter_country_list(totals: Mapping[str, int], threshold: int) -> CountryList:
    """Countries with total strictly greater than ``threshold``, largest first."""
    if threshold < 0:
        raise ArgumentError(f"threshold must be >= 0, got {threshold}")
    members = tuple(code for code in _by_total(totals) if totals[code] > threshold)
    logger.info("%d of %d countries exceed %d movies", len(members), len(totals), threshold)
    return CountryList(members, threshold, dict(totals))


# === Matrix dump ===


def write_matrix_dump(networks: Iterable[YearNetwork], stream: TextIO) -> None:
    """CSV ``year,country_a,country_b,count``; diagonal rows have a == b."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(MATRIX_HEADER)
    for network in sorted(networks, key=lambda net: net.year):
        rows = [(code, code, count) for code, count in network.diagonal.items()]
        rows += [(a, b, count) for (a, b), count in network.pairs.items()]
        for a, b, count in sorted(rows):
            writer.writerow((network.year, a, b, count))


def read_matrix_dump(
    stream: TextIO,
    year_from: Optional[int] = None,
    year_to: Optional[int] = None,
    path: Optional[str] = None,
) -> List[YearNetwork]:
    """Read a matrix dump back into networks.

    Years without rows are recreated as empty networks when the window is
    given, so a dump of a window with gap years round-trips.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(header) != MATRIX_HEADER:
        raise FormatError(f"expected header {','.join(MATRIX_HEADER)}", path, 1)

    diagonals: Dict[int, Dict[str, int]] = defaultdict(dict)
    pairs: Dict[int, Dict[Pair, int]] = defaultdict(dict)
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 4:
            raise FormatError(f"expected 4 fields, got {len(row)}", path, line)
        try:
            year, count = int(row[0]), int(row[3])
        except ValueError as exc:
            raise FormatError(f"non-integer year or count: {exc}", path, line) from exc
        a, b = row[1], row[2]
        if a == b:
            diagonals[year][a] = count
        elif a < b:
            pairs[year][(a, b)] = count
        else:
            raise FormatError(f"pair ({a}, {b}) not in lexicographic order", path, line)

    years = set(diagonals) | set(pairs)
    if year_from is not None and year_to is not None:
        outside = sorted(year for year in years if not year_from <= year <= year_to)
        if outside:
            raise FormatError(f"years outside {year_from}-{year_to}: {outside}", path)
        years = set(range(year_from, year_to + 1))

    try:
        return [
            YearNetwork(year, diagonals.get(year, {}), pairs.get(year, {}))
            for year in sorted(years)
        ]
    except ArgumentError as exc:
        raise FormatError(str(exc), path) from exc


def write_totals(totals: Mapping[str, int], stream: TextIO) -> None:
    """CSV ``country,total`` ordered like a CountryList."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TOTALS_HEADER)
    for code in _by_total(totals):
        writer.writerow((code, totals[code]))


def write_dense_export(
    networks: Sequence[YearNetwork], order: Sequence[str], file: Union[str, Path, BinaryIO]
) -> None:
    """Compressed npz with ``years``, ``countries`` and ``counts[year, a, b]``.

    Every year shares the index ``order``; countries outside it are dropped.
    """
    order = tuple(order)
    counts = np.zeros((len(networks), len(order), len(order)), dtype=np.int64)
    for i, network in enumerate(networks):
        counts[i] = network.to_dense(order)
    np.savez_compressed(
        file,
        years=np.asarray([network.year for network in networks], dtype=np.int64),
        countries=np.asarray(order, dtype=str),
        counts=counts,
    )
    logger.info("dense export: %d years x %d countries", len(networks), len(order))
