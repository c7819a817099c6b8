"""
Shared fixtures: a small hand-made corpus over 1980-1984.

The corpus is described by region patterns and per-year movie counts, so
tests can derive expected matrices from the table instead of the code under
test.
"""

import io
from collections import Counter
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Tuple

import pytest

from cinenet.ingest import MovieRecord, parse_canonical

FIXTURE_YEARS = (1980, 1981, 1982, 1983, 1984)
FIXTURE_COUNTRIES = ("CN", "DE", "FR", "JP", "US")

# Region pattern -> number of movies in each fixture year.
FIXTURE_PATTERNS: Dict[Tuple[str, ...], Tuple[int, ...]] = {
    ("US",): (6, 7, 5, 8, 6),
    ("FR",): (3, 3, 4, 2, 3),
    ("JP",): (2, 3, 2, 2, 4),
    ("CN",): (4, 3, 5, 4, 3),
    ("DE",): (2, 2, 3, 2, 2),
    ("FR", "US"): (2, 3, 5, 4, 4),
    ("JP", "US"): (1, 1, 3, 2, 2),
    ("CN", "US"): (0, 1, 1, 4, 3),
    ("DE", "FR"): (1, 2, 1, 1, 2),
    ("CN", "JP", "US"): (1, 0, 2, 1, 1),
    ("DE", "FR", "JP", "US"): (0, 1, 0, 1, 1),
}


def fixture_records() -> List[MovieRecord]:
    records = []
    for pattern, counts in FIXTURE_PATTERNS.items():
        for year, count in zip(FIXTURE_YEARS, counts):
            for _ in range(count):
                records.append(MovieRecord(f"m{len(records):04d}", year, frozenset(pattern)))
    return records


def fixture_text() -> str:
    """Canonical TSV of the fixture, with the last movie split over two rows
    and one region-less row, so parsing has something to unify and skip."""
    records = fixture_records()
    lines = ["movie_id\tyear\tregions"]
    for record in records[:-1]:
        lines.append(f"{record.movie_id}\t{record.year}\t{','.join(sorted(record.regions))}")
    last = records[-1]
    lines.append(f"{last.movie_id}\t{last.year}\tDE,FR")
    lines.append(f"{last.movie_id}\t{last.year}\tjp,US")
    lines.append("x9999\t1982\t")
    return "\n".join(lines) + "\n"


def expected_counts(year: int) -> Counter:
    """Dense-style counts keyed by (a, b), both orientations plus (a, a)."""
    index = FIXTURE_YEARS.index(year)
    counts: Counter = Counter()
    for pattern, per_year in FIXTURE_PATTERNS.items():
        n = per_year[index]
        for code in pattern:
            counts[(code, code)] += n
        for a, b in combinations(pattern, 2):
            counts[(a, b)] += n
            counts[(b, a)] += n
    return counts


@pytest.fixture
def corpus_records() -> List[MovieRecord]:
    return list(parse_canonical(io.StringIO(fixture_text())).records)


@pytest.fixture
def corpus_path(tmp_path: Path) -> Path:
    path = tmp_path / "corpus.tsv"
    path.write_text(fixture_text(), encoding="utf-8")
    return path
