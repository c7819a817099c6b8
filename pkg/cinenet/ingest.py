"""
Movie corpus ingestion.

Two readers produce the same ``MovieRecord`` stream:

* ``parse_canonical`` reads the three-column corpus format
  (``movie_id<TAB>year<TAB>regions``), reporting bad rows by line number.
* ``parse_imdb_pair`` joins the published ``title.basics`` and ``title.akas``
  dumps by title identifier, keeping only ``movie`` titles.

Localized rows of one movie share an identifier; both readers unify them into
a single record whose regions are the union of all rows.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    TextIO,
    Tuple,
    Union,
)

import pandas as pd

from ._compat import Final
from .errors import ArgumentError, FormatError

logger = logging.getLogger(__name__)

CANONICAL_HEADER: Final = "movie_id\tyear\tregions"
IMDB_MISSING: Final = "\\N"
IMDB_MOVIE_TYPE: Final = "movie"

BASICS_COLUMNS: Final = ("tconst", "titleType", "startYear")
AKAS_COLUMNS: Final = ("titleId", "region")

# Verbatim warnings per parse; the rest are only counted.
MAX_LOGGED_ISSUES: Final = 20

PathLike = Union[str, Path]


@dataclass(frozen=True)
class MovieRecord:
    """One movie after unification: identifier, release year, regions."""

    movie_id: str
    year: int
    regions: FrozenSet[str]

    def __post_init__(self) -> None:
        if not self.movie_id:
            raise ArgumentError("movie_id must be non-empty")
        if not self.regions:
            raise ArgumentError(f"movie {self.movie_id!r} has no regions")
        if "" in self.regions:
            raise ArgumentError(f"movie {self.movie_id!r} has an empty region code")


@dataclass(frozen=True)
class AliasMap:
    """Raw region code to canonical region code."""

    entries: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for raw, canonical in self.entries.items():
            target = self.entries.get(canonical, canonical)
            if target != canonical:
                raise ArgumentError(
                    f"alias map is not canonical: {raw} -> {canonical} -> {target}"
                )

    def apply(self, code: str) -> str:
        return self.entries.get(code, code)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RowIssue:
    line: int
    message: str


@dataclass
class ParseReport:
    """Bookkeeping for one parse.

    For the canonical reader ``records + skipped + merged == data_rows``.
    The IMDB reader additionally counts rows removed by the title-type filter.
    """

    source: Optional[str] = None
    data_rows: int = 0
    records: int = 0
    skipped_empty: int = 0
    skipped_invalid: int = 0
    excluded_type: int = 0
    merged: int = 0
    year_conflicts: int = 0
    issues: List[RowIssue] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return self.skipped_empty + self.skipped_invalid

    def add_issue(self, line: int, message: str) -> None:
        self.issues.append(RowIssue(line, message))
        if len(self.issues) <= MAX_LOGGED_ISSUES:
            where = f"{self.source}:{line}" if self.source else f"line {line}"
            logger.warning("%s: %s", where, message)

    def log_summary(self) -> None:
        hidden = len(self.issues) - MAX_LOGGED_ISSUES
        if hidden > 0:
            logger.warning("%d further row issues not shown", hidden)
        logger.info(
            "parsed %s: %d rows, %d records, %d skipped (empty %d, invalid %d), "
            "%d merged, %d year conflicts",
            self.source or "<stream>",
            self.data_rows,
            self.records,
            self.skipped,
            self.skipped_empty,
            self.skipped_invalid,
            self.merged,
            self.year_conflicts,
        )


@dataclass(frozen=True)
class ParseResult:
    records: Tuple[MovieRecord, ...]
    report: ParseReport


def normalize_region_code(raw: str) -> str:
    """Strip and upper-case one region code; reject anything not ASCII alphanumeric."""
    code = raw.strip().upper()
    if not code or not (code.isascii() and code.isalnum()):
        raise ArgumentError(f"invalid region code {raw!r}")
    return code


class _Unifier:
    """Merges rows sharing a movie_id: regions are unioned, the first year wins."""

    def __init__(self, report: ParseReport) -> None:
        self.report = report
        self._years: Dict[str, int] = {}
        self._regions: Dict[str, set] = {}

    def add(self, movie_id: str, year: int, regions: Iterable[str], line: int) -> None:
        if movie_id in self._years:
            self.report.merged += 1
            if self._years[movie_id] != year:
                self.report.year_conflicts += 1
                self.report.add_issue(
                    line,
                    f"movie {movie_id} repeated with year {year}, "
                    f"keeping {self._years[movie_id]}",
                )
            self._regions[movie_id].update(regions)
        else:
            self._years[movie_id] = year
            self._regions[movie_id] = set(regions)

    def records(self) -> Tuple[MovieRecord, ...]:
        out = tuple(
            MovieRecord(movie_id, year, frozenset(self._regions[movie_id]))
            for movie_id, year in self._years.items()
        )
        self.report.records = len(out)
        return out


def _tsv_rows(
    stream: TextIO, source: Optional[str], first_line: int = 1
) -> Iterator[Tuple[int, List[str]]]:
    """Rows of a quote-free TSV stream, each with its line number.

    Bytes that are not UTF-8 and rows the csv module cannot split are fatal.
    """
    reader = csv.reader(stream, delimiter="\t", quoting=csv.QUOTE_NONE)
    try:
        for row in reader:
            yield reader.line_num + first_line - 1, row
    except UnicodeDecodeError as exc:
        # Decoding runs ahead of the reader; the line is unknown.
        raise FormatError(f"not valid UTF-8 ({exc.reason})", source) from exc
    except csv.Error as exc:
        line = reader.line_num + first_line - 1
        raise FormatError(f"unreadable row: {exc}", source, line) from exc


def parse_canonical(stream: TextIO, path: Optional[PathLike] = None) -> ParseResult:
    """Read the canonical corpus format.

    A malformed header is fatal, as is text that is not UTF-8. Rows with a bad
    year, a bad region code or the wrong number of fields are skipped and
    reported; rows without regions are skipped and counted.
    """
    source = None if path is None else str(path)
    try:
        header = stream.readline()
    except UnicodeDecodeError as exc:
        raise FormatError(f"not valid UTF-8 ({exc.reason})", source) from exc
    if header.rstrip("\n") != CANONICAL_HEADER:
        raise FormatError(
            f"expected header {CANONICAL_HEADER!r}, got {header.rstrip(chr(10))!r}",
            source,
            1,
        )

    report = ParseReport(source=source)
    unifier = _Unifier(report)
    for line, row in _tsv_rows(stream, source, first_line=2):
        if not row:
            continue
        report.data_rows += 1

        if len(row) != 3:
            report.skipped_invalid += 1
            report.add_issue(line, f"expected 3 fields, got {len(row)}")
            continue

        movie_id, year_field, regions_field = row
        if not movie_id:
            report.skipped_invalid += 1
            report.add_issue(line, "empty movie_id")
            continue
        try:
            year = int(year_field)
        except ValueError:
            report.skipped_invalid += 1
            report.add_issue(line, f"non-integer year {year_field!r}")
            continue
        try:
            regions = {normalize_region_code(c) for c in regions_field.split(",") if c}
        except ArgumentError as exc:
            report.skipped_invalid += 1
            report.add_issue(line, str(exc))
            continue
        if not regions:
            report.skipped_empty += 1
            continue

        unifier.add(movie_id, year, regions, line)

    records = unifier.records()
    report.log_summary()
    return ParseResult(records, report)


def write_canonical(records: Iterable[MovieRecord], stream: TextIO) -> None:
    """Serialize records in the canonical format, regions sorted."""
    stream.write(CANONICAL_HEADER + "\n")
    writer = csv.writer(
        stream, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_NONE, quotechar=None
    )
    for record in records:
        writer.writerow([record.movie_id, record.year, ",".join(sorted(record.regions))])


def _read_imdb_table(
    stream: TextIO, columns: Sequence[str], source: Optional[str]
) -> pd.DataFrame:
    try:
        frame = pd.read_csv(
            stream,
            sep="\t",
            dtype=str,
            na_values=[IMDB_MISSING],
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
            usecols=lambda name: name in columns,
        )
    except pd.errors.EmptyDataError as exc:
        raise FormatError("empty table, header expected", source, 1) from exc
    except (pd.errors.ParserError, csv.Error) as exc:
        raise FormatError(f"unreadable table: {exc}", source) from exc
    except UnicodeDecodeError as exc:
        raise FormatError(f"not valid UTF-8 ({exc.reason})", source) from exc

    missing = [name for name in columns if name not in frame.columns]
    if missing:
        raise FormatError(
            f"required columns absent from header: {', '.join(missing)}", source, 1
        )
    return frame[list(columns)]


def parse_imdb_pair(
    basics: TextIO,
    akas: TextIO,
    basics_path: Optional[PathLike] = None,
    akas_path: Optional[PathLike] = None,
) -> ParseResult:
    """Join ``title.basics`` and ``title.akas`` dumps into movie records.

    Only ``titleType == "movie"`` rows are kept. Regions are the distinct
    non-missing ``region`` values of the title in ``akas``; titles without
    any region are skipped and counted.
    """
    source = None if basics_path is None else str(basics_path)
    akas_source = None if akas_path is None else str(akas_path)
    report = ParseReport(source=source)

    titles = _read_imdb_table(basics, BASICS_COLUMNS, source)
    report.data_rows = len(titles)
    # Header is line 1.
    titles = titles.assign(line=titles.index + 2)

    is_movie = titles["titleType"] == IMDB_MOVIE_TYPE
    report.excluded_type = int((~is_movie).sum())
    titles = titles[is_movie]

    year_text = titles["startYear"].str.strip()
    valid_year = year_text.str.fullmatch(r"-?\d+", na=False)
    for line, raw in zip(titles.loc[~valid_year, "line"], titles.loc[~valid_year, "startYear"]):
        shown = IMDB_MISSING if pd.isna(raw) else raw
        report.add_issue(int(line), f"missing or non-integer startYear {shown!r}")
    report.skipped_invalid = int((~valid_year).sum())
    titles = titles[valid_year].assign(year=year_text[valid_year].astype(int))

    localized = _read_imdb_table(akas, AKAS_COLUMNS, akas_source).dropna()
    localized = localized[localized["titleId"].isin(titles["tconst"])]
    codes = localized["region"].str.strip().str.upper()
    valid_code = codes.str.fullmatch(r"[A-Z0-9]+", na=False)
    dropped_codes = int((~valid_code).sum())
    if dropped_codes:
        logger.warning("%s: ignored %d invalid region values", akas_source or "akas", dropped_codes)
    localized = localized.assign(region=codes)[valid_code]
    regions_by_title: Dict[str, set] = {}
    for tconst, region in zip(localized["titleId"], localized["region"]):
        regions_by_title.setdefault(tconst, set()).add(region)

    unifier = _Unifier(report)
    for tconst, year, line in zip(titles["tconst"], titles["year"], titles["line"]):
        regions = regions_by_title.get(tconst)
        if not regions:
            report.skipped_empty += 1
            continue
        unifier.add(tconst, int(year), regions, int(line))

    records = unifier.records()
    report.log_summary()
    return ParseResult(records, report)


def load_alias_map(stream: TextIO, path: Optional[PathLike] = None) -> AliasMap:
    """Read a two-column ``raw<TAB>canonical`` alias file (no header)."""
    source = None if path is None else str(path)
    entries: Dict[str, str] = {}
    for line, row in _tsv_rows(stream, source):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"expected 2 fields, got {len(row)}", source, line)
        try:
            raw, canonical = (normalize_region_code(code) for code in row)
        except ArgumentError as exc:
            raise FormatError(str(exc), source, line) from exc
        if entries.get(raw, canonical) != canonical:
            raise FormatError(
                f"{raw} mapped to both {entries[raw]} and {canonical}", source, line
            )
        if raw != canonical:
            entries[raw] = canonical
    try:
        return AliasMap(entries)
    except ArgumentError as exc:
        raise FormatError(str(exc), source) from exc


def normalize_regions(records: Iterable[MovieRecord], aliases: AliasMap) -> List[MovieRecord]:
    """Replace region codes by their canonical form and re-deduplicate."""
    if not len(aliases):
        return list(records)
    out = []
    for record in records:
        mapped = frozenset(aliases.apply(code) for code in record.regions)
        if mapped != record.regions:
            record = MovieRecord(record.movie_id, record.year, mapped)
        out.append(record)
    return out


def filter_window(
    records: Iterable[MovieRecord], year_from: int, year_to: int
) -> List[MovieRecord]:
    """Keep the records released inside ``[year_from, year_to]``."""
    if year_from > year_to:
        raise ArgumentError(f"inverted year range: {year_from} > {year_to}")
    return [record for record in records if year_from <= record.year <= year_to]
