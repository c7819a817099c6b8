"""
Pairwise rate of change and the per-country globalization indicator.

For countries X and Y and consecutive years i-1, i::

    rho = (E_XY(i) - E_XY(i-1)) / (X(i-1) * Y(i-1))

where E is the shared-movie count and X, Y the previous-year diagonals.
A pair with a zero previous-year diagonal has no rho; it is left out of the
average rather than counted as zero. Values are exact fractions; floats only
appear when tables are written.
"""

import csv
import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Dict,
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

from ._compat import Final
from .conetwork import CountryList, YearNetwork
from .errors import ArgumentError, FormatError

logger = logging.getLogger(__name__)

FOCAL_ABSENT: Final = "focal-absent"

INDICATOR_HEADER: Final = ("focal", "year", "avg_rho", "n_partners", "abs_change", "percent")
PAIR_HEADER: Final = (
    "focal",
    "partner",
    "year",
    "edge_now",
    "edge_prev",
    "diag_prev_x",
    "diag_prev_y",
    "rho",
)


@dataclass(frozen=True)
class RhoPoint:
    """One defined rho for the year pair ``year_i - 1 -> year_i``."""

    year_i: int
    focal: str
    partner: str
    edge_now: int
    edge_prev: int
    diag_prev_x: int
    diag_prev_y: int
    rho: Fraction

    @property
    def delta(self) -> int:
        return self.edge_now - self.edge_prev


@dataclass(frozen=True)
class IndicatorSeries:
    """Average rho, defined-partner counts and absolute change of one focal country.

    Years start one after the window start. ``avg_rho`` has a key only for
    years where ``n_partners`` is positive.
    """

    focal: str
    years: Tuple[int, ...]
    avg_rho: Mapping[int, Fraction]
    n_partners: Mapping[int, int]
    abs_change: Mapping[int, int]
    points: Tuple[RhoPoint, ...] = ()
    warning: Optional[str] = None

    @property
    def defined_years(self) -> Tuple[int, ...]:
        return tuple(year for year in self.years if year in self.avg_rho)

    def is_empty(self) -> bool:
        return not self.years


def rho_pair(net_prev: YearNetwork, net_now: YearNetwork, x: str, y: str) -> Optional[RhoPoint]:
    """Rate of change of the X-Y relationship, or ``None`` when a denominator is zero."""
    if x == y:
        raise ArgumentError(f"rho needs two distinct countries, got {x} twice")
    if net_prev.year + 1 != net_now.year:
        raise ArgumentError(f"years {net_prev.year} and {net_now.year} are not consecutive")

    diag_x = net_prev.count(x, x)
    diag_y = net_prev.count(y, y)
    if diag_x == 0 or diag_y == 0:
        return None

    edge_now = net_now.count(x, y)
    edge_prev = net_prev.count(x, y)
    return RhoPoint(
        year_i=net_now.year,
        focal=x,
        partner=y,
        edge_now=edge_now,
        edge_prev=edge_prev,
        diag_prev_x=diag_x,
        diag_prev_y=diag_y,
        rho=Fraction(edge_now - edge_prev, diag_x * diag_y),
    )


def _check_consecutive(networks: Sequence[YearNetwork]) -> None:
    for prev, now in zip(networks, networks[1:]):
        if prev.year + 1 != now.year:
            raise ArgumentError(
                f"networks must be in consecutive year order, got {prev.year} then {now.year}"
            )


def indicator_series(
    networks: Sequence[YearNetwork],
    focal: str,
    partners: CountryList,
    allow_outside: bool = False,
) -> IndicatorSeries:
    """Average rho of ``focal`` against every other member of ``partners``, per year."""
    networks = list(networks)
    _check_consecutive(networks)
    if focal not in partners and not allow_outside:
        raise ArgumentError(f"{focal} is not in the country list")

    if all(net.count(focal, focal) == 0 for net in networks):
        logger.warning("%s is absent from every year; empty series", focal)
        return IndicatorSeries(focal, (), {}, {}, {}, (), warning=FOCAL_ABSENT)

    others = [code for code in partners.members if code != focal]
    years: List[int] = []
    avg_rho: Dict[int, Fraction] = {}
    n_partners: Dict[int, int] = {}
    abs_change: Dict[int, int] = {}
    points: List[RhoPoint] = []

    for prev, now in zip(networks, networks[1:]):
        defined = [
            point
            for point in (rho_pair(prev, now, focal, other) for other in others)
            if point is not None
        ]
        years.append(now.year)
        n_partners[now.year] = len(defined)
        if defined:
            avg_rho[now.year] = sum((point.rho for point in defined), Fraction(0)) / len(defined)
        abs_change[now.year] = now.count(focal, focal) - prev.count(focal, focal)
        points.extend(defined)

    logger.info(
        "%s: %d years, %d with a defined average over %d partners",
        focal,
        len(years),
        len(avg_rho),
        len(others),
    )
    return IndicatorSeries(focal, tuple(years), avg_rho, n_partners, abs_change, tuple(points))


def percent_series(series: IndicatorSeries) -> Dict[int, Fraction]:
    """Average rho scaled by 100; absent years stay absent."""
    return {year: value * 100 for year, value in series.avg_rho.items()}


# === Tables ===


def format_real(value: Union[Fraction, float, int]) -> str:
    """Round to 12 significant digits, then print the shortest round-trip form."""
    return repr(float(f"{float(value):.12g}"))


def write_indicator_table(series_list: Iterable[IndicatorSeries], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(INDICATOR_HEADER)
    for series in series_list:
        percent = percent_series(series)
        for year in series.years:
            avg = series.avg_rho.get(year)
            writer.writerow(
                (
                    series.focal,
                    year,
                    "" if avg is None else format_real(avg),
                    series.n_partners[year],
                    series.abs_change[year],
                    "" if avg is None else format_real(percent[year]),
                )
            )


def write_pair_table(series_list: Iterable[IndicatorSeries], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PAIR_HEADER)
    for series in series_list:
        for point in sorted(series.points, key=lambda p: (p.year_i, p.partner)):
            writer.writerow(
                (
                    point.focal,
                    point.partner,
                    point.year_i,
                    point.edge_now,
                    point.edge_prev,
                    point.diag_prev_x,
                    point.diag_prev_y,
                    format_real(point.rho),
                )
            )


def _check_header(
    reader: Iterator[List[str]], expected: Tuple[str, ...], path: Optional[str]
) -> None:
    header = next(reader, None)
    if header is None or tuple(header) != expected:
        raise FormatError(f"expected header {','.join(expected)}", path, 1)


def read_indicator_table(stream: TextIO, path: Optional[str] = None) -> List[IndicatorSeries]:
    """Read an indicator table back; focal countries keep their order of appearance."""
    reader = csv.reader(stream)
    _check_header(reader, INDICATOR_HEADER, path)

    rows: Dict[str, List[Tuple[int, Optional[Fraction], int, int]]] = {}
    for row in reader:
        if not row:
            continue
        if len(row) != len(INDICATOR_HEADER):
            raise FormatError(f"expected {len(INDICATOR_HEADER)} fields", path, reader.line_num)
        focal, year, avg, n_partners, abs_change, _percent = row
        try:
            rows.setdefault(focal, []).append(
                (int(year), Fraction(avg) if avg else None, int(n_partners), int(abs_change))
            )
        except ValueError as exc:
            raise FormatError(str(exc), path, reader.line_num) from exc

    out = []
    for focal, entries in rows.items():
        out.append(
            IndicatorSeries(
                focal,
                tuple(year for year, _, _, _ in entries),
                {year: avg for year, avg, _, _ in entries if avg is not None},
                {year: n for year, _, n, _ in entries},
                {year: change for year, _, _, change in entries},
            )
        )
    return out


def with_exact_averages(
    series_list: Iterable[IndicatorSeries],
    points: Mapping[str, Sequence[RhoPoint]],
    path: Optional[str] = None,
) -> List[IndicatorSeries]:
    """Replace the rounded averages of a read-back indicator table by exact ones.

    The averages are recomputed from the pair rows, which must agree with the
    table on the partner count of every year and on the rounded average.
    """
    out = []
    for series in series_list:
        detail = tuple(points.get(series.focal, ()))
        by_year: Dict[int, List[Fraction]] = {}
        for point in detail:
            by_year.setdefault(point.year_i, []).append(point.rho)

        stray = sorted(set(by_year) - set(series.years))
        if stray:
            raise FormatError(
                f"{series.focal}: pair rows for years missing from the indicator table: "
                f"{', '.join(map(str, stray))}",
                path,
            )
        avg_rho: Dict[int, Fraction] = {}
        for year in series.years:
            values = by_year.get(year, [])
            if len(values) != series.n_partners[year]:
                raise FormatError(
                    f"{series.focal} {year}: {series.n_partners[year]} partners in the "
                    f"indicator table, {len(values)} pair rows",
                    path,
                )
            if not values:
                continue
            avg_rho[year] = sum(values, Fraction(0)) / len(values)
            rounded = series.avg_rho.get(year)
            shown = "missing" if rounded is None else format_real(rounded)
            if shown != format_real(avg_rho[year]):
                raise FormatError(
                    f"{series.focal} {year}: average {shown} "
                    f"does not match the pair rows ({format_real(avg_rho[year])})",
                    path,
                )
        out.append(dataclasses.replace(series, avg_rho=avg_rho, points=detail))
    return out


def read_pair_table(stream: TextIO, path: Optional[str] = None) -> Dict[str, List[RhoPoint]]:
    """Read per-pair detail; rho is recomputed exactly from the integer columns."""
    reader = csv.reader(stream)
    _check_header(reader, PAIR_HEADER, path)

    out: Dict[str, List[RhoPoint]] = {}
    for row in reader:
        if not row:
            continue
        if len(row) != len(PAIR_HEADER):
            raise FormatError(f"expected {len(PAIR_HEADER)} fields", path, reader.line_num)
        try:
            year, edge_now, edge_prev, diag_x, diag_y = (int(v) for v in row[2:7])
        except ValueError as exc:
            raise FormatError(str(exc), path, reader.line_num) from exc
        if diag_x <= 0 or diag_y <= 0:
            raise FormatError("pair row with a zero denominator", path, reader.line_num)
        out.setdefault(row[0], []).append(
            RhoPoint(
                year_i=year,
                focal=row[0],
                partner=row[1],
                edge_now=edge_now,
                edge_prev=edge_prev,
                diag_prev_x=diag_x,
                diag_prev_y=diag_y,
                rho=Fraction(edge_now - edge_prev, diag_x * diag_y),
            )
        )
    return out
