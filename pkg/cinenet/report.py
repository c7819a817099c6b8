"""Human-readable digest of scan results, one section per focal country."""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .indicator import IndicatorSeries, format_real
from .ranktest import ScanEntry, ScanReport


@dataclass(frozen=True)
class FocalDigest:
    focal: str
    alpha: float
    p_floor: float
    peak: ScanEntry
    significant: Tuple[ScanEntry, ...]
    largest_increase: Optional[Tuple[int, int]]
    largest_decrease: Optional[Tuple[int, int]]


@dataclass(frozen=True)
class PeakGap:
    earlier: str
    earlier_year: int
    later: str
    later_year: int

    @property
    def years(self) -> int:
        return self.later_year - self.earlier_year


def digest_for(scan: ScanReport, series: Optional[IndicatorSeries] = None) -> FocalDigest:
    """Peak year (largest average rho, earliest on ties), significant years, change extremes."""
    peak = max(scan.entries, key=lambda entry: (entry.avg_rho, -entry.year))
    significant = tuple(e for e in scan.entries if e.year in scan.significant_years)

    increase = decrease = None
    if series is not None and series.abs_change:
        changes = sorted(series.abs_change.items())
        increase = max(changes, key=lambda item: (item[1], -item[0]))
        decrease = min(changes, key=lambda item: (item[1], item[0]))
    return FocalDigest(scan.focal, scan.alpha, scan.p_floor, peak, significant, increase, decrease)


def peak_gaps(digests: Sequence[FocalDigest]) -> List[PeakGap]:
    """Gaps between consecutive peaks, countries ordered by peak year then code."""
    ordered = sorted(digests, key=lambda d: (d.peak.year, d.focal))
    return [
        PeakGap(a.focal, a.peak.year, b.focal, b.peak.year) for a, b in zip(ordered, ordered[1:])
    ]


def _signed(value: int) -> str:
    return f"{value:+d}"


def render_report(digests: Sequence[FocalDigest], plot_files: Sequence[str] = ()) -> str:
    digests = sorted(digests, key=lambda d: d.focal)
    lines = ["# Globalization indicator report", ""]

    for digest in digests:
        lines += [f"## {digest.focal}", ""]
        lines.append(f"Alpha {format_real(digest.alpha)}, p floor {format_real(digest.p_floor)}.")
        lines.append("")
        lines += ["| year | avg_rho | percent | p_two_sided | status |", "|---|---|---|---|---|"]
        rows = {entry.year: entry for entry in digest.significant}
        rows.setdefault(digest.peak.year, digest.peak)
        for year in sorted(rows):
            entry = rows[year]
            status = "significant" if entry in digest.significant else "n.s."
            lines.append(
                f"| {year} | {format_real(entry.avg_rho)} | "
                f"{format_real(entry.avg_rho * Fraction(100))} | "
                f"{format_real(entry.result.p_two_sided)} | {status} |"
            )
        lines.append("")
        lines.append(f"- Peak year: {digest.peak.year}")
        if digest.largest_increase is not None and digest.largest_decrease is not None:
            year, change = digest.largest_increase
            lines.append(f"- Largest absolute increase: {year} ({_signed(change)})")
            year, change = digest.largest_decrease
            lines.append(f"- Largest absolute decrease: {year} ({_signed(change)})")
        lines.append("")

    gaps = peak_gaps(digests)
    if gaps:
        lines += ["## Peak timing", ""]
        for gap in gaps:
            if gap.years == 0:
                lines.append(
                    f"- {gap.later} peaks in the same year as {gap.earlier} ({gap.later_year})."
                )
            else:
                lines.append(
                    f"- {gap.later} peak ({gap.later_year}) follows {gap.earlier} peak "
                    f"({gap.earlier_year}) by {gap.years} years."
                )
        lines.append("")

    if plot_files:
        lines += ["## Plot data", ""]
        lines += [f"- {name}" for name in plot_files]
        lines.append("")

    return "\n".join(lines)
