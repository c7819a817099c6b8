"""Single-shot library pipeline: corpus to networks, indicators and scans."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence

from .config import AnalysisConfig
from .conetwork import (
    CountryList,
    YearNetwork,
    build_all_years,
    country_totals,
    filter_country_list,
)
from .indicator import IndicatorSeries, indicator_series
from .ingest import MovieRecord
from .ranktest import ScanReport, scan_years

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineResult:
    networks: List[YearNetwork]
    country_list: CountryList
    series: Dict[str, IndicatorSeries]
    scans: Dict[str, ScanReport]


def run_pipeline(
    records: Iterable[MovieRecord],
    config: AnalysisConfig,
    focals: Sequence[str],
    allow_outside: bool = False,
) -> PipelineResult:
    """Build, compute indicators and scan, the same steps the CLI runs one by one.

    Focal countries absent from every year get an empty series and no scan.
    """
    networks = build_all_years(records, config.year_from, config.year_to)
    country_list = filter_country_list(country_totals(networks), config.min_total)

    series: Dict[str, IndicatorSeries] = {}
    scans: Dict[str, ScanReport] = {}
    for focal in dict.fromkeys(focals):
        series[focal] = indicator_series(networks, focal, country_list, allow_outside)
        if series[focal].is_empty():
            continue
        scans[focal] = scan_years(series[focal], config.alpha)
    logger.info("pipeline done: %d focal countries, %d scanned", len(series), len(scans))
    return PipelineResult(networks, country_list, series, scans)
