"""
cinenet: movie co-publication networks as a globalization indicator.

Pipeline stages, one module each:
1. ingest.py    - corpus readers (canonical TSV, IMDB dump pair), region aliases
2. conetwork.py - per-year country co-occurrence matrices, country list
3. indicator.py - pairwise rate of change and per-country average series
4. ranktest.py  - exact / approximate rank-sum tests, year scan, box summaries
5. synthgen.py  - synthetic corpora with an injected shock
6. report.py    - markdown digest of scans: peaks, significant years, peak gaps
7. cli.py       - subcommand frontend writing files plus a run manifest

Usage:
    from cinenet import parse_canonical, build_all_years, indicator_series, scan_years
"""

from ._version import __version__
from .config import AnalysisConfig
from .conetwork import (
    CountryList,
    YearNetwork,
    build_all_years,
    build_year_network,
    country_totals,
    filter_country_list,
    read_matrix_dump,
    write_matrix_dump,
    write_totals,
)
from .errors import (
    ArgumentError,
    CinenetError,
    DegenerateDistributionError,
    ExactTestUnavailable,
    FormatError,
    InsufficientDataError,
    MissingArtifactError,
    UsageError,
)
from .indicator import (
    IndicatorSeries,
    RhoPoint,
    format_real,
    indicator_series,
    percent_series,
    read_indicator_table,
    read_pair_table,
    rho_pair,
    write_indicator_table,
    write_pair_table,
)
from .ingest import (
    AliasMap,
    MovieRecord,
    ParseReport,
    ParseResult,
    filter_window,
    load_alias_map,
    normalize_regions,
    parse_canonical,
    parse_imdb_pair,
    write_canonical,
)
from .manifest import RunManifest, file_digest, read_manifest, write_manifest
from .pipeline import PipelineResult, run_pipeline
from .ranktest import (
    BoxSummary,
    Method,
    RankTestResult,
    ScanEntry,
    ScanReport,
    box_summaries,
    box_summary,
    mann_whitney,
    mann_whitney_approx,
    mann_whitney_exact,
    p_floor,
    scan_years,
    u_distribution,
    write_box_summaries,
)
from .report import FocalDigest, PeakGap, digest_for, peak_gaps, render_report
from .synthgen import SynthConfig, generate, generate_to_stream

# fmt: off
__all__ = [
    # Version info
    "__version__",
    # === FROM config.py ===
    "AnalysisConfig",
    # === FROM errors.py ===
    "CinenetError", "ArgumentError", "UsageError", "FormatError",
    "ExactTestUnavailable", "DegenerateDistributionError",
    "InsufficientDataError", "MissingArtifactError",
    # === FROM ingest.py ===
    "MovieRecord", "AliasMap", "ParseReport", "ParseResult",
    "parse_canonical", "parse_imdb_pair", "normalize_regions",
    "filter_window", "write_canonical", "load_alias_map",
    # === FROM conetwork.py ===
    "YearNetwork", "CountryList",
    "build_year_network", "build_all_years", "country_totals", "filter_country_list",
    "write_matrix_dump", "read_matrix_dump", "write_totals",
    # === FROM indicator.py ===
    "RhoPoint", "IndicatorSeries",
    "rho_pair", "indicator_series", "percent_series", "format_real",
    "write_indicator_table", "write_pair_table", "read_indicator_table", "read_pair_table",
    # === FROM ranktest.py ===
    "Method", "RankTestResult", "ScanEntry", "ScanReport", "BoxSummary",
    "mann_whitney_exact", "mann_whitney_approx", "mann_whitney", "u_distribution",
    "p_floor", "scan_years", "box_summary", "box_summaries", "write_box_summaries",
    # === FROM report.py ===
    "FocalDigest", "PeakGap", "digest_for", "peak_gaps", "render_report",
    # === FROM synthgen.py ===
    "SynthConfig", "generate", "generate_to_stream",
    # === FROM manifest.py / pipeline.py ===
    "RunManifest", "file_digest", "write_manifest", "read_manifest",
    "PipelineResult", "run_pipeline",
]
# fmt: on
