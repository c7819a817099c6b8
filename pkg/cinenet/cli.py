"""
Command-line frontend.

Subcommands ``build``, ``indicator``, ``scan``, ``boxstats``, ``synth`` and
``report`` each read files, write files plus one ``manifest.json`` into
``--out``, and never consult environment variables.

Exit status: 0 success (empty findings included), 1 usage error, 2 data or
format error.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, NoReturn, Optional, Sequence, TextIO

from ._compat import Final
from ._version import __version__
from .config import DEFAULT_ALPHA, DEFAULT_MIN_TOTAL, DEFAULT_YEAR_FROM, DEFAULT_YEAR_TO
from .config import AnalysisConfig, check_alpha
from .conetwork import (
    CountryList,
    build_all_years,
    country_totals,
    filter_country_list,
    read_matrix_dump,
    write_dense_export,
    write_matrix_dump,
    write_totals,
)
from .errors import ArgumentError, CinenetError, MissingArtifactError, UsageError
from .indicator import (
    IndicatorSeries,
    format_real,
    indicator_series,
    read_indicator_table,
    read_pair_table,
    with_exact_averages,
    write_indicator_table,
    write_pair_table,
)
from .ingest import (
    ParseResult,
    filter_window,
    load_alias_map,
    normalize_regions,
    parse_canonical,
    parse_imdb_pair,
)
from .log import configure_logging
from .manifest import read_manifest, write_manifest
from .ranktest import ScanReport, box_summaries, scan_years, write_box_summaries
from .report import digest_for, render_report
from .synthgen import SynthConfig, generate_to_stream

logger = logging.getLogger(__name__)

EXIT_OK: Final = 0
EXIT_USAGE: Final = 1
EXIT_DATA: Final = 2

MATRIX_FILE: Final = "matrix.csv"
DENSE_FILE: Final = "matrices.npz"
TOTALS_FILE: Final = "totals.csv"
COUNTRY_LIST_FILE: Final = "country_list.json"
INDICATOR_FILE: Final = "indicator.csv"
PAIRS_FILE: Final = "pairs.csv"
CORPUS_FILE: Final = "corpus.tsv"
REPORT_FILE: Final = "report.md"


def scan_file(focal: str) -> str:
    return f"scan_{focal}.json"


def box_file(focal: str) -> str:
    return f"box_{focal}.csv"


class _ArgumentParser(argparse.ArgumentParser):
    """Routes argparse usage errors to exit status 1."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _require(path: Path) -> Path:
    if not path.is_file():
        raise MissingArtifactError(path)
    return path


def _open_write(path: Path) -> TextIO:
    return open(path, "w", encoding="utf-8", newline="")


def _open_read(path: Path) -> TextIO:
    return open(_require(path), "r", encoding="utf-8", newline="")


# === build ===


def _parse_input(args: argparse.Namespace) -> ParseResult:
    source = _require(Path(args.input))
    if args.format == "imdb":
        if args.akas is None:
            raise UsageError("--format imdb needs --akas")
        akas = _require(Path(args.akas))
        with _open_read(source) as basics_stream, _open_read(akas) as akas_stream:
            return parse_imdb_pair(basics_stream, akas_stream, source, akas)
    with _open_read(source) as stream:
        return parse_canonical(stream, source)


def cmd_build(args: argparse.Namespace) -> int:
    config = AnalysisConfig(args.year_from, args.year_to, args.min_total)
    inputs = [Path(args.input)] + [Path(p) for p in (args.akas, args.aliases) if p]

    records = list(_parse_input(args).records)
    if args.aliases:
        with _open_read(Path(args.aliases)) as stream:
            records = normalize_regions(records, load_alias_map(stream, args.aliases))
    records = filter_window(records, config.year_from, config.year_to)

    networks = build_all_years(records, config.year_from, config.year_to)
    totals = country_totals(networks)
    country_list = filter_country_list(totals, config.min_total)

    out = Path(args.out)
    with _open_write(out / MATRIX_FILE) as stream:
        write_matrix_dump(networks, stream)
    with _open_write(out / TOTALS_FILE) as stream:
        write_totals(totals, stream)
    (out / COUNTRY_LIST_FILE).write_text(country_list.to_json() + "\n", encoding="utf-8")
    if args.dense:
        write_dense_export(networks, sorted(totals), out / DENSE_FILE)

    write_manifest(
        out,
        "build",
        {
            "format": args.format,
            "year_from": config.year_from,
            "year_to": config.year_to,
            "min_total": config.min_total,
            "aliases": args.aliases is not None,
            "dense": args.dense,
        },
        inputs,
    )
    return EXIT_OK


# === indicator ===


def _window(directory: Path) -> Dict[str, int]:
    options = read_manifest(directory).resolved_options
    try:
        return {"year_from": int(options["year_from"]), "year_to": int(options["year_to"])}
    except KeyError as exc:
        raise MissingArtifactError(directory / f"manifest.json[{exc.args[0]}]") from exc


def cmd_indicator(args: argparse.Namespace) -> int:
    matrix_dir = Path(args.matrix)
    window = _window(matrix_dir)
    matrix_path = matrix_dir / MATRIX_FILE
    list_path = _require(matrix_dir / COUNTRY_LIST_FILE)

    country_list = CountryList.from_json(list_path.read_text(encoding="utf-8"))
    focals = list(dict.fromkeys(args.focal))
    unknown = [code for code in focals if code not in country_list]
    if unknown and not args.allow_outside:
        raise UsageError(
            f"unknown focal region(s) {', '.join(unknown)}; "
            f"available: {', '.join(country_list.members) or '(none)'}"
        )

    with _open_read(matrix_path) as stream:
        networks = read_matrix_dump(
            stream, window["year_from"], window["year_to"], str(matrix_path)
        )

    series: List[IndicatorSeries] = []
    for focal in focals:
        result = indicator_series(networks, focal, country_list, allow_outside=args.allow_outside)
        if result.warning:
            logger.warning("%s: %s", focal, result.warning)
        series.append(result)

    out = Path(args.out)
    with _open_write(out / INDICATOR_FILE) as stream:
        write_indicator_table(series, stream)
    with _open_write(out / PAIRS_FILE) as stream:
        write_pair_table(series, stream)

    write_manifest(
        out,
        "indicator",
        {
            "focal": focals,
            "allow_outside": args.allow_outside,
            "threshold": country_list.threshold,
            **window,
        },
        [matrix_path, list_path],
    )
    return EXIT_OK


# === scan / boxstats ===


def _read_indicators(directory: Path) -> List[IndicatorSeries]:
    """Indicator series with exact averages rebuilt from the pair table."""
    table_path = directory / INDICATOR_FILE
    pairs_path = directory / PAIRS_FILE
    with _open_read(table_path) as stream:
        series = read_indicator_table(stream, str(table_path))
    with _open_read(pairs_path) as stream:
        points = read_pair_table(stream, str(pairs_path))
    return with_exact_averages(series, points, str(pairs_path))


def _write_boxes(series_list: Iterable[IndicatorSeries], out: Path) -> List[Path]:
    written = []
    for series in series_list:
        target = out / box_file(series.focal)
        with _open_write(target) as stream:
            write_box_summaries(box_summaries(series.points), stream)
        written.append(target)
    return written


def cmd_scan(args: argparse.Namespace) -> int:
    check_alpha(args.alpha)
    indicator_dir = Path(args.indicators)
    out = Path(args.out)

    series_list = _read_indicators(indicator_dir)
    reports = [scan_years(series, args.alpha) for series in series_list]
    for report in reports:
        (out / scan_file(report.focal)).write_text(report.to_json(), encoding="utf-8")
        for entry in report.entries:
            if entry.year in report.significant_years:
                print(f"{report.focal}\t{entry.year}\t{format_real(entry.result.p_two_sided)}")
    _write_boxes(series_list, out)

    write_manifest(
        out,
        "scan",
        {"alpha": args.alpha},
        [indicator_dir / INDICATOR_FILE, indicator_dir / PAIRS_FILE],
    )
    return EXIT_OK


def cmd_boxstats(args: argparse.Namespace) -> int:
    indicator_dir = Path(args.indicators)
    series = {s.focal: s for s in _read_indicators(indicator_dir)}
    focals = list(dict.fromkeys(args.focal)) if args.focal else list(series)
    missing = [code for code in focals if code not in series]
    if missing:
        raise UsageError(
            f"no indicator rows for {', '.join(missing)}; available: {', '.join(series)}"
        )
    _write_boxes([series[focal] for focal in focals], Path(args.out))
    write_manifest(
        Path(args.out),
        "boxstats",
        {"focal": focals},
        [indicator_dir / INDICATOR_FILE, indicator_dir / PAIRS_FILE],
    )
    return EXIT_OK


# === synth ===

SYNTH_FLAGS: Final = (
    "n_countries",
    "years",
    "base_volume",
    "cross_prob",
    "shock_year",
    "shock_country",
    "shock_factor",
    "seed",
)


def cmd_synth(args: argparse.Namespace) -> int:
    config = SynthConfig.from_toml(_require(Path(args.config))) if args.config else SynthConfig()
    overrides: Dict[str, Any] = {
        name: getattr(args, name) for name in SYNTH_FLAGS if getattr(args, name) is not None
    }
    if "years" in overrides:
        overrides["years"] = tuple(overrides["years"])
    config = config.replace(**overrides)

    out = Path(args.out)
    with _open_write(out / CORPUS_FILE) as stream:
        generate_to_stream(config, stream)
    write_manifest(out, "synth", config.to_dict(), [Path(args.config)] if args.config else [])
    return EXIT_OK


# === report ===


def cmd_report(args: argparse.Namespace) -> int:
    scan_dir = Path(args.scan)
    indicator_dir = Path(args.indicators)
    series = {s.focal: s for s in _read_indicators(indicator_dir)}

    scan_paths = [_require(scan_dir / scan_file(focal)) for focal in sorted(series)]
    if not scan_paths:
        raise MissingArtifactError(scan_dir / scan_file("<focal>"))
    digests = []
    for path in scan_paths:
        report = ScanReport.from_json(path.read_text(encoding="utf-8"))
        digests.append(digest_for(report, series.get(report.focal)))

    plot_files = [str(indicator_dir / INDICATOR_FILE), str(indicator_dir / PAIRS_FILE)]
    plot_files += [str(scan_dir / box_file(focal)) for focal in sorted(series)]
    text = render_report(digests, plot_files)

    out = Path(args.out)
    (out / REPORT_FILE).write_text(text, encoding="utf-8")
    print(text, end="")
    write_manifest(
        out,
        "report",
        {},
        scan_paths + [indicator_dir / INDICATOR_FILE, indicator_dir / PAIRS_FILE],
    )
    return EXIT_OK


# === parser ===


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--out", required=True, metavar="DIR", help="Output directory.")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors.")
    common.add_argument("--verbose", action="store_true", help="Log debug detail.")

    parser = _ArgumentParser(
        prog="cinenet",
        description="Movie co-publication networks and a rank-test globalization indicator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    build = sub.add_parser("build", parents=[common], help="Per-year co-occurrence matrices.")
    build.add_argument("--input", required=True, help="Canonical corpus, or title.basics TSV.")
    build.add_argument("--format", choices=("canonical", "imdb"), default="canonical")
    build.add_argument("--akas", help="title.akas TSV (imdb format only).")
    build.add_argument("--aliases", help="Two-column raw<TAB>canonical region alias file.")
    build.add_argument("--from", dest="year_from", type=int, default=DEFAULT_YEAR_FROM)
    build.add_argument("--to", dest="year_to", type=int, default=DEFAULT_YEAR_TO)
    build.add_argument(
        "--min-total",
        type=int,
        default=DEFAULT_MIN_TOTAL,
        help="Country-list threshold: keep totals strictly greater (default: %(default)s).",
    )
    build.add_argument(
        "--dense",
        action="store_true",
        help=f"Also write every year as a dense matrix to {DENSE_FILE}.",
    )
    build.set_defaults(handler=cmd_build)

    indicator = sub.add_parser("indicator", parents=[common], help="Average rho tables.")
    indicator.add_argument("--matrix", required=True, metavar="DIR", help="Output of build.")
    indicator.add_argument("--focal", required=True, action="append", help="Repeatable.")
    indicator.add_argument(
        "--allow-outside",
        action="store_true",
        help="Accept focal countries that are not in the country list.",
    )
    indicator.set_defaults(handler=cmd_indicator)

    scan = sub.add_parser("scan", parents=[common], help="Per-year rank-sum scan.")
    scan.add_argument("--indicators", required=True, metavar="DIR", help="Output of indicator.")
    scan.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    scan.set_defaults(handler=cmd_scan)

    boxstats = sub.add_parser("boxstats", parents=[common], help="Per-year box summaries.")
    boxstats.add_argument("--indicators", required=True, metavar="DIR")
    boxstats.add_argument("--focal", action="append", help="Restrict to these countries.")
    boxstats.set_defaults(handler=cmd_boxstats)

    synth = sub.add_parser("synth", parents=[common], help="Synthetic shock corpus.")
    synth.add_argument("--config", help="Flat TOML file with SynthConfig keys.")
    synth.add_argument("--n-countries", dest="n_countries", type=int)
    synth.add_argument("--years", nargs=2, type=int, metavar=("FROM", "TO"))
    synth.add_argument("--base-volume", dest="base_volume", type=int)
    synth.add_argument("--cross-prob", dest="cross_prob", type=float)
    synth.add_argument("--shock-year", dest="shock_year", type=int)
    synth.add_argument("--shock-country", dest="shock_country")
    synth.add_argument("--shock-factor", dest="shock_factor", type=float)
    synth.add_argument("--seed", type=int)
    synth.set_defaults(handler=cmd_synth)

    report = sub.add_parser("report", parents=[common], help="Markdown digest of scans.")
    report.add_argument("--scan", required=True, metavar="DIR", help="Output of scan.")
    report.add_argument("--indicators", required=True, metavar="DIR")
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    configure_logging(quiet=args.quiet, verbose=args.verbose)
    try:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        return args.handler(args)
    except (UsageError, ArgumentError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except CinenetError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        logger.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
