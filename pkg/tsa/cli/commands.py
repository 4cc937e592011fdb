"""
Command line front end: ``tsa access|intra|inter``.

Every command loads a scenario, applies the command line overrides, writes
its data files into the output directory and finishes with manifest.json.
"""
import argparse
import logging
import sys
import time
from dataclasses import replace
from typing import Dict, List, Optional

import pandas as pd

from tsa.analysis.interaction import PMF_MODES, PMF_UNITS, run_inter
from tsa.analysis.spectra import SpectrumMap, run_intra
from tsa.catalog.scenario_loader import filter_scenario, load_scenario
from tsa.config import Config
from tsa.errors import FilterError, TsaError
from tsa.models import RunManifest, Scenario, TemporalSpectrum
from tsa.reporting.writers import (ReportWriter, interaction_frame, inter_report, intra_report,
                                   pmf_frame, spectrum_matrix_frame, step_frame, windows_frame)
from tsa.scheduler.tasks import compute_spectra
from tsa.utils.helpers import clean_filename, format_duration

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['station', 'satellite', 'station_constellation', 'satellite_constellation',
                   'pulse_count', 'total_s']
PULSE_STATS_COLUMNS = ['from', 'to', 'station', 'satellite', 'pulse_count', 'density']


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', required=True, help='Scenario JSON file')
    common.add_argument('--alpha', type=int, help='Sampling precision in seconds (overrides the scenario)')
    common.add_argument('--min-elevation', type=float, help='Elevation mask in degrees (overrides the scenario)')
    common.add_argument('--coarse-step', type=float, help='Coarse visibility scan step in seconds')
    common.add_argument('--out', default=Config.DEFAULT_OUTPUT_DIR, help='Output directory')
    common.add_argument('--jobs', type=int, default=Config.DEFAULT_JOBS, help='Worker processes')
    common.add_argument('--station', action='append', help='Only this station (repeatable)')
    common.add_argument('--satellite', action='append', help='Only this satellite (repeatable)')
    common.add_argument('--log-level', default=Config.LOG_LEVEL,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], type=str.upper)

    parser = argparse.ArgumentParser(
        prog='tsa',
        description='Temporal spectrum analysis of satellite constellations and their ground stations',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    access = subparsers.add_parser('access', parents=[common],
                                   help='Access windows and step data per (station, satellite) pair')
    access.add_argument('--constellation', action='append', help='Only this constellation (repeatable)')
    access.add_argument('--aggregate', action='store_true',
                        help='One windows CSV and one step CSV instead of one per pair')
    access.add_argument('--all-pairs', action='store_true',
                        help='Every station against every satellite, across constellations')
    access.set_defaults(handler=cmd_access)

    intra = subparsers.add_parser('intra', parents=[common], help='Dominant and isolated stations')
    intra.add_argument('--constellation', action='append', help='Only this constellation (repeatable)')
    intra.set_defaults(handler=cmd_intra)

    inter = subparsers.add_parser('inter', parents=[common], help='Interaction matrix, eigen report and PMFs')
    inter.add_argument('--pmf-mode', choices=PMF_MODES, default='pooled')
    inter.add_argument('--pmf-unit', choices=PMF_UNITS, default='pair',
                       help='Count pulses per station-satellite pair or per station over the whole constellation')
    inter.set_defaults(handler=cmd_inter, constellation=None)
    return parser


def apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    """Command line values win over the scenario file"""
    changes = {}
    if args.alpha is not None:
        changes['alpha'] = args.alpha
    if args.min_elevation is not None:
        changes['min_elevation'] = args.min_elevation
    if args.coarse_step is not None:
        changes['coarse_step'] = args.coarse_step
    if changes:
        scenario = replace(scenario, **changes)
    return filter_scenario(scenario, args.constellation, args.station, args.satellite)


def _pair_name(spectrum: TemporalSpectrum) -> str:
    return f"{clean_filename(spectrum.station_id)}__{clean_filename(spectrum.satellite_id)}.csv"


def cmd_access(scenario: Scenario, args: argparse.Namespace, writer: ReportWriter) -> Dict:
    """Window CSVs and step-function data for every requested pair, plus a summary table"""
    spectra = compute_spectra(scenario, jobs=args.jobs, all_pairs=args.all_pairs)
    if not spectra:
        raise FilterError("No (station, satellite) pair matches the filters",
                          [station.id for station in scenario.stations])
    ordered: List[TemporalSpectrum] = list(spectra.values())

    if args.aggregate:
        writer.write_csv('windows.csv', windows_frame(ordered))
        writer.write_csv('steps.csv', step_frame(ordered, scenario.span_start, scenario.span_end))
    else:
        for spectrum in ordered:
            writer.write_csv(f"windows/{_pair_name(spectrum)}", windows_frame([spectrum]))
            writer.write_csv(f"steps/{_pair_name(spectrum)}",
                             step_frame([spectrum], scenario.span_start, scenario.span_end))

    summary = pd.DataFrame(
        [
            {
                'station': spectrum.station_id,
                'satellite': spectrum.satellite_id,
                'station_constellation': spectrum.station_constellation,
                'satellite_constellation': spectrum.satellite_constellation,
                'pulse_count': spectrum.pulse_count,
                'total_s': int(round(spectrum.total_seconds)),
            }
            for spectrum in ordered
        ],
        columns=SUMMARY_COLUMNS,
    )
    writer.write_csv('summary.csv', summary)
    return {'pairs': len(ordered), 'windows': int(summary['pulse_count'].sum())}


def cmd_intra(scenario: Scenario, args: argparse.Namespace, writer: ReportWriter) -> Dict:
    """H dump, eigen report and ranking for each constellation"""
    spectra: SpectrumMap = compute_spectra(scenario, jobs=args.jobs)
    rankings = {}
    filtered = bool(args.station or args.satellite)
    for cid in scenario.constellation_ids:
        constellation = scenario.constellation(cid)
        if filtered and not (constellation.stations and constellation.satellites):
            logger.warning(f"Skipping constellation {cid}: nothing left after the station/satellite filters")
            continue
        result = run_intra(scenario, cid, spectra)
        folder = f"intra/{clean_filename(cid)}"
        writer.write_csv(f"{folder}/H.csv", spectrum_matrix_frame(result.matrix))
        writer.write_json(f"{folder}/report.json", intra_report(result, scenario))
        rankings[cid] = result.ranking.to_dict()
    if not rankings:
        raise FilterError("No constellation has both stations and satellites after filtering",
                          scenario.constellation_ids)
    writer.write_json('intra/rankings.json', rankings)
    return {'constellations': len(rankings)}


def cmd_inter(scenario: Scenario, args: argparse.Namespace, writer: ReportWriter) -> Dict:
    """Interaction matrix P with its eigen report, pulse statistics and PMF tables"""
    spectra = compute_spectra(scenario, jobs=args.jobs, all_pairs=True)
    result = run_inter(scenario, spectra, pmf_mode=args.pmf_mode, pmf_unit=args.pmf_unit)
    writer.write_json('inter/interaction.json', inter_report(result, scenario))
    writer.write_csv('inter/p_matrix.csv', interaction_frame(result))
    writer.write_csv('inter/pmf.csv', pmf_frame(result.pmfs))
    writer.write_csv('inter/pulse_stats.csv',
                     pd.DataFrame([stats.to_dict() for stats in result.pulse_stats],
                                  columns=PULSE_STATS_COLUMNS))
    return {'constellations': len(result.interaction.constellation_ids), 'pmfs': len(result.pmfs)}


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    scenario = apply_overrides(load_scenario(args.scenario), args)
    writer = ReportWriter(args.out)
    summary = args.handler(scenario, args, writer)

    elapsed = time.perf_counter() - started
    manifest = RunManifest(
        scenario_path=scenario.source_path,
        command=args.command,
        output_dir=str(writer.output_dir),
        alpha=scenario.alpha,
        min_elevation=scenario.min_elevation,
        jobs=args.jobs,
        tool_version=Config.TOOL_VERSION,
        wall_clock_seconds=elapsed,
    )
    writer.write_manifest(manifest, scenario.input_files)
    logger.info(f"{args.command} finished in {format_duration(elapsed)}: {summary}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    if args.jobs < 1:
        logger.error(f"--jobs must be at least 1, got {args.jobs}")
        return FilterError.exit_code
    try:
        return run(args)
    except TsaError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
