import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Union

import pandas as pd

from tsa.models import (InterResult, IntraResult, PulsePmf, RunManifest, Scenario,
                        SpectrumMatrix, TemporalSpectrum)
from tsa.utils.helpers import format_file_size, iso_utc, sha256_file

logger = logging.getLogger(__name__)

WINDOW_COLUMNS = ['station', 'satellite', 'start_iso8601', 'end_iso8601', 'duration_s']
STEP_COLUMNS = ['station', 'satellite', 'time_iso8601', 'offset_s', 'visible']
PMF_COLUMNS = ['from', 'to', 'k', 'probability']


def _seconds(value: float):
    """Whole seconds as int, anything else unchanged"""
    return int(value) if float(value).is_integer() else float(value)


def windows_frame(spectra: Iterable[TemporalSpectrum]) -> pd.DataFrame:
    """One row per access window: station,satellite,start_iso8601,end_iso8601,duration_s"""
    rows = [
        {
            'station': spectrum.station_id,
            'satellite': spectrum.satellite_id,
            'start_iso8601': iso_utc(window.start),
            'end_iso8601': iso_utc(window.end),
            'duration_s': _seconds(window.duration),
        }
        for spectrum in spectra
        for window in spectrum.windows
    ]
    return pd.DataFrame(rows, columns=WINDOW_COLUMNS)


def step_frame(spectra: Iterable[TemporalSpectrum], span_start: datetime, span_end: datetime) -> pd.DataFrame:
    """
    Plot-ready step function h(t) for each pair

    Each pair contributes the span start, every window edge and the span
    end; the visible column holds the value from that instant onwards.
    """
    rows = []
    for spectrum in spectra:
        edges = [(span_start, 0)]
        for window in spectrum.windows:
            edges.append((window.start, 1))
            edges.append((window.end, 0))
        if edges[-1][0] < span_end:
            edges.append((span_end, 0))
        # a window opening at the span start replaces the initial 0
        if len(edges) > 1 and edges[1][0] == span_start:
            edges = edges[1:]
        for when, state in edges:
            rows.append({
                'station': spectrum.station_id,
                'satellite': spectrum.satellite_id,
                'time_iso8601': iso_utc(when),
                'offset_s': _seconds((when - span_start).total_seconds()),
                'visible': state,
            })
    return pd.DataFrame(rows, columns=STEP_COLUMNS)


def spectrum_matrix_frame(H: SpectrumMatrix) -> pd.DataFrame:
    """H with stations as rows and satellites as columns, values in seconds"""
    frame = pd.DataFrame(H.values, index=list(H.station_ids), columns=list(H.satellite_ids))
    frame.index.name = 'station'
    return frame.reset_index()


def pmf_frame(pmfs: Iterable[PulsePmf]) -> pd.DataFrame:
    rows = [
        {'from': pmf.from_constellation, 'to': pmf.to_constellation, 'k': k, 'probability': p}
        for pmf in pmfs
        for k, p in zip(pmf.support, pmf.probabilities)
    ]
    return pd.DataFrame(rows, columns=PMF_COLUMNS)


def interaction_frame(result: InterResult) -> pd.DataFrame:
    """P laid out row-major with constellation labels, ready for a heat map"""
    matrix = result.interaction
    frame = pd.DataFrame(matrix.values, index=list(matrix.constellation_ids),
                         columns=list(matrix.constellation_ids))
    frame.index.name = 'from'
    return frame.reset_index()


def intra_report(result: IntraResult, scenario: Scenario) -> Dict:
    """JSON-ready summary of the intra-constellation analysis"""
    H = result.matrix
    ge = result.eigen
    return {
        'constellation': H.constellation_id,
        'scenario': scenario.name,
        'alpha': H.alpha,
        'min_elevation': scenario.min_elevation,
        'global_window': H.global_window.to_dict(),
        'stations': list(H.station_ids),
        'satellites': list(H.satellite_ids),
        'station_totals_s': [int(v) for v in H.row_totals],
        'eigenvalues': [float(v) for v in ge.eigenvalues],
        'leading_eigenvector': [float(v) for v in ge.eigenvectors[:, 0]],
        'jacobi_sweeps': ge.sweeps,
        'ranking': result.ranking.to_dict(),
        'memory_estimate': {
            'bits': result.memory_bits,
            'human': format_file_size(result.memory_bits // 8),
        },
    }


def inter_report(result: InterResult, scenario: Scenario) -> Dict:
    """JSON-ready summary of the interaction analysis"""
    report = {
        'scenario': scenario.name,
        'alpha': scenario.alpha,
        'min_elevation': scenario.min_elevation,
    }
    report.update(result.interaction.to_dict())
    report['global_windows'] = [
        {'from': from_c, 'to': to_c, **gw.to_dict()}
        for (from_c, to_c), gw in result.global_windows.items()
    ]
    report['pmfs'] = [
        {'from': pmf.from_constellation, 'to': pmf.to_constellation, 'mode': pmf.mode, 'unit': pmf.unit,
         'most_likely': pmf.most_likely, 'mean': round(pmf.mean, 6)}
        for pmf in result.pmfs
    ]
    report['pulse_stats'] = [stats.to_dict() for stats in result.pulse_stats]
    return report


class ReportWriter:
    """Writes data files into one output directory and remembers every file written"""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.outputs: List[str] = []

    def _path(self, name: str) -> Path:
        path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        if name not in self.outputs:
            self.outputs.append(name)
        return path

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        path = self._path(name)
        frame.to_csv(path, index=False, lineterminator='\n')
        logger.debug(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_json(self, name: str, data) -> Path:
        path = self._path(name)
        path.write_text(json.dumps(data, indent=2) + '\n', encoding='utf-8')
        logger.debug(f"Wrote {path}")
        return path

    def write_manifest(self, manifest: RunManifest, input_files: Iterable[str] = ()) -> Path:
        """
        Write manifest.json listing every file this writer produced

        Args:
            manifest: Run settings; its outputs and hashes are filled in here
            input_files: Files whose SHA-256 goes into the manifest
        """
        for input_file in input_files:
            manifest.input_hashes[input_file] = sha256_file(input_file)
        manifest.outputs = list(self.outputs)
        path = self.output_dir / 'manifest.json'
        path.write_text(json.dumps(manifest.to_dict(), indent=2) + '\n', encoding='utf-8')
        logger.info(f"Wrote {len(manifest.outputs)} output files and manifest to {self.output_dir}")
        return path
