import json
from datetime import timedelta

import numpy as np

from conftest import T0, make_spectrum
from tsa.models import GlobalWindow, PulsePmf, RunManifest, SpectrumMatrix
from tsa.reporting.writers import ReportWriter, pmf_frame, spectrum_matrix_frame, step_frame, windows_frame
from tsa.utils.helpers import sha256_file


def test_windows_frame():
    frame = windows_frame([make_spectrum("g1", "x1", [(0, 90), (300, 420)]), make_spectrum("g1", "x2", [])])
    assert frame.to_dict('records') == [
        {'station': 'g1', 'satellite': 'x1', 'start_iso8601': '2024-03-01T00:00:00Z',
         'end_iso8601': '2024-03-01T00:01:30Z', 'duration_s': 90},
        {'station': 'g1', 'satellite': 'x1', 'start_iso8601': '2024-03-01T00:05:00Z',
         'end_iso8601': '2024-03-01T00:07:00Z', 'duration_s': 120},
    ]


def test_step_frame_edges():
    frame = step_frame([make_spectrum("g", "x", [(0, 10), (20, 30)])], T0, T0 + timedelta(seconds=100))
    assert frame[['offset_s', 'visible']].values.tolist() == [[0, 1], [10, 0], [20, 1], [30, 0], [100, 0]]


def test_step_frame_window_reaching_span_end():
    frame = step_frame([make_spectrum("g", "x", [(5, 10)])], T0, T0 + timedelta(seconds=10))
    assert frame[['offset_s', 'visible']].values.tolist() == [[0, 0], [5, 1], [10, 0]]


def test_step_frame_without_windows():
    frame = step_frame([make_spectrum("g", "x", [])], T0, T0 + timedelta(seconds=60))
    assert frame['time_iso8601'].tolist() == ['2024-03-01T00:00:00Z', '2024-03-01T00:01:00Z']
    assert frame['visible'].tolist() == [0, 0]


def test_spectrum_matrix_frame():
    H = SpectrumMatrix("c", ("g1", "g2"), ("x1", "x2"), np.array([[10, 0], [3, 4]], dtype=np.int64),
                       GlobalWindow(T0, T0 + timedelta(seconds=10)))
    frame = spectrum_matrix_frame(H)
    assert list(frame.columns) == ['station', 'x1', 'x2']
    assert frame.values.tolist() == [['g1', 10, 0], ['g2', 3, 4]]


def test_pmf_frame():
    pmfs = [PulsePmf("a", "b", (1, 2), (0.25, 0.75)), PulsePmf("b", "a", (0,), (1.0,))]
    assert pmf_frame(pmfs).values.tolist() == [['a', 'b', 1, 0.25], ['a', 'b', 2, 0.75], ['b', 'a', 0, 1.0]]


def test_report_writer_tracks_outputs(tmp_path):
    writer = ReportWriter(tmp_path / 'out')
    writer.write_csv('nested/windows.csv', windows_frame([make_spectrum("g", "x", [(0, 5)])]))
    writer.write_json('report.json', {'answer': 42})
    writer.write_json('report.json', {'answer': 43})

    assert writer.outputs == ['nested/windows.csv', 'report.json']
    assert (tmp_path / 'out' / 'nested' / 'windows.csv').read_text().splitlines()[0] == \
        'station,satellite,start_iso8601,end_iso8601,duration_s'
    assert json.loads((tmp_path / 'out' / 'report.json').read_text()) == {'answer': 43}


def test_manifest(tmp_path):
    scenario_file = tmp_path / 'scenario.json'
    scenario_file.write_text('{}', encoding='utf-8')
    writer = ReportWriter(tmp_path / 'out')
    writer.write_json('b.json', {})
    writer.write_json('a.json', {})

    manifest = RunManifest(scenario_path=str(scenario_file), command='intra', output_dir=str(writer.output_dir),
                           alpha=1, min_elevation=10.0, jobs=4, tool_version='0.1.0', wall_clock_seconds=1.23456)
    path = writer.write_manifest(manifest, [str(scenario_file)])
    data = json.loads(path.read_text())

    assert data['outputs'] == ['a.json', 'b.json']
    assert data['input_hashes'] == {str(scenario_file): sha256_file(scenario_file)}
    assert data['wall_clock_seconds'] == 1.235
    assert data['command'] == 'intra'
    assert 'manifest.json' not in data['outputs']
