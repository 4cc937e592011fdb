import json
import logging
from datetime import timedelta

import pytest

from conftest import ISS_LINES, T0, VANGUARD_LINES, write_polar_scenario
from tsa.catalog.scenario_loader import filter_scenario, load_scenario
from tsa.errors import CrossReferenceError, FilterError, FormatError, MissingFileError
from tsa.utils.helpers import iso_utc


def write_catalog_scenario(tmp_path, **overrides):
    (tmp_path / "tle").mkdir()
    (tmp_path / "tle" / "sats.txt").write_text(
        "ISS (ZARYA)\n" + "\n".join(ISS_LINES) + "\n0 VANGUARD 1\n" + "\n".join(VANGUARD_LINES) + "\n",
        encoding='utf-8',
    )
    (tmp_path / "gs.csv").write_text(
        "id,lat_deg,lon_deg,alt_m,constellation\nGS1,10,20,0,legacy\n", encoding='utf-8'
    )
    document = {
        'span': {'start': 'epoch', 'duration_hours': 2},
        'stations': ['gs.csv'],
        'constellations': [{'id': 'legacy', 'tle': 'tle/sats.txt'}],
    }
    document.update(overrides)
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(document), encoding='utf-8')
    return path


def test_load_catalog_scenario(tmp_path):
    scenario = load_scenario(write_catalog_scenario(tmp_path))

    assert scenario.name == "catalog"
    assert scenario.constellation_ids == ["legacy"]
    assert scenario.constellation("legacy").satellite_ids == ["ISS (ZARYA)", "VANGUARD 1"]
    assert [s.id for s in scenario.stations] == ["GS1"]
    assert scenario.alpha == 1
    assert scenario.min_elevation == 0.0
    assert scenario.coarse_step == 30.0
    # span starts at the latest epoch, truncated to the second
    assert iso_utc(scenario.span_start) == "2008-09-20T12:25:40Z"
    assert scenario.duration_seconds == 7200.0
    assert len(scenario.input_files) == 3


def test_synthetic_scenario(polar_scenario_file):
    scenario = load_scenario(polar_scenario_file)

    assert scenario.constellation_ids == ["north", "south"]
    assert scenario.constellation("north").station_ids == ["N1", "N2"]
    assert scenario.constellation("south").satellite_ids == ["south-0101", "south-0102"]
    assert scenario.span_start == T0
    assert scenario.span_end == T0 + timedelta(hours=3)
    assert scenario.coarse_step == 60.0
    # synthetic epochs default to the span start
    assert all(sat.epoch == T0 for _, sat in scenario.satellites)


def test_max_satellites(tmp_path):
    path = write_polar_scenario(tmp_path, constellations=[
        {'id': 'north', 'max_satellites': 1,
         'synthetic': {'planes': 3, 'per_plane': 2, 'inclination': 89.0, 'mean_motion': 15.0}},
        {'id': 'south', 'synthetic': {'planes': 1, 'per_plane': 1, 'inclination': 88.0, 'mean_motion': 15.0,
                                      'first_catalog_number': 91000}},
    ])
    scenario = load_scenario(path)
    assert scenario.constellation("north").satellite_ids == ["north-0101"]


def test_explicit_end(tmp_path):
    path = write_polar_scenario(tmp_path, span={'start': '2024-03-01T00:00:00Z', 'end': '2024-03-01T06:30:00+02:00'})
    scenario = load_scenario(path)
    assert scenario.span_end == T0 + timedelta(hours=4, minutes=30)


def test_repository_scenario_b(scenario_b_path):
    scenario = load_scenario(scenario_b_path)

    sizes = {c.id: (len(c.stations), len(c.satellites)) for c in scenario.constellations}
    assert sizes == {'oneweb': (10, 30), 'starlink': (20, 50), 'iridium': (4, 20)}
    assert scenario.duration_seconds == 10 * 3600


def test_unknown_keys_warn(tmp_path, caplog):
    path = write_polar_scenario(tmp_path, colour='blue')
    with caplog.at_level(logging.WARNING, logger='tsa.catalog.scenario_loader'):
        load_scenario(path)
    assert "Ignoring unknown key 'colour'" in caplog.text


def test_missing_scenario(tmp_path):
    with pytest.raises(MissingFileError):
        load_scenario(tmp_path / "none.json")


def test_missing_tle_file(tmp_path):
    path = write_catalog_scenario(tmp_path, constellations=[{'id': 'legacy', 'tle': 'tle/other.txt'}])
    with pytest.raises(MissingFileError, match="other.txt"):
        load_scenario(path)


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding='utf-8')
    with pytest.raises(FormatError, match="not valid JSON"):
        load_scenario(path)


def test_station_with_unknown_constellation(tmp_path):
    path = write_catalog_scenario(tmp_path)
    (tmp_path / "gs.csv").write_text(
        "id,lat_deg,lon_deg,alt_m,constellation\nGS1,10,20,0,nowhere\n", encoding='utf-8'
    )
    with pytest.raises(CrossReferenceError, match="available: legacy"):
        load_scenario(path)


@pytest.mark.parametrize("overrides, message", [
    ({'span': {'start': '2024-03-01T00:00:00Z', 'end': '2024-02-29T00:00:00Z'}}, "not after"),
    ({'span': {'start': '2024-03-01T00:00:00Z'}}, "exactly one of"),
    ({'span': {'start': 'not-a-date', 'duration_hours': 1}}, "ISO-8601"),
    ({'alpha': 0}, "alpha"),
    ({'alpha': 1.5}, "whole number"),
    ({'coarse_step': -5}, "coarse_step"),
    ({'constellations': []}, "constellations"),
])
def test_invalid_scenarios(tmp_path, overrides, message):
    with pytest.raises(FormatError, match=message):
        load_scenario(write_polar_scenario(tmp_path, **overrides))


def test_tle_and_synthetic_are_exclusive(tmp_path):
    path = write_catalog_scenario(tmp_path, constellations=[
        {'id': 'legacy', 'tle': 'tle/sats.txt', 'synthetic': {'planes': 1, 'per_plane': 1,
                                                            'inclination': 50, 'mean_motion': 15}},
    ])
    with pytest.raises(FormatError, match="exactly one of 'tle' or 'synthetic'"):
        load_scenario(path)


def test_filter_scenario(polar_scenario_file):
    scenario = load_scenario(polar_scenario_file)

    only_n1 = filter_scenario(scenario, station_ids=["N1"])
    assert [s.id for s in only_n1.stations] == ["N1"]
    assert len(only_n1.satellites) == len(scenario.satellites)

    south = filter_scenario(scenario, constellation_ids=["south"], satellite_ids=["south-0102"])
    assert south.constellation_ids == ["south"]
    assert south.constellation("south").satellite_ids == ["south-0102"]


def test_filter_lists_available_ids(polar_scenario_file):
    scenario = load_scenario(polar_scenario_file)
    with pytest.raises(FilterError, match="available: N1, N2, S1, S2"):
        filter_scenario(scenario, station_ids=["XX"])
    with pytest.raises(FilterError, match="available: north, south"):
        filter_scenario(scenario, constellation_ids=["east"])
