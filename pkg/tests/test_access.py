import math
from datetime import timedelta

import numpy as np
import pytest

from conftest import T0, station_list
from tsa.catalog.synthetic import WalkerShell
from tsa.models import GroundStation, TleRecord
from tsa.propagation.frames import elevation_from_up, geodetic_to_ecef, gmst, up_vector
from tsa.propagation.sgp4_propagator import SatelliteTrack
from tsa.visibility.access import _merge_intervals, access_windows, coarse_grid, find_access_windows


def offsets(spectrum):
    return [((w.start - T0).total_seconds(), (w.end - T0).total_seconds()) for w in spectrum.windows]


def oracle_windows(gs: GroundStation, sat: TleRecord, duration: int, min_elevation: float = 0.0):
    """Windows from exhaustive 1 s sampling: [first visible second, first invisible second)"""
    grid = np.arange(0, duration + 1, dtype=float)
    position = geodetic_to_ecef(gs.latitude, gs.longitude, gs.altitude / 1000.0)
    up = up_vector(gs.latitude, gs.longitude)
    visible = elevation_from_up(position, up, SatelliteTrack(sat, T0).ecef(grid))[0] >= min_elevation
    edges = np.diff(np.concatenate(([0], visible.astype(int), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return [(float(s), float(min(e, duration))) for s, e in zip(starts, ends)]


def test_coarse_grid_appends_span_end():
    assert coarse_grid(100.0, 30.0).tolist() == [0.0, 30.0, 60.0, 90.0, 100.0]
    assert coarse_grid(90.0, 30.0).tolist() == [0.0, 30.0, 60.0, 90.0]
    assert coarse_grid(10.0, 30.0).tolist() == [0.0, 10.0]


def test_merge_intervals():
    merged = _merge_intervals([(0.0, 10.0), (10.0, 20.0), (25.0, 25.0), (30.0, 45.0)], alpha=1)
    assert merged == [(0.0, 20.0), (30.0, 45.0)]
    assert _merge_intervals([(0.0, 4.0), (10.0, 20.0)], alpha=5) == [(10.0, 20.0)]


def test_windows_match_exhaustive_sampling():
    satellites = (
        WalkerShell("mid", planes=3, per_plane=1, inclination=53.0, mean_motion=15.5, epoch=T0).records()
        + WalkerShell("polar", planes=2, per_plane=1, inclination=87.0, mean_motion=14.9, epoch=T0,
                      first_catalog_number=91000).records()
    )
    stations = station_list([("DEN", 39.7, -105.0), ("LHR", 51.5, -0.1), ("SVB", 78.2, 15.4)])
    duration = 2 * 3600
    span = (T0, T0 + timedelta(seconds=duration))

    found = 0
    for sat in satellites:
        spectra = find_access_windows(stations, sat, span, min_elevation=0.0, alpha=1, coarse_step=30.0)
        assert [s.station_id for s in spectra] == ["DEN", "LHR", "SVB"]
        for gs, spectrum in zip(stations, spectra):
            ours = offsets(spectrum)
            oracle = oracle_windows(gs, sat, duration)
            assert len(ours) == len(oracle), (gs.id, sat.name)
            for (start, end), (s, e) in zip(ours, oracle):
                assert abs(start - s) <= 1 and abs(end - e) <= 1, (gs.id, sat.name)
            found += len(ours)
    assert found > 0


def test_polar_satellite_over_high_latitude_station():
    sat = WalkerShell("p", planes=1, per_plane=1, inclination=89.0, mean_motion=15.2, epoch=T0).records()[0]
    gs = GroundStation(id="EUR", latitude=85.0, longitude=-86.0, altitude=0.0, constellation_id="p")
    spectrum = access_windows(gs, sat, (T0, T0 + timedelta(hours=6)))

    assert 2 <= spectrum.pulse_count <= 8
    durations = [w.duration for w in spectrum.windows]
    assert max(durations) >= 5 * 60
    assert max(durations) <= 15 * 60
    assert spectrum.station_constellation == "p"
    assert spectrum.satellite_constellation == "p"


def test_boundaries_on_alpha_grid():
    sat = WalkerShell("p", planes=1, per_plane=1, inclination=89.0, mean_motion=15.2, epoch=T0).records()[0]
    gs = GroundStation(id="EUR", latitude=85.0, longitude=-86.0, altitude=0.0, constellation_id="p")
    spectrum = access_windows(gs, sat, (T0, T0 + timedelta(hours=3)), alpha=10)

    assert spectrum.pulse_count > 0
    for start, end in offsets(spectrum):
        assert start % 10 == 0
        assert end % 10 == 0
        assert end - start >= 10


def test_windows_are_disjoint_and_inside_span():
    sat = WalkerShell("p", planes=1, per_plane=1, inclination=89.0, mean_motion=15.2, epoch=T0).records()[0]
    gs = GroundStation(id="EUR", latitude=85.0, longitude=-86.0, altitude=0.0, constellation_id="p")
    spectrum = access_windows(gs, sat, (T0, T0 + timedelta(hours=6)), min_elevation=10.0)

    bounds = offsets(spectrum)
    assert all(0 <= start < end <= 6 * 3600 for start, end in bounds)
    assert all(prev_end < start for (_, prev_end), (start, _) in zip(bounds, bounds[1:]))


def test_higher_mask_shortens_windows():
    sat = WalkerShell("p", planes=1, per_plane=1, inclination=89.0, mean_motion=15.2, epoch=T0).records()[0]
    gs = GroundStation(id="EUR", latitude=85.0, longitude=-86.0, altitude=0.0, constellation_id="p")
    span = (T0, T0 + timedelta(hours=6))
    low = access_windows(gs, sat, span, min_elevation=0.0)
    high = access_windows(gs, sat, span, min_elevation=20.0)
    assert high.total_seconds < low.total_seconds


def test_geostationary_satellite_is_always_visible():
    # sub-satellite point over (0, 0) at the span start
    anomaly = math.degrees(gmst(T0)) % 360.0
    sat = TleRecord(
        name="GEO", catalog_number=99001, classification="U", intl_designator="", epoch_year=2024,
        epoch_day=61.0, ndot=0.0, nddot=0.0, bstar=0.0, ephemeris_type=0, element_set=1,
        inclination=0.05, raan=0.0, eccentricity=0.0001, arg_perigee=0.0, mean_anomaly=round(anomaly, 4),
        mean_motion=1.00273791, rev_number=0,
    )
    gs = GroundStation(id="NULL", latitude=0.0, longitude=0.0, altitude=0.0, constellation_id="geo")
    spectrum = access_windows(gs, sat, (T0, T0 + timedelta(hours=6)), min_elevation=10.0)

    assert offsets(spectrum) == [(0.0, 6 * 3600.0)]


def test_never_visible_pair_has_no_windows():
    sat = WalkerShell("eq", planes=1, per_plane=1, inclination=0.1, mean_motion=15.2, epoch=T0).records()[0]
    gs = GroundStation(id="SOUTH", latitude=-85.0, longitude=0.0, altitude=0.0, constellation_id="eq")
    spectrum = access_windows(gs, sat, (T0, T0 + timedelta(hours=3)))
    assert spectrum.windows == ()
    assert spectrum.total_seconds == 0


def test_no_stations():
    sat = WalkerShell("eq", planes=1, per_plane=1, inclination=0.1, mean_motion=15.2, epoch=T0).records()[0]
    assert find_access_windows([], sat, (T0, T0 + timedelta(hours=1))) == []
