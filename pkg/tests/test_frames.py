import math
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T0
from tsa.models import EcefPosition, EciState, GroundStation
from tsa.propagation.frames import (WGS84, ecef_to_geodetic, ecef_to_teme, elevation, elevation_from_up,
                                    geodetic_to_ecef, gmst, rotate_z, station_ecef, teme_to_ecef, up_vector)


def test_gmst_at_j2000():
    theta = gmst(datetime(2000, 1, 1, 12, tzinfo=timezone.utc))
    assert theta == pytest.approx(4.894961213, abs=1e-6)


def test_gmst_advances_one_turn_per_sidereal_day():
    start = gmst(T0)
    later = gmst(T0 + timedelta(seconds=86164.0905))
    assert (later - start + math.pi) % (2 * math.pi) - math.pi == pytest.approx(0.0, abs=1e-6)


def test_gmst_treats_naive_as_utc():
    assert gmst(datetime(2024, 3, 1)) == gmst(T0)


def test_geodetic_reference_points():
    assert geodetic_to_ecef(0.0, 0.0, 0.0) == pytest.approx([WGS84.a, 0.0, 0.0])
    assert geodetic_to_ecef(90.0, 0.0, 0.0) == pytest.approx([0.0, 0.0, WGS84.b], abs=1e-9)
    assert geodetic_to_ecef(0.0, 90.0, 1.0) == pytest.approx([0.0, WGS84.a + 1.0, 0.0], abs=1e-9)


def test_geodetic_to_ecef_broadcasts():
    positions = geodetic_to_ecef(np.array([0.0, 45.0]), np.array([0.0, 10.0]), np.array([0.0, 0.5]))
    assert positions.shape == (2, 3)


@settings(max_examples=200, deadline=None)
@given(
    lat=st.floats(-89.9, 89.9),
    lon=st.floats(-179.9, 179.9),
    alt=st.floats(-0.5, 40000.0),
)
def test_geodetic_inverse(lat, lon, alt):
    got_lat, got_lon, got_alt = ecef_to_geodetic(geodetic_to_ecef(lat, lon, alt))
    assert got_lat == pytest.approx(lat, abs=1e-8)
    assert got_lon == pytest.approx(lon, abs=1e-8)
    assert got_alt == pytest.approx(alt, abs=1e-6)


def test_rotate_z_preserves_norm_and_z():
    vectors = np.array([[7000.0, -1200.0, 300.0], [0.0, 42164.0, -5.0]])
    rotated = rotate_z(vectors, np.array([0.3, 2.0]))
    assert np.linalg.norm(rotated, axis=1) == pytest.approx(np.linalg.norm(vectors, axis=1))
    assert rotated[:, 2] == pytest.approx(vectors[:, 2])


def test_teme_to_ecef_round_trip():
    t = T0 + timedelta(hours=5, seconds=17)
    state = EciState(t=t, position=np.array([6524.834, 6862.875, 6448.296]), velocity=np.zeros(3))
    fixed = teme_to_ecef(state)
    assert fixed.t == t
    assert ecef_to_teme(fixed) == pytest.approx(state.position)


def test_ecef_to_teme_needs_a_time():
    with pytest.raises(ValueError):
        ecef_to_teme(EcefPosition(t=None, position=np.ones(3)))


@pytest.mark.parametrize("lat, lon", [(0.0, 0.0), (45.0, 100.0), (-78.5, -20.0)])
def test_zenith_satellite_has_elevation_90(lat, lon):
    gs = GroundStation(id="g", latitude=lat, longitude=lon, altitude=200.0, constellation_id="c")
    above = EcefPosition(t=T0, position=geodetic_to_ecef(lat, lon, 550.0))
    assert elevation(station_ecef(gs), above) == pytest.approx(90.0, abs=1e-6)


def test_antipodal_satellite_is_below_horizon():
    gs = GroundStation(id="g", latitude=10.0, longitude=20.0, altitude=0.0, constellation_id="c")
    below = EcefPosition(t=T0, position=geodetic_to_ecef(-10.0, -160.0, 550.0))
    assert elevation(station_ecef(gs), below) < -80.0


def test_horizon_satellite_has_elevation_near_zero():
    # a point far away along the local east direction lies on the horizon plane
    gs_position = geodetic_to_ecef(0.0, 0.0, 0.0)
    east = np.array([0.0, 1.0, 0.0])
    sat = gs_position + 5000.0 * east
    angles = elevation_from_up(gs_position, up_vector(0.0, 0.0), sat[np.newaxis, :])
    assert angles[0, 0] == pytest.approx(0.0, abs=1e-9)


def test_elevation_from_up_shape():
    stations = geodetic_to_ecef(np.array([0.0, 10.0, 20.0]), np.zeros(3), np.zeros(3))
    ups = up_vector(np.array([0.0, 10.0, 20.0]), np.zeros(3))
    sats = geodetic_to_ecef(np.array([0.0, 5.0]), np.array([0.0, 5.0]), np.array([500.0, 500.0]))
    assert elevation_from_up(stations, ups, sats).shape == (3, 2)
