"""
Earth rotation and geodesy.

TEME to ECEF uses GMST only (IAU 1982 polynomial, UT1 taken as UTC); no
nutation, polar motion or leap seconds. Distances are in km.
"""
import math
from datetime import datetime
from typing import Tuple, Union

import numpy as np
from sgp4.api import jday

from tsa.models import EcefPosition, EciState, GroundStation
from tsa.utils.helpers import ensure_utc

TWO_PI = 2.0 * math.pi
J2000_JD = 2451545.0
SIDEREAL_DAY_SECONDS = 86164.0905


class WGS84:
    """Parameters defining the WGS84 ellipsoid, km"""
    a = 6378.137
    f = 1.0 / 298.257223563
    e2 = 2 * f - f * f
    b = a * (1 - f)

    @classmethod
    def ellnormal(cls, lat):
        """Prime vertical radius of curvature at geodetic latitude lat (radians)"""
        return cls.a / np.sqrt(1.0 - cls.e2 * np.sin(lat) ** 2)


def julian_date(t: datetime) -> Tuple[float, float]:
    """Split Julian date (whole part, fraction) of a UTC instant"""
    t = ensure_utc(t)
    return jday(t.year, t.month, t.day, t.hour, t.minute, t.second + t.microsecond * 1e-6)


def gmst_from_jd(jd, fr):
    """
    Greenwich mean sidereal time in radians, [0, 2*pi)

    Accepts scalars or numpy arrays; jd and fr are the split Julian date
    so sub-millisecond resolution survives.
    """
    ut1 = ((np.asarray(jd, dtype=float) - J2000_JD) + np.asarray(fr, dtype=float)) / 36525.0
    seconds = (67310.54841
               + (876600.0 * 3600.0 + 8640184.812866) * ut1
               + 0.093104 * ut1 ** 2
               - 6.2e-6 * ut1 ** 3)
    theta = np.deg2rad(np.mod(seconds, 86400.0) / 240.0) % TWO_PI
    if np.ndim(theta) == 0:
        return float(theta)
    return theta


def gmst(t: datetime) -> float:
    """Greenwich mean sidereal time of a UTC instant, radians in [0, 2*pi)"""
    return gmst_from_jd(*julian_date(t))


def rotate_z(vectors: np.ndarray, theta) -> np.ndarray:
    """
    Rotate position vectors by -theta about the z axis

    Args:
        vectors: (3,) or (N, 3)
        theta: scalar or (N,) angles in radians

    Returns:
        Rotated vectors with the input shape
    """
    vectors = np.asarray(vectors, dtype=float)
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    x = vectors[..., 0]
    y = vectors[..., 1]
    return np.stack([cos_t * x + sin_t * y, -sin_t * x + cos_t * y, vectors[..., 2]], axis=-1)


def teme_to_ecef(state: EciState) -> EcefPosition:
    """Earth-fixed position of a TEME state (rotation by -GMST about z)"""
    return EcefPosition(t=state.t, position=rotate_z(state.position, gmst(state.t)))


def ecef_to_teme(position: EcefPosition) -> np.ndarray:
    """Inverse of teme_to_ecef for a timed Earth-fixed position"""
    if position.t is None:
        raise ValueError("ecef_to_teme needs a timed position")
    return rotate_z(position.position, -gmst(position.t))


def geodetic_to_ecef(lat_deg, lon_deg, alt_km) -> np.ndarray:
    """WGS84 geodetic coordinates to ECEF km; broadcasts over arrays"""
    lat = np.deg2rad(lat_deg)
    lon = np.deg2rad(lon_deg)
    normal = WGS84.ellnormal(lat)
    x = (normal + alt_km) * np.cos(lat) * np.cos(lon)
    y = (normal + alt_km) * np.cos(lat) * np.sin(lon)
    z = ((1 - WGS84.e2) * normal + alt_km) * np.sin(lat)
    return np.stack([x, y, z], axis=-1)


def station_ecef(gs: GroundStation) -> EcefPosition:
    """Static Earth-fixed position of a ground station"""
    return EcefPosition(t=None, position=geodetic_to_ecef(gs.latitude, gs.longitude, gs.altitude / 1000.0))


def ecef_to_geodetic(position: Union[EcefPosition, np.ndarray], tol: float = 1e-12) -> Tuple[float, float, float]:
    """
    Iterative Bowring inverse: ECEF km to geodetic latitude, longitude (deg) and height (km)

    Args:
        position: EcefPosition or a 3-vector
        tol: Convergence threshold on the iteration variable

    Returns:
        (lat_deg, lon_deg, alt_km)
    """
    if isinstance(position, EcefPosition):
        position = position.position
    x, y, z = (float(v) for v in position)
    p2 = x * x + y * y
    oe2z2 = (1 - WGS84.e2) * z * z
    k = 1.0 / (1.0 - WGS84.e2)
    for _ in range(50):
        c = (p2 + oe2z2 * k * k) ** 1.5 / WGS84.a / WGS84.e2
        k1 = 1.0 + (p2 + oe2z2 * k * k * k) / (c - p2)
        converged = abs(k1 - k) <= tol
        k = k1
        if converged:
            break

    p = math.sqrt(p2)
    lat = math.atan2(z * k, p)
    lon = math.atan2(y, x)
    sin_lat = math.sin(lat)
    height = p * math.cos(lat) + z * sin_lat - WGS84.a * math.sqrt(1.0 - WGS84.e2 * sin_lat ** 2)
    return math.degrees(lat), math.degrees(lon), height


def up_vector(lat_deg, lon_deg) -> np.ndarray:
    """Unit ellipsoid normal (zenith of the local SEZ frame); broadcasts over arrays"""
    lat = np.deg2rad(lat_deg)
    lon = np.deg2rad(lon_deg)
    return np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=-1)


def elevation_from_up(gs_position: np.ndarray, up: np.ndarray, sat_positions: np.ndarray) -> np.ndarray:
    """
    Elevation angles in degrees above the local horizontal plane

    Args:
        gs_position: (S, 3) station ECEF positions
        up: (S, 3) station zenith unit vectors
        sat_positions: (N, 3) satellite ECEF positions

    Returns:
        (S, N) elevations
    """
    gs_position = np.atleast_2d(gs_position)
    up = np.atleast_2d(up)
    rho = np.asarray(sat_positions, dtype=float)[np.newaxis, :, :] - gs_position[:, np.newaxis, :]
    vertical = np.einsum('snk,sk->sn', rho, up)
    horizontal = np.linalg.norm(rho - vertical[..., np.newaxis] * up[:, np.newaxis, :], axis=-1)
    return np.degrees(np.arctan2(vertical, horizontal))


def elevation_pairs(gs_positions: np.ndarray, ups: np.ndarray, sat_positions: np.ndarray) -> np.ndarray:
    """Row-wise elevations in degrees for (M, 3) station, zenith and satellite arrays"""
    rho = np.asarray(sat_positions, dtype=float) - gs_positions
    vertical = np.einsum('mk,mk->m', rho, ups)
    horizontal = np.linalg.norm(rho - vertical[:, np.newaxis] * ups, axis=1)
    return np.degrees(np.arctan2(vertical, horizontal))


def elevation(gs_ecef: EcefPosition, sat_ecef: EcefPosition) -> float:
    """
    Elevation of a satellite seen from a station, degrees in [-90, 90]

    The horizon plane is the geodetic one at the station, recovered from
    its ECEF position.
    """
    lat, lon, _ = ecef_to_geodetic(gs_ecef)
    angles = elevation_from_up(gs_ecef.position, up_vector(lat, lon), np.atleast_2d(sat_ecef.position))
    return float(angles[0, 0])
