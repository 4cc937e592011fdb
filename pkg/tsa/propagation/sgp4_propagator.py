"""
SGP4 propagation of TLE records.

States come out in TEME (km, km/s); SatelliteTrack rotates them to ECEF
through GMST for the visibility search.
"""
import logging
from datetime import datetime, timedelta
from typing import Tuple

import numpy as np
from sgp4.api import SGP4_ERRORS, WGS72, Satrec

from tsa.catalog.tle_parser import format_tle
from tsa.config import Config
from tsa.errors import DecayError
from tsa.models import EciState, TleRecord
from tsa.propagation.frames import gmst_from_jd, julian_date, rotate_z

logger = logging.getLogger(__name__)

# Satellites already warned about stale epochs, per process
_stale_epoch_warned = set()


def build_satrec(tle: TleRecord) -> Satrec:
    """
    Initialise the SGP4 model (WGS72 constants, improved operation mode)

    Raises:
        DecayError: elements outside the model domain
    """
    if not 0.0 <= tle.eccentricity < 1.0:
        raise DecayError(f"Satellite {tle.satellite_id}: eccentricity {tle.eccentricity} outside [0, 1)")
    line1, line2 = format_tle(tle)
    satrec = Satrec.twoline2rv(line1, line2, WGS72)
    if satrec.error:
        raise DecayError(
            f"Satellite {tle.satellite_id}: SGP4 initialisation failed "
            f"({SGP4_ERRORS.get(satrec.error, satrec.error)})"
        )
    return satrec


def _warn_if_stale(tle: TleRecord, days_from_epoch: float):
    if abs(days_from_epoch) > Config.EPOCH_WARN_DAYS and tle.satellite_id not in _stale_epoch_warned:
        _stale_epoch_warned.add(tle.satellite_id)
        logger.warning(
            f"Satellite {tle.satellite_id}: propagating {days_from_epoch:+.1f} days from its TLE epoch; "
            f"accuracy degrades beyond {Config.EPOCH_WARN_DAYS:g} days"
        )


def propagate_teme(tle: TleRecord, t: datetime) -> EciState:
    """
    Propagate a TLE to one instant

    Args:
        tle: Element set
        t: UTC instant

    Returns:
        TEME position (km) and velocity (km/s)

    Raises:
        DecayError: SGP4 reports decay or elements outside its domain
    """
    satrec = build_satrec(tle)
    jd, fr = julian_date(t)
    _warn_if_stale(tle, (jd - satrec.jdsatepoch) + (fr - satrec.jdsatepochF))

    error, position, velocity = satrec.sgp4(jd, fr)
    if error:
        raise DecayError(f"Satellite {tle.satellite_id} at {t.isoformat()}: {SGP4_ERRORS.get(error, error)}")
    return EciState(t=t, position=np.array(position), velocity=np.array(velocity))


class SatelliteTrack:
    """Vectorised SGP4 evaluation of one satellite at offsets from a reference instant"""

    def __init__(self, tle: TleRecord, reference: datetime):
        self.tle = tle
        self.reference = reference
        self.satrec = build_satrec(tle)
        self.jd, self.fr = julian_date(reference)

    def _times(self, offsets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        offsets = np.asarray(offsets, dtype=float)
        jd = np.full(offsets.shape, self.jd)
        fr = self.fr + offsets / 86400.0
        return jd, fr

    def teme(self, offsets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        TEME states at reference + offsets seconds

        Args:
            offsets: 1-D array of seconds

        Returns:
            (positions, velocities), each (N, 3)
        """
        jd, fr = self._times(offsets)
        if jd.size == 0:
            return np.empty((0, 3)), np.empty((0, 3))

        days_from_epoch = (self.jd - self.satrec.jdsatepoch) + (fr - self.satrec.jdsatepochF)
        _warn_if_stale(self.tle, float(days_from_epoch[np.argmax(np.abs(days_from_epoch))]))

        errors, positions, velocities = self.satrec.sgp4_array(jd, fr)
        failed = np.flatnonzero(errors)
        if failed.size:
            first = failed[0]
            when = self.reference + timedelta(seconds=float(np.asarray(offsets)[first]))
            raise DecayError(
                f"Satellite {self.tle.satellite_id} at {when.isoformat()}: "
                f"{SGP4_ERRORS.get(int(errors[first]), int(errors[first]))}"
            )
        return positions, velocities

    def ecef(self, offsets: np.ndarray) -> np.ndarray:
        """Earth-fixed positions (N, 3) km at reference + offsets seconds"""
        positions, _ = self.teme(offsets)
        if positions.shape[0] == 0:
            return positions
        jd, fr = self._times(offsets)
        return rotate_z(positions, gmst_from_jd(jd, fr))
