"""
Walker-delta constellations expressed as TLE records.

Used for offline scenarios where no catalog download is wanted: the
records go through the same SGP4 path as catalog TLEs.
"""
import logging
from datetime import datetime, timezone
from typing import List

from tsa.errors import FormatError
from tsa.models import TleRecord
from tsa.utils.helpers import ensure_utc

logger = logging.getLogger(__name__)


class WalkerShell:
    """One shell of evenly spaced orbital planes with evenly spaced satellites"""

    def __init__(self, constellation_id: str, planes: int, per_plane: int, inclination: float,
                 mean_motion: float, epoch: datetime, phasing: int = 1, eccentricity: float = 0.0001,
                 raan_spread: float = 360.0, first_catalog_number: int = 90000, bstar: float = 0.0):
        if planes < 1 or per_plane < 1:
            raise FormatError(f"Synthetic constellation {constellation_id}: planes and per_plane must be >= 1")
        if not 0.0 <= inclination <= 180.0:
            raise FormatError(f"Synthetic constellation {constellation_id}: inclination {inclination} outside [0, 180]")
        if mean_motion <= 0.0:
            raise FormatError(f"Synthetic constellation {constellation_id}: mean_motion must be positive")
        if not 0.0 <= eccentricity < 1.0:
            raise FormatError(f"Synthetic constellation {constellation_id}: eccentricity {eccentricity} outside [0, 1)")

        self.constellation_id = constellation_id
        self.planes = planes
        self.per_plane = per_plane
        self.inclination = inclination
        self.mean_motion = mean_motion
        self.epoch = ensure_utc(epoch)
        self.phasing = phasing
        self.eccentricity = eccentricity
        self.raan_spread = raan_spread
        self.first_catalog_number = first_catalog_number
        self.bstar = bstar

    @property
    def size(self) -> int:
        return self.planes * self.per_plane

    def _epoch_fields(self):
        start_of_year = datetime(self.epoch.year, 1, 1, tzinfo=timezone.utc)
        day = (self.epoch - start_of_year).total_seconds() / 86400.0 + 1.0
        # the TLE epoch field keeps eight decimals
        return self.epoch.year, round(day, 8)

    def records(self) -> List[TleRecord]:
        """
        Generate one TleRecord per slot

        Plane p has RAAN p * raan_spread / planes; slot s in plane p has mean
        anomaly 360 * s / per_plane shifted by 360 * phasing * p / size.

        Returns:
            Records named '<constellation>-PPSS', plane-major order
        """
        epoch_year, epoch_day = self._epoch_fields()
        records = []
        for plane in range(self.planes):
            raan = (plane * self.raan_spread / self.planes) % 360.0
            for slot in range(self.per_plane):
                anomaly = (360.0 * slot / self.per_plane
                           + 360.0 * self.phasing * plane / self.size) % 360.0
                index = plane * self.per_plane + slot
                records.append(TleRecord(
                    name=f"{self.constellation_id}-{plane + 1:02d}{slot + 1:02d}",
                    catalog_number=self.first_catalog_number + index,
                    classification='U',
                    intl_designator='',
                    epoch_year=epoch_year,
                    epoch_day=epoch_day,
                    ndot=0.0,
                    nddot=0.0,
                    bstar=self.bstar,
                    ephemeris_type=0,
                    element_set=999,
                    inclination=round(self.inclination, 4),
                    raan=round(raan, 4) % 360.0,
                    eccentricity=round(self.eccentricity, 7),
                    arg_perigee=0.0,
                    mean_anomaly=round(anomaly, 4) % 360.0,
                    mean_motion=round(self.mean_motion, 8),
                    rev_number=0,
                ))

        logger.debug(f"Generated {len(records)} synthetic satellites for {self.constellation_id}")
        return records
