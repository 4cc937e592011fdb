from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from tsa.errors import CrossReferenceError, FormatError, RangeError
from tsa.utils.helpers import iso_utc


@dataclass(frozen=True)
class TleRecord:
    """Parsed two-line element set for one satellite"""
    name: str
    catalog_number: int
    classification: str
    intl_designator: str
    epoch_year: int  # four digits
    epoch_day: float  # fractional day of year, January 1st 00:00 is 1.0
    ndot: float  # first derivative of mean motion / 2, rev/day^2
    nddot: float  # second derivative of mean motion / 6, rev/day^3
    bstar: float  # 1/earth radii
    ephemeris_type: int
    element_set: int
    inclination: float  # degrees
    raan: float  # degrees
    eccentricity: float
    arg_perigee: float  # degrees
    mean_anomaly: float  # degrees
    mean_motion: float  # revolutions/day
    rev_number: int
    line1_checksum_ok: bool = True
    line2_checksum_ok: bool = True
    # Source text, kept for propagation; not part of record identity
    line1: str = field(default="", compare=False, repr=False)
    line2: str = field(default="", compare=False, repr=False)

    @property
    def epoch(self) -> datetime:
        start_of_year = datetime(self.epoch_year, 1, 1, tzinfo=timezone.utc)
        return start_of_year + timedelta(days=self.epoch_day - 1.0)

    @property
    def satellite_id(self) -> str:
        return self.name or str(self.catalog_number)

    @property
    def period_minutes(self) -> float:
        return 1440.0 / self.mean_motion

    def to_lines(self) -> Tuple[str, str]:
        """Element lines with recomputed checksums"""
        from tsa.catalog.tle_parser import format_tle
        return format_tle(self)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'catalog_number': self.catalog_number,
            'epoch': iso_utc(self.epoch),
            'inclination': self.inclination,
            'raan': self.raan,
            'eccentricity': self.eccentricity,
            'arg_perigee': self.arg_perigee,
            'mean_anomaly': self.mean_anomaly,
            'mean_motion': self.mean_motion,
            'bstar': self.bstar,
        }


@dataclass(frozen=True)
class GroundStation:
    """Named geodetic site belonging to one constellation's station set"""
    id: str
    latitude: float  # degrees, geodetic
    longitude: float  # degrees
    altitude: float  # meters above the WGS84 ellipsoid
    constellation_id: str

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise RangeError(f"Station {self.id}: latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise RangeError(f"Station {self.id}: longitude {self.longitude} outside (-180, 180]")
        if self.longitude == -180.0:
            object.__setattr__(self, 'longitude', 180.0)

    def to_dict(self) -> Dict:
        return {
            'id': self.id,
            'lat_deg': self.latitude,
            'lon_deg': self.longitude,
            'alt_m': self.altitude,
            'constellation': self.constellation_id,
        }


@dataclass(frozen=True)
class Constellation:
    """One constellation with its dedicated stations and satellites"""
    id: str
    stations: Tuple[GroundStation, ...] = ()
    satellites: Tuple[TleRecord, ...] = ()

    @property
    def station_ids(self) -> List[str]:
        return [station.id for station in self.stations]

    @property
    def satellite_ids(self) -> List[str]:
        return [sat.satellite_id for sat in self.satellites]


@dataclass(frozen=True)
class Scenario:
    """Constellations, their stations and satellites, and the analysis settings"""
    constellations: Tuple[Constellation, ...]
    span_start: datetime
    span_end: datetime
    alpha: int = 1
    min_elevation: float = 0.0
    coarse_step: float = 30.0
    name: str = "scenario"
    source_path: Optional[str] = None
    input_files: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.span_end <= self.span_start:
            raise FormatError(
                f"Scenario {self.name}: span end {iso_utc(self.span_end)} "
                f"is not after span start {iso_utc(self.span_start)}"
            )
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise FormatError(f"Scenario {self.name}: alpha must be a whole number of seconds >= 1, got {self.alpha}")
        if self.coarse_step <= 0:
            raise FormatError(f"Scenario {self.name}: coarse_step must be positive, got {self.coarse_step}")

        constellation_ids = [c.id for c in self.constellations]
        duplicates = sorted({cid for cid in constellation_ids if constellation_ids.count(cid) > 1})
        if duplicates:
            raise FormatError(f"Duplicate constellation ids: {', '.join(duplicates)}")

        station_ids = [s.id for s in self.stations]
        duplicates = sorted({sid for sid in station_ids if station_ids.count(sid) > 1})
        if duplicates:
            raise FormatError(f"Duplicate station ids: {', '.join(duplicates)}")

        satellite_ids = [sat.satellite_id for _, sat in self.satellites]
        duplicates = sorted({sid for sid in satellite_ids if satellite_ids.count(sid) > 1})
        if duplicates:
            raise FormatError(f"Duplicate satellite ids: {', '.join(duplicates)}")

        for constellation in self.constellations:
            for station in constellation.stations:
                if station.constellation_id != constellation.id:
                    raise CrossReferenceError(
                        f"Station {station.id} names constellation {station.constellation_id} "
                        f"but is listed under {constellation.id}"
                    )

    @property
    def duration_seconds(self) -> float:
        return (self.span_end - self.span_start).total_seconds()

    @property
    def constellation_ids(self) -> List[str]:
        return [c.id for c in self.constellations]

    @property
    def stations(self) -> List[GroundStation]:
        return [station for c in self.constellations for station in c.stations]

    @property
    def satellites(self) -> List[Tuple[str, TleRecord]]:
        """(constellation id, record) for every satellite in scenario order"""
        return [(c.id, sat) for c in self.constellations for sat in c.satellites]

    def constellation(self, constellation_id: str) -> Constellation:
        for constellation in self.constellations:
            if constellation.id == constellation_id:
                return constellation
        raise CrossReferenceError(
            f"Unknown constellation {constellation_id}; "
            f"available: {', '.join(self.constellation_ids)}"
        )


@dataclass(frozen=True, eq=False)
class EciState:
    """SGP4 output: TEME position (km) and velocity (km/s) at one instant"""
    t: datetime
    position: np.ndarray
    velocity: np.ndarray


@dataclass(frozen=True, eq=False)
class EcefPosition:
    """Earth-fixed position in km; t is None for static sites"""
    t: Optional[datetime]
    position: np.ndarray


@dataclass(frozen=True)
class AccessWindow:
    """One visibility pulse [start, end) for a (station, satellite) pair"""
    start: datetime
    end: datetime

    def __post_init__(self):
        if self.end <= self.start:
            raise RangeError(f"Access window end {iso_utc(self.end)} is not after start {iso_utc(self.start)}")

    @property
    def duration(self) -> float:
        return (self.end - self.start).total_seconds()


@dataclass(frozen=True)
class TemporalSpectrum:
    """Pulse train of access windows for one (station, satellite) pair"""
    station_id: str
    satellite_id: str
    station_constellation: str
    satellite_constellation: str
    windows: Tuple[AccessWindow, ...] = ()

    def __post_init__(self):
        for previous, current in zip(self.windows, self.windows[1:]):
            if current.start <= previous.end:
                raise RangeError(
                    f"Spectrum {self.station_id}/{self.satellite_id}: windows overlap or touch "
                    f"at {iso_utc(current.start)}"
                )

    @property
    def pulse_count(self) -> int:
        return len(self.windows)

    @property
    def total_seconds(self) -> float:
        return sum(window.duration for window in self.windows)


@dataclass(frozen=True)
class GlobalWindow:
    """Span from the earliest pulse start to the latest pulse end in scope"""
    start: datetime
    end: datetime

    @property
    def duration_seconds(self) -> float:
        return (self.end - self.start).total_seconds()

    def to_dict(self) -> Dict:
        return {
            'start': iso_utc(self.start),
            'end': iso_utc(self.end),
            'duration_s': self.duration_seconds,
        }


@dataclass(frozen=True, eq=False)
class BinarySpectrum:
    """Discrete temporal spectrum: one bit per alpha-second sample"""
    origin: datetime
    alpha: int
    bits: np.ndarray

    @property
    def total_seconds(self) -> int:
        return int(self.bits.sum()) * self.alpha


@dataclass(frozen=True, eq=False)
class SpectrumMatrix:
    """Total visibility seconds between every station and satellite of a constellation"""
    constellation_id: str
    station_ids: Tuple[str, ...]
    satellite_ids: Tuple[str, ...]
    values: np.ndarray  # int64 seconds, |G| x |X|
    global_window: GlobalWindow
    alpha: int = 1

    @property
    def row_totals(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True, eq=False)
class GramEigen:
    """Gram matrix J = H H^T with its symmetric eigen decomposition"""
    station_ids: Tuple[str, ...]
    J: np.ndarray
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # orthonormal columns
    sweeps: int = 0


@dataclass(frozen=True)
class StationRanking:
    """Dominant and isolated stations of one constellation"""
    constellation_id: str
    station_ids: Tuple[str, ...]
    dominant_station_id: str
    isolated_station_id: str
    scores: Tuple[float, ...]  # leading-eigenspace component magnitude
    diagonal: Tuple[float, ...]  # J_ii
    leading_multiplicity: int = 1

    def to_dict(self) -> Dict:
        return {
            'constellation': self.constellation_id,
            'dominant_station': self.dominant_station_id,
            'isolated_station': self.isolated_station_id,
            'leading_multiplicity': self.leading_multiplicity,
            'stations': [
                {'id': sid, 'score': score, 'J_ii': diag}
                for sid, score, diag in zip(self.station_ids, self.scores, self.diagonal)
            ],
        }


@dataclass(frozen=True, eq=False)
class IntraResult:
    """Spectrum matrix, Gram eigen data and ranking for one constellation"""
    ranking: StationRanking
    matrix: SpectrumMatrix
    eigen: GramEigen

    @property
    def memory_bits(self) -> int:
        """Size of the dense H bitstream |G| x |X| x T_g / alpha"""
        stations, satellites = self.matrix.values.shape
        duration = self.matrix.global_window.duration_seconds
        return int(stations * satellites * duration // self.matrix.alpha)


@dataclass(frozen=True)
class PulseStats:
    """Pulse count and density of one (station, satellite) pair"""
    station_id: str
    satellite_id: str
    pulse_count: int
    density: float  # pulses/second
    station_constellation: str = ''
    satellite_constellation: str = ''

    def to_dict(self) -> Dict:
        return {
            'from': self.station_constellation,
            'to': self.satellite_constellation,
            'station': self.station_id,
            'satellite': self.satellite_id,
            'pulse_count': self.pulse_count,
            'density': self.density,
        }


@dataclass(frozen=True)
class PulsePmf:
    """Empirical pulses-per-hour distribution from one constellation to another"""
    from_constellation: str
    to_constellation: str
    support: Tuple[int, ...]
    probabilities: Tuple[float, ...]
    mode: str = "pooled"
    unit: str = "pair"

    @property
    def mean(self) -> float:
        return float(sum(k * p for k, p in zip(self.support, self.probabilities)))

    @property
    def most_likely(self) -> int:
        return self.support[int(np.argmax(self.probabilities))]

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(self.support, self.probabilities))


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    """Strongest-station pulse counts between constellations, with eigen data"""
    constellation_ids: Tuple[str, ...]
    values: np.ndarray  # int64, |C| x |C|
    eigenvalues: np.ndarray  # complex
    eigenvectors: np.ndarray  # complex columns
    strongest_stations: Tuple[Tuple[str, ...], ...] = ()

    def to_dict(self) -> Dict:
        return {
            'constellations': list(self.constellation_ids),
            'P': self.values.astype(int).tolist(),
            'strongest_stations': [list(row) for row in self.strongest_stations],
            'eigenvalues': [{'re': float(g.real), 'im': float(g.imag)} for g in self.eigenvalues],
            'eigenvectors': [
                [{'re': float(x.real), 'im': float(x.imag)} for x in self.eigenvectors[:, i]]
                for i in range(self.eigenvectors.shape[1])
            ],
        }


@dataclass(frozen=True, eq=False)
class InterResult:
    """Interaction matrix, PMFs and per-pair pulse statistics of a scenario"""
    interaction: InteractionMatrix
    pmfs: Tuple[PulsePmf, ...] = ()
    pulse_stats: Tuple[PulseStats, ...] = ()
    global_windows: Dict[Tuple[str, str], GlobalWindow] = field(default_factory=dict)


@dataclass
class RunManifest:
    """Record of one command run and every file it wrote"""
    scenario_path: str
    command: str
    output_dir: str
    alpha: int
    min_elevation: float
    jobs: int
    tool_version: str
    input_hashes: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    wall_clock_seconds: float = 0.0

    def to_dict(self) -> Dict:
        return {
            'scenario_path': self.scenario_path,
            'command': self.command,
            'output_dir': self.output_dir,
            'alpha': self.alpha,
            'min_elevation': self.min_elevation,
            'jobs': self.jobs,
            'tool_version': self.tool_version,
            'wall_clock_seconds': round(self.wall_clock_seconds, 3),
            'input_hashes': dict(sorted(self.input_hashes.items())),
            'outputs': sorted(self.outputs),
        }
