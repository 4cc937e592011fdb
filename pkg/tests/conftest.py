import json
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import pytest

from tsa.catalog.synthetic import WalkerShell
from tsa.models import AccessWindow, Constellation, GroundStation, Scenario, TemporalSpectrum

T0 = datetime(2024, 3, 1, tzinfo=timezone.utc)

ISS_LINES = (
    "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927",
    "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537",
)

# SGP4 verification satellite 00005 with its published reference states
VANGUARD_LINES = (
    "1 00005U 58002B   00179.78495062  .00000023  00000-0  28098-4 0  4753",
    "2 00005  34.2682 348.7242 1859667 331.7664  19.3264 10.82419157413667",
)

REPO_ROOT = Path(__file__).resolve().parent.parent


def make_spectrum(station_id: str, satellite_id: str, windows: Iterable[Tuple[float, float]],
                  origin: datetime = T0, station_constellation: str = 'a',
                  satellite_constellation: str = 'a') -> TemporalSpectrum:
    """Spectrum from (start, end) second offsets"""
    return TemporalSpectrum(
        station_id=station_id,
        satellite_id=satellite_id,
        station_constellation=station_constellation,
        satellite_constellation=satellite_constellation,
        windows=tuple(
            AccessWindow(origin + timedelta(seconds=start), origin + timedelta(seconds=end))
            for start, end in windows
        ),
    )


def make_scenario(layout: Dict[str, Tuple[int, int]], hours: float = 10.0, alpha: int = 1) -> Scenario:
    """
    Scenario without real geometry for analysis tests

    layout maps constellation id to (stations, satellites); stations are
    named '<cid>-gs<i>' and satellites '<cid>-01<j>'.
    """
    constellations = []
    first_catalog = 90000
    for cid, (n_stations, n_satellites) in layout.items():
        stations = tuple(
            GroundStation(id=f"{cid}-gs{i}", latitude=0.0, longitude=float(i), altitude=0.0, constellation_id=cid)
            for i in range(n_stations)
        )
        satellites = ()
        if n_satellites:
            satellites = tuple(WalkerShell(cid, 1, n_satellites, 53.0, 15.0, T0,
                                           first_catalog_number=first_catalog).records())
        first_catalog += 1000
        constellations.append(Constellation(id=cid, stations=stations, satellites=satellites))
    return Scenario(
        constellations=tuple(constellations),
        span_start=T0,
        span_end=T0 + timedelta(hours=hours),
        alpha=alpha,
    )


def full_spectra(scenario: Scenario, windows: Dict[Tuple[str, str], Sequence[Tuple[float, float]]]):
    """Spectra for every station against every satellite; pairs not in windows stay empty"""
    constellation_of = {station.id: station.constellation_id for station in scenario.stations}
    spectra = {}
    for sat_constellation, sat in scenario.satellites:
        for station in scenario.stations:
            key = (station.id, sat.satellite_id)
            spectra[key] = make_spectrum(
                station.id, sat.satellite_id, windows.get(key, ()),
                station_constellation=constellation_of[station.id],
                satellite_constellation=sat_constellation,
            )
    return spectra


def write_polar_scenario(directory: Path, hours: float = 3.0, **overrides) -> Path:
    """
    Two synthetic polar constellations with stations near the poles

    Every satellite passes close to both poles once per revolution, so each
    station sees each satellite at least once in a few hours.
    """
    stations = directory / 'stations.csv'
    stations.write_text(
        "id,lat_deg,lon_deg,alt_m,constellation\n"
        "N1,84.0,0.0,100,north\n"
        "N2,80.0,120.0,50,north\n"
        "S1,-84.0,50.0,2800,south\n"
        "S2,-80.0,-60.0,30,south\n",
        encoding='utf-8',
    )
    document = {
        'name': 'polar',
        'span': {'start': '2024-03-01T00:00:00Z', 'duration_hours': hours},
        'alpha': 1,
        'min_elevation': 0.0,
        'coarse_step': 60,
        'stations': 'stations.csv',
        'constellations': [
            {'id': 'north', 'synthetic': {'planes': 2, 'per_plane': 1, 'inclination': 89.0,
                                          'mean_motion': 15.2, 'first_catalog_number': 90000}},
            {'id': 'south', 'synthetic': {'planes': 1, 'per_plane': 2, 'inclination': 88.0,
                                          'mean_motion': 14.8, 'first_catalog_number': 91000}},
        ],
    }
    document.update(overrides)
    path = directory / 'polar.json'
    path.write_text(json.dumps(document, indent=2), encoding='utf-8')
    return path


@pytest.fixture
def iss_text() -> str:
    return "ISS (ZARYA)\n" + "\n".join(ISS_LINES) + "\n"


@pytest.fixture
def polar_scenario_file(tmp_path) -> Path:
    return write_polar_scenario(tmp_path)


@pytest.fixture
def scenario_b_path() -> Path:
    return REPO_ROOT / 'scenarios' / 'scenario_b.json'


def station_list(rows: List[Tuple[str, float, float]], constellation_id: str = 'a') -> List[GroundStation]:
    return [GroundStation(id=sid, latitude=lat, longitude=lon, altitude=0.0, constellation_id=constellation_id)
            for sid, lat, lon in rows]
