"""
Scenario file loading.

A scenario is a JSON document; relative paths inside it resolve against the
scenario file's directory. See README.md for the full schema.
"""
import json
import logging
from dataclasses import replace
from datetime import datetime, timedelta
from pathlib import Path
from typing import Dict, List, Optional, Union

from tsa.catalog.stations import load_stations
from tsa.catalog.synthetic import WalkerShell
from tsa.catalog.tle_parser import load_tle_file
from tsa.config import Config
from tsa.errors import CrossReferenceError, FilterError, FormatError, MissingFileError
from tsa.models import Constellation, GroundStation, Scenario, TleRecord
from tsa.utils.helpers import iso_utc, parse_iso_utc

logger = logging.getLogger(__name__)

SCENARIO_KEYS = {'name', 'description', 'span', 'alpha', 'min_elevation', 'coarse_step',
                 'stations', 'constellations'}
SPAN_KEYS = {'start', 'end', 'duration_hours'}
CONSTELLATION_KEYS = {'id', 'tle', 'max_satellites', 'synthetic', 'description'}
SYNTHETIC_KEYS = {'planes', 'per_plane', 'inclination', 'mean_motion', 'epoch', 'phasing',
                  'eccentricity', 'raan_spread', 'first_catalog_number', 'bstar'}


def _warn_unknown(section: str, data: Dict, known: set):
    for key in sorted(set(data) - known):
        logger.warning(f"Ignoring unknown key '{key}' in {section}")


def _timestamp(value, what: str) -> datetime:
    try:
        return parse_iso_utc(str(value))
    except ValueError:
        raise FormatError(f"{what} is not an ISO-8601 timestamp: {value!r}") from None


def _number(data: Dict, key: str, default, cast, what: str):
    if key not in data or data[key] is None:
        return default
    value = data[key]
    if isinstance(value, bool):
        raise FormatError(f"{what}: '{key}' must be a number, got {value!r}")
    try:
        converted = cast(value)
    except (TypeError, ValueError):
        raise FormatError(f"{what}: '{key}' must be a number, got {value!r}") from None
    if cast is int and converted != value:
        raise FormatError(f"{what}: '{key}' must be a whole number, got {value!r}")
    return converted


class ScenarioLoader:
    """Resolves a scenario file and every file it names into a Scenario"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.base_dir = self.path.parent
        self.input_files: List[str] = []

    def _resolve(self, relative: str, what: str) -> Path:
        if not isinstance(relative, str) or not relative:
            raise FormatError(f"{what} must be a file path, got {relative!r}")
        resolved = (self.base_dir / relative).resolve()
        if not resolved.is_file():
            raise MissingFileError(f"{what} not found: {relative} (resolved to {resolved})")
        self.input_files.append(str(resolved))
        return resolved

    def _read_document(self) -> Dict:
        if not self.path.is_file():
            raise MissingFileError(f"Scenario file not found: {self.path}")
        self.input_files.append(str(self.path.resolve()))
        try:
            document = json.loads(self.path.read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise FormatError(f"Scenario {self.path.name} is not valid JSON: {e}") from None
        if not isinstance(document, dict):
            raise FormatError(f"Scenario {self.path.name} must be a JSON object")
        return document

    def _satellites(self, entry: Dict, default_epoch: Optional[datetime]) -> List[TleRecord]:
        cid = entry['id']
        has_tle = 'tle' in entry
        has_synthetic = 'synthetic' in entry
        if has_tle == has_synthetic:
            raise FormatError(f"Constellation {cid}: give exactly one of 'tle' or 'synthetic'")

        if has_tle:
            sources = entry['tle'] if isinstance(entry['tle'], list) else [entry['tle']]
            satellites = []
            for source in sources:
                satellites.extend(load_tle_file(self._resolve(source, f"TLE file for {cid}")))
        else:
            params = entry['synthetic']
            if not isinstance(params, dict):
                raise FormatError(f"Constellation {cid}: 'synthetic' must be an object")
            _warn_unknown(f"synthetic parameters of {cid}", params, SYNTHETIC_KEYS)
            missing = [key for key in ('planes', 'per_plane', 'inclination', 'mean_motion') if key not in params]
            if missing:
                raise FormatError(f"Constellation {cid}: synthetic parameters missing {', '.join(missing)}")
            epoch = _timestamp(params['epoch'], f"{cid} synthetic epoch") if 'epoch' in params else default_epoch
            if epoch is None:
                raise FormatError(f"Constellation {cid}: synthetic constellations need an epoch or an explicit span start")
            what = f"Constellation {cid}"
            shell = WalkerShell(
                constellation_id=cid,
                planes=_number(params, 'planes', None, int, what),
                per_plane=_number(params, 'per_plane', None, int, what),
                inclination=_number(params, 'inclination', None, float, what),
                mean_motion=_number(params, 'mean_motion', None, float, what),
                epoch=epoch,
                phasing=_number(params, 'phasing', 1, int, what),
                eccentricity=_number(params, 'eccentricity', 0.0001, float, what),
                raan_spread=_number(params, 'raan_spread', 360.0, float, what),
                first_catalog_number=_number(params, 'first_catalog_number', 90000, int, what),
                bstar=_number(params, 'bstar', 0.0, float, what),
            )
            satellites = shell.records()

        limit = _number(entry, 'max_satellites', None, int, f"Constellation {cid}")
        if limit is not None:
            if limit < 1:
                raise FormatError(f"Constellation {cid}: max_satellites must be >= 1")
            satellites = satellites[:limit]
        return satellites

    def _span(self, span: Dict, satellites: List[TleRecord]):
        start_value = span.get('start')
        if start_value is None:
            raise FormatError("Scenario span needs a 'start'")
        if start_value == 'epoch':
            if not satellites:
                raise FormatError("Span start 'epoch' needs at least one satellite")
            start = max(sat.epoch for sat in satellites).replace(microsecond=0)
        else:
            start = _timestamp(start_value, "Span start")

        if ('end' in span) == ('duration_hours' in span):
            raise FormatError("Scenario span needs exactly one of 'end' or 'duration_hours'")
        if 'end' in span:
            end = _timestamp(span['end'], "Span end")
        else:
            hours = _number(span, 'duration_hours', None, float, "Scenario span")
            end = start + timedelta(hours=hours)
        return start, end

    def load(self) -> Scenario:
        document = self._read_document()
        _warn_unknown(f"scenario {self.path.name}", document, SCENARIO_KEYS)

        span = document.get('span')
        if not isinstance(span, dict):
            raise FormatError(f"Scenario {self.path.name} needs a 'span' object")
        _warn_unknown("span", span, SPAN_KEYS)
        explicit_start = None if span.get('start') in (None, 'epoch') else _timestamp(span['start'], "Span start")

        entries = document.get('constellations')
        if not isinstance(entries, list) or not entries:
            raise FormatError(f"Scenario {self.path.name} needs a non-empty 'constellations' list")

        satellites_by_constellation: Dict[str, List[TleRecord]] = {}
        for entry in entries:
            if not isinstance(entry, dict) or not entry.get('id'):
                raise FormatError("Every constellation entry needs an 'id'")
            cid = str(entry['id'])
            entry = {**entry, 'id': cid}
            _warn_unknown(f"constellation {cid}", entry, CONSTELLATION_KEYS)
            if cid in satellites_by_constellation:
                raise FormatError(f"Duplicate constellation id {cid}")
            satellites_by_constellation[cid] = self._satellites(entry, explicit_start)

        station_files = document.get('stations', [])
        if isinstance(station_files, str):
            station_files = [station_files]
        stations: List[GroundStation] = []
        for station_file in station_files:
            stations.extend(load_stations(self._resolve(station_file, "Station file")))

        stations_by_constellation: Dict[str, List[GroundStation]] = {cid: [] for cid in satellites_by_constellation}
        for station in stations:
            if station.constellation_id not in stations_by_constellation:
                raise CrossReferenceError(
                    f"Station {station.id} references unknown constellation {station.constellation_id}; "
                    f"available: {', '.join(stations_by_constellation)}"
                )
            stations_by_constellation[station.constellation_id].append(station)

        all_satellites = [sat for sats in satellites_by_constellation.values() for sat in sats]
        span_start, span_end = self._span(span, all_satellites)

        what = f"Scenario {self.path.name}"
        scenario = Scenario(
            constellations=tuple(
                Constellation(id=cid, stations=tuple(stations_by_constellation[cid]), satellites=tuple(sats))
                for cid, sats in satellites_by_constellation.items()
            ),
            span_start=span_start,
            span_end=span_end,
            alpha=_number(document, 'alpha', Config.DEFAULT_ALPHA, int, what),
            min_elevation=_number(document, 'min_elevation', Config.DEFAULT_MIN_ELEVATION, float, what),
            coarse_step=_number(document, 'coarse_step', Config.COARSE_STEP_SECONDS, float, what),
            name=str(document.get('name') or self.path.stem),
            source_path=str(self.path.resolve()),
            input_files=tuple(dict.fromkeys(self.input_files)),
        )

        logger.info(
            f"Loaded scenario {scenario.name}: {len(scenario.constellations)} constellations, "
            f"{len(scenario.stations)} stations, {len(scenario.satellites)} satellites, "
            f"span {iso_utc(span_start)} to {iso_utc(span_end)}"
        )
        return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Load a scenario file with every station and TLE file it names

    Args:
        path: JSON scenario file

    Returns:
        Fully resolved Scenario with defaults applied (alpha 1 s, mask 0 deg)

    Raises:
        FormatError: malformed document, bad values or span end not after start
        MissingFileError: the scenario or a file it names does not exist
        CrossReferenceError: a station names an unknown constellation
    """
    return ScenarioLoader(path).load()


def filter_scenario(scenario: Scenario, constellation_ids: Optional[List[str]] = None,
                    station_ids: Optional[List[str]] = None,
                    satellite_ids: Optional[List[str]] = None) -> Scenario:
    """
    Scenario restricted to the given constellations, stations and satellites

    Raises:
        FilterError: an id is unknown or nothing is left; the message lists the available ids
    """
    if constellation_ids:
        unknown = [cid for cid in constellation_ids if cid not in scenario.constellation_ids]
        if unknown:
            raise FilterError(f"Unknown constellation {', '.join(unknown)}", scenario.constellation_ids)
    if station_ids:
        known = [station.id for station in scenario.stations]
        unknown = [sid for sid in station_ids if sid not in known]
        if unknown:
            raise FilterError(f"Unknown station {', '.join(unknown)}", known)
    if satellite_ids:
        known = [sat.satellite_id for _, sat in scenario.satellites]
        unknown = [xid for xid in satellite_ids if xid not in known]
        if unknown:
            raise FilterError(f"Unknown satellite {', '.join(unknown)}", known)

    constellations = []
    for constellation in scenario.constellations:
        if constellation_ids and constellation.id not in constellation_ids:
            continue
        constellations.append(replace(
            constellation,
            stations=tuple(s for s in constellation.stations if not station_ids or s.id in station_ids),
            satellites=tuple(x for x in constellation.satellites
                             if not satellite_ids or x.satellite_id in satellite_ids),
        ))
    return replace(scenario, constellations=tuple(constellations))
