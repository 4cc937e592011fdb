import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, List, Optional, Tuple

from tsa.analysis.spectra import SpectrumMap
from tsa.config import Config
from tsa.models import GroundStation, Scenario, TemporalSpectrum, TleRecord
from tsa.visibility.access import find_access_windows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VisibilityJob:
    """One satellite against the stations it must be checked against"""
    satellite: TleRecord
    satellite_constellation: str
    stations: Tuple[GroundStation, ...]
    span_start: datetime
    span_end: datetime
    min_elevation: float
    alpha: int
    coarse_step: float


def visibility_task(job: VisibilityJob) -> List[TemporalSpectrum]:
    """
    Worker entry point: access windows of one satellite

    The SGP4 model is built inside the worker from the element set.
    """
    logger.debug(f"Computing access windows for {job.satellite.satellite_id} against {len(job.stations)} stations")
    return find_access_windows(
        job.stations,
        job.satellite,
        (job.span_start, job.span_end),
        min_elevation=job.min_elevation,
        alpha=job.alpha,
        coarse_step=job.coarse_step,
        satellite_constellation=job.satellite_constellation,
    )


def plan_jobs(scenario: Scenario, all_pairs: bool = False,
              constellation_ids: Optional[Iterable[str]] = None,
              station_ids: Optional[Iterable[str]] = None,
              satellite_ids: Optional[Iterable[str]] = None) -> List[VisibilityJob]:
    """
    Jobs for the requested pairs, in scenario order

    Args:
        scenario: Loaded scenario
        all_pairs: Every station against every satellite instead of each
            constellation's own stations against its own satellites
        constellation_ids: Restrict both sides to these constellations
        station_ids: Restrict stations to these ids
        satellite_ids: Restrict satellites to these ids

    Returns:
        One job per satellite that has at least one station to check
    """
    wanted_c = set(constellation_ids) if constellation_ids is not None else None
    wanted_g = set(station_ids) if station_ids is not None else None
    wanted_x = set(satellite_ids) if satellite_ids is not None else None

    def keep_station(station: GroundStation) -> bool:
        return ((wanted_c is None or station.constellation_id in wanted_c)
                and (wanted_g is None or station.id in wanted_g))

    every_station = tuple(s for s in scenario.stations if keep_station(s))
    jobs = []
    for constellation in scenario.constellations:
        if wanted_c is not None and constellation.id not in wanted_c:
            continue
        if all_pairs:
            stations = every_station
        else:
            stations = tuple(s for s in constellation.stations if keep_station(s))
        if not stations:
            continue
        for satellite in constellation.satellites:
            if wanted_x is not None and satellite.satellite_id not in wanted_x:
                continue
            jobs.append(VisibilityJob(
                satellite=satellite,
                satellite_constellation=constellation.id,
                stations=stations,
                span_start=scenario.span_start,
                span_end=scenario.span_end,
                min_elevation=scenario.min_elevation,
                alpha=scenario.alpha,
                coarse_step=scenario.coarse_step,
            ))
    return jobs


def run_jobs(jobs: List[VisibilityJob], workers: int = 1) -> SpectrumMap:
    """
    Execute visibility jobs serially or on a process pool

    Results are assembled in job order, so the map is identical for any
    worker count.
    """
    workers = max(1, min(int(workers), len(jobs) or 1))
    if workers == 1:
        results = [visibility_task(job) for job in jobs]
    else:
        chunksize = max(1, math.ceil(len(jobs) / (workers * 4)))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(visibility_task, jobs, chunksize=chunksize))

    spectra: SpectrumMap = {}
    for job_spectra in results:
        for spectrum in job_spectra:
            spectra[(spectrum.station_id, spectrum.satellite_id)] = spectrum
    return spectra


def compute_spectra(scenario: Scenario, jobs: int = Config.DEFAULT_JOBS, all_pairs: bool = False,
                    constellation_ids: Optional[Iterable[str]] = None,
                    station_ids: Optional[Iterable[str]] = None,
                    satellite_ids: Optional[Iterable[str]] = None) -> SpectrumMap:
    """
    Temporal spectra for the requested (station, satellite) pairs

    Args:
        scenario: Loaded scenario
        jobs: Worker processes
        all_pairs: Cross-constellation pairs too
        constellation_ids: Restrict to these constellations
        station_ids: Restrict to these stations
        satellite_ids: Restrict to these satellites

    Returns:
        Spectra keyed by (station id, satellite id)

    Raises:
        DecayError: a satellite decays inside the span
    """
    planned = plan_jobs(scenario, all_pairs, constellation_ids, station_ids, satellite_ids)
    pair_count = sum(len(job.stations) for job in planned)
    logger.info(f"Computing access windows for {pair_count} pairs ({len(planned)} satellites, {jobs} workers)")

    spectra = run_jobs(planned, jobs)
    window_count = sum(spectrum.pulse_count for spectrum in spectra.values())
    logger.info(f"Computed {len(spectra)} temporal spectra with {window_count} access windows")
    return spectra
