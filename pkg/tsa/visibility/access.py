"""
Access window search.

A coarse scan of the elevation predicate finds every sign change; the
crossings of all stations against one satellite are then refined together
by bisection until each bracket is at most alpha/2 wide. Boundaries snap to
the alpha grid anchored at the span start and windows are half-open.
"""
import logging
from datetime import datetime, timedelta
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tsa.config import Config
from tsa.models import AccessWindow, GroundStation, TemporalSpectrum, TleRecord
from tsa.propagation.frames import elevation_from_up, elevation_pairs, geodetic_to_ecef, up_vector
from tsa.propagation.sgp4_propagator import SatelliteTrack

logger = logging.getLogger(__name__)

Span = Tuple[datetime, datetime]


def coarse_grid(duration: float, coarse_step: float) -> np.ndarray:
    """Scan offsets 0, step, 2*step, ... with the span end appended"""
    grid = np.arange(0.0, duration, coarse_step)
    if grid.size == 0 or grid[-1] < duration:
        grid = np.append(grid, duration)
    return grid


def _merge_intervals(intervals: List[Tuple[float, float]], alpha: int) -> List[Tuple[float, float]]:
    merged: List[List[float]] = []
    for start, end in intervals:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return [(start, end) for start, end in merged if end - start >= alpha]


def find_access_windows(stations: Sequence[GroundStation], sat: TleRecord, span: Span,
                        min_elevation: float = Config.DEFAULT_MIN_ELEVATION, alpha: int = 1,
                        coarse_step: Optional[float] = None,
                        satellite_constellation: Optional[str] = None) -> List[TemporalSpectrum]:
    """
    Access windows of one satellite against several stations

    The satellite is propagated once on the coarse grid and once per
    bisection round for all open brackets together.

    Args:
        stations: Ground stations, output follows this order
        sat: Satellite element set
        span: (start, end) UTC instants
        min_elevation: Elevation mask in degrees
        alpha: Boundary precision and snapping grid, whole seconds
        coarse_step: Scan step in seconds
        satellite_constellation: Constellation id recorded on the spectra

    Returns:
        One TemporalSpectrum per station

    Raises:
        DecayError: SGP4 failure anywhere in the span
    """
    span_start, span_end = span
    duration = (span_end - span_start).total_seconds()
    step = float(coarse_step or Config.COARSE_STEP_SECONDS)
    satellite_constellation = satellite_constellation or ''
    if not stations:
        return []

    gs_positions = geodetic_to_ecef(
        np.array([gs.latitude for gs in stations]),
        np.array([gs.longitude for gs in stations]),
        np.array([gs.altitude for gs in stations]) / 1000.0,
    )
    ups = up_vector(np.array([gs.latitude for gs in stations]), np.array([gs.longitude for gs in stations]))

    track = SatelliteTrack(sat, span_start)
    grid = coarse_grid(duration, step)
    visible = elevation_from_up(gs_positions, ups, track.ecef(grid)) >= min_elevation

    station_idx, grid_idx = np.nonzero(visible[:, :-1] != visible[:, 1:])
    lo = grid[grid_idx]
    hi = grid[grid_idx + 1]
    lo_state = visible[station_idx, grid_idx]

    rounds = 0
    while lo.size and np.max(hi - lo) > alpha / 2.0:
        mid = (lo + hi) / 2.0
        mid_state = elevation_pairs(gs_positions[station_idx], ups[station_idx], track.ecef(mid)) >= min_elevation
        same = mid_state == lo_state
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        rounds += 1

    crossings = np.clip(np.round((lo + hi) / 2.0 / alpha) * alpha, 0.0, duration)
    rising = ~lo_state

    spectra = []
    for s, gs in enumerate(stations):
        intervals = []
        opened_at = 0.0 if visible[s, 0] else None
        for t, up in zip(crossings[station_idx == s], rising[station_idx == s]):
            if up:
                opened_at = float(t)
            elif opened_at is not None:
                intervals.append((opened_at, float(t)))
                opened_at = None
        if opened_at is not None:
            intervals.append((opened_at, duration))

        windows = tuple(
            AccessWindow(start=span_start + timedelta(seconds=start), end=span_start + timedelta(seconds=end))
            for start, end in _merge_intervals(intervals, alpha)
        )
        spectra.append(TemporalSpectrum(
            station_id=gs.id,
            satellite_id=sat.satellite_id,
            station_constellation=gs.constellation_id,
            satellite_constellation=satellite_constellation,
            windows=windows,
        ))

    logger.debug(
        f"Satellite {sat.satellite_id}: {len(station_idx)} horizon crossings over {len(stations)} stations, "
        f"{rounds} bisection rounds, {sum(sp.pulse_count for sp in spectra)} windows"
    )
    return spectra


def access_windows(gs: GroundStation, sat: TleRecord, span: Span,
                   min_elevation: float = Config.DEFAULT_MIN_ELEVATION, alpha: int = 1,
                   coarse_step: Optional[float] = None,
                   satellite_constellation: Optional[str] = None) -> TemporalSpectrum:
    """Temporal spectrum of one (station, satellite) pair over a span"""
    return find_access_windows(
        [gs], sat, span, min_elevation, alpha, coarse_step,
        satellite_constellation if satellite_constellation is not None else gs.constellation_id,
    )[0]
