"""
Inter-constellation pulse statistics.

Every quantity for an ordered constellation pair (from, to) is computed
over the stations of `from` against the satellites of `to`, on the global
window of exactly those spectra.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from tsa.analysis.eigen import eigen_general
from tsa.analysis.spectra import SpectrumMap, select_spectra
from tsa.errors import DivisionError, EmptyNetworkError, FormatError
from tsa.models import (BinarySpectrum, GlobalWindow, InteractionMatrix, InterResult, PulsePmf,
                        PulseStats, Scenario)
from tsa.visibility.sampling import global_window, sample

logger = logging.getLogger(__name__)

SECONDS_PER_HOUR = 3600
PMF_MODES = ('pooled', 'best-station')
PMF_UNITS = ('pair', 'station')


def _bits(binary: Union[BinarySpectrum, Sequence[int], np.ndarray]) -> np.ndarray:
    if isinstance(binary, BinarySpectrum):
        binary = binary.bits
    return np.asarray(binary, dtype=np.int8)


def pulse_starts(binary: Union[BinarySpectrum, Sequence[int], np.ndarray]) -> np.ndarray:
    """Sample indices where a 0 -> 1 transition occurs (bit -1 taken as 0)"""
    bits = _bits(binary)
    return np.flatnonzero(np.diff(bits, prepend=0) > 0)


def count_pulses(binary: Union[BinarySpectrum, Sequence[int], np.ndarray]) -> int:
    """Number of positive transitions, i.e. maximal runs of ones"""
    return int(pulse_starts(binary).size)


def pulse_density(count: int, gw: GlobalWindow) -> float:
    """
    Pulses per second over a global window

    Raises:
        DivisionError: the global window has no duration
    """
    duration = gw.duration_seconds
    if duration <= 0:
        raise DivisionError(f"Global window {gw.start} to {gw.end} has zero duration")
    return count / duration


def _scope(scenario: Scenario, from_c: str, to_c: str) -> Tuple[List[str], List[str]]:
    stations = scenario.constellation(from_c).station_ids
    satellites = scenario.constellation(to_c).satellite_ids
    if not stations or not satellites:
        raise EmptyNetworkError(
            f"No pairs between {from_c} and {to_c}: {len(stations)} stations, {len(satellites)} satellites"
        )
    return stations, satellites


class PairScope:
    """Sampled spectra of one ordered constellation pair on its own global window"""

    def __init__(self, scenario: Scenario, spectra: SpectrumMap, from_c: str, to_c: str):
        self.from_c = from_c
        self.to_c = to_c
        self.alpha = scenario.alpha
        self.station_ids, self.satellite_ids = _scope(scenario, from_c, to_c)
        self.spectra = select_spectra(spectra, self.station_ids, self.satellite_ids)
        self.gw = global_window(self.spectra)
        self.binaries = [sample(spectrum, self.gw, self.alpha) for spectrum in self.spectra]

    def counts(self) -> np.ndarray:
        """Pulse counts, stations x satellites"""
        counts = np.array([count_pulses(binary) for binary in self.binaries], dtype=np.int64)
        return counts.reshape(len(self.station_ids), len(self.satellite_ids))

    def strongest(self) -> Tuple[int, str]:
        """(total pulses, station id) of the station with the most pulses; ties go to the first station"""
        totals = self.counts().sum(axis=1)
        best = int(np.argmax(totals))
        return int(totals[best]), self.station_ids[best]

    def hourly_counts(self, station_ids: Optional[Sequence[str]] = None, unit: str = 'pair') -> np.ndarray:
        """
        Pulse starts per whole-hour bin, flattened over the observers

        With unit 'pair' every (station, satellite) pair is one observer;
        with unit 'station' the bins of a station are summed over all
        satellites of the opposing constellation.
        """
        hours = max(1, int(self.gw.duration_seconds // SECONDS_PER_HOUR))
        wanted = set(station_ids) if station_ids is not None else None
        samples: Dict[Tuple[str, ...], np.ndarray] = {}
        for spectrum, binary in zip(self.spectra, self.binaries):
            if wanted is not None and spectrum.station_id not in wanted:
                continue
            bins = pulse_starts(binary) * self.alpha // SECONDS_PER_HOUR
            hourly = np.bincount(bins[bins < hours], minlength=hours)
            key = (spectrum.station_id, spectrum.satellite_id) if unit == 'pair' else (spectrum.station_id,)
            samples[key] = samples.get(key, 0) + hourly
        if not samples:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(list(samples.values()))

    def stats(self) -> List[PulseStats]:
        counts = self.counts()
        return [
            PulseStats(
                station_id=sid,
                satellite_id=xid,
                pulse_count=int(counts[i, j]),
                density=pulse_density(int(counts[i, j]), self.gw),
                station_constellation=self.from_c,
                satellite_constellation=self.to_c,
            )
            for i, sid in enumerate(self.station_ids)
            for j, xid in enumerate(self.satellite_ids)
        ]


def _check_pmf_options(mode: str, unit: str):
    if mode not in PMF_MODES:
        raise FormatError(f"Unknown PMF mode {mode!r}; available: {', '.join(PMF_MODES)}")
    if unit not in PMF_UNITS:
        raise FormatError(f"Unknown PMF unit {unit!r}; available: {', '.join(PMF_UNITS)}")


def _pmf_from_counts(hourly: np.ndarray, from_c: str, to_c: str, mode: str, unit: str) -> PulsePmf:
    support, frequency = np.unique(hourly, return_counts=True)
    probabilities = frequency / frequency.sum()
    return PulsePmf(
        from_constellation=from_c,
        to_constellation=to_c,
        support=tuple(int(k) for k in support),
        probabilities=tuple(float(p) for p in probabilities),
        mode=mode,
        unit=unit,
    )


def pulse_pmf(scenario: Scenario, from_c: str, to_c: str, spectra: SpectrumMap,
              mode: str = 'pooled', unit: str = 'pair') -> PulsePmf:
    """
    Empirical distribution of pulse starts per hour from one constellation to another

    The pair-scoped global window is cut into whole-hour bins (at least one).
    With unit 'pair' each (station, satellite, bin) contributes one
    observation; with unit 'station' each (station, bin) does, counting the
    starts of every satellite of to_c. In 'best-station' mode only the
    station chosen for P counts.

    Args:
        scenario: Loaded scenario
        from_c: Constellation whose stations observe
        to_c: Constellation whose satellites are observed
        spectra: Spectra keyed by (station id, satellite id)
        mode: 'pooled' or 'best-station'
        unit: 'pair' or 'station'

    Returns:
        PulsePmf; {0: 1.0} when no pair has any window

    Raises:
        EmptyNetworkError: one side of the pair is empty
    """
    _check_pmf_options(mode, unit)
    try:
        scope = PairScope(scenario, spectra, from_c, to_c)
    except EmptyNetworkError:
        _scope(scenario, from_c, to_c)
        logger.warning(f"No access windows from {from_c} stations to {to_c} satellites")
        return PulsePmf(from_c, to_c, support=(0,), probabilities=(1.0,), mode=mode, unit=unit)

    selected = None
    if mode == 'best-station':
        selected = [scope.strongest()[1]]
    return _pmf_from_counts(scope.hourly_counts(selected, unit), from_c, to_c, mode, unit)


def strongest_station_count(scenario: Scenario, from_c: str, to_c: str, spectra: SpectrumMap) -> int:
    """
    P_ij: the largest total pulse count any single station of from_c has on the satellites of to_c

    Raises:
        EmptyNetworkError: no pairs, or no access window between them
    """
    return PairScope(scenario, spectra, from_c, to_c).strongest()[0]


def interaction_matrix(scenario: Scenario, spectra: SpectrumMap) -> InteractionMatrix:
    """
    Strongest-station pulse counts for every ordered constellation pair, with eigen data

    A pair without any access window contributes 0.

    Raises:
        EmptyNetworkError: no pair has any access window
        ConvergenceError: the general eigensolver failed
    """
    return run_inter(scenario, spectra, with_pmfs=False).interaction


def run_inter(scenario: Scenario, spectra: SpectrumMap, pmf_mode: str = 'pooled',
              with_pmfs: bool = True, pmf_unit: str = 'pair') -> InterResult:
    """
    Interaction analysis of a whole scenario

    Args:
        scenario: Loaded scenario
        spectra: Spectra for every station against every satellite
        pmf_mode: 'pooled' or 'best-station'
        with_pmfs: Also build the per-pair PMFs
        pmf_unit: 'pair' or 'station'

    Returns:
        InterResult with P, its eigen decomposition, PMFs and pulse stats
    """
    _check_pmf_options(pmf_mode, pmf_unit)
    ids = scenario.constellation_ids
    values = np.zeros((len(ids), len(ids)), dtype=np.int64)
    strongest = [['' for _ in ids] for _ in ids]
    pmfs: List[PulsePmf] = []
    stats: List[PulseStats] = []
    windows: Dict[Tuple[str, str], GlobalWindow] = {}

    for i, from_c in enumerate(ids):
        for j, to_c in enumerate(ids):
            try:
                scope = PairScope(scenario, spectra, from_c, to_c)
            except EmptyNetworkError as e:
                logger.warning(f"Interaction {from_c} -> {to_c} is empty: {e}")
                if with_pmfs:
                    pmfs.append(PulsePmf(from_c, to_c, support=(0,), probabilities=(1.0,), mode=pmf_mode,
                                         unit=pmf_unit))
                continue

            values[i, j], strongest[i][j] = scope.strongest()
            windows[(from_c, to_c)] = scope.gw
            stats.extend(scope.stats())
            if with_pmfs:
                selected = [strongest[i][j]] if pmf_mode == 'best-station' else None
                hourly = scope.hourly_counts(selected, pmf_unit)
                pmfs.append(_pmf_from_counts(hourly, from_c, to_c, pmf_mode, pmf_unit))
            logger.debug(f"P[{from_c}, {to_c}] = {values[i, j]} (station {strongest[i][j]})")

    if not values.any():
        raise EmptyNetworkError("No access window between any constellation pair")

    eigenvalues, eigenvectors = eigen_general(values)
    logger.info(
        f"Interaction matrix over {len(ids)} constellations; "
        f"leading eigenvalue {eigenvalues[0].real:.6g}{eigenvalues[0].imag:+.6g}j"
    )
    return InterResult(
        interaction=InteractionMatrix(
            constellation_ids=tuple(ids),
            values=values,
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            strongest_stations=tuple(tuple(row) for row in strongest),
        ),
        pmfs=tuple(pmfs),
        pulse_stats=tuple(stats),
        global_windows=windows,
    )
