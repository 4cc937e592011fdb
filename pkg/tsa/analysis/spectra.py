"""
Dominant and isolated ground stations of one constellation.

Global window -> spectrum-strength matrix H -> Gram matrix J = H H^T ->
Jacobi eigen decomposition -> ranking by leading-eigenspace component.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from tsa.analysis.eigen import jacobi_eigh
from tsa.config import Config
from tsa.errors import DimensionError
from tsa.models import GlobalWindow, GramEigen, IntraResult, Scenario, SpectrumMatrix, StationRanking, TemporalSpectrum
from tsa.visibility.sampling import clipped_sample_count, global_window

logger = logging.getLogger(__name__)

SpectrumMap = Dict[Tuple[str, str], TemporalSpectrum]


def select_spectra(spectra: SpectrumMap, station_ids: Sequence[str],
                   satellite_ids: Sequence[str]) -> List[TemporalSpectrum]:
    """Spectra of every (station, satellite) pair, station-major"""
    missing = [(sid, xid) for sid in station_ids for xid in satellite_ids if (sid, xid) not in spectra]
    if missing:
        sid, xid = missing[0]
        raise DimensionError(f"No spectrum for station {sid} and satellite {xid} ({len(missing)} pairs missing)")
    return [spectra[(sid, xid)] for sid in station_ids for xid in satellite_ids]


def spectrum_matrix(spectra: Sequence[TemporalSpectrum], gw: GlobalWindow, alpha: int,
                    station_ids: Sequence[str], satellite_ids: Sequence[str],
                    constellation_id: str = '') -> SpectrumMatrix:
    """
    Total clipped visibility seconds for every (station, satellite) pair

    Args:
        spectra: One spectrum per pair, any order
        gw: Global window entries are clipped to
        alpha: Sampling precision in seconds
        station_ids: Row order
        satellite_ids: Column order
        constellation_id: Label for the matrix

    Returns:
        SpectrumMatrix with int64 entries, multiples of alpha

    Raises:
        DimensionError: spectra do not cover the pairs exactly once
    """
    rows = {sid: i for i, sid in enumerate(station_ids)}
    cols = {xid: j for j, xid in enumerate(satellite_ids)}
    values = np.zeros((len(rows), len(cols)), dtype=np.int64)
    seen = np.zeros(values.shape, dtype=bool)

    for spectrum in spectra:
        i = rows.get(spectrum.station_id)
        j = cols.get(spectrum.satellite_id)
        if i is None or j is None:
            raise DimensionError(
                f"Spectrum for station {spectrum.station_id} and satellite {spectrum.satellite_id} "
                f"is outside constellation {constellation_id}"
            )
        if seen[i, j]:
            raise DimensionError(f"Duplicate spectrum for station {spectrum.station_id} and satellite {spectrum.satellite_id}")
        seen[i, j] = True
        values[i, j] = clipped_sample_count(spectrum, gw, alpha) * alpha

    if not seen.all():
        i, j = np.argwhere(~seen)[0]
        raise DimensionError(f"No spectrum for station {station_ids[i]} and satellite {satellite_ids[j]}")

    return SpectrumMatrix(
        constellation_id=constellation_id,
        station_ids=tuple(station_ids),
        satellite_ids=tuple(satellite_ids),
        values=values,
        global_window=gw,
        alpha=alpha,
    )


def gram(H: SpectrumMatrix) -> GramEigen:
    """
    Gram matrix J = H H^T and its eigen decomposition

    Integer H gives an exact int64 J; float H is symmetrised.

    Raises:
        DimensionError: H has no stations
        ConvergenceError: Jacobi sweep cap reached
    """
    values = np.asarray(H.values)
    if values.ndim != 2 or values.shape[0] == 0:
        raise DimensionError(f"Spectrum matrix of {H.constellation_id or 'constellation'} has no stations")

    if np.issubdtype(values.dtype, np.integer):
        J = values.astype(np.int64) @ values.astype(np.int64).T
    else:
        J = values @ values.T
        J = (J + J.T) / 2.0

    eigenvalues, eigenvectors, sweeps = jacobi_eigh(J.astype(float))
    return GramEigen(
        station_ids=tuple(H.station_ids),
        J=J,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        sweeps=sweeps,
    )


def _pick(scores: np.ndarray, diagonal: np.ndarray, best: bool) -> int:
    """Index of the best (or worst) score; ties go to larger (smaller) J_ii, then first (last) station"""
    n = len(scores)
    tolerance = Config.TIE_TOLERANCE * max(float(np.max(scores)), np.finfo(float).tiny)
    target = np.max(scores) if best else np.min(scores)
    tied = [i for i in range(n) if abs(scores[i] - target) <= tolerance]
    target_diag = max(diagonal[i] for i in tied) if best else min(diagonal[i] for i in tied)
    tied = [i for i in tied if diagonal[i] == target_diag]
    return tied[0] if best else tied[-1]


def rank_stations(ge: GramEigen, constellation_id: str = '') -> StationRanking:
    """
    Dominant and isolated stations from the leading eigenspace of J

    The score of a station is the magnitude of its component in the
    eigenvector of the largest eigenvalue, sign-normalised so the largest
    component is positive. A degenerate largest eigenvalue scores each
    station by the norm of its row in the whole leading eigenspace.

    Args:
        ge: Gram eigen data
        constellation_id: Label for the ranking

    Returns:
        StationRanking
    """
    n = len(ge.station_ids)
    eigenvalues = np.asarray(ge.eigenvalues, dtype=float)
    vectors = np.asarray(ge.eigenvectors, dtype=float)
    leading = eigenvalues[0]
    tolerance = Config.TIE_TOLERANCE * max(abs(leading), np.finfo(float).tiny)
    multiplicity = int(np.sum(eigenvalues >= leading - tolerance))

    if multiplicity == 1:
        vector = vectors[:, 0]
        if vector[np.argmax(np.abs(vector))] < 0:
            vector = -vector
        scores = np.abs(vector)
    else:
        if n > 1:
            logger.warning(
                f"Leading eigenvalue {leading:.6g} of {constellation_id or 'constellation'} has multiplicity "
                f"{multiplicity}; scoring stations on the whole leading eigenspace"
            )
        scores = np.linalg.norm(vectors[:, :multiplicity], axis=1)

    diagonal = np.diag(np.asarray(ge.J, dtype=float))
    dominant = _pick(scores, diagonal, best=True)
    isolated = _pick(scores, diagonal, best=False)

    return StationRanking(
        constellation_id=constellation_id,
        station_ids=tuple(ge.station_ids),
        dominant_station_id=ge.station_ids[dominant],
        isolated_station_id=ge.station_ids[isolated],
        scores=tuple(float(s) for s in scores),
        diagonal=tuple(float(d) for d in diagonal),
        leading_multiplicity=multiplicity,
    )


def run_intra(scenario: Scenario, constellation_id: str, spectra: Optional[SpectrumMap] = None,
              jobs: int = 1) -> IntraResult:
    """
    Dominant and isolated stations of one constellation, end to end

    Args:
        scenario: Loaded scenario
        constellation_id: Constellation to analyse
        spectra: Precomputed spectra keyed by (station id, satellite id);
            computed for the constellation's own pairs when omitted
        jobs: Worker processes used when spectra must be computed

    Returns:
        IntraResult with the ranking, H and the Gram eigen data

    Raises:
        CrossReferenceError: unknown constellation
        EmptyNetworkError: no access window between its stations and satellites
    """
    constellation = scenario.constellation(constellation_id)
    if spectra is None:
        from tsa.scheduler.tasks import compute_spectra
        spectra = compute_spectra(scenario, jobs=jobs, constellation_ids=[constellation_id])

    station_ids = constellation.station_ids
    satellite_ids = constellation.satellite_ids
    selected = select_spectra(spectra, station_ids, satellite_ids)
    gw = global_window(selected)
    H = spectrum_matrix(selected, gw, scenario.alpha, station_ids, satellite_ids, constellation_id)
    ge = gram(H)
    ranking = rank_stations(ge, constellation_id)

    logger.info(
        f"Constellation {constellation_id}: dominant station {ranking.dominant_station_id}, "
        f"isolated station {ranking.isolated_station_id}, leading eigenvalue {ge.eigenvalues[0]:.6g}"
    )
    return IntraResult(ranking=ranking, matrix=H, eigen=ge)
