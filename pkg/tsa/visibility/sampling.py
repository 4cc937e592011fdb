"""
Global windows and alpha-second sampling of temporal spectra.

Sample n sits at gw.start + n * alpha and is set when it falls inside a
window clipped to the global window. Windows are half-open, so a window
[s, e) sets samples ceil(s / alpha) .. ceil(e / alpha) - 1.
"""
import logging
import math
from datetime import timedelta
from typing import Iterable, List, Tuple

import numpy as np

from tsa.errors import EmptyNetworkError
from tsa.models import AccessWindow, BinarySpectrum, GlobalWindow, TemporalSpectrum

logger = logging.getLogger(__name__)


def global_window(spectra: Iterable[TemporalSpectrum]) -> GlobalWindow:
    """
    Span from the earliest window start to the latest window end

    Raises:
        EmptyNetworkError: no spectrum has a window
    """
    starts = []
    ends = []
    for spectrum in spectra:
        if spectrum.windows:
            starts.append(spectrum.windows[0].start)
            ends.append(spectrum.windows[-1].end)
    if not starts:
        raise EmptyNetworkError("No access window in scope: no network exists over the span")
    return GlobalWindow(start=min(starts), end=max(ends))


def sample_count(gw: GlobalWindow, alpha: int) -> int:
    """Number of alpha-second samples covering the global window"""
    return math.ceil(round(gw.duration_seconds, 6) / alpha)


def sample_ranges(spectrum: TemporalSpectrum, gw: GlobalWindow, alpha: int) -> List[Tuple[int, int]]:
    """
    Sample index ranges [first, last) set by each window after clipping

    Args:
        spectrum: Temporal spectrum
        gw: Global window the samples are anchored to
        alpha: Sampling precision in seconds

    Returns:
        Non-empty index ranges in window order
    """
    span = round(gw.duration_seconds, 6)
    ranges = []
    for window in spectrum.windows:
        start = max(round((window.start - gw.start).total_seconds(), 6), 0.0)
        end = min(round((window.end - gw.start).total_seconds(), 6), span)
        if end <= start:
            continue
        first = math.ceil(start / alpha)
        last = math.ceil(end / alpha)
        if last > first:
            ranges.append((first, last))
    return ranges


def sample(spectrum: TemporalSpectrum, gw: GlobalWindow, alpha: int) -> BinarySpectrum:
    """Binary spectrum h[n] of a temporal spectrum over a global window"""
    bits = np.zeros(sample_count(gw, alpha), dtype=np.uint8)
    for first, last in sample_ranges(spectrum, gw, alpha):
        bits[first:last] = 1
    return BinarySpectrum(origin=gw.start, alpha=alpha, bits=bits)


def clipped_sample_count(spectrum: TemporalSpectrum, gw: GlobalWindow, alpha: int) -> int:
    """Set bits of sample(spectrum, gw, alpha) without materialising the array"""
    return sum(last - first for first, last in sample_ranges(spectrum, gw, alpha))


def run_lengths(binary: BinarySpectrum) -> List[AccessWindow]:
    """
    Decode a binary spectrum back into windows, one per maximal 1-run

    Returns:
        Windows [origin + first * alpha, origin + last * alpha)
    """
    bits = np.asarray(binary.bits, dtype=np.int8)
    edges = np.diff(np.concatenate(([0], bits, [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return [
        AccessWindow(
            start=binary.origin + timedelta(seconds=int(first) * binary.alpha),
            end=binary.origin + timedelta(seconds=int(last) * binary.alpha),
        )
        for first, last in zip(starts, ends)
    ]
