"""Dynamic time warping over conversational-strategy event times.

Alignment uses the symmetric step pattern where a diagonal step costs twice
the local distance (so one diagonal move costs as much as the two equivalent
side moves), with the endpoint of series B freed for partial matching and the
raw distance normalized by n + m.  Local cost is the absolute difference of
event timestamps in seconds.

Path indices are 1-based: a path always starts at (1, 1), advances by
(1, 0), (0, 1) or (1, 1), and ends at (n, matched_end_of_b).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .corpus import Session
from .errors import MissingEventsError


@dataclass(frozen=True)
class EventSeries:
    strategy: str
    speaker: str
    timestamps: tuple[float, ...]

    def __post_init__(self):
        ts = tuple(float(t) for t in self.timestamps)
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("timestamps must be non-decreasing")
        object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class AlignmentResult:
    raw_distance: float
    normalized_distance: float
    path: tuple[tuple[int, int], ...]
    matched_end_of_b: int


@dataclass(frozen=True)
class InsufficientEvents:
    """Marker for dyads with too little activity to align meaningfully
    (a one-point warp is not an alignment)."""

    strategy: str
    counts: dict[str, int]


def _values(series) -> np.ndarray:
    if isinstance(series, EventSeries):
        series = series.timestamps
    return np.ascontiguousarray(np.asarray(series, dtype=np.float64))


def dtw(a, b, open_end: bool = True) -> AlignmentResult:
    """Align two event-time series; B's endpoint is free unless
    ``open_end=False`` forces a full match."""
    av = _values(a)
    bv = _values(b)
    if len(av) == 0 or len(bv) == 0:
        raise MissingEventsError("empty event series")
    D = _kernels.dtw_accumulate(av, bv)
    n, m = D.shape
    end_j = int(np.argmin(D[n - 1])) if open_end else m - 1
    raw = float(D[n - 1, end_j])
    path = _traceback(D, av, bv, end_j)
    return AlignmentResult(
        raw_distance=raw,
        normalized_distance=raw / (n + m),
        path=path,
        matched_end_of_b=end_j + 1,
    )


def _traceback(D, a, b, end_j: int) -> tuple[tuple[int, int], ...]:
    i = D.shape[0] - 1
    j = end_j
    rev = [(i + 1, j + 1)]
    while i > 0 or j > 0:
        d = abs(a[i] - b[j])
        # Recomputed sums match the forward pass bit for bit, so exact
        # comparisons identify the predecessor; ties prefer the diagonal.
        if i > 0 and j > 0 and D[i, j] == D[i - 1, j - 1] + 2.0 * d:
            i -= 1
            j -= 1
        elif i > 0 and D[i, j] == D[i - 1, j] + d:
            i -= 1
        elif j > 0 and D[i, j] == D[i, j - 1] + d:
            j -= 1
        elif i > 0 and j > 0:
            i -= 1
            j -= 1
        elif i > 0:
            i -= 1
        else:
            j -= 1
        rev.append((i + 1, j + 1))
    rev.reverse()
    return tuple(rev)


def strategy_alignment(
    session: Session, strategy: str
) -> AlignmentResult | InsufficientEvents:
    """Align the two speakers' event series for one strategy kind.

    The freed-endpoint series B is the longer one, so the busier speaker's
    series may be matched only partially; the other speaker is anchored as
    series A.  On equal counts, A is the first speaker in id order.  Either
    speaker having fewer than two events yields an InsufficientEvents marker.
    """
    tracks = (session.strategy_tracks or {}).get(strategy)
    if tracks is None:
        raise MissingEventsError(f"no {strategy!r} track in session")
    stamps = {spk: tracks.get(spk, ()) for spk in session.speakers}
    for spk, ts in stamps.items():
        if len(ts) == 0:
            raise MissingEventsError(f"empty event series for speaker {spk!r}")
    if any(len(ts) < 2 for ts in stamps.values()):
        return InsufficientEvents(strategy, {spk: len(ts) for spk, ts in stamps.items()})
    first, second = sorted(session.speakers)
    if len(stamps[first]) > len(stamps[second]):
        a_spk, b_spk = second, first
    else:
        a_spk, b_spk = first, second
    return dtw(
        EventSeries(strategy, a_spk, stamps[a_spk]),
        EventSeries(strategy, b_spk, stamps[b_spk]),
    )
