"""Per-speaker, per-slice paralinguistic features.

Five features per speaker per slice: word count, message density (clauses
per second between the first and last utterance start), content density
(non-whitespace, non-punctuation characters per clause), overlap count
(maximal joint-speech intervals, identical for both speakers), and laughter
count.

Boundary handling: an utterance contributes to every slice its [start, end)
interval intersects; token, character and clause counts are prorated by the
fraction of the utterance's duration inside the slice and rounded half-up.
Laughter attributes wholly to the slice containing the utterance's start.
The ``[laughter]`` marker is an annotation, not speech: it is excluded from
word and character counts.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

from .corpus import LAUGHTER_MARK, Session, Slice, segment

FEATURES = ("words", "message_density", "content_density", "overlaps", "laughter")

_PUNCT = set(string.punctuation)


@dataclass(frozen=True)
class FeatureSeries:
    speaker: str
    feature: str
    values: tuple[float, ...]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def speech_tokens(text: str) -> list[str]:
    return [t for t in text.split() if t.lower() != LAUGHTER_MARK]


def word_tokens(utterance) -> int:
    return len(speech_tokens(utterance.text))


def character_count(utterance) -> int:
    """Characters spoken: everything except whitespace and punctuation."""
    return sum(
        1 for t in speech_tokens(utterance.text) for c in t if c not in _PUNCT
    )


def _fraction_in_slice(u, slc: Slice, duration: float) -> float:
    if u.end == u.start:
        # Instantaneous utterance: attribute to the slice holding its start.
        if slc.start <= u.start < slc.end or (u.start == duration and slc.end == duration):
            return 1.0
        return 0.0
    lo = max(u.start, slc.start)
    hi = min(u.end, slc.end)
    if hi <= lo:
        return 0.0
    return (hi - lo) / (u.end - u.start)


def slice_attributions(session: Session, slc: Slice, speaker: str):
    """(utterance, fraction) pairs for the speaker's utterances intersecting
    the slice."""
    out = []
    for u in session.utterances:
        if u.speaker != speaker:
            continue
        if u.start >= slc.end and not (u.start == u.end == session.duration == slc.end):
            break
        frac = _fraction_in_slice(u, slc, session.duration)
        if frac > 0.0:
            out.append((u, frac))
    return out


def word_count(session: Session, slc: Slice, speaker: str) -> int:
    return sum(
        _round_half_up(word_tokens(u) * frac)
        for u, frac in slice_attributions(session, slc, speaker)
    )


def message_density(session: Session, slc: Slice, speaker: str) -> float:
    """Prorated clauses per second between the first and last utterance start
    attributed to the slice; 0 for fewer than two utterances."""
    attributed = slice_attributions(session, slc, speaker)
    if len(attributed) < 2:
        return 0.0
    starts = [u.start for u, _ in attributed]
    span = max(starts) - min(starts)
    if span <= 0:
        return 0.0
    clauses = sum(_round_half_up(u.clauses * frac) for u, frac in attributed)
    return clauses / span


def content_density(session: Session, slc: Slice, speaker: str) -> float:
    attributed = slice_attributions(session, slc, speaker)
    clauses = sum(_round_half_up(u.clauses * frac) for u, frac in attributed)
    if clauses == 0:
        return 0.0
    chars = sum(_round_half_up(character_count(u) * frac) for u, frac in attributed)
    return chars / clauses


def _clipped_union(session: Session, slc: Slice, speaker: str) -> list[tuple[float, float]]:
    """Union of the speaker's utterance intervals clipped to the slice,
    merging touching pieces."""
    pieces = []
    for u in session.utterances:
        if u.speaker != speaker:
            continue
        lo = max(u.start, slc.start)
        hi = min(u.end, slc.end)
        if hi > lo:
            pieces.append((lo, hi))
    pieces.sort()
    merged: list[tuple[float, float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def overlap_count(session: Session, slc: Slice) -> int:
    """Maximal time intervals inside the slice where both speakers talk at
    once.  Symmetric: the same value is reported for either speaker."""
    a, b = session.speakers
    ua = _clipped_union(session, slc, a)
    ub = _clipped_union(session, slc, b)
    count = 0
    i = j = 0
    while i < len(ua) and j < len(ub):
        lo = max(ua[i][0], ub[j][0])
        hi = min(ua[i][1], ub[j][1])
        if hi > lo:
            count += 1
        if ua[i][1] <= ub[j][1]:
            i += 1
        else:
            j += 1
    return count


def laughter_count(session: Session, slc: Slice, speaker: str) -> int:
    total = 0
    for u in session.utterances:
        if u.speaker != speaker:
            continue
        start_slice = slc.start <= u.start < slc.end or (
            u.start == session.duration == slc.end
        )
        if start_slice:
            total += u.laughter_count
    return total


def extract_series(
    session: Session, width: float = 30.0
) -> dict[tuple[str, str], FeatureSeries]:
    """All five feature series for both speakers, keyed by (speaker, feature)."""
    slices = segment(session, width)
    series: dict[tuple[str, str], FeatureSeries] = {}
    overlaps = tuple(float(overlap_count(session, s)) for s in slices)
    for speaker in session.speakers:
        values = {
            "words": tuple(float(word_count(session, s, speaker)) for s in slices),
            "message_density": tuple(message_density(session, s, speaker) for s in slices),
            "content_density": tuple(content_density(session, s, speaker) for s in slices),
            "overlaps": overlaps,
            "laughter": tuple(float(laughter_count(session, s, speaker)) for s in slices),
        }
        for feature in FEATURES:
            series[(speaker, feature)] = FeatureSeries(speaker, feature, values[feature])
    return series
