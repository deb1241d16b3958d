"""Transcript ingestion and fixed-width time slicing.

A session document is a sequence of CSV records (or an equivalent JSON
object).  The first record declares the session:

    session,<dyad_id>,<session_index>,<relationship>,
            <speaker_a>,<gender_a>,<speaker_b>,<gender_b>,<duration>

followed, in any order, by:

    utterance,<speaker>,<start>,<end>,<text>[,<clause_count>][,<laughter_count>]
    rapport,<slice_index>,<rating>
    strategy,<strategy_kind>,<speaker>,<timestamp_seconds>

Optional trailing fields may be left empty.  Text fields are quoted by the
CSV layer when needed.  The JSON alternative uses the same field names (see
``serialize_session(..., fmt="json")`` for the exact layout).  Encoding is
UTF-8 throughout.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaError

SLICE_WIDTH = 30.0
RELATIONSHIPS = ("friends", "strangers")
STRATEGY_KINDS = ("self_disclosure", "shared_experience", "praise")
LAUGHTER_MARK = "[laughter]"

_CLAUSE_SPLIT = re.compile(r"[.?!;]+")


def count_laughter_marks(text: str) -> int:
    return text.lower().count(LAUGHTER_MARK)


def clause_heuristic(text: str) -> int:
    """Approximate independent clauses: punctuation-delimited segments
    (``. ? ! ;``) containing at least one non-marker token."""
    count = 0
    for segment in _CLAUSE_SPLIT.split(text):
        tokens = [t for t in segment.split() if t.lower() != LAUGHTER_MARK]
        if tokens:
            count += 1
    return count


@dataclass(frozen=True)
class Utterance:
    speaker: str
    start: float
    end: float
    text: str
    clause_count: int | None = None
    laughter_count: int | None = None

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"negative start time {self.start}")
        if self.end < self.start:
            raise ValueError(f"end {self.end} before start {self.start}")
        if self.clause_count is not None and self.clause_count < 0:
            raise ValueError("clause_count must be non-negative")
        if self.laughter_count is None:
            object.__setattr__(self, "laughter_count", count_laughter_marks(self.text))
        elif self.laughter_count < 0:
            raise ValueError("laughter_count must be non-negative")

    @property
    def clauses(self) -> int:
        """Declared clause count, or the heuristic when absent."""
        if self.clause_count is not None:
            return self.clause_count
        return clause_heuristic(self.text)


@dataclass(frozen=True)
class Session:
    dyad_id: str
    session_index: int
    relationship: str
    speakers: tuple[str, str]
    genders: tuple[str, str]
    duration: float
    utterances: tuple[Utterance, ...] = ()
    rapport_track: tuple[tuple[int, float], ...] | None = None
    strategy_tracks: dict[str, dict[str, tuple[float, ...]]] | None = field(default=None)

    def __post_init__(self):
        if not 1 <= self.session_index <= 5:
            raise ValueError("session_index must be in 1..5")
        if self.relationship not in RELATIONSHIPS:
            raise ValueError(f"relationship must be one of {RELATIONSHIPS}")
        if len(set(self.speakers)) != 2:
            raise ValueError("session must have exactly two speakers")
        if self.duration < 0:
            raise ValueError("duration must be non-negative")
        pair = set(self.speakers)
        utts = tuple(sorted(self.utterances, key=lambda u: (u.start, u.end)))
        object.__setattr__(self, "utterances", utts)
        for u in utts:
            if u.speaker not in pair:
                raise ValueError(
                    f"unknown speaker {u.speaker!r}: session must have exactly two speakers"
                )
            if u.end > self.duration:
                raise ValueError(f"utterance at {u.start} ends after duration {self.duration}")
        if self.rapport_track is not None:
            n_slices = math.ceil(self.duration / SLICE_WIDTH)
            track = tuple((int(i), float(r)) for i, r in self.rapport_track)
            for i, r in track:
                if not 0 <= i < max(n_slices, 1):
                    raise ValueError(f"rapport slice_index {i} outside session")
                if not 1.0 <= r <= 7.0:
                    raise ValueError(f"rapport rating {r} outside [1, 7]")
            object.__setattr__(self, "rapport_track", track)
        if self.strategy_tracks is not None:
            tracks: dict[str, dict[str, tuple[float, ...]]] = {}
            for kind, per_speaker in self.strategy_tracks.items():
                if kind not in STRATEGY_KINDS:
                    raise ValueError(f"unknown strategy kind {kind!r}")
                by_speaker = {}
                for speaker, stamps in per_speaker.items():
                    if speaker not in pair:
                        raise ValueError(f"strategy track for unknown speaker {speaker!r}")
                    ts = tuple(sorted(float(t) for t in stamps))
                    for t in ts:
                        if not 0 <= t <= self.duration:
                            raise ValueError(f"strategy timestamp {t} outside session")
                    by_speaker[speaker] = ts
                tracks[kind] = by_speaker
            object.__setattr__(self, "strategy_tracks", tracks)

    @property
    def n_slices(self) -> int:
        return math.ceil(self.duration / SLICE_WIDTH)


@dataclass(frozen=True)
class Slice:
    """Half-open window [start, end); the last slice of a session may be
    shorter than the nominal width."""

    index: int
    start: float
    end: float

    @property
    def width(self) -> float:
        return self.end - self.start


def segment(session: Session, width: float = SLICE_WIDTH) -> tuple[Slice, ...]:
    """Tile [0, duration) with consecutive windows of the given width."""
    if width <= 0:
        raise ValueError("slice width must be positive")
    count = math.ceil(session.duration / width)
    return tuple(
        Slice(i, i * width, min((i + 1) * width, session.duration)) for i in range(count)
    )


# --- parsing -----------------------------------------------------------

def _fail(record: int, message: str) -> SchemaError:
    return SchemaError(f"record {record}: {message}")


def _parse_float(value: str, record: int, name: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise _fail(record, f"field {name!r}: not a number: {value!r}") from None


def _parse_int(value: str, record: int, name: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise _fail(record, f"field {name!r}: not an integer: {value!r}") from None


def parse_session(document: str) -> Session:
    """Parse a transcript document (CSV records or the JSON alternative)."""
    if document.lstrip().startswith("{"):
        return _parse_json(document)
    return _parse_lines(document)


def load_session(path: str | Path) -> Session:
    return parse_session(Path(path).read_text(encoding="utf-8"))


def _parse_lines(document: str) -> Session:
    rows = [r for r in csv.reader(io.StringIO(document)) if r]
    if not rows:
        raise SchemaError("record 1: empty document")
    head = rows[0]
    if head[0] != "session":
        raise _fail(1, f"expected session header, got {head[0]!r}")
    if len(head) != 9:
        raise _fail(1, f"session header needs 9 fields, got {len(head)}")
    _, dyad_id, idx, rel, spk_a, gen_a, spk_b, gen_b, duration = head

    utterances: list[Utterance] = []
    rapport: list[tuple[int, float]] = []
    strategies: dict[str, dict[str, list[float]]] = {}
    for record, row in enumerate(rows[1:], start=2):
        tag = row[0]
        if tag == "utterance":
            if not 5 <= len(row) <= 7:
                raise _fail(record, f"utterance needs 5-7 fields, got {len(row)}")
            start = _parse_float(row[2], record, "start")
            end = _parse_float(row[3], record, "end")
            if start < 0:
                raise _fail(record, f"field 'start': negative timestamp {start}")
            if end < start:
                raise _fail(record, f"field 'end': end {end} before start {start}")
            clause = None
            laughter = None
            if len(row) >= 6 and row[5] != "":
                clause = _parse_int(row[5], record, "clause_count")
            if len(row) == 7 and row[6] != "":
                laughter = _parse_int(row[6], record, "laughter_count")
            try:
                utterances.append(
                    Utterance(row[1], start, end, row[4], clause, laughter)
                )
            except ValueError as exc:
                raise _fail(record, str(exc)) from None
        elif tag == "rapport":
            if len(row) != 3:
                raise _fail(record, f"rapport needs 3 fields, got {len(row)}")
            rapport.append(
                (_parse_int(row[1], record, "slice_index"), _parse_float(row[2], record, "rating"))
            )
        elif tag == "strategy":
            if len(row) != 4:
                raise _fail(record, f"strategy needs 4 fields, got {len(row)}")
            kind, speaker = row[1], row[2]
            if kind not in STRATEGY_KINDS:
                raise _fail(record, f"field 'strategy_kind': unknown kind {kind!r}")
            stamp = _parse_float(row[3], record, "timestamp_seconds")
            strategies.setdefault(kind, {}).setdefault(speaker, []).append(stamp)
        elif tag == "session":
            raise _fail(record, "duplicate session header")
        else:
            raise _fail(record, f"unknown record tag {tag!r}")

    return _assemble(
        dyad_id=dyad_id,
        session_index=_parse_int(idx, 1, "session_index"),
        relationship=rel,
        speakers=(spk_a, spk_b),
        genders=(gen_a, gen_b),
        duration=_parse_float(duration, 1, "duration"),
        utterances=utterances,
        rapport=rapport,
        strategies=strategies,
    )


def _parse_json(document: str) -> Session:
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"record 1: invalid JSON: {exc}") from None
    try:
        utterances = [
            Utterance(
                u["speaker"],
                float(u["start"]),
                float(u["end"]),
                u["text"],
                u.get("clause_count"),
                u.get("laughter_count"),
            )
            for u in obj.get("utterances", [])
        ]
        rapport = [(int(r["slice_index"]), float(r["rating"])) for r in obj.get("rapport", [])]
        strategies: dict[str, dict[str, list[float]]] = {}
        for rec in obj.get("strategies", []):
            strategies.setdefault(rec["strategy_kind"], {}).setdefault(
                rec["speaker"], []
            ).append(float(rec["timestamp_seconds"]))
        return _assemble(
            dyad_id=obj["dyad_id"],
            session_index=int(obj["session_index"]),
            relationship=obj["relationship"],
            speakers=(obj["speaker_a"], obj["speaker_b"]),
            genders=(obj["gender_a"], obj["gender_b"]),
            duration=float(obj["duration"]),
            utterances=utterances,
            rapport=rapport,
            strategies=strategies,
        )
    except KeyError as exc:
        raise SchemaError(f"record 1: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"record 1: {exc}") from None


def _assemble(*, dyad_id, session_index, relationship, speakers, genders, duration,
              utterances, rapport, strategies) -> Session:
    tracks = {
        kind: {spk: tuple(ts) for spk, ts in per.items()} for kind, per in strategies.items()
    } or None
    try:
        return Session(
            dyad_id=dyad_id,
            session_index=session_index,
            relationship=relationship,
            speakers=tuple(speakers),
            genders=tuple(genders),
            duration=duration,
            utterances=tuple(utterances),
            rapport_track=tuple(rapport) if rapport else None,
            strategy_tracks=tracks,
        )
    except ValueError as exc:
        raise SchemaError(f"record 1: {exc}") from None


# --- serialization -----------------------------------------------------

def serialize_session(session: Session, fmt: str = "lines") -> str:
    """Inverse of :func:`parse_session`; ``fmt`` is ``"lines"`` or ``"json"``."""
    if fmt == "lines":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(
            [
                "session",
                session.dyad_id,
                session.session_index,
                session.relationship,
                session.speakers[0],
                session.genders[0],
                session.speakers[1],
                session.genders[1],
                repr(session.duration),
            ]
        )
        for u in session.utterances:
            w.writerow(
                [
                    "utterance",
                    u.speaker,
                    repr(u.start),
                    repr(u.end),
                    u.text,
                    "" if u.clause_count is None else u.clause_count,
                    u.laughter_count,
                ]
            )
        for idx, rating in session.rapport_track or ():
            w.writerow(["rapport", idx, repr(rating)])
        for kind in sorted(session.strategy_tracks or {}):
            per = session.strategy_tracks[kind]
            for speaker in sorted(per):
                for stamp in per[speaker]:
                    w.writerow(["strategy", kind, speaker, repr(stamp)])
        return out.getvalue()
    if fmt == "json":
        obj = {
            "dyad_id": session.dyad_id,
            "session_index": session.session_index,
            "relationship": session.relationship,
            "speaker_a": session.speakers[0],
            "gender_a": session.genders[0],
            "speaker_b": session.speakers[1],
            "gender_b": session.genders[1],
            "duration": session.duration,
            "utterances": [
                {
                    "speaker": u.speaker,
                    "start": u.start,
                    "end": u.end,
                    "text": u.text,
                    "clause_count": u.clause_count,
                    "laughter_count": u.laughter_count,
                }
                for u in session.utterances
            ],
            "rapport": [
                {"slice_index": i, "rating": r} for i, r in session.rapport_track or ()
            ],
            "strategies": [
                {"strategy_kind": kind, "speaker": speaker, "timestamp_seconds": stamp}
                for kind in sorted(session.strategy_tracks or {})
                for speaker in sorted(session.strategy_tracks[kind])
                for stamp in session.strategy_tracks[kind][speaker]
            ],
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
