"""Seeded synthetic dyads with planted, known ground truth.

Every generator draws from numpy's PCG64 via ``np.random.Generator``; the
algorithm is fixed and documented, so identical seeds reproduce identical
output on any platform.  Convergent pairs differ by a stationary AR(1)
process (a unit-root test should reject), divergent pairs by a random walk
(it should not).  Rapport-driven pairs plant a lagged linear dependence of
the partner difference on the rapport series, the configuration a causality
test should detect.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .align import EventSeries
from .corpus import SLICE_WIDTH, STRATEGY_KINDS, Session, Utterance

_FILLER = (
    "add", "subtract", "divide", "multiply", "number", "variable", "equation",
    "problem", "side", "term", "answer", "step", "check", "move", "solve",
    "balance", "simplify", "fraction", "isolate", "combine",
)


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    n_slices: int = 120
    convergent: bool = True
    ar_coefficient: float = 0.5
    noise_sd: float = 1.0
    planted_causality: tuple[float, int] | None = None  # (strength, lag)
    strategy_event_rate: float = 1.0  # events per minute
    reciprocity_lag: float = 0.0  # seconds
    jitter_sd: float = 0.0

    def __post_init__(self):
        if self.n_slices < 20:
            raise ValueError("n_slices must be >= 20")
        if self.convergent and not abs(self.ar_coefficient) < 1:
            raise ValueError("convergent spec needs |ar_coefficient| < 1")
        if self.noise_sd <= 0:
            raise ValueError("noise_sd must be positive")

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64((self.seed, stream)))


def _ar1(rng: np.random.Generator, n: int, phi: float, sd: float) -> np.ndarray:
    out = np.empty(n)
    out[0] = rng.normal(0.0, sd / math.sqrt(1.0 - phi * phi))
    for t in range(1, n):
        out[t] = phi * out[t - 1] + rng.normal(0.0, sd)
    return out


def gen_feature_pair(spec: SynthSpec) -> tuple[np.ndarray, np.ndarray]:
    """Two per-slice feature series whose difference carries the planted
    stationarity: stationary AR(1) when convergent, random walk otherwise."""
    rng = spec.rng(stream=1)
    base = 50.0 + np.cumsum(rng.normal(0.0, 0.5, spec.n_slices))
    if spec.convergent:
        diff = _ar1(rng, spec.n_slices, spec.ar_coefficient, spec.noise_sd)
    else:
        diff = np.cumsum(rng.normal(0.0, spec.noise_sd, spec.n_slices))
    return base, base - diff


def gen_rapport_driven(spec: SynthSpec) -> tuple[np.ndarray, np.ndarray]:
    """(rapport series, feature difference series) with the difference driven
    by lagged rapport at the planted strength; strength 0 gives independent
    series."""
    if spec.planted_causality is None:
        raise ValueError("spec.planted_causality must be set")
    strength, lag = spec.planted_causality
    rng = spec.rng(stream=2)
    n = spec.n_slices
    rapport = 4.0 + _ar1(rng, n, 0.7, 0.6)
    centered = rapport - rapport.mean()
    diff = np.empty(n)
    diff[0] = rng.normal(0.0, spec.noise_sd)
    for t in range(1, n):
        driver = centered[t - lag] if t - lag >= 0 else 0.0
        diff[t] = 0.5 * diff[t - 1] + strength * driver + rng.normal(0.0, spec.noise_sd)
    return rapport, diff


def gen_strategy_events(
    spec: SynthSpec, strategy: str = "self_disclosure", speakers: tuple[str, str] = ("A", "B")
) -> tuple[EventSeries, EventSeries]:
    """Partner A on a Poisson clock; partner B echoing A's events after the
    reciprocity lag plus jitter."""
    if spec.strategy_event_rate <= 0:
        raise ValueError("strategy_event_rate must be positive")
    # Stream keyed by strategy name so different kinds get distinct clocks.
    rng = spec.rng(stream=3 + zlib.crc32(strategy.encode()))
    duration = spec.n_slices * SLICE_WIDTH
    rate = spec.strategy_event_rate / 60.0
    stamps = []
    t = rng.exponential(1.0 / rate)
    while t < duration:
        stamps.append(t)
        t += rng.exponential(1.0 / rate)
    a = np.array(stamps)
    b = a + spec.reciprocity_lag
    if spec.jitter_sd > 0:
        b = b + rng.normal(0.0, spec.jitter_sd, len(b))
    b = np.clip(b, 0.0, duration)
    return (
        EventSeries(strategy, speakers[0], tuple(a)),
        EventSeries(strategy, speakers[1], tuple(np.sort(b))),
    )


def _sentence(rng: np.random.Generator, n_words: int) -> str:
    words = [str(_FILLER[int(rng.integers(len(_FILLER)))]) for _ in range(n_words)]
    mid = len(words) // 2
    if len(words) >= 6:
        words[mid] = words[mid] + "."
    return " ".join(words) + "."


def gen_session(
    spec: SynthSpec,
    dyad_id: str = "dyad00",
    session_index: int = 1,
    relationship: str = "friends",
    speakers: tuple[str, str] = ("A", "B"),
    genders: tuple[str, str] = ("f", "m"),
    timing: str = "aligned",
) -> Session:
    """Full synthetic session in the corpus schema.

    ``timing="aligned"`` keeps every utterance inside its slice so extracted
    word counts recover the planted series exactly; ``timing="freeform"``
    draws utterance intervals that straddle slice boundaries, exercising the
    proration rules.
    """
    if timing not in ("aligned", "freeform"):
        raise ValueError("timing must be 'aligned' or 'freeform'")
    rng = spec.rng(stream=4)
    words_a, words_b = gen_feature_pair(spec)
    duration = spec.n_slices * SLICE_WIDTH
    utterances: list[Utterance] = []

    if timing == "aligned":
        for i in range(spec.n_slices):
            s0 = i * SLICE_WIDTH
            for speaker, planted, lo, hi in (
                (speakers[0], words_a[i], 0.5, 13.5),
                (speakers[1], words_b[i], 15.0, 28.0),
            ):
                n_words = max(1, int(round(planted)))
                first = n_words // 2
                for part, (a_off, b_off) in zip(
                    (first, n_words - first), ((lo, lo + 5.0), (hi - 7.0, hi))
                ):
                    if part == 0:
                        continue
                    text = _sentence(rng, part)
                    if rng.random() < 0.08:
                        text += " [laughter]"
                    utterances.append(
                        Utterance(speaker, s0 + a_off, s0 + b_off, text)
                    )
    else:
        for speaker, series in ((speakers[0], words_a), (speakers[1], words_b)):
            t = float(rng.uniform(0.0, 5.0))
            mean_words = max(float(np.mean(series)), 4.0)
            while t < duration - 1.0:
                length = float(rng.uniform(2.0, 12.0))
                end = min(t + length, duration)
                n_words = max(1, int(rng.poisson(mean_words / 3.0)))
                text = _sentence(rng, n_words)
                if rng.random() < 0.08:
                    text += " [laughter]"
                utterances.append(Utterance(speaker, t, end, text))
                t = end + float(rng.exponential(4.0))

    rapport_track = None
    if spec.planted_causality is not None:
        rapport, _ = gen_rapport_driven(spec)
        rapport_track = tuple(
            (i, float(np.clip(round(r, 1), 1.0, 7.0))) for i, r in enumerate(rapport)
        )

    tracks: dict[str, dict[str, tuple[float, ...]]] = {}
    for kind in STRATEGY_KINDS:
        ev_a, ev_b = gen_strategy_events(spec, kind, speakers)
        if len(ev_a) and len(ev_b):
            tracks[kind] = {speakers[0]: ev_a.timestamps, speakers[1]: ev_b.timestamps}

    return Session(
        dyad_id=dyad_id,
        session_index=session_index,
        relationship=relationship,
        speakers=speakers,
        genders=genders,
        duration=duration,
        utterances=tuple(utterances),
        rapport_track=rapport_track,
        strategy_tracks=tracks or None,
    )
