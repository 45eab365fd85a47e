"""Seeded synthetic session logs for archetypal groups.

This is a test-fixture factory, not a behavioral simulator. Event timing uses
documented pseudo-random processes driven entirely by the spec seed:

* speech: round-robin turns; turn length = 2.5 s * rate * Uniform(0.8, 1.2),
  separated by Exp(mean 0.6 s) inter-speech gaps;
* positions: 1 Hz samples at a fixed per-participant anchor inside the
  cluster plus Gaussian jitter (sigma 0.01 m); cluster centers sit on a 2 m
  circle so distinct clusters never come near the proximity threshold;
* gaze: scheduled pairs share co-gaze episodes of Uniform(1, 3) s separated
  by Exp(mean 4 s) gaps, with Uniform(0, 0.05) s per-eye onset/offset jitter;
  each pair draws from its own slice of the object pool so unscheduled pairs
  never co-gaze;
* interactions: objects are sorted in fixed 10 s slots, occasionally
  re-labeled by a second participant;
* loudness: 1 Hz RMS, 0.6 while the participant speaks plus Uniform(0, 0.05)
  noise floor.

Same seed, same spec: byte-identical log files.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .model import (
    GazeEvent,
    LoudnessSample,
    ObjectInteractionEvent,
    PositionSample,
    Roster,
    SessionLog,
    SpeechSegment,
)

CATEGORIES = ("Angry", "Bored", "Relaxed", "Tense", "Pleased", "Frustrated")
OBJECT_POOL = tuple(f"img_{i:02d}" for i in range(28))

TURN_MEAN_S = 2.5
TURN_GAP_MEAN_S = 0.6
POSITION_JITTER_M = 0.01
GAZE_EPISODE_GAP_MEAN_S = 4.0
SORT_SLOT_S = 10.0


class InvalidSpec(ValueError):
    """A scenario spec violates its invariants."""


def roster_ids(size: int) -> tuple[str, ...]:
    if size <= 26:
        return tuple(chr(ord("A") + i) for i in range(size))
    return tuple(f"P{i:02d}" for i in range(size))


@dataclass(frozen=True)
class ScenarioSpec:
    """Shape of one synthetic session.

    ``speaking_rates`` are relative turn-length multipliers per participant
    (0 silences a participant); ``clusters`` partition the roster into
    co-located groups with ``cluster_radius`` meters of intra-cluster spread;
    ``attention_pairs`` lists the pairs that share gaze episodes.
    """

    size: int
    duration: float
    speaking_rates: tuple[float, ...]
    clusters: tuple[tuple[str, ...], ...]
    cluster_radius: float
    attention_pairs: tuple[tuple[str, str], ...]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.size < 2:
            raise InvalidSpec("size must be >= 2")
        if self.duration < 0 or not math.isfinite(self.duration):
            raise InvalidSpec("duration must be finite and >= 0")
        if len(self.speaking_rates) != self.size:
            raise InvalidSpec("need one speaking rate per participant")
        if any(r < 0 for r in self.speaking_rates):
            raise InvalidSpec("speaking rates must be >= 0")
        if self.cluster_radius < 0:
            raise InvalidSpec("cluster radius must be >= 0")
        ids = roster_ids(self.size)
        clustered = [p for cluster in self.clusters for p in cluster]
        if sorted(clustered) != sorted(ids):
            raise InvalidSpec("clusters must partition the roster exactly")
        for a, b in self.attention_pairs:
            if a == b or a not in ids or b not in ids:
                raise InvalidSpec(f"bad attention pair ({a!r}, {b!r})")

    @property
    def roster(self) -> Roster:
        return Roster(roster_ids(self.size))


def cohesive_spec(size: int = 4, duration: float = 300.0, seed: int = 0) -> ScenarioSpec:
    """Balanced speakers, one cluster, shared attention between every pair."""
    ids = roster_ids(size)
    pairs = tuple((ids[i], ids[j]) for i in range(size) for j in range(i + 1, size))
    return ScenarioSpec(size, duration, (1.0,) * size, (ids,), 0.15, pairs, seed)


def fragmented_spec(size: int = 4, duration: float = 300.0, seed: int = 0) -> ScenarioSpec:
    """Two spatial subgroups that only share attention within themselves."""
    if size < 4:
        raise InvalidSpec("fragmented scenario needs at least 4 participants")
    ids = roster_ids(size)
    half = size // 2
    clusters = (ids[:half], ids[half:])
    pairs = tuple((c[i], c[j]) for c in clusters for i in range(len(c)) for j in range(i + 1, len(c)))
    return ScenarioSpec(size, duration, (1.0,) * size, clusters, 0.15, pairs, seed)


def dominant_speaker_spec(size: int = 4, duration: float = 300.0, seed: int = 0) -> ScenarioSpec:
    """One participant out-talks everyone and anchors all shared attention."""
    ids = roster_ids(size)
    rates = (10.0,) + (1.0,) * (size - 1)
    pairs = tuple((ids[0], other) for other in ids[1:])
    return ScenarioSpec(size, duration, rates, (ids,), 0.15, pairs, seed)


SCENARIOS = {
    "cohesive": cohesive_spec,
    "fragmented": fragmented_spec,
    "dominant-speaker": dominant_speaker_spec,
}


def _speech(spec: ScenarioSpec, rng: random.Random) -> list[SpeechSegment]:
    ids = roster_ids(spec.size)
    segments: list[SpeechSegment] = []
    t = 2.0
    turn = 0
    while t < spec.duration:
        speaker = ids[turn % spec.size]
        rate = spec.speaking_rates[turn % spec.size]
        turn += 1
        if rate > 0:
            length = TURN_MEAN_S * rate * rng.uniform(0.8, 1.2)
            end = min(t + length, spec.duration)
            if end - t > 0.05:
                segments.append(SpeechSegment(speaker, round(t, 3), round(end, 3)))
            t = end
        t += rng.expovariate(1.0 / TURN_GAP_MEAN_S)
    return segments


def _positions(spec: ScenarioSpec, rng: random.Random) -> list[PositionSample]:
    centers: dict[str, tuple[float, float]] = {}
    k = len(spec.clusters)
    for ci, cluster in enumerate(spec.clusters):
        angle = 2 * math.pi * ci / k
        cx, cy = (0.0, 0.0) if k == 1 else (2.0 * math.cos(angle), 2.0 * math.sin(angle))
        for pi, pid in enumerate(cluster):
            spread = spec.cluster_radius / 2.0
            pa = 2 * math.pi * pi / max(1, len(cluster))
            centers[pid] = (cx + spread * math.cos(pa), cy + spread * math.sin(pa))
    samples = []
    ids = roster_ids(spec.size)
    for t in range(int(spec.duration)):
        for pid in ids:
            x0, y0 = centers[pid]
            samples.append(PositionSample(pid, float(t),
                                          round(x0 + rng.gauss(0, POSITION_JITTER_M), 3),
                                          round(y0 + rng.gauss(0, POSITION_JITTER_M), 3)))
    return samples


def _gaze(spec: ScenarioSpec, rng: random.Random) -> list[GazeEvent]:
    events: list[GazeEvent] = []
    n_pairs = len(spec.attention_pairs)
    for k, (p, q) in enumerate(spec.attention_pairs):
        lo = k * len(OBJECT_POOL) // max(1, n_pairs)
        hi = (k + 1) * len(OBJECT_POOL) // max(1, n_pairs)
        pool = OBJECT_POOL[lo:hi] or OBJECT_POOL[:1]
        t = 5.0 + rng.expovariate(1.0 / GAZE_EPISODE_GAP_MEAN_S)
        while t < spec.duration - 3.5:
            obj = pool[rng.randrange(len(pool))]
            length = rng.uniform(1.0, 3.0)
            for pid in (p, q):
                start = t + rng.uniform(0, 0.05)
                end = t + length - rng.uniform(0, 0.05)
                events.append(GazeEvent(pid, obj, round(start, 3), round(end, 3)))
            t += length + rng.expovariate(1.0 / GAZE_EPISODE_GAP_MEAN_S)
    return events


def _interactions(spec: ScenarioSpec, rng: random.Random) -> list[ObjectInteractionEvent]:
    ids = roster_ids(spec.size)
    usable = spec.duration * 0.8
    n_objects = min(len(OBJECT_POOL), int(usable // SORT_SLOT_S))
    events: list[ObjectInteractionEvent] = []
    for j in range(n_objects):
        obj = OBJECT_POOL[j]
        slot = spec.duration * 0.1 + j * SORT_SLOT_S
        sorter = ids[j % spec.size]
        grab = slot + rng.uniform(0.0, 2.0)
        release = grab + rng.uniform(0.5, 2.0)
        label = CATEGORIES[rng.randrange(len(CATEGORIES))]
        events.append(ObjectInteractionEvent(sorter, obj, "grab", round(grab, 3)))
        events.append(ObjectInteractionEvent(sorter, obj, "release", round(release, 3), label))
        if rng.random() < 0.4:
            second = ids[(j + 1) % spec.size]
            grab2 = slot + 5.0 + rng.uniform(0.0, 1.0)
            release2 = grab2 + rng.uniform(0.5, 2.0)
            relabel = CATEGORIES[rng.randrange(len(CATEGORIES))]
            events.append(ObjectInteractionEvent(second, obj, "grab", round(grab2, 3)))
            events.append(ObjectInteractionEvent(second, obj, "release", round(release2, 3), relabel))
    return events


def _loudness(spec: ScenarioSpec, speech: list[SpeechSegment], rng: random.Random) -> list[LoudnessSample]:
    ids = roster_ids(spec.size)
    speaking: dict[str, set[int]] = {pid: set() for pid in ids}
    for seg in speech:
        for sec in range(int(seg.start), int(math.ceil(seg.end))):
            speaking[seg.speaker].add(sec)
    samples = []
    for t in range(int(spec.duration)):
        for pid in ids:
            level = 0.6 if t in speaking[pid] else 0.0
            samples.append(LoudnessSample(pid, float(t), round(level + rng.uniform(0, 0.05), 3)))
    return samples


def generate(spec: ScenarioSpec) -> SessionLog:
    """Generate one deterministic SessionLog for the scenario."""
    rng = random.Random(spec.seed)
    speech = sorted(_speech(spec, rng), key=lambda s: s.start)
    positions = sorted(_positions(spec, rng), key=lambda p: p.t)
    gaze = sorted(_gaze(spec, rng), key=lambda g: g.start)
    interactions = sorted(_interactions(spec, rng), key=lambda i: i.t)
    loudness = tuple(sorted(_loudness(spec, speech, rng), key=lambda s: s.t))
    return SessionLog(
        roster=spec.roster,
        speech=tuple(speech),
        gaze=tuple(gaze),
        positions=tuple(positions),
        interactions=tuple(interactions),
        loudness=loudness,
    )
