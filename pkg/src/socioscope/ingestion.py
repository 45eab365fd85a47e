"""Session-log parsing and the three sensor-to-sociogram pipelines.

Input is one directory per session holding line-delimited JSON records, one
file per stream, plus a small roster header:

    roster.json         {"participants": ["A", "B", "C", "D"]}
    speech.jsonl        {"speaker": "A", "start": 12.0, "end": 15.5}
    gaze.jsonl          {"participant": "A", "object": "img_07", "start": 3.2, "end": 4.1}
    positions.jsonl     {"participant": "A", "t": 3.0, "x": 1.25, "y": 0.40}
    interactions.jsonl  {"participant": "A", "object": "img_07", "action": "release", "t": 80.2, "label": "Tense"}
    loudness.jsonl      {"participant": "A", "t": 3.01, "rms": 0.42}   (optional)

All times are seconds on the shared session clock, all distances meters.
Unknown fields are ignored; missing required fields are schema errors with
the offending line number.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .model import (
    GazeEvent,
    LoudnessSample,
    ModelError,
    ObjectInteractionEvent,
    PositionSample,
    Roster,
    SessionLog,
    Sociogram,
    SpeechSegment,
    UnknownParticipant,
    build_sociogram,
)

#: 1.5 ft expressed in meters: the outer bound of proxemic intimate space.
DEFAULT_PROXIMITY_THRESHOLD_M = 0.4572
#: Position resampling bin, matching the 1 Hz capture rate of the headset tracker.
DEFAULT_PROXIMITY_BIN_S = 1.0
#: Leading/trailing seconds of position data dropped (application load/exit noise).
DEFAULT_PROXIMITY_TRIM_S = 15.0
#: Shared-gaze overlaps must exceed this to count (fleeting glances filtered).
DEFAULT_MIN_GAZE_OVERLAP_S = 0.013

ROSTER_FILE = "roster.json"
STREAM_FILES = {
    "speech": "speech.jsonl",
    "gaze": "gaze.jsonl",
    "positions": "positions.jsonl",
    "interactions": "interactions.jsonl",
    "loudness": "loudness.jsonl",
}


class SchemaError(ValueError):
    """A malformed line in a session-log file."""

    def __init__(self, path, line: int, field: str | None, reason: str):
        self.path = str(path)
        self.line = line
        self.field = field
        where = f"{self.path}:{line}"
        if field:
            where += f" field {field!r}"
        super().__init__(f"{where}: {reason}")


class NoSamplesInWindow(ValueError):
    """No loudness samples fell inside the attribution window."""


@dataclass(frozen=True)
class ProximityConfig:
    threshold: float = DEFAULT_PROXIMITY_THRESHOLD_M
    bin: float = DEFAULT_PROXIMITY_BIN_S
    trim: float = DEFAULT_PROXIMITY_TRIM_S

    def __post_init__(self) -> None:
        if not (self.threshold > 0):
            raise ValueError("proximity threshold must be > 0")
        if not (self.bin > 0):
            raise ValueError("proximity bin must be > 0")
        if self.trim < 0:
            raise ValueError("proximity trim must be >= 0")


@dataclass(frozen=True)
class AttentionConfig:
    min_overlap: float = DEFAULT_MIN_GAZE_OVERLAP_S

    def __post_init__(self) -> None:
        if self.min_overlap < 0:
            raise ValueError("min_overlap must be >= 0")


def _require(obj: dict, key: str, path, line: int):
    if key not in obj:
        raise SchemaError(path, line, key, "missing required field")
    return obj[key]


def _number(obj: dict, key: str, path, line: int) -> float:
    value = _require(obj, key, path, line)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, line, key, f"expected a number, got {value!r}")
    return float(value)


def _string(obj: dict, key: str, path, line: int) -> str:
    value = _require(obj, key, path, line)
    if not isinstance(value, str) or not value:
        raise SchemaError(path, line, key, f"expected a non-empty string, got {value!r}")
    return value


def _read_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(path, lineno, None, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise SchemaError(path, lineno, None, "each line must be a JSON object")
            yield lineno, obj


def _wrap_model_error(path, lineno: int, exc: ModelError) -> SchemaError:
    return SchemaError(path, lineno, None, str(exc))


def parse_session_log(directory: str | Path) -> SessionLog:
    """Parse one session directory into a validated, sorted SessionLog.

    Raises FileNotFoundError naming the missing stream, SchemaError with the
    offending line for malformed records, and UnknownParticipant for events
    naming someone outside the roster.
    """
    directory = Path(directory)
    roster_path = directory / ROSTER_FILE
    if not roster_path.is_file():
        raise FileNotFoundError(f"missing roster stream: {roster_path}")
    try:
        header = json.loads(roster_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(roster_path, 1, None, f"invalid JSON: {exc.msg}") from None
    participants = header.get("participants")
    if not isinstance(participants, list) or not all(isinstance(p, str) for p in participants):
        raise SchemaError(roster_path, 1, "participants", "expected a list of participant id strings")
    roster = Roster(tuple(participants))

    for stream in ("speech", "gaze", "positions", "interactions"):
        if not (directory / STREAM_FILES[stream]).is_file():
            raise FileNotFoundError(f"missing {stream} stream: {directory / STREAM_FILES[stream]}")

    loudness: tuple[LoudnessSample, ...] | None = None
    loudness_path = directory / STREAM_FILES["loudness"]
    if loudness_path.is_file():
        samples = []
        for lineno, obj in _read_lines(loudness_path):
            pid = roster.require(_string(obj, "participant", loudness_path, lineno))
            try:
                samples.append(LoudnessSample(pid, _number(obj, "t", loudness_path, lineno), _number(obj, "rms", loudness_path, lineno)))
            except ModelError as exc:
                raise _wrap_model_error(loudness_path, lineno, exc) from None
        loudness = tuple(sorted(samples, key=lambda s: s.t))

    speech_path = directory / STREAM_FILES["speech"]
    speech = []
    for lineno, obj in _read_lines(speech_path):
        start = _number(obj, "start", speech_path, lineno)
        end = _number(obj, "end", speech_path, lineno)
        if "speaker" in obj:
            speaker = roster.require(_string(obj, "speaker", speech_path, lineno))
        elif loudness is not None:
            # Unattributed segment: fall back to the loudest-average-volume heuristic.
            try:
                speaker = attribute_speaker((start, end), loudness, roster)
            except NoSamplesInWindow:
                raise SchemaError(speech_path, lineno, "speaker",
                                  "segment has no speaker and no loudness samples in its window") from None
        else:
            raise SchemaError(speech_path, lineno, "speaker", "missing required field")
        try:
            speech.append(SpeechSegment(speaker, start, end))
        except ModelError as exc:
            raise _wrap_model_error(speech_path, lineno, exc) from None

    gaze_path = directory / STREAM_FILES["gaze"]
    gaze = []
    for lineno, obj in _read_lines(gaze_path):
        pid = roster.require(_string(obj, "participant", gaze_path, lineno))
        try:
            gaze.append(GazeEvent(pid, _string(obj, "object", gaze_path, lineno),
                                  _number(obj, "start", gaze_path, lineno),
                                  _number(obj, "end", gaze_path, lineno)))
        except ModelError as exc:
            raise _wrap_model_error(gaze_path, lineno, exc) from None

    positions_path = directory / STREAM_FILES["positions"]
    positions = []
    for lineno, obj in _read_lines(positions_path):
        pid = roster.require(_string(obj, "participant", positions_path, lineno))
        try:
            positions.append(PositionSample(pid, _number(obj, "t", positions_path, lineno),
                                            _number(obj, "x", positions_path, lineno),
                                            _number(obj, "y", positions_path, lineno)))
        except ModelError as exc:
            raise _wrap_model_error(positions_path, lineno, exc) from None

    interactions_path = directory / STREAM_FILES["interactions"]
    interactions = []
    for lineno, obj in _read_lines(interactions_path):
        pid = roster.require(_string(obj, "participant", interactions_path, lineno))
        label = obj.get("label")
        if label is not None and (not isinstance(label, str) or not label):
            raise SchemaError(interactions_path, lineno, "label", f"expected a non-empty string, got {label!r}")
        try:
            interactions.append(ObjectInteractionEvent(pid, _string(obj, "object", interactions_path, lineno),
                                                       _string(obj, "action", interactions_path, lineno),
                                                       _number(obj, "t", interactions_path, lineno),
                                                       label))
        except ModelError as exc:
            raise _wrap_model_error(interactions_path, lineno, exc) from None

    return SessionLog(
        roster=roster,
        speech=tuple(sorted(speech, key=lambda s: s.start)),
        gaze=tuple(sorted(gaze, key=lambda g: g.start)),
        positions=tuple(sorted(positions, key=lambda p: p.t)),
        interactions=tuple(sorted(interactions, key=lambda i: i.t)),
        loudness=loudness,
    )


def write_session_log(log: SessionLog, directory: str | Path) -> None:
    """Write a SessionLog back out as the line-record files parse_session_log reads."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def dump(name: str, records) -> None:
        with open(directory / name, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")

    (directory / ROSTER_FILE).write_text(
        json.dumps({"participants": list(log.roster)}) + "\n", encoding="utf-8")
    dump(STREAM_FILES["speech"], ({"speaker": s.speaker, "start": s.start, "end": s.end} for s in log.speech))
    dump(STREAM_FILES["gaze"], ({"participant": g.participant, "object": g.object_id,
                                 "start": g.start, "end": g.end} for g in log.gaze))
    dump(STREAM_FILES["positions"], ({"participant": p.participant, "t": p.t, "x": p.x, "y": p.y}
                                     for p in log.positions))
    dump(STREAM_FILES["interactions"],
         ({"participant": i.participant, "object": i.object_id, "action": i.action, "t": i.t,
           **({"label": i.label_at_release} if i.label_at_release is not None else {})}
          for i in log.interactions))
    if log.loudness is not None:
        dump(STREAM_FILES["loudness"], ({"participant": s.participant, "t": s.t, "rms": s.rms}
                                        for s in log.loudness))


def attribute_speaker(
    window: tuple[float, float],
    loudness: tuple[LoudnessSample, ...],
    roster: Roster,
) -> str:
    """Pick the speaker for a segment: loudest mean amplitude over [start, end).

    Ties break by roster order so attribution is deterministic.
    """
    start, end = window
    if not end > start:
        raise ValueError(f"window must be non-empty, got [{start}, {end})")
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for sample in loudness:
        if start <= sample.t < end:
            sums[sample.participant] = sums.get(sample.participant, 0.0) + sample.rms
            counts[sample.participant] = counts.get(sample.participant, 0) + 1
    if not counts:
        raise NoSamplesInWindow(f"no loudness samples in [{start}, {end})")
    best = None
    best_mean = -math.inf
    for pid in roster:  # roster order makes the tie-break deterministic
        if pid in counts:
            mean = sums[pid] / counts[pid]
            if mean > best_mean:
                best, best_mean = pid, mean
    assert best is not None
    return best


def build_conversation_sociogram(speech, roster: Roster) -> Sociogram:
    """Directed conversation sociogram under the spoke-to-the-whole-group assumption.

    Every speaker gets an out-edge to each other participant, weighted by the
    speaker's total speaking seconds. Silent participants have no out-edges.
    """
    totals: dict[str, float] = {}
    for seg in speech:
        roster.require(seg.speaker)
        totals[seg.speaker] = totals.get(seg.speaker, 0.0) + seg.duration
    pairs = []
    for speaker in roster:
        total = totals.get(speaker, 0.0)
        if total <= 0:
            continue
        for other in roster:
            if other != speaker:
                pairs.append((speaker, other, total))
    return build_sociogram(roster, directed=True, kind="conversation", weighted_pairs=pairs)


def _merged_intervals(events) -> list[tuple[float, float]]:
    """Union of [start, end) intervals as disjoint maximal intervals."""
    spans = sorted((e.start, e.end) for e in events)
    merged: list[tuple[float, float]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def build_attention_sociogram(gaze, roster: Roster, cfg: AttentionConfig | None = None) -> Sociogram:
    """Undirected shared-attention sociogram from co-gaze on the same object.

    For each unordered pair and each object, every maximal interval in which
    both participants gaze at the object contributes its length, provided the
    length strictly exceeds cfg.min_overlap. Weights are the summed
    qualifying overlaps across all objects.
    """
    cfg = cfg or AttentionConfig()
    by_object: dict[str, dict[str, list[GazeEvent]]] = {}
    for event in gaze:
        roster.require(event.participant)
        by_object.setdefault(event.object_id, {}).setdefault(event.participant, []).append(event)

    order = list(roster)
    weights: dict[tuple[str, str], float] = {}
    for _, per_participant in sorted(by_object.items()):
        merged = {pid: _merged_intervals(evs) for pid, evs in per_participant.items()}
        gazers = [p for p in order if p in merged]
        for i, p in enumerate(gazers):
            for q in gazers[i + 1:]:
                for a0, a1 in merged[p]:
                    for b0, b1 in merged[q]:
                        overlap = min(a1, b1) - max(a0, b0)
                        if overlap > cfg.min_overlap:
                            key = (p, q)
                            weights[key] = weights.get(key, 0.0) + overlap
    pairs = [(p, q, w) for (p, q), w in weights.items()]
    return build_sociogram(roster, directed=False, kind="attention", weighted_pairs=pairs)


def build_proximity_sociogram(positions, roster: Roster, cfg: ProximityConfig | None = None) -> Sociogram:
    """Undirected proximity sociogram: seconds spent within the distance threshold.

    The first and last cfg.trim seconds of the position stream are discarded,
    the remainder is bucketed into cfg.bin-second bins keeping the last sample
    per participant per bin, and each bin where a pair's Euclidean distance is
    <= cfg.threshold adds cfg.bin seconds to that pair's edge.
    """
    cfg = cfg or ProximityConfig()
    samples = list(positions)
    if not samples:
        return build_sociogram(roster, directed=False, kind="proximity", weighted_pairs=[])
    for s in samples:
        roster.require(s.participant)
    t_min = min(s.t for s in samples)
    t_max = max(s.t for s in samples)
    lo = t_min + cfg.trim
    hi = t_max - cfg.trim
    if hi < lo:
        return build_sociogram(roster, directed=False, kind="proximity", weighted_pairs=[])

    # bin index -> participant -> latest kept sample
    bins: dict[int, dict[str, PositionSample]] = {}
    for s in samples:
        if s.t < lo or s.t > hi:
            continue
        b = int((s.t - lo) // cfg.bin)
        slot = bins.setdefault(b, {})
        prev = slot.get(s.participant)
        if prev is None or s.t >= prev.t:
            slot[s.participant] = s

    order = list(roster)
    weights: dict[tuple[str, str], float] = {}
    for b in sorted(bins):
        slot = bins[b]
        present = [p for p in order if p in slot]
        for i, p in enumerate(present):
            for q in present[i + 1:]:
                dx = slot[p].x - slot[q].x
                dy = slot[p].y - slot[q].y
                if math.hypot(dx, dy) <= cfg.threshold:
                    key = (p, q)
                    weights[key] = weights.get(key, 0.0) + cfg.bin
    pairs = [(p, q, w) for (p, q), w in weights.items()]
    return build_sociogram(roster, directed=False, kind="proximity", weighted_pairs=pairs)
