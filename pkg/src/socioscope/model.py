"""Domain model: participants, session event streams, and weighted sociograms.

Everything here is immutable after construction and validated eagerly, so the
rest of the pipeline can assume well-formed inputs. Node order is always the
roster order; matrices, reports, and exports all iterate participants in that
order for determinism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Valid sociogram kinds. Conversation graphs are directed (speaker -> listener),
#: proximity and attention graphs are undirected by construction.
KINDS = ("conversation", "proximity", "attention")
DIRECTED_KINDS = frozenset({"conversation"})


class ModelError(ValueError):
    """An invalid domain object or construction request."""


class UnknownParticipant(ModelError):
    """An event or edge references a participant that is not in the roster."""


class SelfLoop(ModelError):
    """An edge connects a participant to itself."""


class NonPositiveWeight(ModelError):
    """An edge weight is zero, negative, or not finite."""


class KindDirectionMismatch(ModelError):
    """The requested directedness contradicts the sociogram kind."""


@dataclass(frozen=True)
class Roster:
    """Ordered set of participant ids.

    The ordering is fixed at construction and used as the canonical node
    order everywhere (adjacency matrices, reports, exports, tie-breaks).
    """

    participants: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.participants) < 2:
            raise ModelError("roster needs at least 2 participants")
        if any(not p for p in self.participants):
            raise ModelError("participant ids must be non-empty")
        if len(set(self.participants)) != len(self.participants):
            raise ModelError("duplicate participant ids in roster")

    def __iter__(self):
        return iter(self.participants)

    def __len__(self) -> int:
        return len(self.participants)

    def __contains__(self, pid: object) -> bool:
        return pid in self.participants

    def index(self, pid: str) -> int:
        try:
            return self.participants.index(pid)
        except ValueError:
            raise UnknownParticipant(f"participant {pid!r} not in roster") from None

    def require(self, pid: str) -> str:
        if pid not in self.participants:
            raise UnknownParticipant(f"participant {pid!r} not in roster")
        return pid


def _check_time(value: float, name: str) -> None:
    if not math.isfinite(value) or value < 0:
        raise ModelError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class SpeechSegment:
    """One diarized speech turn on the shared session clock (seconds)."""

    speaker: str
    start: float
    end: float

    def __post_init__(self) -> None:
        _check_time(self.start, "start")
        if not math.isfinite(self.end) or self.end <= self.start:
            raise ModelError(f"speech segment end must exceed start, got [{self.start}, {self.end}]")

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class GazeEvent:
    """An interval during which a participant's gaze intersected a virtual object."""

    participant: str
    object_id: str
    start: float
    end: float

    def __post_init__(self) -> None:
        if not self.object_id:
            raise ModelError("gaze event needs a non-empty object id")
        _check_time(self.start, "start")
        if not math.isfinite(self.end) or self.end <= self.start:
            raise ModelError(f"gaze event end must exceed start, got [{self.start}, {self.end}]")


@dataclass(frozen=True)
class PositionSample:
    """Headset floor-plane position (meters) at time t (seconds)."""

    participant: str
    t: float
    x: float
    y: float

    def __post_init__(self) -> None:
        _check_time(self.t, "t")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ModelError(f"position coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class ObjectInteractionEvent:
    """A grab or release of a virtual object by one participant.

    ``label_at_release`` is the category the object was assigned when placed;
    it is only meaningful on release events and may be absent (release without
    re-labeling).
    """

    participant: str
    object_id: str
    action: str  # "grab" | "release"
    t: float
    label_at_release: str | None = None

    def __post_init__(self) -> None:
        if self.action not in ("grab", "release"):
            raise ModelError(f"action must be 'grab' or 'release', got {self.action!r}")
        if not self.object_id:
            raise ModelError("interaction event needs a non-empty object id")
        _check_time(self.t, "t")
        if self.action == "grab" and self.label_at_release is not None:
            raise ModelError("grab events cannot carry a label")


@dataclass(frozen=True)
class LoudnessSample:
    """One RMS amplitude sample (unitless, >= 0) for a participant's microphone."""

    participant: str
    t: float
    rms: float

    def __post_init__(self) -> None:
        _check_time(self.t, "t")
        if not math.isfinite(self.rms) or self.rms < 0:
            raise ModelError(f"rms must be finite and >= 0, got {self.rms!r}")


def _check_sorted(records, key, stream: str) -> None:
    times = [key(r) for r in records]
    if any(a > b for a, b in zip(times, times[1:])):
        raise ModelError(f"{stream} stream must be sorted by time")


@dataclass(frozen=True)
class SessionLog:
    """All raw event streams for one group session.

    Each stream is sorted by its start time and every referenced participant
    is in the roster. Loudness traces are optional.
    """

    roster: Roster
    speech: tuple[SpeechSegment, ...] = ()
    gaze: tuple[GazeEvent, ...] = ()
    positions: tuple[PositionSample, ...] = ()
    interactions: tuple[ObjectInteractionEvent, ...] = ()
    loudness: tuple[LoudnessSample, ...] | None = None

    def __post_init__(self) -> None:
        for seg in self.speech:
            self.roster.require(seg.speaker)
        for stream in (self.gaze, self.positions, self.interactions, self.loudness or ()):
            for ev in stream:
                self.roster.require(ev.participant)
        _check_sorted(self.speech, lambda s: s.start, "speech")
        _check_sorted(self.gaze, lambda g: g.start, "gaze")
        _check_sorted(self.positions, lambda p: p.t, "positions")
        _check_sorted(self.interactions, lambda i: i.t, "interactions")
        if self.loudness is not None:
            _check_sorted(self.loudness, lambda s: s.t, "loudness")


@dataclass(frozen=True)
class Sociogram:
    """A weighted interaction graph over the roster.

    Edge weights are interaction durations in seconds and always positive;
    pairs with no interaction are simply absent. Undirected sociograms store
    each unordered pair exactly once, keyed with the endpoint that comes
    first in roster order on the left.
    """

    roster: Roster
    directed: bool
    kind: str
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ModelError(f"unknown sociogram kind {self.kind!r}")
        if self.directed != (self.kind in DIRECTED_KINDS):
            raise KindDirectionMismatch(
                f"{self.kind} sociograms must be {'directed' if self.kind in DIRECTED_KINDS else 'undirected'}"
            )
        for (a, b), w in self.edges.items():
            self.roster.require(a)
            self.roster.require(b)
            if a == b:
                raise SelfLoop(f"self loop on {a!r}")
            if not (math.isfinite(w) and w > 0):
                raise NonPositiveWeight(f"edge ({a!r}, {b!r}) has non-positive weight {w!r}")
            if not self.directed and self.roster.index(a) > self.roster.index(b):
                raise ModelError(f"undirected edge ({a!r}, {b!r}) not in canonical roster order")

    def weight(self, a: str, b: str) -> float:
        """Weight of the edge a->b (or the unordered pair for undirected), 0 if absent."""
        if self.directed:
            return self.edges.get((a, b), 0.0)
        if self.roster.index(a) > self.roster.index(b):
            a, b = b, a
        return self.edges.get((a, b), 0.0)

    def sorted_edges(self) -> list[tuple[str, str, float]]:
        """Edges in deterministic (roster-index) order."""
        idx = {p: i for i, p in enumerate(self.roster)}
        return [(a, b, w) for (a, b), w in sorted(self.edges.items(), key=lambda e: (idx[e[0][0]], idx[e[0][1]]))]


def build_sociogram(
    roster: Roster,
    directed: bool,
    kind: str,
    weighted_pairs: list[tuple[str, str, float]] | tuple[tuple[str, str, float], ...],
) -> Sociogram:
    """Assemble a sociogram from (from, to, weight-seconds) records.

    Duplicate pairs are merged by summing their weights (duration
    accumulation). For undirected kinds, (a, b) and (b, a) are the same pair.
    """
    if kind not in KINDS:
        raise ModelError(f"unknown sociogram kind {kind!r}")
    if directed != (kind in DIRECTED_KINDS):
        raise KindDirectionMismatch(
            f"{kind} sociograms must be {'directed' if kind in DIRECTED_KINDS else 'undirected'}"
        )
    edges: dict[tuple[str, str], float] = {}
    for a, b, w in weighted_pairs:
        roster.require(a)
        roster.require(b)
        if a == b:
            raise SelfLoop(f"self loop on {a!r}")
        if not (math.isfinite(w) and w > 0):
            raise NonPositiveWeight(f"edge ({a!r}, {b!r}) has non-positive weight {w!r}")
        if not directed and roster.index(a) > roster.index(b):
            a, b = b, a
        edges[(a, b)] = edges.get((a, b), 0.0) + w
    return Sociogram(roster=roster, directed=directed, kind=kind, edges=edges)


def adjacency(sociogram: Sociogram) -> np.ndarray:
    """Dense adjacency matrix in roster order; A[i, j] = weight of edge i->j.

    Undirected sociograms yield symmetric matrices. The diagonal is zero.
    """
    n = len(sociogram.roster)
    idx = {p: i for i, p in enumerate(sociogram.roster)}
    a = np.zeros((n, n))
    for (u, v), w in sociogram.edges.items():
        a[idx[u], idx[v]] = w
        if not sociogram.directed:
            a[idx[v], idx[u]] = w
    return a


def is_connected(sociogram: Sociogram) -> bool:
    """True iff the direction-ignored graph has one component covering the roster.

    Directed sociograms are judged by weak connectivity: the group-directed
    speaking assumption leaves silent participants without out-edges, which
    would make strong connectivity fail for most real sessions.
    """
    nodes = list(sociogram.roster)
    if not sociogram.edges:
        return False
    neighbors: dict[str, set[str]] = {p: set() for p in nodes}
    for (u, v) in sociogram.edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    seen = {nodes[0]}
    frontier = [nodes[0]]
    while frontier:
        u = frontier.pop()
        for v in neighbors[u]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return len(seen) == len(nodes)
