"""Core entity types and the annotation document for dance-video semantics.

An annotation document describes one video: its bibliographic (macro)
features, the accompanying songs, and a typed graph of dance events,
actors, agents, objects and concepts with their spatio-temporal grounding.
"""
from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import date, time
from enum import Enum
from typing import TYPE_CHECKING, Optional, Union

from .errors import (
    DanglingIdError,
    DuplicateIdError,
    InvalidValueError,
    LifespanContainmentError,
    OwnerMismatchError,
)

if TYPE_CHECKING:  # pragma: no cover - type-only import, avoids a cycle
    from .graph import Relationship


# --------------------------------------------------------------------------
# Time and space primitives
# --------------------------------------------------------------------------

MS_PER_UNIT = {"second": 1000, "minute": 60_000}


@dataclass(frozen=True)
class Interval:
    """Closed-open media-time interval [start, end) in integer milliseconds."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0:
            raise InvalidValueError(f"interval start must be >= 0, got {self.start}")
        if self.end <= self.start:
            raise InvalidValueError(
                f"interval end must exceed start, got [{self.start}, {self.end})"
            )

    @property
    def duration(self) -> int:
        return self.end - self.start

    def contains(self, other: "Interval") -> bool:
        return self.start <= other.start and other.end <= self.end

    def contains_time(self, t: int) -> bool:
        # end-inclusive on purpose: annotators routinely capture a point at
        # the final instant of a lifespan
        return self.start <= t <= self.end

    def intersects(self, other: "Interval") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Box:
    """Axis-aligned bounding region in normalized frame coordinates."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidValueError(f"box {name} must be in [0,1], got {v}")
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise InvalidValueError("box must have xmin < xmax and ymin < ymax")


@dataclass(frozen=True)
class TrajectoryPoint:
    """One sampled centroid position (normalized, y grows downward)."""

    t: int
    cx: float
    cy: float
    box: Optional[Box] = None

    def __post_init__(self):
        if not (0.0 <= self.cx <= 1.0 and 0.0 <= self.cy <= 1.0):
            raise InvalidValueError(
                f"centroid ({self.cx}, {self.cy}) outside normalized frame"
            )
        if self.box is not None:
            b = self.box
            if not (b.xmin <= self.cx <= b.xmax and b.ymin <= self.cy <= b.ymax):
                raise InvalidValueError("centroid must lie inside its bounding box")


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered point set tracing an entity's displacement."""

    points: tuple[TrajectoryPoint, ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise InvalidValueError("trajectory needs at least one point")
        times = [p.t for p in self.points]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidValueError("trajectory times must be strictly increasing")

    @property
    def span(self) -> tuple[int, int]:
        return self.points[0].t, self.points[-1].t

    @property
    def times(self) -> list[int]:
        return [p.t for p in self.points]


# --------------------------------------------------------------------------
# Controlled vocabularies
# --------------------------------------------------------------------------


class Sex(str, Enum):
    FEMALE = "female"
    MALE = "male"
    OTHER = "other"


class VenueType(str, Enum):
    THEATRE = "theatre"
    OPEN_AIR = "open_air"
    STUDIO = "studio"
    STREET = "street"
    OTHER = "other"


class VideoType(str, Enum):
    MOVIE = "movie"
    THEATRE = "theatre"
    FOLK = "folk"
    CLASSICAL = "classical"
    STREET = "street"
    FESTIVAL = "festival"


class RecordingContext(str, Enum):
    LIVE = "live"
    REHEARSAL = "rehearsal"
    PROFESSIONAL_PLAY = "professional_play"
    COMPETITION = "competition"
    OTHER = "other"


class SongPartKind(str, Enum):
    INTRODUCTION = "introduction"
    ADDITIONAL_INTRODUCTION = "additional_introduction"
    CHORUS = "chorus"
    STANZA = "stanza"


class Speed(str, Enum):
    SLOW = "slow"
    MEDIUM = "medium"
    FAST = "fast"


class ConceptKind(str, Enum):
    EMOTION = "emotion"
    FEELING = "feeling"
    MOOD = "mood"


class EntityKind(str, Enum):
    EVENT = "event"
    OBJECT = "object"
    ACTOR = "actor"
    AGENT = "agent"
    CONCEPT = "concept"


#: Reserved action label marking a body part that performs no action.
IDLE_ACTION = "idle"

#: Default posture vocabulary; open, annotators may use any text.
POSTURE_SEED = ("standing", "sitting", "kneeling", "lying")


class AgentVocabulary:
    """Body-part vocabulary, seeded with the standard 24 terms.

    Lookup is side-insensitive: "left hand" and "right hand" both resolve
    to "hand". User extensions are additive; seed terms cannot be removed.
    """

    SEED = frozenset(
        {
            "head", "hand", "knee", "leg", "foot", "arm",
            "finger", "ankle", "elbow", "heel", "lower leg", "wrist",
            "toe", "hip", "shoulder", "waist", "back", "torso",
            "forearm", "palm", "pelvis", "thigh", "ball of foot", "chest",
        }
    )

    def __init__(self, extra_terms: Optional[set[str]] = None):
        self._extra: set[str] = {self.normalize(t) for t in (extra_terms or set())}

    @staticmethod
    def normalize(term: str) -> str:
        t = " ".join(term.lower().split())
        for side in ("left ", "right "):
            if t.startswith(side):
                t = t[len(side):]
        return t

    @property
    def extra_terms(self) -> set[str]:
        return set(self._extra)

    @property
    def terms(self) -> set[str]:
        return set(self.SEED) | self._extra

    def add(self, term: str) -> None:
        self._extra.add(self.normalize(term))

    def __contains__(self, term: str) -> bool:
        return self.normalize(term) in self.SEED or self.normalize(term) in self._extra


# --------------------------------------------------------------------------
# Macro features and songs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MacroFeatures:
    """Event-independent bibliographic features of one video."""

    recording_date: date
    dance_origin: str
    venue_type: VenueType
    song_type: str
    accompaniment_type: str
    video_type: VideoType
    context: RecordingContext
    num_dancers: int
    instruments: tuple[str, ...] = ()
    recording_time: Optional[time] = None

    def __post_init__(self):
        if self.num_dancers < 1:
            raise InvalidValueError("num_dancers must be ≥ 1")


@dataclass(frozen=True)
class SongPart:
    kind: SongPartKind
    index: int
    lines: tuple[str, ...] = ()


@dataclass(frozen=True)
class Song:
    song_id: str
    title: str
    parts: tuple[SongPart, ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise InvalidValueError(f"song {self.song_id} needs at least one part")
        indices = [p.index for p in self.parts]
        if len(indices) != len(set(indices)):
            raise InvalidValueError(f"song {self.song_id} has duplicate part indices")
        for kind in (SongPartKind.INTRODUCTION, SongPartKind.ADDITIONAL_INTRODUCTION):
            if sum(1 for p in self.parts if p.kind is kind) > 1:
                raise InvalidValueError(
                    f"song {self.song_id} may contain at most one {kind.value}"
                )

    def part(self, index: int) -> Optional[SongPart]:
        for p in self.parts:
            if p.index == index:
                return p
        return None


@dataclass(frozen=True)
class Dancer:
    """Event-independent description of a performer (a video object)."""

    did: str
    name: str
    sex: Sex
    age: Optional[int] = None
    origin: Optional[str] = None


# --------------------------------------------------------------------------
# Graph entities
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MediaLocator:
    """Clip URI plus the segment the event occupies within it."""

    uri: str
    segment: Interval


@dataclass
class DanceEvent:
    """One dance step: the unit of analysis, backed by a video segment."""

    eid: str
    d: str
    nd: int
    ml: MediaLocator
    location: str
    al: list[str] = field(default_factory=list)
    song_ref: Optional[tuple[str, int, Optional[int]]] = None

    def __post_init__(self):
        if self.nd < 1:
            raise InvalidValueError(f"event {self.eid}: nd must be ≥ 1")


@dataclass
class Actor:
    """Context-dependent role a dancer plays within one event."""

    aid: str
    eid: str
    did: str
    r: str
    l: Interval
    t: Trajectory
    p: str = "standing"


@dataclass
class Agent:
    """A body part of an actor performing an action; finest granularity."""

    agid: str
    aid: str
    eid: str
    l: Interval
    t: Trajectory
    x: str
    s: Speed
    body_part: str
    i: Optional[str] = None


@dataclass
class ObjectEntity:
    """Free attribute-value entity, optionally owned by an actor or agent."""

    oid: str
    v: tuple[tuple[str, str], ...] = ()
    ty: Optional[str] = None


@dataclass
class ConceptEntity:
    """Cognitive/affective state of an actor within an event."""

    cid: str
    aid: str
    eid: str
    t: ConceptKind
    d: str


Entity = Union[DanceEvent, Actor, Agent, ObjectEntity, ConceptEntity, Dancer]


# --------------------------------------------------------------------------
# Validation report
# --------------------------------------------------------------------------


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def is_valid(self) -> bool:
        return not self.findings

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.ERROR]


# --------------------------------------------------------------------------
# The document
# --------------------------------------------------------------------------


@dataclass
class AnnotationDocument:
    """One video's complete annotation.

    Holds the macro features, songs, dancer roster and the entity/
    relationship graph. Mutation is single-writer; reads are safe to share.
    """

    macro: MacroFeatures
    songs: list[Song] = field(default_factory=list)
    doc_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    dancers: dict[str, Dancer] = field(default_factory=dict)
    events: dict[str, DanceEvent] = field(default_factory=dict)
    actors: dict[str, Actor] = field(default_factory=dict)
    agents: dict[str, Agent] = field(default_factory=dict)
    objects: dict[str, ObjectEntity] = field(default_factory=dict)
    concepts: dict[str, ConceptEntity] = field(default_factory=dict)
    relationships: dict[str, "Relationship"] = field(default_factory=dict)
    vocabulary: AgentVocabulary = field(default_factory=AgentVocabulary)

    # -- lookup ------------------------------------------------------------

    def song(self, song_id: str) -> Optional[Song]:
        for s in self.songs:
            if s.song_id == song_id:
                return s
        return None

    def kind_of(self, entity_id: str) -> Optional[EntityKind]:
        if entity_id in self.events:
            return EntityKind.EVENT
        if entity_id in self.objects:
            return EntityKind.OBJECT
        if entity_id in self.actors:
            return EntityKind.ACTOR
        if entity_id in self.agents:
            return EntityKind.AGENT
        if entity_id in self.concepts:
            return EntityKind.CONCEPT
        return None

    def has_entity(self, entity_id: str) -> bool:
        return self.kind_of(entity_id) is not None or entity_id in self.dancers

    def agents_of_actor(self, aid: str) -> list[Agent]:
        return sorted(
            (g for g in self.agents.values() if g.aid == aid), key=lambda g: g.agid
        )

    def actors_of_event(self, eid: str) -> list[Actor]:
        return sorted(
            (a for a in self.actors.values() if a.eid == eid), key=lambda a: a.aid
        )

    def event_dancers(self, eid: str) -> set[str]:
        """Distinct dancer ids performing in an event."""
        return {a.did for a in self.actors.values() if a.eid == eid}


def new_document(
    macro: MacroFeatures, songs: list[Song], doc_id: Optional[str] = None
) -> AnnotationDocument:
    """Create an empty-graph document carrying macro features and songs."""
    doc = AnnotationDocument(macro=macro, songs=list(songs))
    if doc_id is not None:
        doc.doc_id = doc_id
    return doc


# --------------------------------------------------------------------------
# Entity insertion (annotation order: event → actor → agent/concept)
# --------------------------------------------------------------------------


def _check_fresh(doc: AnnotationDocument, entity_id: str) -> None:
    if doc.has_entity(entity_id):
        raise DuplicateIdError(f"id {entity_id!r} already in use", subject=entity_id)


def add_entity(doc: AnnotationDocument, entity: Entity) -> str:
    """Store an entity, enforcing referential order and lifespan containment.

    Events must precede their actors; actors precede their agents and
    concepts. Adding an actor appends it to the owning event's actor list.
    """
    if isinstance(entity, Dancer):
        _check_fresh(doc, entity.did)
        doc.dancers[entity.did] = entity
        return entity.did

    if isinstance(entity, DanceEvent):
        _check_fresh(doc, entity.eid)
        for aid in entity.al:
            if aid not in doc.actors:
                raise DanglingIdError(
                    f"event {entity.eid} lists unknown actor {aid!r}", subject=aid
                )
        doc.events[entity.eid] = entity
        return entity.eid

    if isinstance(entity, Actor):
        _check_fresh(doc, entity.aid)
        event = doc.events.get(entity.eid)
        if event is None:
            raise DanglingIdError(
                f"actor {entity.aid} references unknown event {entity.eid!r}",
                subject=entity.eid,
            )
        if entity.did not in doc.dancers:
            raise DanglingIdError(
                f"actor {entity.aid} references unknown dancer {entity.did!r}",
                subject=entity.did,
            )
        if not event.ml.segment.contains(entity.l):
            raise LifespanContainmentError(
                f"actor {entity.aid} lifespan [{entity.l.start}, {entity.l.end}) "
                f"exceeds event segment [{event.ml.segment.start}, "
                f"{event.ml.segment.end})",
                subject=entity.aid,
            )
        doc.actors[entity.aid] = entity
        if entity.aid not in event.al:
            event.al.append(entity.aid)
        return entity.aid

    if isinstance(entity, Agent):
        _check_fresh(doc, entity.agid)
        actor = doc.actors.get(entity.aid)
        if actor is None:
            raise DanglingIdError(
                f"agent {entity.agid} references unknown actor {entity.aid!r}",
                subject=entity.aid,
            )
        if entity.eid not in doc.events:
            raise DanglingIdError(
                f"agent {entity.agid} references unknown event {entity.eid!r}",
                subject=entity.eid,
            )
        if actor.eid != entity.eid:
            raise OwnerMismatchError(
                f"agent {entity.agid} names event {entity.eid!r} but its actor "
                f"belongs to {actor.eid!r}",
                subject=entity.agid,
            )
        if not actor.l.contains(entity.l):
            raise LifespanContainmentError(
                f"agent {entity.agid} lifespan exceeds actor {actor.aid} lifespan",
                subject=entity.agid,
            )
        doc.agents[entity.agid] = entity
        return entity.agid

    if isinstance(entity, ConceptEntity):
        _check_fresh(doc, entity.cid)
        actor = doc.actors.get(entity.aid)
        if actor is None:
            raise DanglingIdError(
                f"concept {entity.cid} references unknown actor {entity.aid!r}",
                subject=entity.aid,
            )
        if entity.eid not in doc.events:
            raise DanglingIdError(
                f"concept {entity.cid} references unknown event {entity.eid!r}",
                subject=entity.eid,
            )
        if actor.eid != entity.eid:
            raise OwnerMismatchError(
                f"concept {entity.cid} names event {entity.eid!r} but its actor "
                f"belongs to {actor.eid!r}",
                subject=entity.cid,
            )
        doc.concepts[entity.cid] = entity
        return entity.cid

    if isinstance(entity, ObjectEntity):
        _check_fresh(doc, entity.oid)
        if entity.ty is not None and not (
            entity.ty in doc.actors or entity.ty in doc.agents
        ):
            raise DanglingIdError(
                f"object {entity.oid} owner {entity.ty!r} is not an actor or agent",
                subject=entity.ty,
            )
        doc.objects[entity.oid] = entity
        return entity.oid

    raise InvalidValueError(f"cannot add entity of type {type(entity).__name__}")


# --------------------------------------------------------------------------
# Existence-time predicate and scene grouping
# --------------------------------------------------------------------------


def exists_at(actor: Actor, granule: int, granularity: str = "second") -> bool:
    """True iff the actor's lifespan intersects the given time granule."""
    if granule < 0:
        raise InvalidValueError("granule must be ≥ 0")
    unit = MS_PER_UNIT.get(granularity)
    if unit is None:
        raise InvalidValueError(f"unknown granularity {granularity!r}")
    return actor.l.intersects(Interval(granule * unit, (granule + 1) * unit))


@dataclass(frozen=True)
class Scene:
    """Events of one song part recorded in the same location."""

    song_ref: Optional[tuple[str, int]]
    location: str
    event_ids: tuple[str, ...]


def scene_grouping(doc: AnnotationDocument) -> list[Scene]:
    """Partition events into scenes by (song part, location).

    Events without a song reference fall into distinguished "unassigned"
    scenes, listed last. Within a scene events are time-ordered.
    """
    groups: dict[tuple, list[DanceEvent]] = {}
    for ev in doc.events.values():
        part = (ev.song_ref[0], ev.song_ref[1]) if ev.song_ref else None
        groups.setdefault((part, ev.location), []).append(ev)

    def scene_key(item):
        (part, location), _ = item
        return (part is None, part or ("", -1), location)

    scenes = []
    for (part, location), evs in sorted(groups.items(), key=scene_key):
        ordered = sorted(evs, key=lambda e: (e.ml.segment.start, e.eid))
        scenes.append(
            Scene(song_ref=part, location=location,
                  event_ids=tuple(e.eid for e in ordered))
        )
    return scenes
