"""Event-level predicates and derived-relation inference.

All predicates are read-only and return deterministic match lists with the
evidence (labels, lifespans, intervals) that justified each match.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .algebra import (
    ALLEN_DISJOINT,
    AllenRelation,
    DirRelation,
    MotionParams,
    MotionRelation,
    allen_relation,
    directional_relation,
    interpolate,
    motion_relation,
)
from .errors import (
    EmptyFilterError,
    NoOverlapError,
    UnknownActorError,
    UnknownEventError,
)
from .graph import RelationCategory, RelationLabel
from .model import IDLE_ACTION, AgentVocabulary, AnnotationDocument, Interval


@dataclass(frozen=True)
class Match:
    ids: tuple[str, ...]
    explanation: dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class QueryResult:
    matches: tuple[Match, ...]

    def __bool__(self) -> bool:
        return bool(self.matches)

    def __len__(self) -> int:
        return len(self.matches)

    @property
    def id_pairs(self) -> list[tuple[str, ...]]:
        return [m.ids for m in self.matches]


def _event_start(doc: AnnotationDocument, eid: str) -> int:
    return doc.events[eid].ml.segment.start


# --------------------------------------------------------------------------
# Event predicates
# --------------------------------------------------------------------------

#: Allen relations under which one segment wholly precedes another.
_PRECEDES = frozenset({AllenRelation.BEFORE, AllenRelation.MEETS})


def repeats(
    doc: AnnotationDocument, action: str, actor: Optional[str] = None
) -> QueryResult:
    """Ordered event pairs (E1, E2) where E2 repeats E1's action later.

    Requires the same agent action in both events and strict temporal
    precedence of E1's segment. The optional ``actor`` filters on the
    repeating performer in E2, by role or dancer id.
    """
    if not action:
        raise EmptyFilterError("repeats requires a non-empty action")
    matches = []
    events = sorted(doc.events.values(), key=lambda e: (e.ml.segment.start, e.eid))
    for e1 in events:
        if not any(
            g.x == action for g in doc.agents.values() if g.eid == e1.eid
        ):
            continue
        for e2 in events:
            if e2.eid == e1.eid:
                continue
            rel = allen_relation(e1.ml.segment, e2.ml.segment)
            if rel not in _PRECEDES:
                continue
            performers = []
            for g in sorted(
                (g for g in doc.agents.values() if g.eid == e2.eid),
                key=lambda g: g.agid,
            ):
                if g.x != action:
                    continue
                owner = doc.actors.get(g.aid)
                if actor is not None and (
                    owner is None or (owner.r != actor and owner.did != actor)
                ):
                    continue
                performers.append(g.agid)
            if performers:
                matches.append(
                    Match(
                        ids=(e1.eid, e2.eid),
                        explanation={
                            "action": action,
                            "allen": rel.value,
                            "performing_agents": performers,
                        },
                    )
                )
    return QueryResult(matches=tuple(matches))


def follows(doc: AnnotationDocument, event: str, gap_ms: int = 500) -> QueryResult:
    """Events starting within gap_ms of the given event's end, with a
    dancer line-up differing in at least one member."""
    base = doc.events.get(event)
    if base is None:
        raise UnknownEventError(f"event {event!r} not found", subject=event)
    base_dancers = doc.event_dancers(event)
    lo = base.ml.segment.end
    hi = lo + gap_ms
    matches = []
    for e2 in sorted(doc.events.values(), key=lambda e: (e.ml.segment.start, e.eid)):
        if e2.eid == event:
            continue
        if not lo <= e2.ml.segment.start <= hi:
            continue
        if doc.event_dancers(e2.eid) == base_dancers:
            continue
        matches.append(
            Match(
                ids=(e2.eid,),
                explanation={
                    "start": e2.ml.segment.start,
                    "gap": e2.ml.segment.start - lo,
                },
            )
        )
    return QueryResult(matches=tuple(matches))


def _require_actor(doc: AnnotationDocument, aid: str):
    actor = doc.actors.get(aid)
    if actor is None:
        raise UnknownActorError(f"actor {aid!r} not found", subject=aid)
    return actor


def _overlapping(l1: Interval, l2: Interval) -> bool:
    return allen_relation(l1, l2) not in ALLEN_DISJOINT


def perform_same_step(
    doc: AnnotationDocument, actor1: str, actor2: str
) -> QueryResult:
    """Agent pairs of the two actors with the same action on the same body
    part over temporally overlapping lifespans."""
    _require_actor(doc, actor1)
    _require_actor(doc, actor2)
    norm = AgentVocabulary.normalize
    matches = []
    for g1 in doc.agents_of_actor(actor1):
        for g2 in doc.agents_of_actor(actor2):
            if g1.agid == g2.agid:
                continue
            if actor1 == actor2 and g1.agid > g2.agid:
                continue  # unordered when comparing an actor with itself
            if g1.x != g2.x or norm(g1.body_part) != norm(g2.body_part):
                continue
            if not _overlapping(g1.l, g2.l):
                continue
            matches.append(
                Match(
                    ids=(g1.agid, g2.agid),
                    explanation={
                        "action": g1.x,
                        "body_part": norm(g1.body_part),
                        "overlap": [
                            max(g1.l.start, g2.l.start),
                            min(g1.l.end, g2.l.end),
                        ],
                    },
                )
            )
    return QueryResult(matches=tuple(matches))


def perform_different_step(
    doc: AnnotationDocument, actor1: str, actor2: str
) -> QueryResult:
    """Agent pairs with overlapping lifespans but differing action labels."""
    _require_actor(doc, actor1)
    _require_actor(doc, actor2)
    matches = []
    for g1 in doc.agents_of_actor(actor1):
        for g2 in doc.agents_of_actor(actor2):
            if g1.agid == g2.agid:
                continue
            if actor1 == actor2 and g1.agid > g2.agid:
                continue
            if g1.x == g2.x:
                continue
            if not _overlapping(g1.l, g2.l):
                continue
            matches.append(
                Match(
                    ids=(g1.agid, g2.agid),
                    explanation={
                        "actions": [g1.x, g2.x],
                        "overlap": [
                            max(g1.l.start, g2.l.start),
                            min(g1.l.end, g2.l.end),
                        ],
                    },
                )
            )
    return QueryResult(matches=tuple(matches))


def _subtract(interval: tuple[int, int], blocks: list[tuple[int, int]]):
    """Parts of interval not covered by any block, in time order."""
    remainder = [interval]
    for bs, be in sorted(blocks):
        next_rem = []
        for s, e in remainder:
            if be <= s or e <= bs:
                next_rem.append((s, e))
                continue
            if s < bs:
                next_rem.append((s, bs))
            if be < e:
                next_rem.append((be, e))
        remainder = next_rem
    return [(s, e) for s, e in remainder if e > s]


def observe(doc: AnnotationDocument, observer: str, performer: str) -> QueryResult:
    """Windows where the observer is idle while the performer acts.

    A match requires a sub-interval of the actors' lifespan overlap in
    which the performer has a non-idle agent action and the observer has
    none.
    """
    obs = _require_actor(doc, observer)
    perf = _require_actor(doc, performer)
    if not obs.l.intersects(perf.l):
        return QueryResult(matches=())
    lo = max(obs.l.start, perf.l.start)
    hi = min(obs.l.end, perf.l.end)
    busy = [
        (g.l.start, g.l.end)
        for g in doc.agents_of_actor(observer)
        if g.x != IDLE_ACTION
    ]
    matches = []
    for g in doc.agents_of_actor(performer):
        if g.x == IDLE_ACTION:
            continue
        s = max(g.l.start, lo)
        e = min(g.l.end, hi)
        if e <= s:
            continue
        for ws, we in _subtract((s, e), busy):
            matches.append(
                Match(
                    ids=(observer, performer),
                    explanation={
                        "performing_agent": g.agid,
                        "action": g.x,
                        "interval": [ws, we],
                    },
                )
            )
    return QueryResult(matches=tuple(matches))


# --------------------------------------------------------------------------
# Derived actor relations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ActorRelationInference:
    directional: DirRelation
    temporal: AllenRelation
    motion: MotionRelation

    @property
    def labels(self) -> list[RelationLabel]:
        return [
            RelationLabel(RelationCategory.SPATIAL, self.directional.value),
            RelationLabel(RelationCategory.TEMPORAL, self.temporal.value),
            RelationLabel(RelationCategory.MOTION, self.motion.value),
        ]


def infer_actor_relations(
    doc: AnnotationDocument,
    actor1: str,
    actor2: str,
    params: MotionParams = MotionParams(),
) -> ActorRelationInference:
    """Directional relation at the first shared trajectory time, Allen
    relation of the lifespans, and motion over the shared span."""
    a1 = _require_actor(doc, actor1)
    a2 = _require_actor(doc, actor2)
    start = max(a1.t.span[0], a2.t.span[0])
    end = min(a1.t.span[1], a2.t.span[1])
    if start > end:
        raise NoOverlapError(
            f"trajectories of {actor1} and {actor2} never coexist"
        )
    direction = directional_relation(
        interpolate(a1.t, start), interpolate(a2.t, start), eps_d=params.eps_d
    )
    return ActorRelationInference(
        directional=direction,
        temporal=allen_relation(a1.l, a2.l),
        motion=motion_relation(a1.t, a2.t, params),
    )


# --------------------------------------------------------------------------
# Attribute search
# --------------------------------------------------------------------------

FIND_FIELDS = ("action", "body_part", "concept_kind", "concept_text",
               "song_part", "role")


def find_events(
    doc: AnnotationDocument,
    action: Optional[str] = None,
    body_part: Optional[str] = None,
    concept_kind: Optional[str] = None,
    concept_text: Optional[str] = None,
    song_part: Optional[str] = None,
    role: Optional[str] = None,
) -> QueryResult:
    """Events matching the conjunction of the set filter fields."""
    if all(
        v is None
        for v in (action, body_part, concept_kind, concept_text, song_part, role)
    ):
        raise EmptyFilterError("find_events requires at least one filter field")
    norm = AgentVocabulary.normalize
    matches = []
    for ev in sorted(doc.events.values(), key=lambda e: (e.ml.segment.start, e.eid)):
        agents = [g for g in doc.agents.values() if g.eid == ev.eid]
        actors = [a for a in doc.actors.values() if a.eid == ev.eid]
        concepts = [c for c in doc.concepts.values() if c.eid == ev.eid]
        why: dict[str, Any] = {}
        if action is not None:
            hits = sorted(g.agid for g in agents if g.x == action)
            if not hits:
                continue
            why["action"] = hits
        if body_part is not None:
            hits = sorted(
                g.agid for g in agents if norm(g.body_part) == norm(body_part)
            )
            if not hits:
                continue
            why["body_part"] = hits
        if concept_kind is not None:
            hits = sorted(c.cid for c in concepts if c.t.value == concept_kind)
            if not hits:
                continue
            why["concept_kind"] = hits
        if concept_text is not None:
            needle = concept_text.lower()
            hits = sorted(c.cid for c in concepts if needle in c.d.lower())
            if not hits:
                continue
            why["concept_text"] = hits
        if song_part is not None:
            if ev.song_ref is None:
                continue
            song = doc.song(ev.song_ref[0])
            part = song.part(ev.song_ref[1]) if song else None
            if part is None or part.kind.value != song_part:
                continue
            why["song_part"] = [f"{ev.song_ref[0]}:{ev.song_ref[1]}"]
        if role is not None:
            hits = sorted(a.aid for a in actors if a.r == role)
            if not hits:
                continue
            why["role"] = hits
        matches.append(Match(ids=(ev.eid,), explanation=why))
    return QueryResult(matches=tuple(matches))
