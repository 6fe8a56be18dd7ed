"""Relationships, the compatibility matrix, acyclicity and DOT export.

The annotation document is a typed graph. Edges carry one or more labels,
each tagged with a relationship category; which categories may link which
entity kinds is fixed by the compatibility matrix. Only composition edges
participate in the acyclicity constraint — temporal and spatial relations
between coexisting entities are inherently bidirectional.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import (
    CycleError,
    DanglingIdError,
    DuplicateIdError,
    InvalidValueError,
    MatrixViolationError,
    UnknownEventError,
)
from .model import AnnotationDocument, EntityKind


class RelationCategory(str, Enum):
    COMPOSITION = "composition"
    SPATIAL = "spatial"
    TEMPORAL = "temporal"
    MOTION = "motion"
    SEMANTIC = "semantic"
    ONTOLOGICAL = "ontological"

    @property
    def code(self) -> str:
        return _CATEGORY_CODES[self]


_CATEGORY_CODES = {
    RelationCategory.COMPOSITION: "C",
    RelationCategory.SPATIAL: "S",
    RelationCategory.TEMPORAL: "T",
    RelationCategory.MOTION: "M",
    RelationCategory.SEMANTIC: "SE",
    RelationCategory.ONTOLOGICAL: "O",
}

ONTOLOGICAL_LABELS = frozenset({"subClassOf", "cardinality", "intersection", "union"})


@dataclass(frozen=True)
class RelationLabel:
    category: RelationCategory
    label: str


@dataclass
class Relationship:
    """Typed directed edge between two entities.

    For actor-actor edges o1/o2 may reference the underlying dancers.
    """

    rid: str
    src: str
    tar: str
    labels: tuple[RelationLabel, ...]
    o1: Optional[str] = None
    o2: Optional[str] = None

    def __post_init__(self):
        if not self.labels:
            raise InvalidValueError(f"relationship {self.rid} needs at least one label")

    @property
    def categories(self) -> set[RelationCategory]:
        return {lab.category for lab in self.labels}

    @property
    def is_composition(self) -> bool:
        return RelationCategory.COMPOSITION in self.categories


# --------------------------------------------------------------------------
# Compatibility matrix
# --------------------------------------------------------------------------

_C = RelationCategory.COMPOSITION
_S = RelationCategory.SPATIAL
_T = RelationCategory.TEMPORAL
_M = RelationCategory.MOTION
_SE = RelationCategory.SEMANTIC
_O = RelationCategory.ONTOLOGICAL

_E, _OB, _A, _G, _CO = (
    EntityKind.EVENT,
    EntityKind.OBJECT,
    EntityKind.ACTOR,
    EntityKind.AGENT,
    EntityKind.CONCEPT,
)

# Motion is permitted exactly where spatial and temporal are jointly
# permitted (actor-actor and agent-agent).
_BASE: dict[tuple[EntityKind, EntityKind], frozenset[RelationCategory]] = {
    (_E, _E): frozenset({_C, _T, _SE}),
    (_E, _A): frozenset({_C}),
    (_E, _CO): frozenset({_C}),
    (_OB, _OB): frozenset({_C}),
    (_OB, _A): frozenset({_C}),
    (_OB, _G): frozenset({_C}),
    (_A, _A): frozenset({_S, _T, _SE, _M}),
    (_A, _G): frozenset({_C}),
    (_A, _CO): frozenset({_C}),
    (_G, _G): frozenset({_S, _T, _SE, _M}),
    (_CO, _CO): frozenset({_O}),
}


def _symmetric_closure(base) -> dict[tuple[EntityKind, EntityKind], frozenset]:
    full = {}
    for a in EntityKind:
        for b in EntityKind:
            full[(a, b)] = base.get((a, b), base.get((b, a), frozenset()))
    return full


COMPATIBILITY: dict[tuple[EntityKind, EntityKind], frozenset[RelationCategory]] = (
    _symmetric_closure(_BASE)
)


def permitted_categories(k1: EntityKind, k2: EntityKind) -> frozenset[RelationCategory]:
    return COMPATIBILITY[(k1, k2)]


# --------------------------------------------------------------------------
# Edge insertion and cycle detection
# --------------------------------------------------------------------------


def composition_edges(doc: AnnotationDocument) -> list[tuple[str, str]]:
    return [
        (r.src, r.tar)
        for r in sorted(doc.relationships.values(), key=lambda r: r.rid)
        if r.is_composition
    ]


def _find_path(edges: list[tuple[str, str]], start: str, goal: str) -> Optional[list[str]]:
    """Depth-first path start → goal over the given edges, or None."""
    adj: dict[str, list[str]] = {}
    for s, t in edges:
        adj.setdefault(s, []).append(t)
    stack = [(start, [start])]
    seen = set()
    while stack:
        node, path = stack.pop()
        if node == goal:
            return path
        if node in seen:
            continue
        seen.add(node)
        for nxt in sorted(adj.get(node, []), reverse=True):
            stack.append((nxt, path + [nxt]))
    return None


def is_acyclic(doc: AnnotationDocument) -> tuple[bool, Optional[list[str]]]:
    """Check the composition subgraph; on failure return a witness cycle."""
    edges = composition_edges(doc)
    adj: dict[str, list[str]] = {}
    for s, t in edges:
        adj.setdefault(s, []).append(t)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}
    for root in sorted(adj):
        if color.get(root, WHITE) != WHITE:
            continue
        stack: list[tuple[str, iter]] = [(root, iter(sorted(adj.get(root, []))))]
        color[root] = GRAY
        path = [root]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt, WHITE)
                if c == GRAY:
                    cycle = path[path.index(nxt):] + [nxt]
                    return False, cycle
                if c == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(sorted(adj.get(nxt, [])))))
                    path.append(nxt)
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return True, None


def _next_rid(doc: AnnotationDocument) -> str:
    n = len(doc.relationships) + 1
    while f"r{n:04d}" in doc.relationships:
        n += 1
    return f"r{n:04d}"


def add_relationship(doc: AnnotationDocument, rel: Relationship) -> str:
    """Store an edge iff it is matrix-legal and keeps composition acyclic.

    A rejected relationship leaves the document unchanged.
    """
    if not rel.rid:
        rel.rid = _next_rid(doc)
    if rel.rid in doc.relationships:
        raise DuplicateIdError(f"relationship id {rel.rid!r} already in use",
                               subject=rel.rid)
    src_kind = doc.kind_of(rel.src)
    if src_kind is None:
        raise DanglingIdError(f"relationship source {rel.src!r} not found",
                              subject=rel.src)
    tar_kind = doc.kind_of(rel.tar)
    if tar_kind is None:
        raise DanglingIdError(f"relationship target {rel.tar!r} not found",
                              subject=rel.tar)
    allowed = permitted_categories(src_kind, tar_kind)
    for lab in rel.labels:
        if lab.category not in allowed:
            raise MatrixViolationError(
                f"category {lab.category.code} not permitted between "
                f"{src_kind.value} and {tar_kind.value}",
                subject=rel.rid,
            )
        if (
            lab.category is RelationCategory.ONTOLOGICAL
            and lab.label not in ONTOLOGICAL_LABELS
        ):
            raise MatrixViolationError(
                f"unknown ontological label {lab.label!r}", subject=rel.rid
            )
    if rel.is_composition:
        if rel.src == rel.tar:
            raise CycleError(
                f"composition edge {rel.src} → {rel.tar} is a self-loop",
                path=[rel.src, rel.tar],
            )
        back = _find_path(composition_edges(doc), rel.tar, rel.src)
        if back is not None:
            raise CycleError(
                "composition edge would close cycle " + " → ".join([rel.src] + back),
                path=[rel.src] + back,
            )
    doc.relationships[rel.rid] = rel
    return rel.rid


# --------------------------------------------------------------------------
# DOT export (instance-graph rendering)
# --------------------------------------------------------------------------

_NODE_STYLE = {
    EntityKind.EVENT: 'shape=trapezium',
    EntityKind.ACTOR: 'shape=box, style=dotted',
    EntityKind.AGENT: 'shape=box, style=bold',
    EntityKind.CONCEPT: 'shape=box, style=rounded',
    EntityKind.OBJECT: 'shape=box',
}


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _node_caption(doc: AnnotationDocument, entity_id: str, kind: EntityKind) -> str:
    if kind is EntityKind.EVENT:
        return doc.events[entity_id].d
    if kind is EntityKind.ACTOR:
        return doc.actors[entity_id].r
    if kind is EntityKind.AGENT:
        g = doc.agents[entity_id]
        return f"{g.body_part}: {g.x}"
    if kind is EntityKind.CONCEPT:
        c = doc.concepts[entity_id]
        return f"{c.t.value}: {c.d}"
    obj = doc.objects[entity_id]
    return ", ".join(f"{a}={v}" for a, v in obj.v) or entity_id


def _event_closure(doc: AnnotationDocument, eid: str) -> set[str]:
    ids = {eid}
    ids.update(a.aid for a in doc.actors.values() if a.eid == eid)
    ids.update(g.agid for g in doc.agents.values() if g.eid == eid)
    ids.update(c.cid for c in doc.concepts.values() if c.eid == eid)
    ids.update(o.oid for o in doc.objects.values() if o.ty in ids)
    return ids


def export_dot(doc: AnnotationDocument, event: Optional[str] = None) -> str:
    """Render the entity graph (optionally one event's closure) as DOT."""
    if event is not None:
        if event not in doc.events:
            raise UnknownEventError(f"event {event!r} not found", subject=event)
        selected = _event_closure(doc, event)
    else:
        selected = {
            i
            for bucket in (doc.events, doc.actors, doc.agents, doc.objects,
                           doc.concepts)
            for i in bucket
        }

    lines = ["digraph dvsm {", "  rankdir=TB;"]
    for entity_id in sorted(selected):
        kind = doc.kind_of(entity_id)
        caption = (
            _dot_escape(entity_id)
            + "\\n"
            + _dot_escape(_node_caption(doc, entity_id, kind))
        )
        lines.append(f'  "{entity_id}" [{_NODE_STYLE[kind]}, label="{caption}"];')
    for rid in sorted(doc.relationships):
        rel = doc.relationships[rid]
        if rel.src not in selected or rel.tar not in selected:
            continue
        for lab in rel.labels:
            text = _dot_escape(lab.label)
            lines.append(f'  "{rel.src}" -> "{rel.tar}" [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
