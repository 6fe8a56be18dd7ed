"""Whole-document constraint checking.

Produces a structured report instead of raising: problems in annotator
data are findings, not failures. The checks cover referential integrity,
lifespan containment (actor within event, agent within actor), dancer
count consistency, body-part vocabulary membership, trajectory-within-
lifespan, the relationship compatibility matrix, and composition
acyclicity.
"""
from __future__ import annotations

from .graph import (
    ONTOLOGICAL_LABELS,
    RelationCategory,
    is_acyclic,
    permitted_categories,
)
from .model import (
    AnnotationDocument,
    Finding,
    Severity,
    Trajectory,
    ValidationReport,
)


def _err(code: str, subject: str, message: str) -> Finding:
    return Finding(severity=Severity.ERROR, code=code, subject=subject, message=message)


def _trajectory_findings(subject: str, traj: Trajectory, lifespan) -> list[Finding]:
    bad = [p.t for p in traj.points if not lifespan.contains_time(p.t)]
    if not bad:
        return []
    return [
        _err(
            "TRAJECTORY_OUTSIDE_LIFESPAN",
            subject,
            f"trajectory time(s) {bad} outside lifespan "
            f"[{lifespan.start}, {lifespan.end})",
        )
    ]


def validate_document(doc: AnnotationDocument) -> ValidationReport:
    """Check every invariant; deterministic, pure, idempotent."""
    findings: list[Finding] = []

    for ev in doc.events.values():
        distinct_dancers = set()
        for aid in ev.al:
            actor = doc.actors.get(aid)
            if actor is None:
                findings.append(
                    _err("DANGLING_ID", ev.eid,
                         f"event {ev.eid} lists unknown actor {aid!r}")
                )
            elif actor.eid != ev.eid:
                findings.append(
                    _err("OWNER_MISMATCH", ev.eid,
                         f"event {ev.eid} lists actor {aid} owned by {actor.eid}")
                )
        for actor in doc.actors.values():
            if actor.eid == ev.eid:
                distinct_dancers.add(actor.did)
        if ev.nd != len(distinct_dancers):
            findings.append(
                _err(
                    "ND_MISMATCH",
                    ev.eid,
                    f"event {ev.eid} declares nd={ev.nd} but its actors "
                    f"reference {len(distinct_dancers)} distinct dancer(s)",
                )
            )
        if ev.song_ref is not None:
            song_id, part_index, line_index = ev.song_ref
            song = doc.song(song_id)
            if song is None:
                findings.append(
                    _err("DANGLING_ID", ev.eid,
                         f"event {ev.eid} references unknown song {song_id!r}")
                )
            else:
                part = song.part(part_index)
                if part is None:
                    findings.append(
                        _err("DANGLING_ID", ev.eid,
                             f"event {ev.eid} references missing part "
                             f"{part_index} of song {song_id}")
                    )
                elif line_index is not None and not 0 <= line_index < len(part.lines):
                    findings.append(
                        _err("DANGLING_ID", ev.eid,
                             f"event {ev.eid} references missing line "
                             f"{line_index} of song {song_id} part {part_index}")
                    )

    for actor in doc.actors.values():
        event = doc.events.get(actor.eid)
        if event is None:
            findings.append(
                _err("DANGLING_ID", actor.aid,
                     f"actor {actor.aid} references unknown event {actor.eid!r}")
            )
        else:
            if actor.aid not in event.al:
                findings.append(
                    _err("OWNER_MISMATCH", actor.aid,
                         f"actor {actor.aid} missing from event {event.eid} "
                         "actor list")
                )
            if not event.ml.segment.contains(actor.l):
                findings.append(
                    _err(
                        "LIFESPAN_CONTAINMENT",
                        actor.aid,
                        f"actor {actor.aid} lifespan [{actor.l.start}, "
                        f"{actor.l.end}) exceeds event segment "
                        f"[{event.ml.segment.start}, {event.ml.segment.end})",
                    )
                )
        if actor.did not in doc.dancers:
            findings.append(
                _err("DANGLING_ID", actor.aid,
                     f"actor {actor.aid} references unknown dancer {actor.did!r}")
            )
        findings.extend(_trajectory_findings(actor.aid, actor.t, actor.l))

    for agent in doc.agents.values():
        owner = doc.actors.get(agent.aid)
        if owner is None:
            findings.append(
                _err("DANGLING_ID", agent.agid,
                     f"agent {agent.agid} references unknown actor {agent.aid!r}")
            )
        else:
            if owner.eid != agent.eid:
                findings.append(
                    _err("OWNER_MISMATCH", agent.agid,
                         f"agent {agent.agid} names event {agent.eid} but its "
                         f"actor belongs to {owner.eid}")
                )
            if not owner.l.contains(agent.l):
                findings.append(
                    _err(
                        "LIFESPAN_CONTAINMENT",
                        agent.agid,
                        f"agent {agent.agid} lifespan [{agent.l.start}, "
                        f"{agent.l.end}) exceeds actor {owner.aid} lifespan "
                        f"[{owner.l.start}, {owner.l.end})",
                    )
                )
        if agent.eid not in doc.events:
            findings.append(
                _err("DANGLING_ID", agent.agid,
                     f"agent {agent.agid} references unknown event {agent.eid!r}")
            )
        if agent.body_part not in doc.vocabulary:
            findings.append(
                _err("VOCAB_UNKNOWN", agent.agid,
                     f"agent {agent.agid} body part {agent.body_part!r} "
                     "not in vocabulary")
            )
        findings.extend(_trajectory_findings(agent.agid, agent.t, agent.l))

    for concept in doc.concepts.values():
        owner = doc.actors.get(concept.aid)
        if owner is None:
            findings.append(
                _err("DANGLING_ID", concept.cid,
                     f"concept {concept.cid} references unknown actor "
                     f"{concept.aid!r}")
            )
        elif owner.eid != concept.eid:
            findings.append(
                _err("OWNER_MISMATCH", concept.cid,
                     f"concept {concept.cid} names event {concept.eid} but its "
                     f"actor belongs to {owner.eid}")
            )
        if concept.eid not in doc.events:
            findings.append(
                _err("DANGLING_ID", concept.cid,
                     f"concept {concept.cid} references unknown event "
                     f"{concept.eid!r}")
            )

    for obj in doc.objects.values():
        if obj.ty is not None and obj.ty not in doc.actors and obj.ty not in doc.agents:
            findings.append(
                _err("DANGLING_ID", obj.oid,
                     f"object {obj.oid} owner {obj.ty!r} is not an actor or agent")
            )

    for rid in sorted(doc.relationships):
        rel = doc.relationships[rid]
        src_kind = doc.kind_of(rel.src)
        tar_kind = doc.kind_of(rel.tar)
        if src_kind is None:
            findings.append(
                _err("DANGLING_ID", rid,
                     f"relationship {rid} source {rel.src!r} not found")
            )
        if tar_kind is None:
            findings.append(
                _err("DANGLING_ID", rid,
                     f"relationship {rid} target {rel.tar!r} not found")
            )
        if src_kind is None or tar_kind is None:
            continue
        allowed = permitted_categories(src_kind, tar_kind)
        for lab in rel.labels:
            if lab.category not in allowed:
                findings.append(
                    _err(
                        "MATRIX_VIOLATION",
                        rid,
                        f"relationship {rid}: category {lab.category.code} "
                        f"not permitted between {src_kind.value} and "
                        f"{tar_kind.value}",
                    )
                )
            elif (
                lab.category is RelationCategory.ONTOLOGICAL
                and lab.label not in ONTOLOGICAL_LABELS
            ):
                findings.append(
                    _err("MATRIX_VIOLATION", rid,
                         f"relationship {rid}: unknown ontological label "
                         f"{lab.label!r}")
                )

    ok, cycle = is_acyclic(doc)
    if not ok:
        findings.append(
            _err("CYCLE", cycle[0],
                 "composition cycle: " + " → ".join(cycle))
        )

    ordered = tuple(sorted(findings, key=lambda f: (f.subject, f.code, f.message)))
    return ValidationReport(findings=ordered)
