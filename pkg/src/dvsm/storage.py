"""Persistence for annotation documents: the "dvsm-1" JSON format.

One UTF-8 JSON document per video with top-level sections version, macro,
dancers, songs, entities, relationships (plus an optional vocabulary
section for user-added body-part terms). Serialization is deterministic:
keys sorted, entity lists sorted by id, so semantically equal documents
produce identical bytes.

Loading performs schema validation only; semantic constraints are the
business of :func:`dvsm.validation.validate_document`, so intentionally
broken documents remain loadable and reportable.
"""
from __future__ import annotations

import json
import os
import tempfile
from datetime import date, time
from pathlib import Path
from typing import Any, Optional

from .errors import (
    DvsmError,
    ParseError,
    SchemaError,
    VersionUnsupportedError,
)
from .graph import RelationCategory, RelationLabel, Relationship
from .model import (
    Actor,
    Agent,
    AgentVocabulary,
    AnnotationDocument,
    Box,
    ConceptEntity,
    ConceptKind,
    DanceEvent,
    Dancer,
    Interval,
    MacroFeatures,
    MediaLocator,
    ObjectEntity,
    RecordingContext,
    Sex,
    Song,
    SongPart,
    SongPartKind,
    Speed,
    Trajectory,
    TrajectoryPoint,
    VenueType,
    VideoType,
)

FORMAT_VERSION = "dvsm-1"

_TOP_LEVEL = {"version", "macro", "dancers", "songs", "entities", "relationships",
              "vocabulary"}
_REQUIRED = {"version", "macro", "dancers", "songs", "entities", "relationships"}
_ENTITY_SECTIONS = {"events", "actors", "agents", "objects", "concepts"}


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def _interval_dict(iv: Interval) -> dict:
    return {"start": iv.start, "end": iv.end}


def _trajectory_dict(t: Trajectory) -> dict:
    points = []
    for p in t.points:
        d: dict[str, Any] = {"t": p.t, "cx": p.cx, "cy": p.cy}
        d["box"] = (
            [p.box.xmin, p.box.ymin, p.box.xmax, p.box.ymax] if p.box else None
        )
        points.append(d)
    return {"points": points}


def to_dict(doc: AnnotationDocument) -> dict:
    """Plain-data form of a document (doc id excluded; ids live outside)."""
    m = doc.macro
    return {
        "version": FORMAT_VERSION,
        "macro": {
            "recording_date": m.recording_date.isoformat(),
            "recording_time": (
                m.recording_time.isoformat() if m.recording_time else None
            ),
            "dance_origin": m.dance_origin,
            "venue_type": m.venue_type.value,
            "song_type": m.song_type,
            "accompaniment_type": m.accompaniment_type,
            "instruments": list(m.instruments),
            "video_type": m.video_type.value,
            "context": m.context.value,
            "num_dancers": m.num_dancers,
        },
        "dancers": [
            {
                "did": d.did,
                "name": d.name,
                "sex": d.sex.value,
                "age": d.age,
                "origin": d.origin,
            }
            for d in sorted(doc.dancers.values(), key=lambda d: d.did)
        ],
        "songs": [
            {
                "song_id": s.song_id,
                "title": s.title,
                "parts": [
                    {"kind": p.kind.value, "index": p.index, "lines": list(p.lines)}
                    for p in s.parts
                ],
            }
            for s in doc.songs
        ],
        "entities": {
            "events": [
                {
                    "eid": e.eid,
                    "d": e.d,
                    "al": sorted(e.al),
                    "nd": e.nd,
                    "ml": {
                        "uri": e.ml.uri,
                        "segment": _interval_dict(e.ml.segment),
                    },
                    "song_ref": (
                        {
                            "song_id": e.song_ref[0],
                            "part_index": e.song_ref[1],
                            "line_index": e.song_ref[2],
                        }
                        if e.song_ref
                        else None
                    ),
                    "location": e.location,
                }
                for e in sorted(doc.events.values(), key=lambda e: e.eid)
            ],
            "actors": [
                {
                    "aid": a.aid,
                    "eid": a.eid,
                    "did": a.did,
                    "r": a.r,
                    "l": _interval_dict(a.l),
                    "t": _trajectory_dict(a.t),
                    "p": a.p,
                }
                for a in sorted(doc.actors.values(), key=lambda a: a.aid)
            ],
            "agents": [
                {
                    "agid": g.agid,
                    "aid": g.aid,
                    "eid": g.eid,
                    "l": _interval_dict(g.l),
                    "t": _trajectory_dict(g.t),
                    "x": g.x,
                    "s": g.s.value,
                    "i": g.i,
                    "body_part": g.body_part,
                }
                for g in sorted(doc.agents.values(), key=lambda g: g.agid)
            ],
            "objects": [
                {"oid": o.oid, "v": [[a, v] for a, v in o.v], "ty": o.ty}
                for o in sorted(doc.objects.values(), key=lambda o: o.oid)
            ],
            "concepts": [
                {"cid": c.cid, "aid": c.aid, "eid": c.eid, "t": c.t.value, "d": c.d}
                for c in sorted(doc.concepts.values(), key=lambda c: c.cid)
            ],
        },
        "relationships": [
            {
                "rid": r.rid,
                "src": r.src,
                "tar": r.tar,
                "labels": [
                    {"category": lab.category.value, "label": lab.label}
                    for lab in r.labels
                ],
                "o1": r.o1,
                "o2": r.o2,
            }
            for r in sorted(doc.relationships.values(), key=lambda r: r.rid)
        ],
        "vocabulary": {"extra_terms": sorted(doc.vocabulary.extra_terms)},
    }


def save_document(doc: AnnotationDocument) -> bytes:
    """Deterministic UTF-8 byte stream for a document."""
    text = json.dumps(to_dict(doc), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def save_file(doc: AnnotationDocument, path: Path | str) -> None:
    """Write atomically: temporary file in the same directory, then rename."""
    path = Path(path)
    data = save_document(doc)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def documents_equal(a: AnnotationDocument, b: AnnotationDocument) -> bool:
    """Semantic equality: same macro, songs, dancers, entities, edges."""
    return to_dict(a) == to_dict(b)


# --------------------------------------------------------------------------
# Deserialization
# --------------------------------------------------------------------------


def _expect(value, kinds, path: str):
    if not isinstance(value, kinds):
        names = (
            kinds.__name__
            if isinstance(kinds, type)
            else "/".join(k.__name__ for k in kinds)
        )
        raise SchemaError(f"{path}: expected {names}, got {type(value).__name__}")
    return value


def _get(d: dict, key: str, path: str):
    if key not in d:
        raise SchemaError(f"{path}.{key}: missing required field")
    return d[key]


def _check_keys(d: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise SchemaError(f"{path}.{unknown[0]}: unknown field")


def _enum(cls, value, path: str):
    try:
        return cls(_expect(value, str, path))
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise SchemaError(f"{path}: {value!r} not one of: {valid}") from None


def _domain(path: str):
    """Context manager converting domain invariant errors to schema errors."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, DvsmError) and not isinstance(
                exc, SchemaError
            ):
                raise SchemaError(f"{path}: {exc}") from None
            return False

    return _Ctx()


def _parse_interval(d, path: str) -> Interval:
    _expect(d, dict, path)
    _check_keys(d, {"start", "end"}, path)
    start = _expect(_get(d, "start", path), int, f"{path}.start")
    end = _expect(_get(d, "end", path), int, f"{path}.end")
    with _domain(path):
        return Interval(start, end)


def _parse_trajectory(d, path: str) -> Trajectory:
    _expect(d, dict, path)
    _check_keys(d, {"points"}, path)
    raw_points = _expect(_get(d, "points", path), list, f"{path}.points")
    points = []
    for i, rp in enumerate(raw_points):
        ppath = f"{path}.points[{i}]"
        _expect(rp, dict, ppath)
        _check_keys(rp, {"t", "cx", "cy", "box"}, ppath)
        t = _expect(_get(rp, "t", ppath), int, f"{ppath}.t")
        cx = float(_expect(_get(rp, "cx", ppath), (int, float), f"{ppath}.cx"))
        cy = float(_expect(_get(rp, "cy", ppath), (int, float), f"{ppath}.cy"))
        box = None
        raw_box = rp.get("box")
        if raw_box is not None:
            _expect(raw_box, list, f"{ppath}.box")
            if len(raw_box) != 4:
                raise SchemaError(f"{ppath}.box: expected 4 coordinates")
            with _domain(f"{ppath}.box"):
                box = Box(*(float(v) for v in raw_box))
        with _domain(ppath):
            points.append(TrajectoryPoint(t=t, cx=cx, cy=cy, box=box))
    with _domain(path):
        return Trajectory(points=tuple(points))


def _parse_macro(d, path: str = "macro") -> MacroFeatures:
    _expect(d, dict, path)
    fields = {
        "recording_date", "recording_time", "dance_origin", "venue_type",
        "song_type", "accompaniment_type", "instruments", "video_type",
        "context", "num_dancers",
    }
    _check_keys(d, fields, path)
    try:
        recording_date = date.fromisoformat(
            _expect(_get(d, "recording_date", path), str, f"{path}.recording_date")
        )
    except ValueError:
        raise SchemaError(f"{path}.recording_date: invalid date") from None
    recording_time = None
    if d.get("recording_time") is not None:
        try:
            recording_time = time.fromisoformat(
                _expect(d["recording_time"], str, f"{path}.recording_time")
            )
        except ValueError:
            raise SchemaError(f"{path}.recording_time: invalid time") from None
    instruments = _expect(_get(d, "instruments", path), list, f"{path}.instruments")
    with _domain(path):
        return MacroFeatures(
            recording_date=recording_date,
            recording_time=recording_time,
            dance_origin=_expect(
                _get(d, "dance_origin", path), str, f"{path}.dance_origin"
            ),
            venue_type=_enum(VenueType, _get(d, "venue_type", path),
                             f"{path}.venue_type"),
            song_type=_expect(_get(d, "song_type", path), str, f"{path}.song_type"),
            accompaniment_type=_expect(
                _get(d, "accompaniment_type", path), str,
                f"{path}.accompaniment_type"
            ),
            instruments=tuple(
                _expect(x, str, f"{path}.instruments[{i}]")
                for i, x in enumerate(instruments)
            ),
            video_type=_enum(VideoType, _get(d, "video_type", path),
                             f"{path}.video_type"),
            context=_enum(RecordingContext, _get(d, "context", path),
                          f"{path}.context"),
            num_dancers=_expect(
                _get(d, "num_dancers", path), int, f"{path}.num_dancers"
            ),
        )


def _parse_songs(raw, path: str = "songs") -> list[Song]:
    _expect(raw, list, path)
    songs = []
    for i, rs in enumerate(raw):
        spath = f"{path}[{i}]"
        _expect(rs, dict, spath)
        _check_keys(rs, {"song_id", "title", "parts"}, spath)
        raw_parts = _expect(_get(rs, "parts", spath), list, f"{spath}.parts")
        parts = []
        for j, rp in enumerate(raw_parts):
            ppath = f"{spath}.parts[{j}]"
            _expect(rp, dict, ppath)
            _check_keys(rp, {"kind", "index", "lines"}, ppath)
            lines = _expect(_get(rp, "lines", ppath), list, f"{ppath}.lines")
            parts.append(
                SongPart(
                    kind=_enum(SongPartKind, _get(rp, "kind", ppath),
                               f"{ppath}.kind"),
                    index=_expect(_get(rp, "index", ppath), int, f"{ppath}.index"),
                    lines=tuple(
                        _expect(x, str, f"{ppath}.lines[{k}]")
                        for k, x in enumerate(lines)
                    ),
                )
            )
        with _domain(spath):
            songs.append(
                Song(
                    song_id=_expect(_get(rs, "song_id", spath), str,
                                    f"{spath}.song_id"),
                    title=_expect(_get(rs, "title", spath), str, f"{spath}.title"),
                    parts=tuple(parts),
                )
            )
    return songs


def _parse_dancers(raw, path: str = "dancers") -> dict[str, Dancer]:
    _expect(raw, list, path)
    dancers: dict[str, Dancer] = {}
    for i, rd in enumerate(raw):
        dpath = f"{path}[{i}]"
        _expect(rd, dict, dpath)
        _check_keys(rd, {"did", "name", "sex", "age", "origin"}, dpath)
        did = _expect(_get(rd, "did", dpath), str, f"{dpath}.did")
        if did in dancers:
            raise SchemaError(f"{dpath}.did: duplicate id {did!r}")
        age = rd.get("age")
        if age is not None:
            age = _expect(age, int, f"{dpath}.age")
        origin = rd.get("origin")
        if origin is not None:
            origin = _expect(origin, str, f"{dpath}.origin")
        dancers[did] = Dancer(
            did=did,
            name=_expect(_get(rd, "name", dpath), str, f"{dpath}.name"),
            sex=_enum(Sex, _get(rd, "sex", dpath), f"{dpath}.sex"),
            age=age,
            origin=origin,
        )
    return dancers


def parse_entity(kind: str, d: dict, path: str = "entity"):
    """Parse one entity of the given kind from its dvsm-1 fragment."""
    if kind == "event":
        _check_keys(d, {"eid", "d", "al", "nd", "ml", "song_ref", "location"}, path)
        ml_raw = _expect(_get(d, "ml", path), dict, f"{path}.ml")
        _check_keys(ml_raw, {"uri", "segment"}, f"{path}.ml")
        ml = MediaLocator(
            uri=_expect(_get(ml_raw, "uri", f"{path}.ml"), str, f"{path}.ml.uri"),
            segment=_parse_interval(
                _get(ml_raw, "segment", f"{path}.ml"), f"{path}.ml.segment"
            ),
        )
        song_ref = None
        raw_ref = d.get("song_ref")
        if raw_ref is not None:
            rpath = f"{path}.song_ref"
            _expect(raw_ref, dict, rpath)
            _check_keys(raw_ref, {"song_id", "part_index", "line_index"}, rpath)
            line_index = raw_ref.get("line_index")
            if line_index is not None:
                line_index = _expect(line_index, int, f"{rpath}.line_index")
            song_ref = (
                _expect(_get(raw_ref, "song_id", rpath), str, f"{rpath}.song_id"),
                _expect(_get(raw_ref, "part_index", rpath), int,
                        f"{rpath}.part_index"),
                line_index,
            )
        al = _expect(_get(d, "al", path), list, f"{path}.al")
        with _domain(path):
            return DanceEvent(
                eid=_expect(_get(d, "eid", path), str, f"{path}.eid"),
                d=_expect(_get(d, "d", path), str, f"{path}.d"),
                al=[_expect(x, str, f"{path}.al[{i}]") for i, x in enumerate(al)],
                nd=_expect(_get(d, "nd", path), int, f"{path}.nd"),
                ml=ml,
                song_ref=song_ref,
                location=_expect(_get(d, "location", path), str, f"{path}.location"),
            )
    if kind == "actor":
        _check_keys(d, {"aid", "eid", "did", "r", "l", "t", "p"}, path)
        return Actor(
            aid=_expect(_get(d, "aid", path), str, f"{path}.aid"),
            eid=_expect(_get(d, "eid", path), str, f"{path}.eid"),
            did=_expect(_get(d, "did", path), str, f"{path}.did"),
            r=_expect(_get(d, "r", path), str, f"{path}.r"),
            l=_parse_interval(_get(d, "l", path), f"{path}.l"),
            t=_parse_trajectory(_get(d, "t", path), f"{path}.t"),
            p=_expect(_get(d, "p", path), str, f"{path}.p"),
        )
    if kind == "agent":
        _check_keys(d, {"agid", "aid", "eid", "l", "t", "x", "s", "i", "body_part"},
                    path)
        i_val = d.get("i")
        if i_val is not None:
            i_val = _expect(i_val, str, f"{path}.i")
        return Agent(
            agid=_expect(_get(d, "agid", path), str, f"{path}.agid"),
            aid=_expect(_get(d, "aid", path), str, f"{path}.aid"),
            eid=_expect(_get(d, "eid", path), str, f"{path}.eid"),
            l=_parse_interval(_get(d, "l", path), f"{path}.l"),
            t=_parse_trajectory(_get(d, "t", path), f"{path}.t"),
            x=_expect(_get(d, "x", path), str, f"{path}.x"),
            s=_enum(Speed, _get(d, "s", path), f"{path}.s"),
            i=i_val,
            body_part=_expect(_get(d, "body_part", path), str, f"{path}.body_part"),
        )
    if kind == "object":
        _check_keys(d, {"oid", "v", "ty"}, path)
        raw_v = _expect(_get(d, "v", path), list, f"{path}.v")
        pairs = []
        for i, pair in enumerate(raw_v):
            _expect(pair, list, f"{path}.v[{i}]")
            if len(pair) != 2:
                raise SchemaError(f"{path}.v[{i}]: expected [attribute, value]")
            pairs.append(
                (
                    _expect(pair[0], str, f"{path}.v[{i}][0]"),
                    _expect(pair[1], str, f"{path}.v[{i}][1]"),
                )
            )
        ty = d.get("ty")
        if ty is not None:
            ty = _expect(ty, str, f"{path}.ty")
        return ObjectEntity(
            oid=_expect(_get(d, "oid", path), str, f"{path}.oid"),
            v=tuple(pairs),
            ty=ty,
        )
    if kind == "concept":
        _check_keys(d, {"cid", "aid", "eid", "t", "d"}, path)
        return ConceptEntity(
            cid=_expect(_get(d, "cid", path), str, f"{path}.cid"),
            aid=_expect(_get(d, "aid", path), str, f"{path}.aid"),
            eid=_expect(_get(d, "eid", path), str, f"{path}.eid"),
            t=_enum(ConceptKind, _get(d, "t", path), f"{path}.t"),
            d=_expect(_get(d, "d", path), str, f"{path}.d"),
        )
    raise SchemaError(f"{path}: unknown entity kind {kind!r}")


def parse_relationship(d: dict, path: str = "relationship") -> Relationship:
    _expect(d, dict, path)
    _check_keys(d, {"rid", "src", "tar", "labels", "o1", "o2"}, path)
    raw_labels = _expect(_get(d, "labels", path), list, f"{path}.labels")
    labels = []
    for i, rl in enumerate(raw_labels):
        lpath = f"{path}.labels[{i}]"
        _expect(rl, dict, lpath)
        _check_keys(rl, {"category", "label"}, lpath)
        labels.append(
            RelationLabel(
                category=_enum(RelationCategory, _get(rl, "category", lpath),
                               f"{lpath}.category"),
                label=_expect(_get(rl, "label", lpath), str, f"{lpath}.label"),
            )
        )
    o1 = d.get("o1")
    if o1 is not None:
        o1 = _expect(o1, str, f"{path}.o1")
    o2 = d.get("o2")
    if o2 is not None:
        o2 = _expect(o2, str, f"{path}.o2")
    with _domain(path):
        return Relationship(
            rid=_expect(_get(d, "rid", path), str, f"{path}.rid"),
            src=_expect(_get(d, "src", path), str, f"{path}.src"),
            tar=_expect(_get(d, "tar", path), str, f"{path}.tar"),
            labels=tuple(labels),
            o1=o1,
            o2=o2,
        )


def from_dict(data: dict, doc_id: Optional[str] = None) -> AnnotationDocument:
    """Build a document from plain data, validating the schema only."""
    _expect(data, dict, "document")
    version = data.get("version")
    if version is None:
        raise SchemaError("version: missing required field")
    if version != FORMAT_VERSION:
        raise VersionUnsupportedError(
            f"unsupported format version {version!r}; this build reads "
            f"{FORMAT_VERSION!r}"
        )
    _check_keys(data, _TOP_LEVEL, "document")
    for key in sorted(_REQUIRED - set(data)):
        raise SchemaError(f"{key}: missing required field")

    doc = AnnotationDocument(macro=_parse_macro(data["macro"]))
    if doc_id is not None:
        doc.doc_id = doc_id
    doc.songs = _parse_songs(data["songs"])
    doc.dancers = _parse_dancers(data["dancers"])

    entities = _expect(data["entities"], dict, "entities")
    _check_keys(entities, _ENTITY_SECTIONS, "entities")
    buckets = {
        "events": ("event", doc.events, "eid"),
        "actors": ("actor", doc.actors, "aid"),
        "agents": ("agent", doc.agents, "agid"),
        "objects": ("object", doc.objects, "oid"),
        "concepts": ("concept", doc.concepts, "cid"),
    }
    for section, (kind, bucket, id_field) in buckets.items():
        raw = entities.get(section, [])
        _expect(raw, list, f"entities.{section}")
        for i, rd in enumerate(raw):
            path = f"entities.{section}[{i}]"
            _expect(rd, dict, path)
            entity = parse_entity(kind, rd, path)
            entity_id = getattr(entity, id_field)
            if doc.has_entity(entity_id):
                raise SchemaError(f"{path}.{id_field}: duplicate id {entity_id!r}")
            bucket[entity_id] = entity

    raw_rels = _expect(data["relationships"], list, "relationships")
    for i, rr in enumerate(raw_rels):
        rel = parse_relationship(rr, f"relationships[{i}]")
        if rel.rid in doc.relationships:
            raise SchemaError(
                f"relationships[{i}].rid: duplicate id {rel.rid!r}"
            )
        doc.relationships[rel.rid] = rel

    vocab = data.get("vocabulary")
    if vocab is not None:
        _expect(vocab, dict, "vocabulary")
        _check_keys(vocab, {"extra_terms"}, "vocabulary")
        terms = _expect(vocab.get("extra_terms", []), list, "vocabulary.extra_terms")
        doc.vocabulary = AgentVocabulary(
            extra_terms={
                _expect(t, str, f"vocabulary.extra_terms[{i}]")
                for i, t in enumerate(terms)
            }
        )
    return doc


def load_document(data: bytes | str, doc_id: Optional[str] = None) -> AnnotationDocument:
    """Parse a dvsm-1 byte stream into a document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"invalid UTF-8 at byte {e.start}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"line {e.lineno}, column {e.colno}: {e.msg}",
            line=e.lineno,
            column=e.colno,
        ) from None
    return from_dict(raw, doc_id=doc_id)


def load_file(path: Path | str) -> AnnotationDocument:
    path = Path(path)
    return load_document(path.read_bytes(), doc_id=path.stem)
