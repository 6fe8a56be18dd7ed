"""HTTP service exposing documents, validation, queries and DOT export.

One dvsm-1 JSON file per document under a root directory. Mutations are
guarded by per-document optimistic revision tokens and are persisted with
an atomic replace before the response is sent; the server never persists a
mutation the library itself would reject.
"""
from __future__ import annotations

import copy
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from . import queries as q
from .errors import (
    DanglingIdError,
    DuplicateIdError,
    DvsmError,
    InvalidValueError,
    SchemaError,
    StaleRevisionError,
)
from .graph import add_relationship, export_dot
from .model import (
    Actor,
    Agent,
    AnnotationDocument,
    ConceptEntity,
    DanceEvent,
    Dancer,
    ObjectEntity,
    add_entity,
    new_document,
)
from .storage import (
    FORMAT_VERSION,
    from_dict,
    load_file,
    parse_entity,
    parse_relationship,
    save_file,
    to_dict,
)
from .validation import validate_document

_STATUS_BY_CODE = {
    "UNKNOWN_DOCUMENT": 404,
    "UNKNOWN_EVENT": 404,
    "UNKNOWN_ACTOR": 404,
    "UNKNOWN_ENTITY": 404,
    "UNKNOWN_RELATIONSHIP": 404,
    "STALE_REVISION": 409,
}


class UnknownDocumentError(DvsmError):
    code = "UNKNOWN_DOCUMENT"


class UnknownEntityError(DvsmError):
    code = "UNKNOWN_ENTITY"


class UnknownRelationshipError(DvsmError):
    code = "UNKNOWN_RELATIONSHIP"


_ID_FIELDS = {
    "event": "eid",
    "actor": "aid",
    "agent": "agid",
    "object": "oid",
    "concept": "cid",
}


@dataclass
class _Entry:
    doc: AnnotationDocument
    revision: int = 0


class DocumentStore:
    """Directory of dvsm-1 files with in-memory revision tokens."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}
        for path in sorted(self.root.glob("*.json")):
            self._entries[path.stem] = _Entry(doc=load_file(path))

    def _path(self, doc_id: str) -> Path:
        return self.root / f"{doc_id}.json"

    def list_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._entries)

    def get(self, doc_id: str) -> _Entry:
        entry = self._entries.get(doc_id)
        if entry is None:
            raise UnknownDocumentError(f"document {doc_id!r} not found",
                                       subject=doc_id)
        return entry

    def create(self, doc: AnnotationDocument, doc_id: Optional[str] = None) -> str:
        with self._lock:
            doc_id = doc_id or uuid.uuid4().hex[:12]
            if doc_id in self._entries:
                raise DuplicateIdError(f"document {doc_id!r} already exists",
                                       subject=doc_id)
            doc.doc_id = doc_id
            save_file(doc, self._path(doc_id))
            self._entries[doc_id] = _Entry(doc=doc)
            return doc_id

    def delete(self, doc_id: str) -> None:
        with self._lock:
            self.get(doc_id)
            del self._entries[doc_id]
            path = self._path(doc_id)
            if path.exists():
                path.unlink()

    def mutate(self, doc_id: str, revision: int, fn) -> tuple[int, Any]:
        """Apply fn to a working copy; commit and persist only on success."""
        with self._lock:
            entry = self.get(doc_id)
            if revision != entry.revision:
                raise StaleRevisionError(
                    f"revision {revision} is stale; current is {entry.revision}",
                    current_revision=entry.revision,
                )
            working = copy.deepcopy(entry.doc)
            result = fn(working)
            save_file(working, self._path(doc_id))
            entry.doc = working
            entry.revision += 1
            return entry.revision, result


def _revalidate(doc: AnnotationDocument) -> None:
    report = validate_document(doc)
    if report.errors:
        f = report.errors[0]
        err = DvsmError(f.message, subject=f.subject)
        err.code = f.code
        raise err


def _report_dict(report) -> dict:
    return {
        "valid": report.is_valid,
        "findings": [
            {
                "severity": f.severity.value,
                "code": f.code,
                "subject": f.subject,
                "message": f.message,
            }
            for f in report.findings
        ],
    }


def _result_dict(result: q.QueryResult) -> dict:
    return {
        "matches": [
            {"ids": list(m.ids), "explanation": m.explanation}
            for m in result.matches
        ]
    }


def create_app(root: Path | str) -> FastAPI:
    store = DocumentStore(Path(root))
    app = FastAPI(title="dvsm annotation service")

    @app.exception_handler(DvsmError)
    async def _domain_error(request: Request, exc: DvsmError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        body = {
            "status": status,
            "code": exc.code,
            "message": str(exc),
            "subject": exc.subject,
        }
        if isinstance(exc, StaleRevisionError):
            body["current_revision"] = exc.current_revision
        return JSONResponse(
            status_code=status,
            content=body,
            headers={"X-DVSM-Format-Version": FORMAT_VERSION},
        )

    @app.middleware("http")
    async def _version_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-DVSM-Format-Version"] = FORMAT_VERSION
        return response

    @app.get("/health")
    def health():
        return {"status": "ok", "format_version": FORMAT_VERSION}

    @app.get("/documents")
    def list_documents():
        return {"documents": store.list_ids()}

    @app.post("/documents", status_code=201)
    def create_document(body: dict = Body(...)):
        payload = {
            "version": FORMAT_VERSION,
            "macro": body.get("macro"),
            "dancers": body.get("dancers", []),
            "songs": body.get("songs", []),
            "entities": {},
            "relationships": [],
        }
        if payload["macro"] is None:
            raise SchemaError("macro: missing required field")
        doc = from_dict(payload)
        doc_id = store.create(doc, doc_id=body.get("doc_id"))
        return {"doc_id": doc_id, "revision": 0}

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str):
        entry = store.get(doc_id)
        return {
            "doc_id": doc_id,
            "revision": entry.revision,
            "document": to_dict(entry.doc),
        }

    @app.delete("/documents/{doc_id}", status_code=204)
    def delete_document(doc_id: str):
        store.delete(doc_id)
        return Response(status_code=204)

    # -- entities ---------------------------------------------------------

    @app.post("/documents/{doc_id}/entities", status_code=201)
    def add_entity_endpoint(doc_id: str, body: dict = Body(...)):
        revision = body.get("revision")
        if not isinstance(revision, int):
            raise SchemaError("revision: missing or non-integer field")
        raw = body.get("entity")
        if not isinstance(raw, dict) or "kind" not in raw:
            raise SchemaError("entity.kind: missing required field")
        kind = raw["kind"]
        fields = {k: v for k, v in raw.items() if k != "kind"}
        if kind == "dancer":
            from .storage import _parse_dancers  # narrow reuse of the parser

            entity = list(_parse_dancers([fields], "entity").values())[0]
        else:
            entity = parse_entity(kind, fields, "entity")

        def apply(doc):
            return add_entity(doc, entity)

        new_rev, entity_id = store.mutate(doc_id, revision, apply)
        return {"id": entity_id, "revision": new_rev}

    @app.put("/documents/{doc_id}/entities/{entity_id}")
    def update_entity(doc_id: str, entity_id: str, body: dict = Body(...)):
        revision = body.get("revision")
        if not isinstance(revision, int):
            raise SchemaError("revision: missing or non-integer field")
        raw = body.get("entity")
        if not isinstance(raw, dict) or "kind" not in raw:
            raise SchemaError("entity.kind: missing required field")
        kind = raw["kind"]
        fields = {k: v for k, v in raw.items() if k != "kind"}
        entity = parse_entity(kind, fields, "entity")
        id_field = _ID_FIELDS.get(kind)
        if id_field is None or getattr(entity, id_field) != entity_id:
            raise InvalidValueError(
                f"entity id in body must equal {entity_id!r}", subject=entity_id
            )
        buckets = {
            "event": "events", "actor": "actors", "agent": "agents",
            "object": "objects", "concept": "concepts",
        }

        def apply(doc):
            bucket = getattr(doc, buckets[kind])
            if entity_id not in bucket:
                raise UnknownEntityError(f"entity {entity_id!r} not found",
                                         subject=entity_id)
            bucket[entity_id] = entity
            if kind == "actor":
                for ev in doc.events.values():
                    if entity_id in ev.al and ev.eid != entity.eid:
                        ev.al.remove(entity_id)
                owner = doc.events.get(entity.eid)
                if owner is not None and entity_id not in owner.al:
                    owner.al.append(entity_id)
            _revalidate(doc)
            return entity_id

        new_rev, _ = store.mutate(doc_id, revision, apply)
        return {"id": entity_id, "revision": new_rev}

    @app.delete("/documents/{doc_id}/entities/{entity_id}")
    def delete_entity(doc_id: str, entity_id: str, revision: int = Query(...)):
        def apply(doc):
            for bucket_name in ("events", "actors", "agents", "objects",
                                "concepts"):
                bucket = getattr(doc, bucket_name)
                if entity_id in bucket:
                    del bucket[entity_id]
                    for ev in doc.events.values():
                        if entity_id in ev.al:
                            ev.al.remove(entity_id)
                    doomed = [
                        rid
                        for rid, rel in doc.relationships.items()
                        if entity_id in (rel.src, rel.tar)
                    ]
                    for rid in doomed:
                        del doc.relationships[rid]
                    _revalidate(doc)
                    return entity_id
            raise UnknownEntityError(f"entity {entity_id!r} not found",
                                     subject=entity_id)

        new_rev, _ = store.mutate(doc_id, revision, apply)
        return {"id": entity_id, "revision": new_rev}

    # -- relationships ----------------------------------------------------

    @app.post("/documents/{doc_id}/relationships", status_code=201)
    def add_relationship_endpoint(doc_id: str, body: dict = Body(...)):
        revision = body.get("revision")
        if not isinstance(revision, int):
            raise SchemaError("revision: missing or non-integer field")
        raw = body.get("relationship")
        if not isinstance(raw, dict):
            raise SchemaError("relationship: missing required field")
        raw = dict(raw)
        raw.setdefault("rid", "")
        rel = parse_relationship(raw)

        def apply(doc):
            return add_relationship(doc, copy.deepcopy(rel))

        new_rev, rid = store.mutate(doc_id, revision, apply)
        return {"id": rid, "revision": new_rev}

    @app.delete("/documents/{doc_id}/relationships/{rid}")
    def delete_relationship(doc_id: str, rid: str, revision: int = Query(...)):
        def apply(doc):
            if rid not in doc.relationships:
                raise UnknownRelationshipError(
                    f"relationship {rid!r} not found", subject=rid
                )
            del doc.relationships[rid]
            return rid

        new_rev, _ = store.mutate(doc_id, revision, apply)
        return {"id": rid, "revision": new_rev}

    # -- validation, queries, export --------------------------------------

    @app.get("/documents/{doc_id}/validation")
    def validate_endpoint(doc_id: str):
        entry = store.get(doc_id)
        return _report_dict(validate_document(entry.doc))

    @app.get("/documents/{doc_id}/queries/{predicate}")
    def query_endpoint(
        doc_id: str,
        predicate: str,
        action: Optional[str] = None,
        actor: list[str] = Query(default=[]),
        event: Optional[str] = None,
        gap_ms: int = 500,
        body_part: Optional[str] = None,
        concept_kind: Optional[str] = None,
        concept_text: Optional[str] = None,
        song_part: Optional[str] = None,
        role: Optional[str] = None,
    ):
        entry = store.get(doc_id)
        doc = entry.doc
        if predicate == "repeats":
            if action is None:
                raise InvalidValueError("repeats requires ?action=")
            result = q.repeats(doc, action, actor=actor[0] if actor else None)
        elif predicate == "follows":
            if event is None:
                raise InvalidValueError("follows requires ?event=")
            result = q.follows(doc, event, gap_ms=gap_ms)
        elif predicate in ("same-step", "different-step", "observe"):
            if len(actor) != 2:
                raise InvalidValueError(
                    f"{predicate} requires exactly two ?actor= parameters"
                )
            fn = {
                "same-step": q.perform_same_step,
                "different-step": q.perform_different_step,
                "observe": q.observe,
            }[predicate]
            result = fn(doc, actor[0], actor[1])
        elif predicate == "find":
            result = q.find_events(
                doc,
                action=action,
                body_part=body_part,
                concept_kind=concept_kind,
                concept_text=concept_text,
                song_part=song_part,
                role=role,
            )
        else:
            raise InvalidValueError(f"unknown predicate {predicate!r}")
        return _result_dict(result)

    @app.get("/documents/{doc_id}/relations/{actor1}/{actor2}")
    def infer_endpoint(doc_id: str, actor1: str, actor2: str):
        entry = store.get(doc_id)
        inference = q.infer_actor_relations(entry.doc, actor1, actor2)
        return {
            "directional": inference.directional.value,
            "temporal": inference.temporal.value,
            "motion": inference.motion.value,
        }

    @app.get("/documents/{doc_id}/dot", response_class=PlainTextResponse)
    def dot_endpoint(doc_id: str, event: Optional[str] = None):
        entry = store.get(doc_id)
        return export_dot(entry.doc, event=event)

    return app


def serve(root: Path | str, port: int = 8000, host: str = "127.0.0.1") -> None:
    """Run the service (blocking)."""
    import uvicorn

    uvicorn.run(create_app(root), host=host, port=port)
