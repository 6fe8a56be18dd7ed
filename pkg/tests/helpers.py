"""Shared builders for tests: the flower-scene golden document, corrupted
variants of it, and a random-document generator for oracle comparisons."""
from __future__ import annotations

import json
import random
from datetime import date

from dvsm import (
    Actor,
    Agent,
    AnnotationDocument,
    ConceptEntity,
    ConceptKind,
    DanceEvent,
    Dancer,
    Interval,
    MacroFeatures,
    MediaLocator,
    ObjectEntity,
    RecordingContext,
    RelationCategory,
    RelationLabel,
    Relationship,
    Sex,
    Song,
    SongPart,
    SongPartKind,
    Speed,
    Trajectory,
    TrajectoryPoint,
    VenueType,
    VideoType,
    add_entity,
    add_relationship,
    new_document,
)

C = RelationCategory.COMPOSITION
S = RelationCategory.SPATIAL
T = RelationCategory.TEMPORAL
M = RelationCategory.MOTION
SE = RelationCategory.SEMANTIC


def sample_macro(num_dancers: int = 2) -> MacroFeatures:
    return MacroFeatures(
        recording_date=date(2006, 1, 15),
        dance_origin="Tamil Nadu",
        venue_type=VenueType.THEATRE,
        song_type="melody",
        accompaniment_type="orchestra",
        instruments=("veena", "mridangam"),
        video_type=VideoType.CLASSICAL,
        context=RecordingContext.LIVE,
        num_dancers=num_dancers,
    )


def sample_song() -> Song:
    return Song(
        song_id="s1",
        title="Evening raga",
        parts=(
            SongPart(SongPartKind.INTRODUCTION, 0, ("opening line",)),
            SongPart(SongPartKind.STANZA, 1, ("first stanza line", "second line")),
        ),
    )


def traj(*samples: tuple[int, float, float]) -> Trajectory:
    return Trajectory(tuple(TrajectoryPoint(t, cx, cy) for t, cx, cy in samples))


def build_flower_scene() -> AnnotationDocument:
    """The golden scenario: hero left of the seated heroine, approaching,
    raising his left hand and showing a flower with the right while the
    heroine stays idle; both express joy."""
    doc = new_document(sample_macro(), [sample_song()], doc_id="flower_scene")
    add_entity(doc, Dancer("d_hero", "Arun", Sex.MALE, age=28))
    add_entity(doc, Dancer("d_heroine", "Meena", Sex.FEMALE, age=26))
    add_entity(
        doc,
        DanceEvent(
            eid="ev1",
            d="hero displays a flower to the heroine",
            nd=2,
            ml=MediaLocator("file:///videos/dance.mp4", Interval(0, 10_000)),
            location="stage",
            song_ref=("s1", 1, 0),
        ),
    )
    add_entity(
        doc,
        Actor(
            aid="hero", eid="ev1", did="d_hero", r="hero",
            l=Interval(0, 10_000),
            t=traj((0, 0.20, 0.50), (5000, 0.35, 0.50), (10_000, 0.45, 0.50)),
            p="standing",
        ),
    )
    add_entity(
        doc,
        Actor(
            aid="heroine", eid="ev1", did="d_heroine", r="heroine",
            l=Interval(0, 10_000),
            t=traj((0, 0.60, 0.50), (10_000, 0.60, 0.50)),
            p="sitting",
        ),
    )
    add_entity(
        doc,
        Agent(
            agid="ag_lhand", aid="hero", eid="ev1",
            l=Interval(1000, 5000),
            t=traj((1000, 0.18, 0.45), (5000, 0.22, 0.35)),
            x="raise", s=Speed.MEDIUM, body_part="left hand",
        ),
    )
    add_entity(
        doc,
        Agent(
            agid="ag_rhand", aid="hero", eid="ev1",
            l=Interval(4000, 9000),
            t=traj((4000, 0.28, 0.45), (9000, 0.42, 0.40)),
            x="show", s=Speed.MEDIUM, body_part="right hand", i="flower",
        ),
    )
    add_entity(
        doc,
        Agent(
            agid="ag_still", aid="heroine", eid="ev1",
            l=Interval(0, 10_000),
            t=traj((0, 0.60, 0.55), (10_000, 0.60, 0.55)),
            x="idle", s=Speed.SLOW, body_part="torso",
        ),
    )
    add_entity(doc, ConceptEntity("c_joy_hero", "hero", "ev1",
                                  ConceptKind.EMOTION, "joy"))
    add_entity(doc, ConceptEntity("c_joy_heroine", "heroine", "ev1",
                                  ConceptKind.EMOTION, "joy"))
    add_entity(doc, ObjectEntity("flower", v=(("name", "flower"),), ty="ag_rhand"))

    def rel(rid, src, tar, *labels, o1=None, o2=None):
        add_relationship(
            doc,
            Relationship(
                rid=rid, src=src, tar=tar,
                labels=tuple(RelationLabel(c, lab) for c, lab in labels),
                o1=o1, o2=o2,
            ),
        )

    rel("r0001", "ev1", "hero", (C, "contains"))
    rel("r0002", "ev1", "heroine", (C, "contains"))
    rel("r0003", "hero", "ag_lhand", (C, "contains"))
    rel("r0004", "hero", "ag_rhand", (C, "contains"))
    rel("r0005", "heroine", "ag_still", (C, "contains"))
    rel("r0006", "hero", "c_joy_hero", (C, "contains"))
    rel("r0007", "heroine", "c_joy_heroine", (C, "contains"))
    rel("r0008", "ag_rhand", "flower", (C, "holds"))
    rel(
        "r0009", "hero", "heroine",
        (S, "left_of"), (M, "approach"), (T, "equals"), (SE, "loves"),
        o1="d_hero", o2="d_heroine",
    )
    return doc


# --------------------------------------------------------------------------
# Corrupted variants (raw-dict edits, since the library refuses to build them)
# --------------------------------------------------------------------------


def corrupted_variants() -> dict[str, tuple[dict, str]]:
    """name -> (raw document dict, expected single finding code)."""
    from dvsm import save_document

    def fresh() -> dict:
        return json.loads(save_document(build_flower_scene()))

    variants: dict[str, tuple[dict, str]] = {}

    d = fresh()
    _actor(d, "hero")["l"]["end"] = 12_000
    variants["c01_actor_lifespan"] = (d, "LIFESPAN_CONTAINMENT")

    d = fresh()
    _agent(d, "ag_lhand")["l"]["end"] = 10_500
    variants["c02_agent_lifespan"] = (d, "LIFESPAN_CONTAINMENT")

    d = fresh()
    _event(d, "ev1")["nd"] = 3
    variants["c03_nd_mismatch"] = (d, "ND_MISMATCH")

    d = fresh()
    _actor(d, "hero")["did"] = "d_ghost"
    variants["c04_dangling_dancer"] = (d, "DANGLING_ID")

    d = fresh()
    _object(d, "flower")["ty"] = "nobody"
    variants["c05_dangling_owner"] = (d, "DANGLING_ID")

    d = fresh()
    d["relationships"].append(_raw_rel("r9001", "flower", "c_joy_hero",
                                       "composition", "partOf"))
    variants["c06_matrix_object_concept"] = (d, "MATRIX_VIOLATION")

    d = fresh()
    d["relationships"].append(_raw_rel("r9002", "ev1", "ag_lhand",
                                       "composition", "contains"))
    variants["c07_matrix_event_agent"] = (d, "MATRIX_VIOLATION")

    d = fresh()
    d["relationships"].append(_raw_rel("r9003", "hero", "ev1",
                                       "composition", "partOf"))
    variants["c08_cycle"] = (d, "CYCLE")

    d = fresh()
    _agent(d, "ag_still")["body_part"] = "tail"
    variants["c09_vocab"] = (d, "VOCAB_UNKNOWN")

    d = fresh()
    _actor(d, "hero")["t"]["points"].append(
        {"t": 11_000, "cx": 0.5, "cy": 0.5, "box": None}
    )
    variants["c10_trajectory"] = (d, "TRAJECTORY_OUTSIDE_LIFESPAN")

    return variants


def _event(d, eid):
    return next(e for e in d["entities"]["events"] if e["eid"] == eid)


def _actor(d, aid):
    return next(a for a in d["entities"]["actors"] if a["aid"] == aid)


def _agent(d, agid):
    return next(g for g in d["entities"]["agents"] if g["agid"] == agid)


def _object(d, oid):
    return next(o for o in d["entities"]["objects"] if o["oid"] == oid)


def _raw_rel(rid, src, tar, category, label):
    return {
        "rid": rid, "src": src, "tar": tar,
        "labels": [{"category": category, "label": label}],
        "o1": None, "o2": None,
    }


# --------------------------------------------------------------------------
# Random documents (times aligned to 500 ms so interval arithmetic is exact)
# --------------------------------------------------------------------------

STEP_MS = 500
ACTIONS = ["Samathristy", "raise", "show", "touch", "spin", "idle"]
BODY_PARTS = ["hand", "left hand", "right hand", "leg", "head", "eye_unknown"]
ROLES = ["hero", "heroine", "leader", "follower", "group dancer"]


def random_trajectory(rng: random.Random, lifespan: Interval) -> Trajectory:
    n = rng.randint(1, 4)
    if n == 1:
        times = [lifespan.start]
    else:
        span = lifespan.end - lifespan.start
        offsets = sorted(rng.sample(range(0, span // STEP_MS + 1), min(n, span // STEP_MS + 1)))
        times = [lifespan.start + o * STEP_MS for o in offsets]
    return Trajectory(
        tuple(
            TrajectoryPoint(t, round(rng.uniform(0, 1), 3),
                            round(rng.uniform(0, 1), 3))
            for t in times
        )
    )


def random_document(seed: int) -> AnnotationDocument:
    rng = random.Random(seed)
    doc = new_document(sample_macro(), [sample_song()],
                       doc_id=f"rand{seed:04d}")
    n_dancers = rng.randint(1, 5)
    for i in range(n_dancers):
        add_entity(doc, Dancer(f"d{i}", f"dancer {i}",
                               rng.choice(list(Sex))))
    n_events = rng.randint(1, 10)
    cursor = 0
    for e in range(n_events):
        start = cursor + rng.randint(0, 4) * STEP_MS
        end = start + rng.randint(2, 20) * STEP_MS
        cursor = end if rng.random() < 0.7 else start
        actors = []
        n_actors = rng.randint(1, 4)
        dancers = rng.sample(range(n_dancers), min(n_actors, n_dancers))
        song_ref = ("s1", rng.choice([0, 1]), None) if rng.random() < 0.7 else None
        event = DanceEvent(
            eid=f"e{e}", d=f"step {e}", nd=len(set(dancers)),
            ml=MediaLocator("file:///clip.mp4", Interval(start, end)),
            location=rng.choice(["stage", "garden"]),
            song_ref=song_ref,
        )
        add_entity(doc, event)
        for a, dancer in enumerate(dancers):
            a_start = start + rng.randint(0, 2) * STEP_MS
            a_end = end - rng.randint(0, 2) * STEP_MS
            if a_end <= a_start:
                a_start, a_end = start, end
            lifespan = Interval(a_start, a_end)
            aid = f"e{e}a{a}"
            add_entity(
                doc,
                Actor(
                    aid=aid, eid=f"e{e}", did=f"d{dancer}",
                    r=rng.choice(ROLES), l=lifespan,
                    t=random_trajectory(rng, lifespan),
                ),
            )
            actors.append(aid)
            for g in range(rng.randint(0, 3)):
                g_start = a_start + rng.randint(0, (a_end - a_start) // STEP_MS - 1) * STEP_MS
                g_end = g_start + rng.randint(1, (a_end - g_start) // STEP_MS) * STEP_MS
                g_l = Interval(g_start, g_end)
                add_entity(
                    doc,
                    Agent(
                        agid=f"{aid}g{g}", aid=aid, eid=f"e{e}",
                        l=g_l, t=random_trajectory(rng, g_l),
                        x=rng.choice(ACTIONS), s=rng.choice(list(Speed)),
                        body_part=rng.choice(BODY_PARTS[:-1]),
                    ),
                )
            if rng.random() < 0.4:
                add_entity(
                    doc,
                    ConceptEntity(
                        cid=f"{aid}c", aid=aid, eid=f"e{e}",
                        t=rng.choice(list(ConceptKind)),
                        d=rng.choice(["joy", "sorrow", "surprise", "calm focus"]),
                    ),
                )
    return doc
