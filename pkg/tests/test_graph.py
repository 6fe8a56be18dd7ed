"""Compatibility matrix, edge insertion, acyclicity, DOT export."""
from __future__ import annotations

import copy
import random

import pytest

from dvsm import (
    COMPATIBILITY,
    CycleError,
    DanglingIdError,
    DuplicateIdError,
    EntityKind,
    InvalidValueError,
    MatrixViolationError,
    RelationCategory,
    RelationLabel,
    Relationship,
    UnknownEventError,
    add_relationship,
    export_dot,
    is_acyclic,
    permitted_categories,
)
from dvsm.storage import to_dict

from helpers import build_flower_scene

C = RelationCategory.COMPOSITION
S = RelationCategory.SPATIAL
T = RelationCategory.TEMPORAL
M = RelationCategory.MOTION
SE = RelationCategory.SEMANTIC
O = RelationCategory.ONTOLOGICAL


def edge(src, tar, *labels, rid="rtest"):
    return Relationship(
        rid=rid, src=src, tar=tar,
        labels=tuple(RelationLabel(c, lab) for c, lab in labels),
    )


class TestMatrix:
    def test_total_and_symmetric(self):
        for a in EntityKind:
            for b in EntityKind:
                assert (a, b) in COMPATIBILITY
                assert COMPATIBILITY[(a, b)] == COMPATIBILITY[(b, a)]

    def test_motion_only_with_spatial_and_temporal(self):
        for cats in COMPATIBILITY.values():
            if M in cats:
                assert S in cats and T in cats

    @pytest.mark.parametrize(
        "pair,expected",
        [
            ((EntityKind.EVENT, EntityKind.EVENT), {C, T, SE}),
            ((EntityKind.EVENT, EntityKind.ACTOR), {C}),
            ((EntityKind.ACTOR, EntityKind.ACTOR), {S, T, SE, M}),
            ((EntityKind.AGENT, EntityKind.AGENT), {S, T, SE, M}),
            ((EntityKind.CONCEPT, EntityKind.CONCEPT), {O}),
            ((EntityKind.OBJECT, EntityKind.CONCEPT), set()),
            ((EntityKind.EVENT, EntityKind.OBJECT), set()),
            ((EntityKind.AGENT, EntityKind.CONCEPT), set()),
        ],
    )
    def test_cells(self, pair, expected):
        assert set(permitted_categories(*pair)) == expected


class TestAddRelationship:
    def test_rejects_empty_label_set(self):
        with pytest.raises(InvalidValueError):
            Relationship(rid="r", src="a", tar="b", labels=())

    def test_rejects_dangling_endpoints(self, flower_scene):
        with pytest.raises(DanglingIdError):
            add_relationship(flower_scene, edge("ghost", "hero", (SE, "x")))
        with pytest.raises(DanglingIdError):
            add_relationship(flower_scene, edge("hero", "ghost", (SE, "x")))

    def test_rejects_duplicate_rid(self, flower_scene):
        with pytest.raises(DuplicateIdError):
            add_relationship(
                flower_scene, edge("hero", "heroine", (SE, "x"), rid="r0009")
            )

    def test_rejects_matrix_violation(self, flower_scene):
        with pytest.raises(MatrixViolationError):
            add_relationship(
                flower_scene, edge("flower", "c_joy_hero", (C, "partOf"))
            )

    def test_rejects_unknown_ontological_label(self, flower_scene):
        with pytest.raises(MatrixViolationError):
            add_relationship(
                flower_scene,
                edge("c_joy_hero", "c_joy_heroine", (O, "frobnicates")),
            )

    def test_accepts_known_ontological_label(self, flower_scene):
        add_relationship(
            flower_scene, edge("c_joy_hero", "c_joy_heroine", (O, "subClassOf"))
        )
        assert "rtest" in flower_scene.relationships

    def test_rejects_self_loop_composition(self, flower_scene):
        with pytest.raises(CycleError):
            add_relationship(flower_scene, edge("ev1", "ev1", (C, "partOf")))

    def test_rejects_cycle_with_witness(self, flower_scene):
        # ev1 → hero exists; the reverse composition edge closes a cycle
        with pytest.raises(CycleError) as exc:
            add_relationship(flower_scene, edge("hero", "ev1", (C, "partOf")))
        assert exc.value.path[0] == exc.value.path[-1] == "hero"
        assert "ev1" in exc.value.path

    def test_generates_sequential_rid_when_blank(self, flower_scene):
        rel = Relationship(
            rid="", src="hero", tar="heroine",
            labels=(RelationLabel(SE, "admires"),),
        )
        rid = add_relationship(flower_scene, rel)
        assert rid == "r0010"
        assert flower_scene.relationships[rid].labels[0].label == "admires"

    @pytest.mark.parametrize(
        "bad",
        [
            lambda: edge("ghost", "hero", (SE, "x")),
            lambda: edge("hero", "heroine", (SE, "x"), rid="r0009"),
            lambda: edge("flower", "c_joy_hero", (C, "partOf")),
            lambda: edge("hero", "ev1", (C, "partOf")),
        ],
    )
    def test_failure_atomicity(self, flower_scene, bad):
        before = to_dict(flower_scene)
        with pytest.raises(Exception):
            add_relationship(flower_scene, bad())
        assert to_dict(flower_scene) == before


class TestAcyclicity:
    def test_golden_document_is_acyclic(self, flower_scene):
        ok, witness = is_acyclic(flower_scene)
        assert ok and witness is None

    def test_witness_is_a_real_cycle(self, flower_scene):
        # bypass add_relationship to plant the cycle directly
        flower_scene.relationships["rz"] = edge("hero", "ev1", (C, "partOf"),
                                                rid="rz")
        ok, witness = is_acyclic(flower_scene)
        assert not ok
        assert witness[0] == witness[-1]
        edges = {(r.src, r.tar) for r in flower_scene.relationships.values()
                 if r.is_composition}
        for a, b in zip(witness, witness[1:]):
            assert (a, b) in edges

    def test_random_accepted_streams_stay_acyclic(self, flower_scene):
        """Whatever add_relationship admits, the invariant holds after."""
        rng = random.Random(7)
        ids = sorted(
            set(flower_scene.events) | set(flower_scene.actors)
            | set(flower_scene.agents) | set(flower_scene.objects)
            | set(flower_scene.concepts)
        )
        doc = copy.deepcopy(flower_scene)
        accepted = 0
        for i in range(300):
            src, tar = rng.choice(ids), rng.choice(ids)
            try:
                add_relationship(doc, edge(src, tar, (C, "partOf"),
                                           rid=f"rr{i:03d}"))
                accepted += 1
            except (MatrixViolationError, CycleError, DanglingIdError):
                pass
            ok, _ = is_acyclic(doc)
            assert ok
        assert accepted > 0


class TestDotExport:
    def test_contains_all_nodes_and_relation_labels(self, flower_scene):
        dot = export_dot(flower_scene)
        for node in ("ev1", "hero", "heroine", "ag_lhand", "ag_rhand",
                     "ag_still", "flower", "c_joy_hero", "c_joy_heroine"):
            assert f'"{node}"' in dot
        assert 'label="left_of"' in dot
        assert 'label="approach"' in dot
        assert '"hero" -> "heroine"' in dot

    def test_event_filter_keeps_closure_only(self, flower_scene):
        dot = export_dot(flower_scene, event="ev1")
        assert '"flower"' in dot  # owned by ag_rhand, in the closure
        assert dot == export_dot(flower_scene)  # everything belongs to ev1

    def test_unknown_event(self, flower_scene):
        with pytest.raises(UnknownEventError):
            export_dot(flower_scene, event="ev99")

    def test_deterministic(self, flower_scene):
        assert export_dot(flower_scene) == export_dot(flower_scene)

    def test_escapes_quotes_in_captions(self, flower_scene):
        flower_scene.events["ev1"].d = 'the "flower" scene'
        dot = export_dot(flower_scene)
        assert '\\"flower\\"' in dot
