"""Command-line interface: exit codes, output formats, determinism."""
from __future__ import annotations

import json

import pytest

from dvsm import save_file
from dvsm.cli import EXIT_FINDINGS, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main

from helpers import build_flower_scene, corrupted_variants


@pytest.fixture()
def golden_path(tmp_path):
    path = tmp_path / "flower_scene.json"
    save_file(build_flower_scene(), path)
    return path


@pytest.fixture()
def broken_path(tmp_path):
    raw, _ = corrupted_variants()["c01_actor_lifespan"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    return path


class TestValidate:
    def test_clean_document_exits_zero(self, golden_path, capsys):
        assert main(["validate", str(golden_path)]) == EXIT_OK
        assert "valid: no findings" in capsys.readouterr().out

    def test_findings_exit_one(self, broken_path, capsys):
        assert main(["validate", str(broken_path)]) == EXIT_FINDINGS
        assert "LIFESPAN_CONTAINMENT" in capsys.readouterr().out

    def test_json_lines_findings(self, broken_path, capsys):
        assert main(["validate", "--format", "json-lines",
                     str(broken_path)]) == EXIT_FINDINGS
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(line) for line in lines]
        assert records[0]["code"] == "LIFESPAN_CONTAINMENT"

    def test_unparsable_file_exits_two(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{not json")
        assert main(["validate", str(path)]) == EXIT_PARSE
        assert "PARSE_ERROR" in capsys.readouterr().err

    def test_wrong_version_exits_two(self, tmp_path, capsys):
        path = tmp_path / "future.json"
        path.write_text(json.dumps({"version": "dvsm-99"}))
        assert main(["validate", str(path)]) == EXIT_PARSE
        assert "VERSION_UNSUPPORTED" in capsys.readouterr().err

    def test_missing_file_is_usage_error(self):
        assert main(["validate", "/no/such/file.json"]) == EXIT_USAGE


class TestQuery:
    def test_find_human(self, golden_path, capsys):
        code = main(["query", str(golden_path), "--predicate", "find",
                     "--concept-text", "joy"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("ev1")

    def test_different_step_json_lines(self, golden_path, capsys):
        code = main(["query", str(golden_path), "--predicate",
                     "different-step", "--actor", "hero",
                     "--actor", "heroine", "--format", "json-lines"])
        assert code == EXIT_OK
        records = [json.loads(line)
                   for line in capsys.readouterr().out.strip().splitlines()]
        assert [r["ids"] for r in records] == [
            ["ag_lhand", "ag_still"], ["ag_rhand", "ag_still"],
        ]

    def test_empty_result_still_exits_zero(self, golden_path, capsys):
        code = main(["query", str(golden_path), "--predicate", "repeats",
                     "--action", "raise"])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""

    def test_missing_required_option_is_usage(self, golden_path):
        assert main(["query", str(golden_path), "--predicate",
                     "repeats"]) == EXIT_USAGE
        assert main(["query", str(golden_path), "--predicate",
                     "observe", "--actor", "hero"]) == EXIT_USAGE

    def test_unknown_actor_exits_one(self, golden_path, capsys):
        code = main(["query", str(golden_path), "--predicate", "observe",
                     "--actor", "hero", "--actor", "nobody"])
        assert code == EXIT_FINDINGS
        assert "UNKNOWN_ACTOR" in capsys.readouterr().err

    def test_output_deterministic(self, golden_path, capsys):
        args = ["query", str(golden_path), "--predicate", "different-step",
                "--actor", "hero", "--actor", "heroine",
                "--format", "json-lines"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first


class TestExportDot:
    def test_stdout(self, golden_path, capsys):
        assert main(["export-dot", str(golden_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("digraph")
        assert '"hero" -> "heroine"' in out

    def test_output_file(self, golden_path, tmp_path):
        target = tmp_path / "graph.dot"
        assert main(["export-dot", str(golden_path), "-o",
                     str(target)]) == EXIT_OK
        assert target.read_text().startswith("digraph")

    def test_unknown_event_exits_one(self, golden_path):
        assert main(["export-dot", str(golden_path), "--event",
                     "ev99"]) == EXIT_FINDINGS


class TestStats:
    def test_human(self, golden_path, capsys):
        assert main(["stats", str(golden_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[entities]" in out
        assert "events: 1" in out
        assert "scenes: 1" in out

    def test_json_lines(self, golden_path, capsys):
        assert main(["stats", str(golden_path), "--format",
                     "json-lines"]) == EXIT_OK
        records = [json.loads(line)
                   for line in capsys.readouterr().out.strip().splitlines()]
        entities = {r["key"]: r["value"] for r in records
                    if r["section"] == "entities"}
        assert entities["actors"] == "2"
        assert entities["relationships"] == "9"

    def test_report_dir_writes_csv_and_figures(self, golden_path, tmp_path):
        out_dir = tmp_path / "report"
        assert main(["stats", str(golden_path), "--report-dir",
                     str(out_dir)]) == EXIT_OK
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == ["entity_counts.png", "stats.csv", "timeline.png"]

    def test_no_command_is_usage(self):
        assert main([]) in (EXIT_OK, EXIT_USAGE)  # click prints group help
        assert main(["frobnicate"]) == EXIT_USAGE
