"""Command-line front door: validate, query, stats, export-dot, serve.

Exit codes: 0 success (validate: no error findings; query: even when
empty), 1 error-severity findings, 2 parse/schema failure, 64 usage error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import queries as q
from .errors import DvsmError, ParseError, SchemaError, VersionUnsupportedError
from .graph import export_dot
from .model import scene_grouping
from .report import stats_rows, write_report
from .storage import load_file
from .validation import validate_document

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_PARSE = 2
EXIT_USAGE = 64

_format_option = click.option(
    "--format", "fmt", type=click.Choice(["human", "json-lines"]),
    default="human", show_default=True, help="Output format.",
)


def _load(path: str):
    return load_file(Path(path))


@click.group()
def cli():
    """Annotation documents for dance videos: validate, query, inspect."""


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_format_option
def validate(file: str, fmt: str):
    """Check a document against every constraint; print the findings."""
    doc = _load(file)
    report = validate_document(doc)
    if fmt == "json-lines":
        for f in report.findings:
            click.echo(json.dumps(
                {"severity": f.severity.value, "code": f.code,
                 "subject": f.subject, "message": f.message},
                sort_keys=True,
            ))
    else:
        if report.is_valid:
            click.echo("valid: no findings")
        for f in report.findings:
            click.echo(f"{f.severity.value.upper()} {f.code} [{f.subject}] "
                       f"{f.message}")
    if report.errors:
        sys.exit(EXIT_FINDINGS)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--predicate", required=True,
              type=click.Choice(["repeats", "follows", "same-step",
                                 "different-step", "observe", "find"]))
@click.option("--action", default=None)
@click.option("--actor", "actors", multiple=True,
              help="Actor id (twice for pairwise predicates) or, for "
                   "repeats, a role/dancer filter.")
@click.option("--event", default=None)
@click.option("--gap-ms", default=500, show_default=True)
@click.option("--body-part", default=None)
@click.option("--concept-kind", default=None)
@click.option("--concept-text", default=None)
@click.option("--song-part", default=None)
@click.option("--role", default=None)
@_format_option
def query(file, predicate, action, actors, event, gap_ms, body_part,
          concept_kind, concept_text, song_part, role, fmt):
    """Run one predicate; one match per line, deterministic order."""
    doc = _load(file)
    if predicate == "repeats":
        if not action:
            raise click.UsageError("--predicate repeats requires --action")
        result = q.repeats(doc, action, actor=actors[0] if actors else None)
    elif predicate == "follows":
        if not event:
            raise click.UsageError("--predicate follows requires --event")
        result = q.follows(doc, event, gap_ms=gap_ms)
    elif predicate in ("same-step", "different-step", "observe"):
        if len(actors) != 2:
            raise click.UsageError(
                f"--predicate {predicate} requires --actor given twice"
            )
        fn = {
            "same-step": q.perform_same_step,
            "different-step": q.perform_different_step,
            "observe": q.observe,
        }[predicate]
        result = fn(doc, actors[0], actors[1])
    else:
        result = q.find_events(
            doc, action=action, body_part=body_part, concept_kind=concept_kind,
            concept_text=concept_text, song_part=song_part, role=role,
        )
    for m in result.matches:
        if fmt == "json-lines":
            click.echo(json.dumps(
                {"ids": list(m.ids), "explanation": m.explanation},
                sort_keys=True,
            ))
        else:
            extra = " ".join(f"{k}={v}" for k, v in sorted(m.explanation.items()))
            click.echo(" ".join(m.ids) + (f"  {extra}" if extra else ""))


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--report-dir", type=click.Path(file_okay=False), default=None,
              help="Also write stats.csv plus timeline and count figures.")
@_format_option
def stats(file, report_dir, fmt):
    """Entity counts, events per song part, scene summary."""
    doc = _load(file)
    rows = stats_rows(doc)
    if fmt == "json-lines":
        for section, key, value in rows:
            click.echo(json.dumps(
                {"section": section, "key": key, "value": value}, sort_keys=True
            ))
    else:
        section_seen = None
        for section, key, value in rows:
            if section != section_seen:
                click.echo(f"[{section}]")
                section_seen = section
            click.echo(f"  {key}: {value}")
        scenes = scene_grouping(doc)
        click.echo(f"[summary]")
        click.echo(f"  scenes: {len(scenes)}")
    if report_dir:
        written = write_report(doc, Path(report_dir))
        for path in written:
            click.echo(f"wrote {path}", err=True)


@cli.command("export-dot")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--event", default=None, help="Restrict to one event's closure.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Output path (default: stdout).")
def export_dot_cmd(file, event, output):
    """Render the entity graph in DOT."""
    doc = _load(file)
    text = export_dot(doc, event=event)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--root", required=True, type=click.Path(file_okay=False))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(root, port, host):
    """Run the annotation service over a directory of documents."""
    from .server import serve as run

    run(Path(root), port=port, host=host)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as e:
        click.echo(e.format_message(), err=True)
        if e.ctx is not None:
            click.echo(e.ctx.get_usage(), err=True)
        return EXIT_USAGE
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    except (ParseError, SchemaError, VersionUnsupportedError) as e:
        click.echo(f"{e.code}: {e}", err=True)
        return EXIT_PARSE
    except DvsmError as e:
        click.echo(f"{e.code}: {e}", err=True)
        return EXIT_FINDINGS


if __name__ == "__main__":
    sys.exit(main())
