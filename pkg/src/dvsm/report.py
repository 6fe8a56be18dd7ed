"""Document statistics and the figure-rendering report path.

``stats_rows`` feeds both the CLI's human-readable table and the delimited
output; ``write_report`` drops stats.csv next to two matplotlib figures
(event timeline by scene, entity counts).
"""
from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import AnnotationDocument, scene_grouping


def stats_rows(doc: AnnotationDocument) -> list[tuple[str, str, str]]:
    """(section, key, value) rows describing one document."""
    rows: list[tuple[str, str, str]] = []
    counts = {
        "dancers": len(doc.dancers),
        "events": len(doc.events),
        "actors": len(doc.actors),
        "agents": len(doc.agents),
        "objects": len(doc.objects),
        "concepts": len(doc.concepts),
        "relationships": len(doc.relationships),
    }
    for key, value in counts.items():
        rows.append(("entities", key, str(value)))

    per_part: Counter[str] = Counter()
    for ev in doc.events.values():
        if ev.song_ref is None:
            per_part["unassigned"] += 1
            continue
        song = doc.song(ev.song_ref[0])
        part = song.part(ev.song_ref[1]) if song else None
        per_part[part.kind.value if part else "unassigned"] += 1
    for kind in sorted(per_part):
        rows.append(("events_per_song_part", kind, str(per_part[kind])))

    for i, scene in enumerate(scene_grouping(doc)):
        part = (
            f"{scene.song_ref[0]}:{scene.song_ref[1]}" if scene.song_ref
            else "unassigned"
        )
        rows.append(
            ("scenes", f"scene_{i}",
             f"{part} @ {scene.location}: {len(scene.event_ids)} event(s)")
        )
    return rows


def _timeline_figure(doc: AnnotationDocument, path: Path) -> None:
    scenes = scene_grouping(doc)
    fig, ax = plt.subplots(figsize=(10, max(2, 0.5 * max(1, len(doc.events)))))
    cmap = plt.get_cmap("tab10")
    y = 0
    yticks, ylabels = [], []
    for si, scene in enumerate(scenes):
        for eid in scene.event_ids:
            seg = doc.events[eid].ml.segment
            ax.barh(
                y,
                (seg.end - seg.start) / 1000.0,
                left=seg.start / 1000.0,
                color=cmap(si % 10),
                edgecolor="black",
            )
            yticks.append(y)
            ylabels.append(eid)
            y += 1
    ax.set_yticks(yticks)
    ax.set_yticklabels(ylabels)
    ax.invert_yaxis()
    ax.set_xlabel("media time (s)")
    ax.set_title("Event timeline by scene")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _counts_figure(doc: AnnotationDocument, path: Path) -> None:
    labels = ["events", "actors", "agents", "objects", "concepts", "dancers"]
    values = [
        len(doc.events), len(doc.actors), len(doc.agents),
        len(doc.objects), len(doc.concepts), len(doc.dancers),
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, values, color="steelblue", edgecolor="black")
    ax.set_ylabel("count")
    ax.set_title("Entities by kind")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def write_report(doc: AnnotationDocument, out_dir: Path | str) -> list[Path]:
    """Write stats.csv, timeline.png and entity_counts.png to out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "stats.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["section", "key", "value"])
        writer.writerows(stats_rows(doc))
    timeline = out_dir / "timeline.png"
    counts = out_dir / "entity_counts.png"
    _timeline_figure(doc, timeline)
    _counts_figure(doc, counts)
    return [csv_path, timeline, counts]
