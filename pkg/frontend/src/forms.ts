/**
 * Form logic for the two-phase workflow: macro features first, then the
 * per-event micro entities in dependency order.
 *
 * Pick-list values mirror the service's schema enums; the server rejects
 * anything else, so these lists are presentation only.
 */

import type { EntityKind, MacroJson, SongJson } from "./types.js";

export const VENUE_TYPES = [
  "theatre",
  "open_air",
  "studio",
  "street",
  "other",
] as const;

export const VIDEO_TYPES = [
  "movie",
  "theatre",
  "folk",
  "classical",
  "street",
  "festival",
] as const;

export const CONTEXTS = [
  "live",
  "rehearsal",
  "professional_play",
  "competition",
  "other",
] as const;

export const SEXES = ["female", "male", "other"] as const;

export const SONG_PART_KINDS = [
  "introduction",
  "additional_introduction",
  "chorus",
  "stanza",
] as const;

export const SPEEDS = ["slow", "medium", "fast"] as const;

export const CONCEPT_KINDS = ["emotion", "feeling", "mood"] as const;

/** The reserved action label for a body part doing nothing. */
export const IDLE_ACTION = "idle";

export function emptyMacro(): MacroJson {
  return {
    recording_date: new Date().toISOString().slice(0, 10),
    recording_time: null,
    dance_origin: "",
    venue_type: "other",
    song_type: "",
    accompaniment_type: "",
    instruments: [],
    video_type: "classical",
    context: "live",
    num_dancers: 1,
  };
}

/** Build a song with sequentially indexed parts. */
export function buildSong(
  songId: string,
  title: string,
  parts: { kind: string; lines: string[] }[],
): SongJson {
  return {
    song_id: songId,
    title,
    parts: parts.map((p, index) => ({ kind: p.kind, index, lines: p.lines })),
  };
}

/**
 * Dependency-order unlocking for the micro phase. An entity form is
 * enabled only once everything it references can exist; agents and
 * concepts unlock together (the annotation order between them is
 * swappable).
 */
export function unlockedForms(state: {
  macroSaved: boolean;
  hasEvent: boolean;
  hasActor: boolean;
}): EntityKind[] {
  if (!state.macroSaved) {
    return [];
  }
  const unlocked: EntityKind[] = ["event", "object"];
  if (state.hasEvent) {
    unlocked.push("actor");
  }
  if (state.hasActor) {
    unlocked.push("agent", "concept");
  }
  return unlocked;
}
