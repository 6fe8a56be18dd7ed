/** Wire types mirroring the dvsm-1 document format (see ../FORMAT.md). */

export interface IntervalJson {
  start: number;
  end: number;
}

export interface TrajectoryPointJson {
  t: number;
  cx: number;
  cy: number;
  box: [number, number, number, number] | null;
}

export interface TrajectoryJson {
  points: TrajectoryPointJson[];
}

export interface MacroJson {
  recording_date: string;
  recording_time: string | null;
  dance_origin: string;
  venue_type: string;
  song_type: string;
  accompaniment_type: string;
  instruments: string[];
  video_type: string;
  context: string;
  num_dancers: number;
}

export interface DancerJson {
  did: string;
  name: string;
  sex: string;
  age: number | null;
  origin: string | null;
}

export interface SongPartJson {
  kind: string;
  index: number;
  lines: string[];
}

export interface SongJson {
  song_id: string;
  title: string;
  parts: SongPartJson[];
}

export interface EventJson {
  eid: string;
  d: string;
  al: string[];
  nd: number;
  ml: { uri: string; segment: IntervalJson };
  song_ref: { song_id: string; part_index: number; line_index: number | null } | null;
  location: string;
}

export interface ActorJson {
  aid: string;
  eid: string;
  did: string;
  r: string;
  l: IntervalJson;
  t: TrajectoryJson;
  p: string;
}

export interface AgentJson {
  agid: string;
  aid: string;
  eid: string;
  l: IntervalJson;
  t: TrajectoryJson;
  x: string;
  s: string;
  i: string | null;
  body_part: string;
}

export interface ObjectJson {
  oid: string;
  v: [string, string][];
  ty: string | null;
}

export interface ConceptJson {
  cid: string;
  aid: string;
  eid: string;
  t: string;
  d: string;
}

export type EntityKind = "event" | "actor" | "agent" | "object" | "concept";

export interface RelationLabelJson {
  category: string;
  label: string;
}

export interface RelationshipJson {
  rid: string;
  src: string;
  tar: string;
  labels: RelationLabelJson[];
  o1: string | null;
  o2: string | null;
}

export interface DocumentJson {
  version: string;
  macro: MacroJson;
  dancers: DancerJson[];
  songs: SongJson[];
  entities: {
    events: EventJson[];
    actors: ActorJson[];
    agents: AgentJson[];
    objects: ObjectJson[];
    concepts: ConceptJson[];
  };
  relationships: RelationshipJson[];
  vocabulary?: { extra_terms: string[] };
}

export interface FindingJson {
  severity: string;
  code: string;
  subject: string;
  message: string;
}

export interface ValidationJson {
  valid: boolean;
  findings: FindingJson[];
}

export interface QueryMatchJson {
  ids: string[];
  explanation: Record<string, unknown>;
}
