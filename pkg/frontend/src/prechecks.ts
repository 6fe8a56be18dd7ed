/**
 * Client-side prechecks: only the cheap invariants, duplicated from the
 * service so mistakes surface before a round trip. The server remains
 * authoritative for everything.
 */

import type { EntityKind, IntervalJson, TrajectoryJson } from "./types.js";

export type RelationCategory =
  | "composition"
  | "spatial"
  | "temporal"
  | "motion"
  | "semantic"
  | "ontological";

/** Which relationship categories may connect which entity kinds. */
const MATRIX: Partial<Record<string, RelationCategory[]>> = {
  "event|event": ["composition", "temporal", "semantic"],
  "event|actor": ["composition"],
  "event|concept": ["composition"],
  "object|object": ["composition"],
  "object|actor": ["composition"],
  "object|agent": ["composition"],
  "actor|actor": ["spatial", "temporal", "semantic", "motion"],
  "actor|agent": ["composition"],
  "actor|concept": ["composition"],
  "agent|agent": ["spatial", "temporal", "semantic", "motion"],
  "concept|concept": ["ontological"],
};

export const ONTOLOGICAL_LABELS = [
  "subClassOf",
  "cardinality",
  "intersection",
  "union",
] as const;

/**
 * Categories permitted between two entity kinds, in both directions.
 * An empty list means the pair cannot be related at all (for example
 * object + concept) and the relationship editor must stay disabled.
 */
export function permittedCategories(
  a: EntityKind,
  b: EntityKind,
): RelationCategory[] {
  return MATRIX[`${a}|${b}`] ?? MATRIX[`${b}|${a}`] ?? [];
}

export interface Problem {
  field: string;
  message: string;
}

export function checkInterval(iv: IntervalJson, field = "interval"): Problem[] {
  const problems: Problem[] = [];
  if (!Number.isInteger(iv.start) || !Number.isInteger(iv.end)) {
    problems.push({ field, message: "interval endpoints must be integer ms" });
  } else if (iv.start >= iv.end) {
    problems.push({
      field,
      message: `start (${iv.start}) must be before end (${iv.end})`,
    });
  }
  return problems;
}

/** Containment rule: the inner lifespan must fit the outer one. */
export function checkContainment(
  outer: IntervalJson,
  inner: IntervalJson,
  field = "lifespan",
): Problem[] {
  const problems = checkInterval(inner, field);
  if (problems.length === 0 && (inner.start < outer.start || inner.end > outer.end)) {
    problems.push({
      field,
      message:
        `[${inner.start}, ${inner.end}) exceeds the containing ` +
        `interval [${outer.start}, ${outer.end})`,
    });
  }
  return problems;
}

export function checkTrajectory(
  traj: TrajectoryJson,
  lifespan: IntervalJson,
  field = "trajectory",
): Problem[] {
  const problems: Problem[] = [];
  let last = -Infinity;
  traj.points.forEach((p, i) => {
    if (p.t <= last) {
      problems.push({ field, message: `point ${i}: times must increase` });
    }
    last = p.t;
    if (p.cx < 0 || p.cx > 1 || p.cy < 0 || p.cy > 1) {
      problems.push({
        field,
        message: `point ${i}: coordinates must be normalized to [0, 1]`,
      });
    }
    // lifespans are closed-open but the final instant may carry a sample
    if (p.t < lifespan.start || p.t > lifespan.end) {
      problems.push({
        field,
        message: `point ${i}: time ${p.t} outside the lifespan`,
      });
    }
  });
  return problems;
}
