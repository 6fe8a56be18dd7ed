/**
 * Playback-time and frame-click capture: turn player state and click
 * positions into the interval endpoints and normalized trajectory
 * points the document format expects.
 */

import type { TrajectoryJson, TrajectoryPointJson } from "./types.js";

/** Media time in whole milliseconds from a player's fractional seconds. */
export function playbackMs(currentTimeSeconds: number): number {
  return Math.round(currentTimeSeconds * 1000);
}

export interface FrameRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/**
 * A click on the video frame, normalized to [0, 1] image coordinates
 * (origin top-left, y growing downwards), clamped to the frame.
 */
export function clickToPoint(
  clientX: number,
  clientY: number,
  rect: FrameRect,
  timeMs: number,
): TrajectoryPointJson {
  const clamp = (v: number) => Math.min(1, Math.max(0, v));
  const cx = clamp((clientX - rect.left) / rect.width);
  const cy = clamp((clientY - rect.top) / rect.height);
  return { t: timeMs, cx: round3(cx), cy: round3(cy), box: null };
}

function round3(v: number): number {
  return Math.round(v * 1000) / 1000;
}

/**
 * Accumulates frame clicks into a trajectory. Re-clicking at an already
 * captured time replaces that sample; points stay time-ordered.
 */
export class TrajectoryCapture {
  private points: TrajectoryPointJson[] = [];

  add(point: TrajectoryPointJson): void {
    this.points = this.points.filter((p) => p.t !== point.t);
    this.points.push(point);
    this.points.sort((a, b) => a.t - b.t);
  }

  removeAt(timeMs: number): void {
    this.points = this.points.filter((p) => p.t !== timeMs);
  }

  get size(): number {
    return this.points.length;
  }

  toJson(): TrajectoryJson {
    return { points: [...this.points] };
  }
}
