/** Pure geometry for pointer gestures: picking, marquee, rotation sweeps. */

import type { ViewTransform } from "./view";
import { worldToScreen } from "./view";

/** Minimum pick radius in screen pixels, so tiny nodes stay clickable. */
export const MIN_PICK_PX = 6;

export function pickNode(
  positions: Float64Array,
  radii: Float64Array,
  view: ViewTransform,
  sx: number,
  sy: number,
): number {
  let best = -1;
  let bestDist = Infinity;
  for (let i = 0; i < radii.length; i++) {
    const [nx, ny] = worldToScreen(view, positions[2 * i], positions[2 * i + 1]);
    const reach = Math.max(radii[i] * view.zoom, MIN_PICK_PX);
    const dx = sx - nx;
    const dy = sy - ny;
    const dist = Math.hypot(dx, dy);
    if (dist <= reach && dist < bestDist) {
      best = i;
      bestDist = dist;
    }
  }
  return best;
}

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function normalizeRect(rect: Rect): Rect {
  return {
    x0: Math.min(rect.x0, rect.x1),
    y0: Math.min(rect.y0, rect.y1),
    x1: Math.max(rect.x0, rect.x1),
    y1: Math.max(rect.y0, rect.y1),
  };
}

/** Node indices whose screen position lies inside the marquee rectangle. */
export function marqueeSelect(
  positions: Float64Array,
  count: number,
  view: ViewTransform,
  rect: Rect,
): number[] {
  const r = normalizeRect(rect);
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    const [sx, sy] = worldToScreen(view, positions[2 * i], positions[2 * i + 1]);
    if (sx >= r.x0 && sx <= r.x1 && sy >= r.y0 && sy <= r.y1) out.push(i);
  }
  return out;
}

/**
 * Angle swept around a pivot between two screen points, in radians.
 * Positive values follow the screen's clockwise orientation (y grows down).
 */
export function sweepAngle(
  pivotX: number, pivotY: number,
  fromX: number, fromY: number,
  toX: number, toY: number,
): number {
  const a = Math.atan2(fromY - pivotY, fromX - pivotX);
  const b = Math.atan2(toY - pivotY, toX - pivotX);
  let delta = b - a;
  if (delta > Math.PI) delta -= 2 * Math.PI;
  if (delta < -Math.PI) delta += 2 * Math.PI;
  return delta;
}

export function selectionScreenBounds(
  positions: Float64Array,
  radii: Float64Array,
  indices: Iterable<number>,
  view: ViewTransform,
): Rect | null {
  let any = false;
  let x0 = Infinity, y0 = Infinity, x1 = -Infinity, y1 = -Infinity;
  for (const i of indices) {
    any = true;
    const [sx, sy] = worldToScreen(view, positions[2 * i], positions[2 * i + 1]);
    const r = Math.max(radii[i] * view.zoom, MIN_PICK_PX);
    x0 = Math.min(x0, sx - r);
    y0 = Math.min(y0, sy - r);
    x1 = Math.max(x1, sx + r);
    y1 = Math.max(y1, sy + r);
  }
  return any ? { x0, y0, x1, y1 } : null;
}
