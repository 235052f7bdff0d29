/**
 * Client-side session state. Snapshots are kept latest-wins: frames arrive
 * on the socket at whatever rate the server manages, a render consumes at
 * most one per animation frame, and out-of-order seq numbers are dropped.
 * Local edits are applied optimistically; the next authoritative snapshot
 * replaces positions wholesale.
 */

import type { InitMsg, Phase, PositionsMsg } from "./protocol";

export type StoreEvent = "init" | "phase" | "params" | "selection" | "error" | "finished";

export class SessionStore {
  nodeIds: string[] = [];
  radii: Float64Array = new Float64Array(0);
  edges: Int32Array = new Int32Array(0); // flat (source, target) pairs
  params: Record<string, unknown> = {};
  phase: Phase = "SIMULATING";
  positions: Float64Array = new Float64Array(0);
  selection = new Set<number>();
  pinned = new Set<number>();
  errorMessage: string | null = null;

  private idToIndex = new Map<string, number>();
  private lastSeq = -1;
  private pending: PositionsMsg | null = null;
  private dirty = false;
  private listeners = new Map<StoreEvent, Set<() => void>>();

  get nodeCount(): number {
    return this.nodeIds.length;
  }

  on(event: StoreEvent, fn: () => void): void {
    let set = this.listeners.get(event);
    if (!set) this.listeners.set(event, (set = new Set()));
    set.add(fn);
  }

  private emit(event: StoreEvent): void {
    this.listeners.get(event)?.forEach((fn) => fn());
  }

  applyInit(msg: InitMsg): void {
    this.nodeIds = msg.nodes.map((n) => n.id);
    this.radii = Float64Array.from(msg.nodes, (n) => n.radius);
    this.edges = new Int32Array(msg.edges.length * 2);
    msg.edges.forEach((e, i) => {
      this.edges[2 * i] = e.source;
      this.edges[2 * i + 1] = e.target;
    });
    this.params = { ...msg.params };
    this.phase = msg.phase;
    this.positions = new Float64Array(this.nodeIds.length * 2);
    this.idToIndex = new Map(this.nodeIds.map((id, i) => [id, i]));
    this.lastSeq = -1;
    this.pending = null;
    this.emit("init");
    this.emit("phase");
    this.emit("params");
  }

  indexOf(id: string): number {
    const idx = this.idToIndex.get(id);
    return idx === undefined ? -1 : idx;
  }

  idsOf(indices: Iterable<number>): string[] {
    return [...indices].map((i) => this.nodeIds[i]);
  }

  /** Queue a snapshot; stale (non-increasing seq) frames are discarded. */
  offerPositions(msg: PositionsMsg): boolean {
    if (msg.seq <= this.lastSeq || msg.xy.length !== this.positions.length) {
      return false;
    }
    this.lastSeq = msg.seq;
    this.pending = msg;
    this.dirty = true;
    return true;
  }

  /** Consume the queued snapshot (if any); at most one per animation frame. */
  takeSnapshot(): boolean {
    if (this.pending !== null) {
      this.positions.set(this.pending.xy);
      this.pending = null;
      this.dirty = true;
    }
    const was = this.dirty;
    this.dirty = false;
    return was;
  }

  markDirty(): void {
    this.dirty = true;
  }

  setPhase(phase: Phase): void {
    if (phase === this.phase) return;
    this.phase = phase;
    this.emit("phase");
    if (phase === "FINISHED") this.emit("finished");
  }

  setError(message: string | null): void {
    this.errorMessage = message;
    this.emit("error");
  }

  setSelection(indices: Iterable<number>): void {
    this.selection = new Set(indices);
    this.dirty = true;
    this.emit("selection");
  }

  /** Optimistic local echo of an emitted translate. */
  translateLocal(indices: Iterable<number>, dx: number, dy: number): void {
    for (const i of indices) {
      this.positions[2 * i] += dx;
      this.positions[2 * i + 1] += dy;
    }
    this.dirty = true;
  }

  /** Optimistic local echo of an emitted rotate (pivot = selection centroid). */
  rotateLocal(indices: Iterable<number>, angle: number, pivot: [number, number]): void {
    const cos = Math.cos(angle);
    const sin = Math.sin(angle);
    for (const i of indices) {
      const x = this.positions[2 * i] - pivot[0];
      const y = this.positions[2 * i + 1] - pivot[1];
      this.positions[2 * i] = pivot[0] + x * cos - y * sin;
      this.positions[2 * i + 1] = pivot[1] + x * sin + y * cos;
    }
    this.dirty = true;
  }

  selectionCentroid(): [number, number] {
    let sx = 0;
    let sy = 0;
    let count = 0;
    for (const i of this.selection) {
      sx += this.positions[2 * i];
      sy += this.positions[2 * i + 1];
      count += 1;
    }
    return count ? [sx / count, sy / count] : [0, 0];
  }

  contentBounds(): [number, number, number, number] {
    if (this.nodeCount === 0) return [-1, -1, 1, 1];
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    for (let i = 0; i < this.nodeCount; i++) {
      const r = this.radii[i];
      minX = Math.min(minX, this.positions[2 * i] - r);
      maxX = Math.max(maxX, this.positions[2 * i] + r);
      minY = Math.min(minY, this.positions[2 * i + 1] - r);
      maxY = Math.max(maxY, this.positions[2 * i + 1] + r);
    }
    return [minX, minY, maxX, maxY];
  }
}
