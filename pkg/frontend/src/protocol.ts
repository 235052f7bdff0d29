/**
 * Wire schema shared with the session server: one JSON object per WebSocket
 * text frame, discriminated by `type`. Unknown inbound fields are ignored
 * for forward compatibility; every outbound frame is validated before send.
 */

export interface InitNode {
  id: string;
  radius: number;
}

export interface InitMsg {
  type: "init";
  v: number;
  nodes: InitNode[];
  edges: { source: number; target: number }[];
  params: Record<string, unknown>;
  phase: Phase;
}

export interface PositionsMsg {
  type: "positions";
  seq: number;
  xy: number[];
}

export interface PhaseMsg {
  type: "phase";
  phase: Phase;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMessage = InitMsg | PositionsMsg | PhaseMsg | ErrorMsg;

export type Phase = "SIMULATING" | "PAUSED" | "EDITING" | "FINISHED";

export type ClientMessage =
  | { type: "set_params"; params: Record<string, number | string | boolean | null> }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "enter_edit" }
  | { type: "exit_edit" }
  | { type: "edit_translate"; ids: string[]; dx: number; dy: number }
  | { type: "edit_rotate"; ids: string[]; angle_rad: number; pivot?: [number, number] }
  | { type: "set_pinned"; ids: string[]; pinned: boolean }
  | { type: "finish" };

const PHASES: readonly string[] = ["SIMULATING", "PAUSED", "EDITING", "FINISHED"];

export class ProtocolError extends Error {}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Parse and validate one server frame. */
export function decodeServer(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new ProtocolError(`malformed JSON frame: ${err}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ProtocolError("frame must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  switch (obj.type) {
    case "init": {
      if (!Array.isArray(obj.nodes) || !Array.isArray(obj.edges)) {
        throw new ProtocolError("init: nodes and edges must be arrays");
      }
      const nodes = obj.nodes.map((n, i) => {
        const rec = n as Record<string, unknown>;
        if (typeof rec.id !== "string" || !isFiniteNumber(rec.radius)) {
          throw new ProtocolError(`init: bad node at index ${i}`);
        }
        return { id: rec.id, radius: rec.radius };
      });
      const edges = obj.edges.map((e, i) => {
        const rec = e as Record<string, unknown>;
        if (!isFiniteNumber(rec.source) || !isFiniteNumber(rec.target)) {
          throw new ProtocolError(`init: bad edge at index ${i}`);
        }
        return { source: rec.source, target: rec.target };
      });
      if (typeof obj.params !== "object" || obj.params === null) {
        throw new ProtocolError("init: params must be an object");
      }
      if (!PHASES.includes(obj.phase as string)) {
        throw new ProtocolError(`init: unknown phase ${obj.phase}`);
      }
      return {
        type: "init",
        v: isFiniteNumber(obj.v) ? obj.v : 1,
        nodes,
        edges,
        params: obj.params as Record<string, unknown>,
        phase: obj.phase as Phase,
      };
    }
    case "positions": {
      if (!isFiniteNumber(obj.seq) || !Array.isArray(obj.xy)) {
        throw new ProtocolError("positions: need numeric seq and xy array");
      }
      if (obj.xy.length % 2 !== 0 || !obj.xy.every(isFiniteNumber)) {
        throw new ProtocolError("positions: xy must be an even list of finite numbers");
      }
      return { type: "positions", seq: obj.seq, xy: obj.xy as number[] };
    }
    case "phase": {
      if (!PHASES.includes(obj.phase as string)) {
        throw new ProtocolError(`phase: unknown phase ${obj.phase}`);
      }
      return { type: "phase", phase: obj.phase as Phase };
    }
    case "error": {
      if (typeof obj.message !== "string") {
        throw new ProtocolError("error: message must be a string");
      }
      return { type: "error", message: obj.message };
    }
    default:
      throw new ProtocolError(`unknown server message type ${String(obj.type)}`);
  }
}

/** Serialize one client command, refusing malformed frames. */
export function encodeClient(msg: ClientMessage): string {
  switch (msg.type) {
    case "pause":
    case "resume":
    case "enter_edit":
    case "exit_edit":
    case "finish":
      return JSON.stringify({ type: msg.type });
    case "set_params": {
      for (const [key, value] of Object.entries(msg.params)) {
        const ok =
          value === null ||
          typeof value === "string" ||
          typeof value === "boolean" ||
          isFiniteNumber(value);
        if (!ok) throw new ProtocolError(`set_params: bad value for ${key}`);
      }
      return JSON.stringify({ type: "set_params", params: msg.params });
    }
    case "edit_translate": {
      requireIds(msg.ids);
      if (!isFiniteNumber(msg.dx) || !isFiniteNumber(msg.dy)) {
        throw new ProtocolError("edit_translate: dx/dy must be finite");
      }
      return JSON.stringify({ type: "edit_translate", ids: msg.ids, dx: msg.dx, dy: msg.dy });
    }
    case "edit_rotate": {
      requireIds(msg.ids);
      if (!isFiniteNumber(msg.angle_rad)) {
        throw new ProtocolError("edit_rotate: angle_rad must be finite");
      }
      if (msg.pivot !== undefined && !(msg.pivot.length === 2 && msg.pivot.every(isFiniteNumber))) {
        throw new ProtocolError("edit_rotate: pivot must be [x, y]");
      }
      const body: Record<string, unknown> = {
        type: "edit_rotate",
        ids: msg.ids,
        angle_rad: msg.angle_rad,
      };
      if (msg.pivot !== undefined) body.pivot = msg.pivot;
      return JSON.stringify(body);
    }
    case "set_pinned": {
      requireIds(msg.ids);
      if (typeof msg.pinned !== "boolean") {
        throw new ProtocolError("set_pinned: pinned must be boolean");
      }
      return JSON.stringify({ type: "set_pinned", ids: msg.ids, pinned: msg.pinned });
    }
  }
}

function requireIds(ids: string[]): void {
  if (!Array.isArray(ids) || ids.some((i) => typeof i !== "string")) {
    throw new ProtocolError("ids must be an array of strings");
  }
}
