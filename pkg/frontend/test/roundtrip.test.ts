/**
 * End-to-end round trip against the real session server: spawn the CLI,
 * connect over WebSocket, pause -> enter edit -> translate -> finish, then
 * check that the CSV the CLI writes reflects the world-space delta exactly.
 */

import { spawn } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { describe, expect, it } from "vitest";
import WebSocket from "ws";

import { decodeServer, encodeClient, PositionsMsg } from "../src/protocol";

const PYTHON = process.env.PYTHON ?? "python3";
const REPO_ROOT = resolve(__dirname, "..", "..");

interface Session {
  ws: WebSocket;
  frames: ReturnType<typeof decodeServer>[];
  nextFrame(pred: (f: ReturnType<typeof decodeServer>) => boolean, ms?: number): Promise<ReturnType<typeof decodeServer>>;
  exited: Promise<number | null>;
}

async function launchSession(graphText: string, outPath: string): Promise<Session> {
  const dir = mkdtempSync(join(tmpdir(), "layoutlab-ui-"));
  const graphPath = join(dir, "graph.edgelist");
  writeFileSync(graphPath, graphText);

  const proc = spawn(PYTHON, ["-m", "layoutlab", graphPath, "--no-open", "--out", outPath],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] });
  const exited = new Promise<number | null>((done) => proc.on("exit", done));

  const url = await new Promise<string>((done, fail) => {
    let buffer = "";
    const timer = setTimeout(() => fail(new Error(`no session URL; stderr: ${buffer}`)), 15000);
    proc.stderr.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/http:\/\/127\.0\.0\.1:\d+\//);
      if (match) {
        clearTimeout(timer);
        done(match[0]);
      }
    });
  });

  const ws = new WebSocket(url.replace("http://", "ws://") + "ws");
  await new Promise<void>((done, fail) => {
    ws.once("open", () => done());
    ws.once("error", fail);
  });

  const frames: ReturnType<typeof decodeServer>[] = [];
  const waiters: { pred: (f: ReturnType<typeof decodeServer>) => boolean; done: (f: ReturnType<typeof decodeServer>) => void }[] = [];
  ws.on("message", (data) => {
    const frame = decodeServer(data.toString());
    frames.push(frame);
    for (let i = waiters.length - 1; i >= 0; i--) {
      if (waiters[i].pred(frame)) {
        const [waiter] = waiters.splice(i, 1);
        waiter.done(frame);
      }
    }
  });

  const nextFrame = (pred: (f: ReturnType<typeof decodeServer>) => boolean, ms = 10000) =>
    new Promise<ReturnType<typeof decodeServer>>((done, fail) => {
      const timer = setTimeout(() => fail(new Error("timed out waiting for frame")), ms);
      waiters.push({ pred, done: (f) => { clearTimeout(timer); done(f); } });
    });

  return { ws, frames, nextFrame, exited };
}

function positionsOf(frame: ReturnType<typeof decodeServer>): number[] {
  return (frame as PositionsMsg).xy;
}

describe("scripted session round trip", () => {
  it("drives pause -> edit -> translate -> finish and the CSV reflects the delta", async () => {
    const outPath = join(mkdtempSync(join(tmpdir(), "layoutlab-out-")), "layout.csv");
    const session = await launchSession("a b\nb c\nc d\nd a\n", outPath);
    const { ws, nextFrame } = session;

    const init = await nextFrame((f) => f.type === "init");
    if (init.type !== "init") throw new Error("unreachable");
    expect(init.nodes.map((n) => n.id)).toEqual(["a", "b", "c", "d"]);

    ws.send(encodeClient({ type: "pause" }));
    await nextFrame((f) => f.type === "phase" && f.phase === "PAUSED");

    // ticking is stopped: wait for the snapshot stream to settle on one frame
    let baseline = positionsOf(await nextFrame((f) => f.type === "positions"));
    for (;;) {
      try {
        baseline = positionsOf(await nextFrame((f) => f.type === "positions", 700));
      } catch {
        break; // quiet: the paused state is stable
      }
    }

    ws.send(encodeClient({ type: "enter_edit" }));
    await nextFrame((f) => f.type === "phase" && f.phase === "EDITING");

    const dx = 123.25;
    const dy = -7.5;
    ws.send(encodeClient({ type: "edit_translate", ids: ["b", "c"], dx, dy }));
    const moved = positionsOf(await nextFrame(
      (f) => f.type === "positions" && positionsOf(f).some((v, i) => v !== baseline[i])));

    const expected = [...baseline];
    for (const idx of [1, 2]) {
      expected[2 * idx] += dx;
      expected[2 * idx + 1] += dy;
    }
    moved.forEach((v, i) => expect(Math.abs(v - expected[i])).toBeLessThanOrEqual(1e-9));

    ws.send(encodeClient({ type: "finish" }));
    await nextFrame((f) => f.type === "phase" && f.phase === "FINISHED");
    const exitCode = await session.exited;
    expect(exitCode).toBe(0);

    const rows = readFileSync(outPath, "utf-8").trim().split("\n");
    expect(rows[0]).toBe("id,x,y");
    expect(rows).toHaveLength(5);
    rows.slice(1).forEach((row, i) => {
      const [id, x, y] = row.split(",");
      expect(id).toBe(["a", "b", "c", "d"][i]);
      expect(Math.abs(Number(x) - expected[2 * i])).toBeLessThanOrEqual(1e-9);
      expect(Math.abs(Number(y) - expected[2 * i + 1])).toBeLessThanOrEqual(1e-9);
    });
  }, 60000);

  it("second concurrent client is refused with an error frame", async () => {
    const outPath = join(mkdtempSync(join(tmpdir(), "layoutlab-out-")), "layout.csv");
    const session = await launchSession("a b\n", outPath);
    await session.nextFrame((f) => f.type === "init");

    const second = new WebSocket((session.ws.url as string));
    const refusal = await new Promise<string>((done, fail) => {
      const timer = setTimeout(() => fail(new Error("no refusal frame")), 10000);
      second.on("message", (data) => {
        clearTimeout(timer);
        done(data.toString());
      });
      second.on("error", fail);
    });
    const frame = decodeServer(refusal);
    expect(frame.type).toBe("error");

    session.ws.send(encodeClient({ type: "finish" }));
    expect(await session.exited).toBe(0);
  }, 60000);
});
