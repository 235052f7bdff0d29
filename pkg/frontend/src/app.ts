/**
 * Session client: socket wiring, render loop, and pointer gestures.
 *
 * The server snapshot is always authoritative; edits are echoed locally so
 * dragging feels immediate and are corrected by the next positions frame.
 * Edit gestures outside the EDITING phase are ignored locally, never sent.
 */

import { marqueeSelect, normalizeRect, pickNode, selectionScreenBounds, sweepAngle } from "./gestures";
import type { ClientMessage } from "./protocol";
import { decodeServer, encodeClient } from "./protocol";
import { createRenderer, Renderer } from "./renderer";
import { buildSidebar } from "./sidebar";
import { SessionStore } from "./store";
import { dragDeltaWorld, fitToContent, identityView, panBy, ViewTransform, zoomAt } from "./view";

type DragMode =
  | { kind: "idle" }
  | { kind: "pan"; lastX: number; lastY: number }
  | { kind: "marquee"; x0: number; y0: number; x1: number; y1: number }
  | { kind: "move"; lastX: number; lastY: number; ids: string[]; indices: number[] }
  | { kind: "rotate"; lastX: number; lastY: number; ids: string[]; indices: number[] };

export class App {
  readonly store = new SessionStore();
  view: ViewTransform = identityView();

  private ws: WebSocket | null = null;
  private renderer: Renderer;
  private drag: DragMode = { kind: "idle" };
  private fitted = false;
  private finished = false;
  private viewDirty = true;

  private canvas: HTMLCanvasElement;
  private banner: HTMLElement;
  private marqueeBox: HTMLElement;
  private rotateHandle: HTMLElement;
  private finishButton: HTMLButtonElement;
  private pauseButton: HTMLButtonElement;
  private modeButton: HTMLButtonElement;
  private pinButton: HTMLButtonElement;
  private unpinButton: HTMLButtonElement;

  constructor(root: HTMLElement, wsUrl: string) {
    this.canvas = root.querySelector("#view") as HTMLCanvasElement;
    this.banner = root.querySelector("#banner") as HTMLElement;
    this.marqueeBox = root.querySelector("#marquee") as HTMLElement;
    this.rotateHandle = root.querySelector("#rotate-handle") as HTMLElement;
    this.finishButton = root.querySelector("#btn-finish") as HTMLButtonElement;
    this.pauseButton = root.querySelector("#btn-pause") as HTMLButtonElement;
    this.modeButton = root.querySelector("#btn-mode") as HTMLButtonElement;
    this.pinButton = root.querySelector("#btn-pin") as HTMLButtonElement;
    this.unpinButton = root.querySelector("#btn-unpin") as HTMLButtonElement;

    this.renderer = createRenderer(this.canvas);
    buildSidebar(root.querySelector("#sidebar") as HTMLElement, this.store, (m) => this.send(m));

    this.wireButtons();
    this.wirePointer();
    this.store.on("phase", () => this.reflectPhase());
    this.store.on("error", () => this.showBanner(this.store.errorMessage, false));
    this.store.on("finished", () => this.onFinished());
    this.store.on("selection", () => this.updateRotateHandle());

    new ResizeObserver(() => this.resize()).observe(this.canvas.parentElement as Element);
    this.resize();
    this.connect(wsUrl);
    requestAnimationFrame(() => this.frame());
  }

  // ----------------------------------------------------------------- network

  private connect(wsUrl: string): void {
    let ws: WebSocket;
    try {
      ws = new WebSocket(wsUrl);
    } catch (err) {
      this.showBanner(`cannot open session socket: ${err}`, false);
      return;
    }
    this.ws = ws;
    ws.onmessage = (event) => {
      let msg;
      try {
        msg = decodeServer(String(event.data));
      } catch (err) {
        this.showBanner(String(err), false);
        return;
      }
      switch (msg.type) {
        case "init":
          this.store.applyInit(msg);
          this.fitted = false;
          break;
        case "positions":
          this.store.offerPositions(msg);
          break;
        case "phase":
          this.store.setPhase(msg.phase);
          break;
        case "error":
          this.store.setError(msg.message);
          break;
      }
    };
    ws.onclose = () => {
      if (!this.finished) {
        this.showBanner("session socket closed", false);
      }
    };
    ws.onerror = () => {
      this.showBanner("session connection failed", false);
    };
  }

  send(msg: ClientMessage): void {
    if (this.finished || !this.ws || this.ws.readyState !== WebSocket.OPEN) return;
    this.ws.send(encodeClient(msg));
  }

  // ------------------------------------------------------------ render loop

  private frame(): void {
    // latest-wins: at most one queued snapshot is applied per animation frame
    const snapshotChanged = this.store.takeSnapshot();
    if (!this.fitted && this.store.nodeCount > 0) {
      const [minX, minY, maxX, maxY] = this.store.contentBounds();
      const rect = this.canvas.getBoundingClientRect();
      this.view = fitToContent(minX, minY, maxX, maxY, rect.width, rect.height);
      this.fitted = true;
      this.viewDirty = true;
    }
    if (snapshotChanged || this.viewDirty) {
      this.renderer.render(
        {
          positions: this.store.positions,
          radii: this.store.radii,
          edges: this.store.edges,
          selection: this.store.selection,
          pinned: this.store.pinned,
        },
        this.view,
      );
      this.updateRotateHandle();
      this.viewDirty = false;
    }
    requestAnimationFrame(() => this.frame());
  }

  private resize(): void {
    const rect = (this.canvas.parentElement as HTMLElement).getBoundingClientRect();
    this.renderer.resize(rect.width, rect.height, window.devicePixelRatio || 1);
    this.viewDirty = true;
  }

  // -------------------------------------------------------------- ui chrome

  private wireButtons(): void {
    this.finishButton.addEventListener("click", () => {
      if (this.finished) return; // a second click never re-sends
      this.send({ type: "finish" });
      this.finishButton.disabled = true;
    });
    this.pauseButton.addEventListener("click", () => {
      this.send({ type: this.store.phase === "SIMULATING" ? "pause" : "resume" });
    });
    this.modeButton.addEventListener("click", () => {
      this.send({ type: this.store.phase === "EDITING" ? "exit_edit" : "enter_edit" });
    });
    this.pinButton.addEventListener("click", () => this.pinSelection(true));
    this.unpinButton.addEventListener("click", () => this.pinSelection(false));
  }

  private pinSelection(pinned: boolean): void {
    if (this.store.phase !== "EDITING" || this.store.selection.size === 0) return;
    const indices = [...this.store.selection];
    this.send({ type: "set_pinned", ids: this.store.idsOf(indices), pinned });
    for (const i of indices) {
      if (pinned) this.store.pinned.add(i);
      else this.store.pinned.delete(i);
    }
    this.store.markDirty();
    this.viewDirty = true;
  }

  private reflectPhase(): void {
    const phase = this.store.phase;
    this.canvas.classList.toggle("editing", phase === "EDITING");
    this.modeButton.textContent = phase === "EDITING" ? "Simulate mode" : "Edit mode";
    this.modeButton.classList.toggle("active", phase === "EDITING");
    this.pauseButton.textContent = phase === "SIMULATING" ? "Pause" : "Resume";
    this.pauseButton.disabled = phase === "EDITING" || phase === "FINISHED";
    const editing = phase === "EDITING";
    this.pinButton.disabled = !editing;
    this.unpinButton.disabled = !editing;
    this.updateRotateHandle();
  }

  private onFinished(): void {
    this.finished = true;
    for (const button of [this.finishButton, this.pauseButton, this.modeButton,
                          this.pinButton, this.unpinButton]) {
      button.disabled = true;
    }
    this.showBanner("Layout finished; coordinates returned to the caller.", true);
  }

  private showBanner(message: string | null, info: boolean): void {
    if (!message) {
      this.banner.style.display = "none";
      return;
    }
    this.banner.textContent = message;
    this.banner.className = info ? "info" : "";
    this.banner.style.display = "block";
  }

  private updateRotateHandle(): void {
    if (this.store.phase !== "EDITING" || this.store.selection.size === 0) {
      this.rotateHandle.style.display = "none";
      return;
    }
    const bounds = selectionScreenBounds(
      this.store.positions, this.store.radii, this.store.selection, this.view);
    if (!bounds) {
      this.rotateHandle.style.display = "none";
      return;
    }
    this.rotateHandle.style.display = "block";
    this.rotateHandle.style.left = `${(bounds.x0 + bounds.x1) / 2}px`;
    this.rotateHandle.style.top = `${bounds.y0 - 24}px`;
  }

  // ---------------------------------------------------------------- gestures

  private wirePointer(): void {
    this.canvas.addEventListener("pointerdown", (ev) => this.pointerDown(ev));
    this.canvas.addEventListener("pointermove", (ev) => this.pointerMove(ev));
    this.canvas.addEventListener("pointerup", (ev) => this.pointerUp(ev));
    this.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const rect = this.canvas.getBoundingClientRect();
      const factor = Math.exp(-ev.deltaY * 0.0015);
      this.view = zoomAt(this.view, ev.clientX - rect.left, ev.clientY - rect.top, factor);
      this.viewDirty = true;
    }, { passive: false });

    this.rotateHandle.addEventListener("pointerdown", (ev) => {
      if (this.store.phase !== "EDITING" || this.store.selection.size === 0) return;
      ev.preventDefault();
      ev.stopPropagation();
      this.rotateHandle.setPointerCapture(ev.pointerId);
      const rect = this.canvas.getBoundingClientRect();
      const indices = [...this.store.selection];
      this.drag = {
        kind: "rotate",
        lastX: ev.clientX - rect.left,
        lastY: ev.clientY - rect.top,
        ids: this.store.idsOf(indices),
        indices,
      };
    });
    this.rotateHandle.addEventListener("pointermove", (ev) => this.pointerMove(ev));
    this.rotateHandle.addEventListener("pointerup", (ev) => this.pointerUp(ev));
  }

  private localPoint(ev: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
  }

  private pointerDown(ev: PointerEvent): void {
    this.canvas.setPointerCapture(ev.pointerId);
    const [sx, sy] = this.localPoint(ev);
    if (this.store.phase !== "EDITING") {
      this.drag = { kind: "pan", lastX: sx, lastY: sy };
      return;
    }
    const hit = pickNode(this.store.positions, this.store.radii, this.view, sx, sy);
    if (hit < 0) {
      this.drag = { kind: "marquee", x0: sx, y0: sy, x1: sx, y1: sy };
      this.marqueeBox.style.display = "block";
      this.updateMarqueeBox();
      return;
    }
    if (!this.store.selection.has(hit)) {
      const next = ev.shiftKey ? new Set(this.store.selection) : new Set<number>();
      next.add(hit);
      this.store.setSelection(next);
      this.viewDirty = true;
    }
    const indices = [...this.store.selection];
    this.drag = { kind: "move", lastX: sx, lastY: sy, ids: this.store.idsOf(indices), indices };
  }

  private pointerMove(ev: PointerEvent): void {
    const [sx, sy] = this.localPoint(ev);
    const drag = this.drag;
    switch (drag.kind) {
      case "idle":
        return;
      case "pan": {
        this.view = panBy(this.view, sx - drag.lastX, sy - drag.lastY);
        drag.lastX = sx;
        drag.lastY = sy;
        this.viewDirty = true;
        return;
      }
      case "marquee": {
        drag.x1 = sx;
        drag.y1 = sy;
        this.updateMarqueeBox();
        return;
      }
      case "move": {
        // screen delta divided by zoom = world-space translation
        const [dx, dy] = dragDeltaWorld(this.view, sx - drag.lastX, sy - drag.lastY);
        drag.lastX = sx;
        drag.lastY = sy;
        if (dx === 0 && dy === 0) return;
        this.send({ type: "edit_translate", ids: drag.ids, dx, dy });
        this.store.translateLocal(drag.indices, dx, dy); // optimistic echo
        this.viewDirty = true;
        return;
      }
      case "rotate": {
        const [cx, cy] = this.store.selectionCentroid();
        const pivotX = cx * this.view.zoom + this.view.panX;
        const pivotY = cy * this.view.zoom + this.view.panY;
        const angle = sweepAngle(pivotX, pivotY, drag.lastX, drag.lastY, sx, sy);
        drag.lastX = sx;
        drag.lastY = sy;
        if (angle === 0) return;
        this.send({ type: "edit_rotate", ids: drag.ids, angle_rad: angle });
        this.store.rotateLocal(drag.indices, angle, [cx, cy]); // optimistic echo
        this.viewDirty = true;
        return;
      }
    }
  }

  private pointerUp(ev: PointerEvent): void {
    const drag = this.drag;
    this.drag = { kind: "idle" };
    if (drag.kind === "marquee") {
      this.marqueeBox.style.display = "none";
      const rect = normalizeRect(drag);
      const area = (rect.x1 - rect.x0) * (rect.y1 - rect.y0);
      const picked = area < 9
        ? [] // treat a click on empty space as deselect
        : marqueeSelect(this.store.positions, this.store.nodeCount, this.view, rect);
      const next = ev.shiftKey
        ? new Set([...this.store.selection, ...picked])
        : new Set(picked);
      this.store.setSelection(next);
      this.viewDirty = true;
    }
  }

  private updateMarqueeBox(): void {
    if (this.drag.kind !== "marquee") return;
    const rect = normalizeRect(this.drag);
    this.marqueeBox.style.left = `${rect.x0}px`;
    this.marqueeBox.style.top = `${rect.y0}px`;
    this.marqueeBox.style.width = `${rect.x1 - rect.x0}px`;
    this.marqueeBox.style.height = `${rect.y1 - rect.y0}px`;
  }
}

export function wsUrlFromLocation(loc: Location): string {
  const scheme = loc.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${loc.host}/ws`;
}
