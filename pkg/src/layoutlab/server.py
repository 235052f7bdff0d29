"""Loopback web service hosting the UI assets and one live layout session.

Concurrency contract: exactly one task (the session loop) mutates the
simulation. WebSocket reads append decoded commands to a queue; the loop
drains that queue between ticks, so a broadcast snapshot always reflects a
state from between whole commands, never a torn mix. Snapshots flow outward
through a latest-wins outbox: a slow client drops frames, never stalls the
simulation, and the seq numbers it does receive are strictly increasing.
"""

import asyncio
import socket
import webbrowser
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from aiohttp import WSMsgType, web

from . import editing
from .graph import Graph, require_valid
from .protocol import (Action, DecodeError, EditRotate, EditTranslate, Error,
                       Init, PhaseChanged, Positions, SessionPhase, SetPinned,
                       decode, encode, transition)
from .simulation import LayoutState, SimParams, Simulation


class SessionError(RuntimeError):
    pass


class IdleTimeoutError(SessionError):
    """No client connected in time; carries the best state reached so far."""

    def __init__(self, message: str, state: LayoutState, params: SimParams):
        super().__init__(message)
        self.state = state
        self.params = params


@dataclass
class SessionConfig:
    port: int = 0
    open_browser: bool = False
    snapshot_rate: float = 30.0
    tick_rate: float = 60.0
    idle_timeout: float | None = None
    max_ticks: int | None = None
    ui_dir: str | None = None
    on_start: Callable[[str], None] | None = None

    def validate(self) -> None:
        if not (self.tick_rate > 0 and self.snapshot_rate > 0):
            raise ValueError("tick_rate and snapshot_rate must be > 0")
        if self.snapshot_rate > self.tick_rate:
            raise ValueError("snapshot_rate must not exceed tick_rate")
        if self.idle_timeout is not None and self.idle_timeout <= 0:
            raise ValueError("idle_timeout must be > 0 when set")
        if self.max_ticks is not None and self.max_ticks < 1:
            raise ValueError("max_ticks must be >= 1 when set")


def bind_port(requested: int = 0) -> tuple[socket.socket, int, str]:
    """Bind a loopback listening socket; no silent fallback on a busy port."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind(("127.0.0.1", requested))
    except OSError as exc:
        sock.close()
        raise SessionError(f"cannot bind 127.0.0.1:{requested}: {exc}") from None
    port = sock.getsockname()[1]
    return sock, port, f"http://127.0.0.1:{port}/"


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>layoutlab</title></head>
<body style="font-family: sans-serif; margin: 3em; color: #333">
<h1>layoutlab session</h1>
<p>The browser UI bundle is not built. The live WebSocket API is available at
<code>/ws</code>; build the frontend (see README) to steer this session
visually, or drive it from a script.</p>
</body></html>"""


class _Outbox:
    """Latest-wins handoff of encoded snapshot frames to one client."""

    def __init__(self):
        self.frame: str | None = None
        self.ready = asyncio.Event()

    def offer(self, frame: str) -> None:
        self.frame = frame
        self.ready.set()


class _Session:
    def __init__(self, graph: Graph, params: SimParams | None, seed: int,
                 config: SessionConfig):
        self.sim = Simulation(graph, params, seed)
        self.config = config
        self.graph = graph
        self.node_index = graph.index_of()
        self.phase = SessionPhase.SIMULATING
        self.commands: asyncio.Queue = asyncio.Queue()
        self.client: web.WebSocketResponse | None = None
        self.outbox: _Outbox | None = None
        self.sender_task: asyncio.Task | None = None
        self.first_client = asyncio.Event()
        self.finishing = False
        self.active = True  # engine wants more steps (not yet converged)
        self.seq = 0

    # ---------------------------------------------------------------- helpers

    def _should_tick(self) -> bool:
        return (self.phase is SessionPhase.SIMULATING and self.active
                and not self.finishing)

    def _init_frame(self) -> str:
        msg = Init(
            nodes=tuple((n.id, n.radius) for n in self.graph.nodes),
            edges=tuple((e.source, e.target) for e in self.graph.edges),
            params=self.sim.params.to_dict(),
            phase=self.phase.value,
        )
        return encode(msg).decode("utf-8")

    def _snapshot_frame(self) -> str:
        self.seq += 1
        xy = tuple(self.sim.state.positions.ravel().tolist())
        return encode(Positions(seq=self.seq, xy=xy)).decode("utf-8")

    def _offer_snapshot(self) -> None:
        if self.outbox is not None:
            self.outbox.offer(self._snapshot_frame())

    async def _send_direct(self, msg) -> None:
        if self.client is not None and not self.client.closed:
            try:
                await self.client.send_str(encode(msg).decode("utf-8"))
            except ConnectionResetError:
                pass

    # ------------------------------------------------------------- processing

    async def _apply(self, msg) -> None:
        before = self.phase
        self.phase, actions = transition(self.phase, msg)
        for action in actions:
            await self._run_action(action, msg)
        if self.phase is not before:
            await self._send_direct(PhaseChanged(phase=self.phase.value))

    async def _run_action(self, action: Action, msg) -> None:
        if action.kind == "error":
            await self._send_direct(Error(message=action.reason or "rejected"))
        elif action.kind == "apply_params":
            try:
                self.sim.params.update(msg.params)
            except (KeyError, ValueError) as exc:
                await self._send_direct(Error(message=f"set_params rejected: {exc}"))
            else:
                self.active = True  # tuning may reheat a settled layout
        elif action.kind == "apply_edit":
            try:
                self.sim.state = self._edit(msg)
            except editing.EditError as exc:
                await self._send_direct(Error(message=f"edit rejected: {exc}"))
            else:
                self.active = True
        elif action.kind == "finish":
            self.finishing = True
        # start_ticking / stop_ticking are implied by the phase itself

    def _edit(self, msg) -> LayoutState:
        sel = [self.node_index[i] for i in msg.ids]
        if isinstance(msg, EditTranslate):
            return editing.translate_selection(self.sim.state, sel, (msg.dx, msg.dy))
        if isinstance(msg, EditRotate):
            return editing.rotate_selection(self.sim.state, sel, msg.angle_rad,
                                            pivot=msg.pivot)
        if isinstance(msg, SetPinned):
            return editing.set_pinned(self.sim.state, sel, msg.pinned)
        raise editing.EditError(f"not an edit message: {type(msg).__name__}")

    async def _apply_batch(self, first) -> None:
        """Apply one command plus everything else already queued, in order."""
        await self._apply(first)
        while True:
            try:
                msg = self.commands.get_nowait()
            except asyncio.QueueEmpty:
                return
            await self._apply(msg)

    # -------------------------------------------------------------- main loop

    async def run(self) -> tuple[LayoutState, SimParams]:
        headless = await self._await_first_client()
        if headless:
            return self._run_headless()

        loop = asyncio.get_running_loop()
        tick_period = 1.0 / self.config.tick_rate
        snap_period = 1.0 / self.config.snapshot_rate
        next_snap = loop.time()
        # Commands preempt ticking: a tick runs only after a full quiet tick
        # period, so "connect and finish immediately" really demands no ticks.
        while not self.finishing:
            if self._should_tick():
                try:
                    msg = await asyncio.wait_for(self.commands.get(), timeout=tick_period)
                except asyncio.TimeoutError:
                    report = self.sim.step()
                    now = loop.time()
                    if report.converged:
                        self.active = False
                        self._offer_snapshot()  # flush the settled positions
                        next_snap = now + snap_period
                    elif now >= next_snap:
                        self._offer_snapshot()
                        next_snap = now + snap_period
                    continue
            else:
                msg = await self.commands.get()
            await self._apply_batch(msg)
            if not self.finishing:
                self._offer_snapshot()  # command effects become visible at once
                next_snap = loop.time() + snap_period

        # Final authoritative snapshot: cancel the latest-wins sender first so
        # nothing older can follow it, then send directly and close. The
        # FINISHED phase frame already went out when the transition fired.
        if self.sender_task is not None:
            self.sender_task.cancel()
        final_state = self.sim.state.copy()
        final_frame = Positions(seq=self.seq + 1, xy=tuple(final_state.positions.ravel().tolist()))
        self.seq += 1
        await self._send_direct(final_frame)
        if self.client is not None and not self.client.closed:
            try:
                await self.client.close()
            except ConnectionResetError:
                pass
        return final_state, self.sim.params.copy()

    async def _await_first_client(self) -> bool:
        """True means fall back to a headless run (idle timeout + max_ticks)."""
        if self.config.idle_timeout is None:
            await self.first_client.wait()
            return False
        try:
            await asyncio.wait_for(self.first_client.wait(), self.config.idle_timeout)
            return False
        except asyncio.TimeoutError:
            if self.config.max_ticks is not None:
                return True
            raise IdleTimeoutError(
                f"no client connected within {self.config.idle_timeout}s",
                self.sim.state.copy(), self.sim.params.copy()) from None

    def _run_headless(self) -> tuple[LayoutState, SimParams]:
        for _ in range(self.config.max_ticks or 0):
            report = self.sim.step()
            if report.converged:
                break
        return self.sim.state.copy(), self.sim.params.copy()

    # ------------------------------------------------------------- networking

    async def _sender(self, ws: web.WebSocketResponse, outbox: _Outbox) -> None:
        try:
            while not ws.closed:
                await outbox.ready.wait()
                outbox.ready.clear()
                frame = outbox.frame
                if frame is not None:
                    await ws.send_str(frame)
        except (ConnectionResetError, asyncio.CancelledError):
            return

    async def ws_handler(self, request: web.Request) -> web.WebSocketResponse:
        ws = web.WebSocketResponse()
        await ws.prepare(request)
        if self.client is not None or self.finishing:
            reason = ("session already has a client"
                      if self.client is not None else "session is finished")
            await ws.send_str(encode(Error(message=reason)).decode("utf-8"))
            await ws.close()
            return ws

        self.client = ws
        self.outbox = _Outbox()
        await ws.send_str(self._init_frame())
        self._offer_snapshot()
        self.sender_task = asyncio.create_task(self._sender(ws, self.outbox))
        self.first_client.set()
        try:
            async for msg in ws:
                if msg.type == WSMsgType.TEXT:
                    try:
                        command = decode(msg.data, node_ids=self.node_index.keys())
                    except DecodeError as exc:
                        await ws.send_str(encode(Error(message=str(exc))).decode("utf-8"))
                    else:
                        self.commands.put_nowait(command)
                elif msg.type in (WSMsgType.ERROR, WSMsgType.CLOSE):
                    break
        finally:
            if self.sender_task is not None:
                self.sender_task.cancel()
            if self.client is ws:
                self.client = None
                self.outbox = None
        return ws


def _resolve_ui_file(ui_dir: Path, tail: str) -> Path | None:
    candidate = (ui_dir / tail).resolve()
    try:
        candidate.relative_to(ui_dir.resolve())
    except ValueError:
        return None
    return candidate if candidate.is_file() else None


def _make_app(session: _Session, config: SessionConfig) -> web.Application:
    ui_dir = None
    if config.ui_dir is not None:
        ui_dir = Path(config.ui_dir)
    else:
        packaged = Path(__file__).parent / "ui_dist"
        if packaged.is_dir():
            ui_dir = packaged

    async def index(_request):
        if ui_dir is not None:
            page = _resolve_ui_file(ui_dir, "index.html")
            if page is not None:
                return web.FileResponse(page)
        return web.Response(text=_FALLBACK_PAGE, content_type="text/html")

    async def asset(request):
        if ui_dir is not None:
            found = _resolve_ui_file(ui_dir, request.match_info["tail"])
            if found is not None:
                return web.FileResponse(found)
        raise web.HTTPNotFound()

    app = web.Application()
    app.router.add_get("/", index)
    app.router.add_get("/ws", session.ws_handler)
    app.router.add_get("/{tail:.+}", asset)
    return app


async def serve_session(graph: Graph, params: SimParams | None = None, seed: int = 0,
                        config: SessionConfig | None = None) -> tuple[LayoutState, SimParams]:
    config = config or SessionConfig()
    config.validate()
    require_valid(graph)
    session = _Session(graph, params, seed, config)
    app = _make_app(session, config)
    runner = web.AppRunner(app)
    await runner.setup()
    sock, _port, url = bind_port(config.port)
    site = web.SockSite(runner, sock)
    await site.start()
    try:
        if config.on_start is not None:
            config.on_start(url)
        if config.open_browser:
            webbrowser.open(url)
        return await session.run()
    finally:
        await runner.cleanup()


def run_session(graph: Graph, params: SimParams | None = None, seed: int = 0,
                config: SessionConfig | None = None) -> tuple[LayoutState, SimParams]:
    """Serve the session and block until the client finishes (or idle fallback).

    Returns the final coordinate state and the last-applied parameters.
    """
    return asyncio.run(serve_session(graph, params, seed, config))
