import json
import queue
import socket
import threading
import time

import numpy as np
import pytest
from websockets.sync.client import connect

from layoutlab.graph import parse_edgelist
from layoutlab.server import (IdleTimeoutError, SessionConfig, SessionError,
                              bind_port, run_session)
from layoutlab.simulation import SimParams, init_positions, run_headless

from helpers import make_graph


def start_session(graph, params=None, seed=0, **cfg):
    """Run the blocking session in a thread; returns (thread, slot, ws_url)."""
    url_q = queue.Queue()
    config = SessionConfig(on_start=url_q.put, **cfg)
    slot = {}

    def target():
        try:
            slot["result"] = run_session(graph, params, seed, config)
        except BaseException as exc:  # surfaced by the test
            slot["error"] = exc

    thread = threading.Thread(target=target, daemon=True)
    thread.start()
    url = url_q.get(timeout=10)
    return thread, slot, url.replace("http://", "ws://") + "ws"


def recv_json(ws, timeout=5.0):
    return json.loads(ws.recv(timeout=timeout))


def send(ws, **obj):
    ws.send(json.dumps(obj))


def recv_until(ws, pred, timeout=5.0, collect=None):
    deadline = time.monotonic() + timeout
    while True:
        remaining = deadline - time.monotonic()
        assert remaining > 0, "timed out waiting for frame"
        frame = recv_json(ws, timeout=remaining)
        if collect is not None:
            collect.append(frame)
        if pred(frame):
            return frame


class TestBindPort:
    def test_ephemeral(self):
        sock, port, url = bind_port(0)
        assert port > 0
        assert url == f"http://127.0.0.1:{port}/"
        sock.close()

    def test_busy_port_is_explicit_error(self):
        holder = socket.socket()
        holder.bind(("127.0.0.1", 0))
        holder.listen(1)
        busy = holder.getsockname()[1]
        with pytest.raises(SessionError, match=str(busy)):
            bind_port(busy)
        holder.close()

    def test_loopback_only(self):
        sock, _port, url = bind_port(0)
        assert "127.0.0.1" in url
        assert sock.getsockname()[0] == "127.0.0.1"
        sock.close()


class TestSessionLifecycle:
    def test_immediate_finish_returns_spiral(self):
        g = parse_edgelist("a b\nb c\nc a")
        # glacial tick rate: the finish command preempts the first tick
        thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
        with connect(ws_url) as ws:
            init = recv_json(ws)
            assert init["type"] == "init" and init["v"] == 1
            assert [n["id"] for n in init["nodes"]] == ["a", "b", "c"]
            assert init["phase"] == "SIMULATING"
            first = recv_json(ws)
            assert first["type"] == "positions" and first["seq"] == 1
            send(ws, type="finish")
            recv_until(ws, lambda f: f.get("phase") == "FINISHED")
        thread.join(timeout=10)
        state, params = slot["result"]
        assert np.array_equal(state.positions, init_positions(3))
        assert params.engine == "annealed"

    def test_returned_state_equals_last_broadcast_snapshot(self):
        g = parse_edgelist("a b\nb c")
        thread, slot, ws_url = start_session(g, tick_rate=120, snapshot_rate=60)
        frames = []
        with connect(ws_url) as ws:
            recv_json(ws)  # init
            deadline = time.monotonic() + 3.0
            while time.monotonic() < deadline:
                frame = recv_json(ws, timeout=3.0)
                if frame["type"] == "positions":
                    frames.append(frame)
                if len(frames) >= 5:
                    break
            send(ws, type="finish")
            try:
                while True:
                    frame = recv_json(ws, timeout=3.0)
                    if frame["type"] == "positions":
                        frames.append(frame)
            except Exception:
                pass  # server closed after the final snapshot
        thread.join(timeout=10)
        state, _ = slot["result"]
        last = frames[-1]
        assert np.array_equal(np.array(last["xy"]).reshape(-1, 2), state.positions)

    def test_seq_strictly_increasing(self):
        g = make_graph(10, [(i, i + 1) for i in range(9)])
        thread, slot, ws_url = start_session(g, tick_rate=200, snapshot_rate=100)
        seqs = []
        with connect(ws_url) as ws:
            recv_json(ws)
            deadline = time.monotonic() + 3.0
            while len(seqs) < 15 and time.monotonic() < deadline:
                frame = recv_json(ws, timeout=3.0)
                if frame["type"] == "positions":
                    seqs.append(frame["seq"])
            send(ws, type="finish")
        thread.join(timeout=10)
        assert len(seqs) >= 5
        assert all(b > a for a, b in zip(seqs, seqs[1:]))

    def test_second_client_refused_first_unaffected(self):
        g = parse_edgelist("a b")
        thread, slot, ws_url = start_session(g, tick_rate=50, snapshot_rate=25)
        with connect(ws_url) as first:
            recv_json(first)
            with connect(ws_url) as second:
                frame = recv_json(second)
                assert frame["type"] == "error"
                with pytest.raises(Exception):
                    # server closes the intruder after the error frame
                    while True:
                        second.recv(timeout=2)
            send(first, type="finish")
            recv_until(first, lambda f: f.get("phase") == "FINISHED")
        thread.join(timeout=10)
        assert "result" in slot

    def test_decode_error_keeps_connection_open(self):
        g = parse_edgelist("a b")
        thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
        with connect(ws_url) as ws:
            recv_json(ws)
            recv_json(ws)  # first snapshot
            ws.send("{not json")
            frame = recv_json(ws)
            assert frame["type"] == "error" and "JSON" in frame["message"]
            send(ws, type="warp")
            frame = recv_json(ws)
            assert frame["type"] == "error" and "unknown" in frame["message"]
            send(ws, type="edit_translate", ids=["ghost"], dx=1, dy=1)
            frame = recv_json(ws)
            assert frame["type"] == "error" and "ghost" in frame["message"]
            send(ws, type="finish")
            recv_until(ws, lambda f: f.get("phase") == "FINISHED")
        thread.join(timeout=10)
        assert "result" in slot


class TestEditingFlow:
    def test_pause_edit_translate_finish(self):
        # glacial tick rate: no ticks interleave, so the edit is the only
        # thing that can change positions
        g = parse_edgelist("a b\nb c\nc d")
        thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
        with connect(ws_url) as ws:
            recv_json(ws)
            baseline = recv_until(ws, lambda f: f["type"] == "positions")
            base = np.array(baseline["xy"]).reshape(-1, 2)
            send(ws, type="pause")
            recv_until(ws, lambda f: f.get("phase") == "PAUSED")
            send(ws, type="enter_edit")
            recv_until(ws, lambda f: f.get("phase") == "EDITING")
            send(ws, type="edit_translate", ids=["b", "c"], dx=100.5, dy=-40.25)
            moved = recv_until(ws, lambda f: f["type"] == "positions"
                               and f["xy"] != baseline["xy"])
            got = np.array(moved["xy"]).reshape(-1, 2)
            expected = base.copy()
            expected[[1, 2]] += [100.5, -40.25]
            assert np.array_equal(got, expected)
            send(ws, type="finish")
            recv_until(ws, lambda f: f.get("phase") == "FINISHED")
        thread.join(timeout=10)
        state, _ = slot["result"]
        assert np.array_equal(state.positions, expected)

    def test_edit_rejected_while_simulating(self):
        g = parse_edgelist("a b")
        thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
        with connect(ws_url) as ws:
            recv_json(ws)
            send(ws, type="edit_translate", ids=["a"], dx=1, dy=1)
            frame = recv_until(ws, lambda f: f["type"] == "error")
            assert "not allowed" in frame["message"]
            send(ws, type="finish")
        thread.join(timeout=10)
        assert "result" in slot

    def test_snapshots_never_torn_by_commands(self):
        # translate everything by a huge delta; every snapshot must sit
        # entirely on one side of it
        g = make_graph(12, [(i, (i + 1) % 12) for i in range(12)])
        thread, slot, ws_url = start_session(g, tick_rate=300, snapshot_rate=150)
        frames = []
        with connect(ws_url) as ws:
            recv_json(ws)
            time.sleep(0.3)
            send(ws, type="pause")
            send(ws, type="enter_edit")
            send(ws, type="edit_translate",
                 ids=[f"n{i}" for i in range(12)], dx=1e6, dy=0)
            moved = recv_until(ws, lambda f: f["type"] == "positions"
                               and max(f["xy"][::2]) > 5e5, collect=frames)
            send(ws, type="finish")
            recv_until(ws, lambda f: f.get("phase") == "FINISHED", collect=frames)
        thread.join(timeout=10)
        for frame in frames:
            if frame.get("type") != "positions":
                continue
            xs = np.array(frame["xy"][::2])
            assert (xs < 5e5).all() or (xs > 5e5).all()

    def test_set_params_reheats_after_convergence(self):
        g = parse_edgelist("a b\nb c")
        params = SimParams()
        params.update({"alpha_decay": 0.5})  # converges in 10 ticks
        thread, slot, ws_url = start_session(g, params=params,
                                             tick_rate=200, snapshot_rate=100)
        with connect(ws_url) as ws:
            recv_json(ws)
            # drain until the stream goes quiet (converged and flushed)
            settled = None
            while True:
                try:
                    frame = recv_json(ws, timeout=1.0)
                except TimeoutError:
                    break
                if frame["type"] == "positions":
                    settled = frame
            assert settled is not None
            send(ws, type="set_params", params={"alpha": 1.0})
            frame = recv_until(ws, lambda f: f["type"] == "positions"
                               and f["xy"] != settled["xy"], timeout=5.0)
            assert frame["seq"] > settled["seq"]
            send(ws, type="finish")
        thread.join(timeout=10)
        assert "result" in slot

    def test_bad_params_get_error_frame(self):
        g = parse_edgelist("a b")
        thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
        with connect(ws_url) as ws:
            recv_json(ws)
            send(ws, type="set_params", params={"warp_speed": 11})
            frame = recv_until(ws, lambda f: f["type"] == "error")
            assert "warp_speed" in frame["message"]
            send(ws, type="finish")
        thread.join(timeout=10)
        assert "result" in slot


class TestHeadlessFallback:
    def test_idle_timeout_with_max_ticks_runs_headless(self):
        g = make_graph(12, [(i, (i + 1) % 12) for i in range(12)])
        params = SimParams()
        config = SessionConfig(idle_timeout=0.3, max_ticks=40)
        state, out_params = run_session(g, params, seed=3, config=config)
        want, _ = run_headless(g, params, seed=3, max_ticks=40)
        assert np.array_equal(state.positions, want.positions)
        assert out_params.engine == params.engine

    def test_idle_timeout_without_max_ticks_errors_with_state(self):
        g = parse_edgelist("a b")
        config = SessionConfig(idle_timeout=0.2)
        with pytest.raises(IdleTimeoutError) as exc:
            run_session(g, SimParams(), seed=0, config=config)
        assert np.array_equal(exc.value.state.positions, init_positions(2))


class TestConfigValidation:
    def test_snapshot_rate_cannot_exceed_tick_rate(self):
        with pytest.raises(ValueError):
            SessionConfig(tick_rate=10, snapshot_rate=20).validate()

    @pytest.mark.parametrize("field,value", [
        ("tick_rate", 0), ("snapshot_rate", -1), ("idle_timeout", 0), ("max_ticks", 0),
    ])
    def test_bad_values(self, field, value):
        config = SessionConfig()
        setattr(config, field, value)
        with pytest.raises(ValueError):
            config.validate()


def test_http_fallback_page_and_404():
    import urllib.request
    g = parse_edgelist("a b")
    thread, slot, ws_url = start_session(g, tick_rate=0.01, snapshot_rate=0.01)
    base = ws_url.replace("ws://", "http://").removesuffix("ws")
    page = urllib.request.urlopen(base, timeout=5).read().decode()
    assert "layoutlab" in page
    with pytest.raises(urllib.error.HTTPError) as exc:
        urllib.request.urlopen(base + "nope.js", timeout=5)
    assert exc.value.code == 404
    with connect(ws_url) as ws:
        recv_json(ws)
        send(ws, type="finish")
    thread.join(timeout=10)
    assert "result" in slot
