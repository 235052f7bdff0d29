"""Wire schema and session state machine between the tick loop and the UI.

One JSON object per WebSocket text frame, discriminated by a "type" field.
Clients must ignore unknown fields (forward compatibility); the server
rejects unknown message types but keeps the connection open. Node ids, not
indices, travel on the wire for edits so client-side reordering can never
corrupt a selection.
"""

import enum
import json
import math
from dataclasses import dataclass

PROTOCOL_VERSION = 1


class DecodeError(ValueError):
    pass


class EncodeError(ValueError):
    pass


class SessionPhase(str, enum.Enum):
    SIMULATING = "SIMULATING"
    PAUSED = "PAUSED"
    EDITING = "EDITING"
    FINISHED = "FINISHED"


# server -> client ----------------------------------------------------------

@dataclass(frozen=True)
class Init:
    nodes: tuple  # (id, radius) pairs, array order defines node indices
    edges: tuple  # (source_index, target_index) pairs
    params: dict
    phase: str
    v: int = PROTOCOL_VERSION


@dataclass(frozen=True)
class Positions:
    seq: int
    xy: tuple  # flat (x0, y0, x1, y1, ...), length 2N


@dataclass(frozen=True)
class PhaseChanged:
    phase: str


@dataclass(frozen=True)
class Error:
    message: str


# client -> server ----------------------------------------------------------

@dataclass(frozen=True)
class SetParams:
    params: dict


@dataclass(frozen=True)
class Pause:
    pass


@dataclass(frozen=True)
class Resume:
    pass


@dataclass(frozen=True)
class EnterEdit:
    pass


@dataclass(frozen=True)
class ExitEdit:
    pass


@dataclass(frozen=True)
class EditTranslate:
    ids: tuple
    dx: float
    dy: float


@dataclass(frozen=True)
class EditRotate:
    ids: tuple
    angle_rad: float
    pivot: tuple | None = None


@dataclass(frozen=True)
class SetPinned:
    ids: tuple
    pinned: bool


@dataclass(frozen=True)
class Finish:
    pass


WireMessage = (Init | Positions | PhaseChanged | Error | SetParams | Pause | Resume
               | EnterEdit | ExitEdit | EditTranslate | EditRotate | SetPinned | Finish)

_TAGS = {
    Init: "init",
    Positions: "positions",
    PhaseChanged: "phase",
    Error: "error",
    SetParams: "set_params",
    Pause: "pause",
    Resume: "resume",
    EnterEdit: "enter_edit",
    ExitEdit: "exit_edit",
    EditTranslate: "edit_translate",
    EditRotate: "edit_rotate",
    SetPinned: "set_pinned",
    Finish: "finish",
}
_BY_TAG = {tag: cls for cls, tag in _TAGS.items()}
SERVER_MESSAGES = (Init, Positions, PhaseChanged, Error)
CLIENT_MESSAGES = (SetParams, Pause, Resume, EnterEdit, ExitEdit,
                   EditTranslate, EditRotate, SetPinned, Finish)


def tag_of(msg: WireMessage) -> str:
    return _TAGS[type(msg)]


def encode(msg: WireMessage) -> bytes:
    """UTF-8 JSON, one object per message, full float round-trip precision."""
    tag = _TAGS.get(type(msg))
    if tag is None:
        raise EncodeError(f"not a wire message: {type(msg).__name__}")
    body: dict = {"type": tag}
    if isinstance(msg, Init):
        body["v"] = msg.v
        body["nodes"] = [{"id": i, "radius": r} for i, r in msg.nodes]
        body["edges"] = [{"source": s, "target": t} for s, t in msg.edges]
        body["params"] = msg.params
        body["phase"] = msg.phase
    elif isinstance(msg, Positions):
        body["seq"] = msg.seq
        body["xy"] = list(msg.xy)
    elif isinstance(msg, PhaseChanged):
        body["phase"] = msg.phase
    elif isinstance(msg, Error):
        body["message"] = msg.message
    elif isinstance(msg, SetParams):
        body["params"] = msg.params
    elif isinstance(msg, EditTranslate):
        body.update(ids=list(msg.ids), dx=msg.dx, dy=msg.dy)
    elif isinstance(msg, EditRotate):
        body.update(ids=list(msg.ids), angle_rad=msg.angle_rad)
        if msg.pivot is not None:
            body["pivot"] = list(msg.pivot)
    elif isinstance(msg, SetPinned):
        body.update(ids=list(msg.ids), pinned=msg.pinned)
    try:
        return json.dumps(body, separators=(",", ":"), allow_nan=False).encode("utf-8")
    except ValueError as exc:
        raise EncodeError(f"message contains a non-finite number: {exc}") from None


def _reject_constant(value):
    raise DecodeError(f"non-finite JSON constant {value!r}")


def _number(obj: dict, key: str, tag: str) -> float:
    if key not in obj:
        raise DecodeError(f"{tag}: missing field {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DecodeError(f"{tag}: field {key!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise DecodeError(f"{tag}: field {key!r} must be finite")
    return float(value)


def _integer(obj: dict, key: str, tag: str) -> int:
    value = _number(obj, key, tag)
    if value != int(value):
        raise DecodeError(f"{tag}: field {key!r} must be an integer")
    return int(value)


def _string(obj: dict, key: str, tag: str) -> str:
    if key not in obj:
        raise DecodeError(f"{tag}: missing field {key!r}")
    if not isinstance(obj[key], str):
        raise DecodeError(f"{tag}: field {key!r} must be a string")
    return obj[key]


def _boolean(obj: dict, key: str, tag: str) -> bool:
    if key not in obj:
        raise DecodeError(f"{tag}: missing field {key!r}")
    if not isinstance(obj[key], bool):
        raise DecodeError(f"{tag}: field {key!r} must be a boolean")
    return obj[key]


def _object(obj: dict, key: str, tag: str) -> dict:
    if key not in obj:
        raise DecodeError(f"{tag}: missing field {key!r}")
    if not isinstance(obj[key], dict):
        raise DecodeError(f"{tag}: field {key!r} must be an object")
    return obj[key]


def _ids(obj: dict, tag: str, node_ids) -> tuple:
    if "ids" not in obj or not isinstance(obj["ids"], list):
        raise DecodeError(f"{tag}: field 'ids' must be an array of node ids")
    out = []
    for item in obj["ids"]:
        if not isinstance(item, str):
            raise DecodeError(f"{tag}: node id {item!r} must be a string")
        if node_ids is not None and item not in node_ids:
            raise DecodeError(f"{tag}: unknown node id {item!r}")
        out.append(item)
    return tuple(out)


def decode(data, node_ids=None) -> WireMessage:
    """Parse one frame; inverse of encode on valid input.

    Unknown top-level fields are ignored; an unknown "type" is rejected.
    When node_ids is given, every edit selection entry must resolve to it.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"frame is not UTF-8: {exc}") from None
    try:
        obj = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise DecodeError("frame must be a JSON object")
    tag = obj.get("type")
    if not isinstance(tag, str):
        raise DecodeError("missing 'type' field")
    cls = _BY_TAG.get(tag)
    if cls is None:
        raise DecodeError(f"unknown message type {tag!r}")

    if cls is Init:
        if not isinstance(obj.get("nodes"), list) or not isinstance(obj.get("edges"), list):
            raise DecodeError("init: 'nodes' and 'edges' must be arrays")
        nodes = []
        for item in obj["nodes"]:
            if not isinstance(item, dict):
                raise DecodeError(f"init.node: expected an object, got {item!r}")
            nodes.append((_string(item, "id", "init.node"), _number(item, "radius", "init.node")))
        edges = []
        for item in obj["edges"]:
            if not isinstance(item, dict):
                raise DecodeError(f"init.edge: expected an object, got {item!r}")
            edges.append((_integer(item, "source", "init.edge"), _integer(item, "target", "init.edge")))
        return Init(nodes=tuple(nodes), edges=tuple(edges),
                    params=_object(obj, "params", "init"),
                    phase=_string(obj, "phase", "init"), v=_integer(obj, "v", "init"))
    if cls is Positions:
        if not isinstance(obj.get("xy"), list):
            raise DecodeError("positions: 'xy' must be an array")
        xy = []
        for k, value in enumerate(obj["xy"]):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DecodeError(f"positions: xy[{k}] must be a finite number")
            xy.append(float(value))
        if len(xy) % 2:
            raise DecodeError("positions: 'xy' must have even length")
        return Positions(seq=_integer(obj, "seq", "positions"), xy=tuple(xy))
    if cls is PhaseChanged:
        return PhaseChanged(phase=_string(obj, "phase", "phase"))
    if cls is Error:
        return Error(message=_string(obj, "message", "error"))
    if cls is SetParams:
        return SetParams(params=_object(obj, "params", "set_params"))
    if cls is EditTranslate:
        return EditTranslate(ids=_ids(obj, "edit_translate", node_ids),
                             dx=_number(obj, "dx", "edit_translate"),
                             dy=_number(obj, "dy", "edit_translate"))
    if cls is EditRotate:
        pivot = None
        if obj.get("pivot") is not None:
            raw = obj["pivot"]
            ok = (isinstance(raw, list) and len(raw) == 2
                  and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                          and math.isfinite(v) for v in raw))
            if not ok:
                raise DecodeError("edit_rotate: 'pivot' must be [x, y] with finite numbers")
            pivot = (float(raw[0]), float(raw[1]))
        return EditRotate(ids=_ids(obj, "edit_rotate", node_ids),
                          angle_rad=_number(obj, "angle_rad", "edit_rotate"),
                          pivot=pivot)
    if cls is SetPinned:
        return SetPinned(ids=_ids(obj, "set_pinned", node_ids),
                         pinned=_boolean(obj, "pinned", "set_pinned"))
    return cls()


# state machine --------------------------------------------------------------

@dataclass(frozen=True)
class Action:
    kind: str  # start_ticking | stop_ticking | apply_params | apply_edit | finish | error
    message: WireMessage | None = None
    reason: str | None = None


def _reject(phase: SessionPhase, why: str) -> tuple[SessionPhase, tuple[Action, ...]]:
    return phase, (Action("error", reason=why),)


def transition(phase: SessionPhase, msg: WireMessage) -> tuple[SessionPhase, tuple[Action, ...]]:
    """Total over (phase, message type); rejections keep the phase and never
    terminate the session. FINISHED absorbs everything."""
    tag = _TAGS.get(type(msg))
    if tag is None:
        return _reject(phase, f"not a wire message: {type(msg).__name__}")
    if phase is SessionPhase.FINISHED:
        return _reject(phase, f"session is finished; {tag!r} ignored")
    if isinstance(msg, SERVER_MESSAGES):
        return _reject(phase, f"{tag!r} is a server message, not a command")
    if isinstance(msg, Finish):
        return SessionPhase.FINISHED, (Action("finish"),)
    if isinstance(msg, SetParams):
        # Live tuning is the core feature: legal in every live phase.
        return phase, (Action("apply_params", message=msg),)

    if phase is SessionPhase.SIMULATING:
        if isinstance(msg, Pause):
            return SessionPhase.PAUSED, (Action("stop_ticking"),)
        if isinstance(msg, EnterEdit):
            return SessionPhase.EDITING, (Action("stop_ticking"),)
    elif phase is SessionPhase.PAUSED:
        if isinstance(msg, Resume):
            return SessionPhase.SIMULATING, (Action("start_ticking"),)
        if isinstance(msg, EnterEdit):
            return SessionPhase.EDITING, ()
    elif phase is SessionPhase.EDITING:
        if isinstance(msg, (EditTranslate, EditRotate, SetPinned)):
            return SessionPhase.EDITING, (Action("apply_edit", message=msg),)
        if isinstance(msg, ExitEdit):
            return SessionPhase.PAUSED, ()
        if isinstance(msg, Resume):
            return SessionPhase.SIMULATING, (Action("start_ticking"),)
    return _reject(phase, f"{tag!r} is not allowed in phase {phase.value}")
