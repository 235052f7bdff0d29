import json

import numpy as np
import pytest

from layoutlab import protocol as P
from layoutlab.protocol import (Action, DecodeError, SessionPhase, decode,
                                encode, transition)

from helpers import random_wire_message

ALL_SAMPLES = [
    P.Init(nodes=(("a", 6.0), ("b", 8.5)), edges=((0, 1),),
           params={"alpha": 1.0}, phase="SIMULATING"),
    P.Positions(seq=3, xy=(1.5, -2.25, 0.0, 7.0)),
    P.PhaseChanged(phase="PAUSED"),
    P.Error(message="nope"),
    P.SetParams(params={"theta": 0.5}),
    P.Pause(), P.Resume(), P.EnterEdit(), P.ExitEdit(),
    P.EditTranslate(ids=("a", "b"), dx=4.5, dy=-1.0),
    P.EditRotate(ids=("a",), angle_rad=1.25, pivot=(0.5, 0.5)),
    P.EditRotate(ids=("a",), angle_rad=-0.5, pivot=None),
    P.SetPinned(ids=("b",), pinned=True),
    P.Finish(),
]


class TestEncode:
    def test_finish_frame(self):
        assert encode(P.Finish()) == b'{"type":"finish"}'

    def test_pause_frame(self):
        assert encode(P.Pause()) == b'{"type":"pause"}'

    def test_positions_frame_values(self):
        frame = encode(P.Positions(seq=1, xy=(7.0711, 0.0)))
        doc = json.loads(frame)
        assert doc == {"type": "positions", "seq": 1, "xy": [7.0711, 0]}

    def test_init_contains_version(self):
        frame = encode(ALL_SAMPLES[0])
        doc = json.loads(frame)
        assert doc["v"] == 1 and doc["type"] == "init"
        assert doc["nodes"][0] == {"id": "a", "radius": 6.0}
        assert doc["edges"] == [{"source": 0, "target": 1}]

    def test_nonfinite_rejected(self):
        with pytest.raises(P.EncodeError):
            encode(P.EditTranslate(ids=(), dx=float("nan"), dy=0.0))


class TestDecode:
    @pytest.mark.parametrize("msg", ALL_SAMPLES, ids=lambda m: type(m).__name__)
    def test_round_trip_identity(self, msg):
        assert decode(encode(msg)) == msg

    def test_unknown_type(self):
        with pytest.raises(DecodeError, match="unknown message type"):
            decode(b'{"type":"warp"}')

    def test_wrong_field_type(self):
        with pytest.raises(DecodeError, match="angle_rad"):
            decode(b'{"type":"edit_rotate","ids":["a"],"angle_rad":"x"}')

    def test_malformed_json(self):
        with pytest.raises(DecodeError, match="malformed JSON"):
            decode(b"{")

    def test_missing_type(self):
        with pytest.raises(DecodeError, match="'type'"):
            decode(b'{"seq":1}')

    def test_not_an_object(self):
        with pytest.raises(DecodeError):
            decode(b"[1,2,3]")

    def test_unknown_top_level_fields_ignored(self):
        msg = decode(b'{"type":"pause","extra":42,"future":"stuff"}')
        assert msg == P.Pause()

    def test_id_resolution_against_known_ids(self):
        frame = b'{"type":"edit_translate","ids":["ghost"],"dx":1,"dy":2}'
        assert decode(frame).ids == ("ghost",)
        with pytest.raises(DecodeError, match="unknown node id"):
            decode(frame, node_ids={"a", "b"})

    def test_nan_constant_rejected(self):
        with pytest.raises(DecodeError):
            decode(b'{"type":"edit_translate","ids":[],"dx":NaN,"dy":0}')

    def test_bool_is_not_a_number(self):
        with pytest.raises(DecodeError, match="dx"):
            decode(b'{"type":"edit_translate","ids":[],"dx":true,"dy":0}')

    def test_pinned_must_be_boolean(self):
        with pytest.raises(DecodeError, match="pinned"):
            decode(b'{"type":"set_pinned","ids":[],"pinned":1}')

    def test_odd_xy_rejected(self):
        with pytest.raises(DecodeError, match="even"):
            decode(b'{"type":"positions","seq":1,"xy":[1.0,2.0,3.0]}')

    def test_utf8_ids_survive(self):
        msg = P.EditTranslate(ids=("αβγ", "node-1"), dx=0.0, dy=0.0)
        assert decode(encode(msg)) == msg


def test_round_trip_randomized_sample():
    rng = np.random.default_rng(99)
    for _ in range(2000):
        msg = random_wire_message(rng)
        assert decode(encode(msg)) == msg


LIVE = (SessionPhase.SIMULATING, SessionPhase.PAUSED, SessionPhase.EDITING)
CLIENT_SAMPLES = [m for m in ALL_SAMPLES if isinstance(m, P.CLIENT_MESSAGES)]


class TestTransition:
    def test_simulating_pause(self):
        phase, actions = transition(SessionPhase.SIMULATING, P.Pause())
        assert phase is SessionPhase.PAUSED
        assert [a.kind for a in actions] == ["stop_ticking"]

    def test_editing_rotate_applies(self):
        msg = P.EditRotate(ids=("a",), angle_rad=1.0)
        phase, actions = transition(SessionPhase.EDITING, msg)
        assert phase is SessionPhase.EDITING
        assert actions[0].kind == "apply_edit" and actions[0].message is msg

    def test_simulating_translate_rejected(self):
        phase, actions = transition(SessionPhase.SIMULATING,
                                    P.EditTranslate(ids=(), dx=0, dy=0))
        assert phase is SessionPhase.SIMULATING
        assert actions[0].kind == "error"

    @pytest.mark.parametrize("phase", LIVE)
    def test_finish_from_any_live_phase(self, phase):
        new, actions = transition(phase, P.Finish())
        assert new is SessionPhase.FINISHED
        assert actions[0].kind == "finish"

    @pytest.mark.parametrize("phase", LIVE)
    def test_set_params_valid_in_all_live_phases(self, phase):
        new, actions = transition(phase, P.SetParams(params={"alpha": 1.0}))
        assert new is phase
        assert actions[0].kind == "apply_params"

    def test_paused_resume_and_enter_edit(self):
        assert transition(SessionPhase.PAUSED, P.Resume())[0] is SessionPhase.SIMULATING
        assert transition(SessionPhase.PAUSED, P.EnterEdit())[0] is SessionPhase.EDITING

    def test_editing_exit_and_resume(self):
        assert transition(SessionPhase.EDITING, P.ExitEdit())[0] is SessionPhase.PAUSED
        assert transition(SessionPhase.EDITING, P.Resume())[0] is SessionPhase.SIMULATING

    @pytest.mark.parametrize("phase", list(SessionPhase))
    @pytest.mark.parametrize("msg", ALL_SAMPLES, ids=lambda m: type(m).__name__)
    def test_total_over_all_pairs(self, phase, msg):
        new, actions = transition(phase, msg)
        assert isinstance(new, SessionPhase)
        assert isinstance(actions, tuple)
        assert all(isinstance(a, Action) for a in actions)

    @pytest.mark.parametrize("msg", ALL_SAMPLES, ids=lambda m: type(m).__name__)
    def test_finished_absorbs_everything(self, msg):
        phase, actions = transition(SessionPhase.FINISHED, msg)
        assert phase is SessionPhase.FINISHED
        assert actions[0].kind == "error"

    def test_rejections_never_change_phase(self):
        for phase in LIVE:
            for msg in CLIENT_SAMPLES:
                new, actions = transition(phase, msg)
                if actions and actions[0].kind == "error":
                    assert new is phase

    def test_server_messages_rejected_as_commands(self):
        phase, actions = transition(SessionPhase.SIMULATING, P.Error(message="x"))
        assert phase is SessionPhase.SIMULATING
        assert actions[0].kind == "error"
