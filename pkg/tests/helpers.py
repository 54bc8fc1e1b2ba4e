"""Shared helpers for protocol-level tests: a counter simulation whose
outputs embed the step number, and a websocket session wrapper with a
message log."""

import json

import numpy as np

from simdeck.engine import Simulation


class StreamSim(Simulation):
    """Counter sim whose text and image both embed the step number."""
    name = "sim_stream"
    directives = """
#@IVISIT:SIMULATION & sim_stream
#@IVISIT:SLIDER & gain & [200,1] & [0,10,3,0.5] & gain & -1 & float & 1
#@IVISIT:LISTSEL & Action & [10,2] & [Paint,Move] & str_action & -1 & string & Move
#@IVISIT:TEXT_OUT & Count & [10,1] & None & str_count
#@IVISIT:IMAGE & View & 1.0 & [0,255] & im & int
"""

    class Params:
        gain = 1.0
        str_action = "Move"

    class Data:
        str_count = ""
        im = np.zeros((2, 2))

    def init(self):
        self.n = 0
        self.data.str_count = "0"

    def step(self):
        self.n += 1
        self.data.str_count = str(self.n)
        self.data.im = np.full((2, 2), self.n % 256, dtype=np.float64)

    def bind(self, engine):
        from simdeck.automaton import AutomatonConfig, bind_automaton
        bind_automaton(engine, "View", "im", None,
                       AutomatonConfig("str_action", {"Paint": "click", "Move": "drag"}),
                       "handle_action")

    def handle_action(self, action, pos, pos_init, pos_prev):
        pass


class Conn:
    """Wraps a websocket test session with a message log so assertions can
    scan messages already received as well as future ones."""

    def __init__(self, ws):
        self.ws = ws
        self.log = []

    def pump(self):
        raw = self.ws.receive()
        if "text" in raw:
            msg = json.loads(raw["text"])
        elif "bytes" in raw:
            msg = raw["bytes"]
        else:
            raise AssertionError(f"socket closed: {raw}")
        self.log.append(msg)
        return msg

    def until(self, pred, limit=500, fresh=False):
        """Return the first message matching pred, receiving as needed.  With
        ``fresh`` only messages received from now on count."""
        start = len(self.log) if fresh else 0
        for msg in self.log[start:]:
            if pred(msg):
                return msg
        for _ in range(limit):
            msg = self.pump()
            if pred(msg):
                return msg
        raise AssertionError(f"condition never met after {limit} messages")

    def send(self, obj):
        self.ws.send_text(json.dumps(obj))

    def action(self, cmd):
        self.send({"type": "action", "cmd": cmd})
        msg = self.until(lambda m: isinstance(m, dict) and (
            (m.get("type") == "report" and m.get("cmd") == cmd) or
            m.get("type") == "error"), fresh=True)
        assert msg["type"] == "report", f"{cmd} failed: {msg}"
        return msg


def is_type(t):
    return lambda m: isinstance(m, dict) and m.get("type") == t


def layout_with(name, **attrs):
    def pred(m):
        if not (isinstance(m, dict) and m.get("type") == "layout"):
            return False
        for w in m["widgets"]:
            if w["name"] == name and all(w.get(k) == v for k, v in attrs.items()):
                return True
        return False
    return pred
