"""Simulation host: drives the init/step/run/stop/cont lifecycle on a single
control-loop thread, applies queued parameter writes and pointer events
between steps, and publishes atomic frames.

All simulation and widget state is owned by the loop thread; other threads
communicate exclusively through queues, so hosted simulations never need
locks.  Frames handed to subscribers are immutable copies.
"""

from __future__ import annotations

import copy
import queue
import threading
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import automaton as autom
from . import widgets as widgets_rt
from .directives import DirectiveError, merge_into_collection, parse_source
from .model import (
    KIND_FLOAT,
    KIND_IMAGE,
    KIND_INT,
    KIND_KEYED_GROUP,
    KIND_STRING,
    KIND_TEXT,
    BindingReport,
    FieldRef,
    WidgetCollection,
    empty_collection,
    resolve_bindings,
)
from .store import Store, StoreError

POINTER_QUEUE_CAP = 512


def _materialize(nsclass):
    """Instantiate a plain namespace class, copying class attributes onto the
    instance so mutable defaults are not shared between simulations."""
    obj = nsclass()
    for k, v in list(vars(nsclass).items()):
        if not k.startswith("_") and not callable(v):
            setattr(obj, k, copy.deepcopy(v))
    return obj


class Simulation:
    """Base class for hosted simulations.

    Subclasses declare parameters in an inner ``Params`` class and outputs in
    an inner ``Data`` class (plain attributes; ints, floats, strings, dicts
    and lists for parameters, numpy arrays and strings for data).  ``init``
    (re)initializes all system state, ``step`` advances it by one step, and
    an optional ``bind(engine)`` attaches pointer handlers once widgets are
    known.
    """

    name = "sim"
    directives = ""

    class Params:
        pass

    class Data:
        pass

    def __init__(self, seed: int | None = 0):
        self.par = _materialize(self.Params)
        self.data = _materialize(self.Data)
        self.seed = seed

    def init(self) -> None:
        pass

    def step(self) -> None:
        pass


def build_registry(sim) -> dict[str, FieldRef]:
    """Enumerate the simulation's parameter and data fields as descriptors
    usable by resolve_bindings and by the engine's typed setters."""
    reg: dict[str, FieldRef] = {}
    for name, val in vars(sim.par).items():
        if name.startswith("_"):
            continue
        if isinstance(val, bool):
            continue
        if isinstance(val, int):
            reg[name] = FieldRef(name, KIND_INT)
        elif isinstance(val, float):
            reg[name] = FieldRef(name, KIND_FLOAT)
        elif isinstance(val, str):
            reg[name] = FieldRef(name, KIND_STRING)
        elif isinstance(val, dict):
            reg[name] = FieldRef(name, KIND_KEYED_GROUP, keys=tuple(val.keys()))
        elif isinstance(val, list) and val:
            elem = val[0]
            kind = (KIND_INT if isinstance(elem, int) and not isinstance(elem, bool)
                    else KIND_FLOAT if isinstance(elem, float)
                    else KIND_STRING if isinstance(elem, str) else None)
            if kind:
                reg[name] = FieldRef(name, kind, size=len(val))
    for name, val in vars(sim.data).items():
        if name.startswith("_"):
            continue
        if isinstance(val, np.ndarray):
            reg[name] = FieldRef(name, KIND_IMAGE)
        elif isinstance(val, str):
            reg[name] = FieldRef(name, KIND_TEXT)
    return reg


@dataclass(eq=False)
class Frame:
    """Atomic post-step snapshot: step counter plus all displayed texts and
    (display-normalized, 8-bit) images, keyed by widget id."""
    step: int
    texts: list[tuple[int, str]] = field(default_factory=list)
    images: list[tuple[int, np.ndarray]] = field(default_factory=list)


class _Reply:
    __slots__ = ("event", "value")

    def __init__(self):
        self.event = threading.Event()
        self.value = None

    def set(self, value):
        self.value = value
        self.event.set()


CONTROL_COMMANDS = ("init", "step", "run", "stop", "cont", "parse", "save", "quit")


class Engine:
    """Hosts one simulation and owns its control loop."""

    def __init__(self, sim: Simulation, collection: WidgetCollection | None = None,
                 store: Store | None = None, frame_skip: int = 1,
                 echo_actions: bool = False):
        self.sim = sim
        self.coll = collection if collection is not None else empty_collection()
        self.store = store
        self.frame_skip = max(1, frame_skip)
        self.echo_actions = echo_actions
        self.step_count = 0
        self.delay_ms = 0
        self.registry = build_registry(sim)
        self.bindings = BindingReport()
        self.widget_states: dict[int, widgets_rt.WidgetState] = {}
        self.widgets_by_id: dict[int, tuple[str, object]] = {}
        self.id_of_widget: dict[tuple[str, str], int] = {}

        self._initialized = False
        self._running = False
        self._quit = False
        self._next_step_at = 0.0
        self._inbox: queue.Queue = queue.Queue()
        self._write_q: deque = deque()
        self._pointer_q: deque = deque()
        self._pq_lock = threading.Lock()
        self._pointer_bindings: dict[str, object] = {}
        self._subscribers: list = []
        self._sub_lock = threading.Lock()
        self._thread: threading.Thread | None = None

        self._rebuild_widget_states()
        self._resolve()

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "Engine":
        if self._thread is None or not self._thread.is_alive():
            self._quit = False
            self._thread = threading.Thread(target=self._loop, name="engine", daemon=True)
            self._thread.start()
        return self

    def close(self) -> None:
        if self._thread is not None and self._thread.is_alive():
            try:
                self.control("quit", timeout=5.0)
            except TimeoutError:
                self._quit = True
            self._thread.join(timeout=5.0)

    def __enter__(self) -> "Engine":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def run_state(self) -> str:
        return "running" if self._running else "idle"

    @property
    def initialized(self) -> bool:
        return self._initialized

    # -- thread-safe entry points -------------------------------------------

    def control(self, cmd: str, timeout: float = 30.0) -> dict:
        """Execute a lifecycle command on the control loop and wait for its
        acknowledgement."""
        if threading.current_thread() is self._thread:
            return self._exec_control(cmd)
        reply = _Reply()
        self._inbox.put(("control", cmd, reply))
        if not reply.event.wait(timeout):
            raise TimeoutError(f"control({cmd!r}) timed out")
        return reply.value

    def request(self, op: str, *args, timeout: float = 30.0) -> dict:
        """Run a UI operation (set_param, set_geometry, select_context) on
        the control loop."""
        if threading.current_thread() is self._thread:
            return self._exec_request(op, args)
        reply = _Reply()
        self._inbox.put(("request", (op, args), reply))
        if not reply.event.wait(timeout):
            raise TimeoutError(f"request({op!r}) timed out")
        return reply.value

    def set_param(self, widget_id: int, value) -> dict:
        return self.request("set_param", widget_id, value)

    def set_geometry(self, widget_id: int, x: int, y: int) -> dict:
        return self.request("set_geometry", widget_id, x, y)

    def select_context(self, name: str) -> dict:
        return self.request("select_context", name)

    def queue_param_write(self, write: widgets_rt.ParamWrite) -> None:
        """Enqueue a typed write; it becomes visible to the simulation at the
        next step boundary (immediately while the engine sits idle, since no
        step is in flight then).  Writes are never dropped."""
        self._write_q.append(write)

    def queue_pointer_event(self, widget_ref, evt: autom.PointerEvent) -> None:
        """Enqueue a pointer event for dispatch between steps.  The queue is
        bounded: on overflow the oldest move event is coalesced away;
        press/release events are never dropped."""
        with self._pq_lock:
            if len(self._pointer_q) >= POINTER_QUEUE_CAP:
                for i, (_, pending) in enumerate(self._pointer_q):
                    if pending.kind == "move":
                        del self._pointer_q[i]
                        break
            self._pointer_q.append((widget_ref, evt))
        self._inbox.put(("wake", None, None))

    def set_delay(self, ms: int) -> None:
        self.delay_ms = max(0, int(ms))

    def subscribe(self, callback) -> None:
        with self._sub_lock:
            self._subscribers.append(callback)

    def unsubscribe(self, callback) -> None:
        with self._sub_lock:
            if callback in self._subscribers:
                self._subscribers.remove(callback)

    def add_pointer_binding(self, widget_name: str, binding) -> None:
        if not any(w.name == widget_name for w in self.coll.dwidgets):
            raise autom.BindError(f"unknown widget '{widget_name}'")
        self._pointer_bindings[widget_name] = binding

    # -- publishing ----------------------------------------------------------

    def _publish(self, event: tuple) -> None:
        with self._sub_lock:
            subs = list(self._subscribers)
        for cb in subs:
            try:
                cb(event)
            except Exception:
                pass

    def layout_message(self) -> dict:
        widgets = []
        for wid, (table, wdef) in self.widgets_by_id.items():
            entry = {"id": wid, "group": table, "name": wdef.name,
                     "x": wdef.geometry[0], "y": wdef.geometry[1]}
            if table == "comment":
                entry["body"] = wdef.body
            else:
                entry["kind"] = wdef.widget_kind
                entry["config"] = wdef.config
                entry["target"] = wdef.target
            if table == "parameter":
                state = self.widget_states.get(wid)
                if state is not None and state.pdef is not None:
                    entry["value"] = state.pdef.value
                if state is not None and state.selected_key is not None:
                    entry["selected_key"] = state.selected_key
            widgets.append(entry)
        return {"type": "layout", "context": self.coll.context.name,
                "step": self.step_count, "widgets": widgets,
                "unresolved": list(self.bindings.unresolved)}

    def snapshot(self) -> Frame:
        """Capture all bound data fields plus the step counter.  Only call
        between steps (the control loop does so after every step)."""
        frame = Frame(step=self.step_count)
        for wid, (table, wdef) in self.widgets_by_id.items():
            if table != "data":
                continue
            ref = self.bindings.get("data", wdef.name)
            if ref is None:
                continue
            value = getattr(self.sim.data, ref.name, None)
            if wdef.widget_kind == "TEXT_OUT":
                frame.texts.append((wid, str(value)))
            else:
                if value is None:
                    continue
                cfg = wdef.config
                buf = widgets_rt.image_normalize(np.asarray(value),
                                                 cfg.get("lo", 0), cfg.get("hi", 255))
                frame.images.append((wid, buf))
        return frame

    # -- internal wiring -----------------------------------------------------

    def _rebuild_widget_states(self) -> None:
        old = {(t, w.wdef.name): w for t, w in
               (("parameter", s) for s in self.widget_states.values())}
        self.widget_states = {}
        self.widgets_by_id = {}
        self.id_of_widget = {}
        wid = 0
        for wdef in self.coll.pwidgets:
            wid += 1
            self.widgets_by_id[wid] = ("parameter", wdef)
            self.id_of_widget[("parameter", wdef.name)] = wid
            pdef = self.coll.find_parameter(wdef.target, wdef.config.get("list_index", -1))
            state = widgets_rt.WidgetState(wdef, pdef)
            prev = old.get(("parameter", wdef.name))
            if prev is not None and prev.wdef.widget_kind == wdef.widget_kind:
                state.clicked = prev.clicked
                if prev.selected_key is not None and any(
                        it["key"] == prev.selected_key for it in wdef.config.get("items", [])):
                    state.selected_key = prev.selected_key
            self.widget_states[wid] = state
        for wdef in self.coll.dwidgets:
            wid += 1
            self.widgets_by_id[wid] = ("data", wdef)
            self.id_of_widget[("data", wdef.name)] = wid
        for wdef in self.coll.comments:
            wid += 1
            self.widgets_by_id[wid] = ("comment", wdef)
            self.id_of_widget[("comment", wdef.name)] = wid

    def _resolve(self) -> None:
        self.bindings = resolve_bindings(self.coll, self.registry)

    def _set_field(self, write: widgets_rt.ParamWrite) -> None:
        holder = self.sim.par
        if write.key is not None:
            getattr(holder, write.target)[write.key] = write.value
        elif write.list_index >= 0:
            getattr(holder, write.target)[write.list_index] = write.value
        else:
            setattr(holder, write.target, write.value)

    def _apply_collection_values(self) -> None:
        for pdef in self.coll.parameters:
            ref = self.registry.get(pdef.name)
            if ref is None:
                continue
            if pdef.kind == KIND_KEYED_GROUP and isinstance(pdef.value, dict):
                d = getattr(self.sim.par, pdef.name)
                for k, v in pdef.value.items():
                    if k in ref.keys:
                        d[k] = v
            elif pdef.list_index >= 0:
                if 0 <= pdef.list_index < ref.size:
                    getattr(self.sim.par, pdef.name)[pdef.list_index] = pdef.value
            else:
                if ref.kind in (KIND_INT, KIND_FLOAT, KIND_STRING):
                    setattr(self.sim.par, pdef.name, pdef.value)

    def _effective_delay_ms(self) -> float:
        ref = self.registry.get("delay")
        if ref is not None and ref.kind in (KIND_INT, KIND_FLOAT):
            try:
                return max(0.0, float(getattr(self.sim.par, "delay")))
            except (TypeError, ValueError):
                return float(self.delay_ms)
        return float(self.delay_ms)

    # -- control loop ---------------------------------------------------------

    def _loop(self) -> None:
        while not self._quit:
            if self._running:
                timeout = max(0.0, self._next_step_at - time.monotonic())
            else:
                timeout = 0.1
            try:
                msg = self._inbox.get(timeout=timeout)
            except queue.Empty:
                msg = None
            while msg is not None:
                self._handle(msg)
                try:
                    msg = self._inbox.get_nowait()
                except queue.Empty:
                    msg = None
            if not self._running:
                self._drain_writes()
            self._dispatch_pointers()
            if self._running and not self._quit and time.monotonic() >= self._next_step_at:
                self._step_cycle()

    def _handle(self, msg) -> None:
        kind, payload, reply = msg
        if kind == "control":
            result = self._exec_control(payload)
            if reply is not None:
                reply.set(result)
        elif kind == "request":
            op, args = payload
            result = self._exec_request(op, args)
            if reply is not None:
                reply.set(result)
        # "wake" needs no action

    def _exec_control(self, cmd: str) -> dict:
        if cmd not in CONTROL_COMMANDS:
            return {"ok": False, "cmd": cmd, "error": "bad command"}
        if cmd == "init":
            return self._do_init()
        if cmd == "step":
            if not self._initialized:
                return {"ok": False, "cmd": cmd, "error": "not initialized"}
            err = self._step_cycle()
            if err:
                return {"ok": False, "cmd": cmd, "error": err}
            return {"ok": True, "cmd": cmd, "step": self.step_count}
        if cmd in ("run", "cont"):
            if not self._initialized:
                return {"ok": False, "cmd": cmd, "error": "not initialized"}
            self._running = True
            self._next_step_at = time.monotonic()
            return {"ok": True, "cmd": cmd, "step": self.step_count}
        if cmd == "stop":
            self._running = False
            return {"ok": True, "cmd": cmd, "step": self.step_count}
        if cmd == "parse":
            return self._do_parse()
        if cmd == "save":
            return self._do_save()
        # quit
        self._running = False
        self._quit = True
        self._publish(("quit", {}))
        return {"ok": True, "cmd": "quit", "step": self.step_count}

    def _do_init(self) -> dict:
        self._apply_collection_values()
        try:
            self.sim.init()
        except Exception as e:
            return {"ok": False, "cmd": "init", "error": f"init failed: {e}"}
        self.step_count = 0
        self._initialized = True
        self._pointer_bindings = {}
        bind = getattr(self.sim, "bind", None)
        if callable(bind):
            try:
                bind(self)
            except autom.BindError as e:
                return {"ok": False, "cmd": "init", "error": str(e)}
        self._publish(("frame", self.snapshot()))
        return {"ok": True, "cmd": "init", "step": 0}

    def _do_parse(self) -> dict:
        try:
            result = parse_source(getattr(self.sim, "directives", "") or "")
            report = merge_into_collection(result.specs, self.coll,
                                           preserve_state=True, context=result.context)
        except DirectiveError as e:
            return {"ok": False, "cmd": "parse", "error": str(e)}
        self._rebuild_widget_states()
        self._resolve()
        self._publish(("layout", self.layout_message()))
        return {"ok": True, "cmd": "parse", "created": report.created,
                "updated": report.updated, "unchanged": report.unchanged,
                "unresolved": list(self.bindings.unresolved)}

    def _do_save(self) -> dict:
        if self.store is None:
            return {"ok": False, "cmd": "save", "error": "no store"}
        try:
            self.store.save_collection(self.coll)
        except StoreError as e:
            return {"ok": False, "cmd": "save", "error": str(e)}
        return {"ok": True, "cmd": "save", "context": self.coll.context.name}

    def _exec_request(self, op: str, args) -> dict:
        if op == "set_param":
            widget_id, value = args
            state = self.widget_states.get(widget_id)
            if state is None:
                return {"ok": False, "error": f"unknown widget id {widget_id}"}
            try:
                write = widgets_rt.apply_param_widget(state, value)
            except widgets_rt.WidgetValueError as e:
                return {"ok": False, "error": str(e)}
            if write is not None and self.bindings.get("parameter", state.wdef.name) is not None:
                self._write_q.append(write)
                if not self._running:
                    self._drain_writes()  # idle: the boundary is now
            self._publish(("layout", self.layout_message()))
            return {"ok": True}
        if op == "set_geometry":
            widget_id, x, y = args
            entry = self.widgets_by_id.get(widget_id)
            if entry is None:
                return {"ok": False, "error": f"unknown widget id {widget_id}"}
            entry[1].geometry = (int(x), int(y))
            self._publish(("layout", self.layout_message()))
            return {"ok": True}
        if op == "select_context":
            (name,) = args
            if self.store is None:
                return {"ok": False, "error": "no store"}
            try:
                self.coll = self.store.load_collection(name)
            except StoreError as e:
                return {"ok": False, "error": str(e)}
            self._rebuild_widget_states()
            self._resolve()
            self._publish(("layout", self.layout_message()))
            return {"ok": True, "context": name}
        return {"ok": False, "error": f"unknown request {op}"}

    # -- stepping --------------------------------------------------------------

    def _drain_writes(self) -> None:
        """Apply queued parameter writes.  Runs at every step boundary and,
        because no step is in flight then, whenever the engine is idle."""
        while self._write_q:
            write = self._write_q.popleft()
            try:
                self._set_field(write)
            except (AttributeError, IndexError, KeyError, TypeError):
                pass  # unresolved or stale write: widget is inert

    def _apply_button_pulses(self) -> None:
        """Consume latched button clicks: the bound parameter reads "1" for
        exactly the one step that follows.  Only called at step boundaries."""
        for state in self.widget_states.values():
            if state.wdef.widget_kind == "BUTTON" and \
                    self.bindings.get("parameter", state.wdef.name) is not None:
                value = widgets_rt.button_read_and_reset(state)
                self._set_field(widgets_rt.ParamWrite(state.wdef.target, value,
                                                      list_index=state.pdef.list_index
                                                      if state.pdef else -1))

    def _step_cycle(self) -> str | None:
        started = time.monotonic()
        self._drain_writes()
        self._apply_button_pulses()
        self._dispatch_pointers()  # events that arrived before this boundary
        try:
            self.sim.step()
        except Exception as e:
            self._running = False
            self._publish(("report", {"op": "step", "ok": False, "error": str(e)}))
            return f"step failed: {e}"
        self.step_count += 1
        if self.step_count % self.frame_skip == 0:
            self._publish(("frame", self.snapshot()))
        self._next_step_at = started + self._effective_delay_ms() / 1000.0
        return None

    def _dispatch_pointers(self) -> None:
        with self._pq_lock:
            if not self._pointer_q:
                return
            batch = list(self._pointer_q)
            self._pointer_q.clear()
        for widget_ref, evt in batch:
            name = widget_ref
            if isinstance(widget_ref, int):
                entry = self.widgets_by_id.get(widget_ref)
                if entry is None:
                    continue
                name = entry[1].name
            binding = self._pointer_bindings.get(name)
            if binding is None:
                continue
            try:
                if isinstance(binding, autom.RawBinding):
                    handler = {"press": binding.on_press, "move": binding.on_move,
                               "release": binding.on_release}.get(evt.kind)
                    if handler is not None:
                        handler(evt)
                    continue
                self._feed_automaton(name, binding, evt)
            except Exception as e:
                self._publish(("report", {"op": "pointer", "ok": False, "error": str(e)}))

    def _active_action(self, binding: autom.AutomatonBinding) -> str:
        pdef = self.coll.find_parameter(binding.config.action_param)
        if pdef is not None:
            return str(pdef.value)
        return str(getattr(self.sim.par, binding.config.action_param, ""))

    def _feed_automaton(self, widget_name: str, binding: autom.AutomatonBinding,
                        evt: autom.PointerEvent) -> None:
        cmd = autom.feed(binding.state, binding.config, self._active_action(binding), evt)
        if cmd is None:
            return
        pos, pos_init, pos_prev = cmd.pos, cmd.pos_init, cmd.pos_prev
        if binding.config.coordinate_mode == "data" and binding.axis_ref:
            axis = getattr(self.sim, binding.axis_ref, None)
            axis = getattr(axis, "axis", axis)
            if axis is not None:
                from .render import data_from_pixel
                pos = data_from_pixel(pos[0], pos[1], axis)
                pos_init = data_from_pixel(pos_init[0], pos_init[1], axis)
                pos_prev = data_from_pixel(pos_prev[0], pos_prev[1], axis)
        if self.echo_actions:
            self._publish(("report", {"op": "action_echo", "widget": widget_name,
                                      "action": cmd.action, "phase": cmd.phase,
                                      "pos": list(pos)}))
        binding.handler(cmd.phase, pos, pos_init, pos_prev)
