"""Two-state pointer-gesture automaton (IDLE/DRAG) converting raw
press/move/release events into click and drag action commands, plus the
binding helpers that attach automatons or raw handlers to image widgets.

Exactly four transitions emit a command:

    IDLE  + press   (click-typed action)  -> IDLE,  "click"
    IDLE  + press   (drag-typed action)   -> DRAG,  "drag_init"
    DRAG  + move                          -> DRAG,  "drag_move"
    DRAG  + release                       -> IDLE,  "drag_finish"

Everything else is a no-op.  If the selected action changes mid-drag, the
drag completes under the action it started with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

IDLE = "IDLE"
DRAG = "DRAG"

CLICK = "click"
DRAG_INIT = "drag_init"
DRAG_MOVE = "drag_move"
DRAG_FINISH = "drag_finish"


class BindError(ValueError):
    pass


@dataclass
class AutomatonConfig:
    action_param: str                      # text parameter holding the active action name
    action_types: dict[str, str]           # action name -> "click" | "drag"
    button_no: int = 1                     # 1=left, 2=middle, 3=right
    coordinate_mode: str = "pixel"         # "pixel" | "data"

    def __post_init__(self):
        if self.button_no not in (1, 2, 3):
            raise ValueError(f"button_no must be 1, 2 or 3, got {self.button_no}")
        for name, t in self.action_types.items():
            if t not in ("click", "drag"):
                raise ValueError(f"action '{name}' has unknown type '{t}'")


@dataclass
class AutomatonState:
    state: str = IDLE
    action: str | None = None
    pos_init: tuple[float, float] | None = None
    pos_prev: tuple[float, float] | None = None


@dataclass
class PointerEvent:
    kind: str                              # "press" | "move" | "release"
    button: int = 1
    pos: tuple[float, float] = (0.0, 0.0)


@dataclass
class ActionCommand:
    action: str                            # active action name
    phase: str                             # click | drag_init | drag_move | drag_finish
    pos: tuple[float, float]
    pos_init: tuple[float, float]
    pos_prev: tuple[float, float]


def feed(state: AutomatonState, config: AutomatonConfig, active_action: str,
         evt: PointerEvent) -> ActionCommand | None:
    """Advance the automaton by one event; ``state`` is updated in place and
    the emitted command (if any) is returned.  Total: unknown actions and
    undefined (state, event) pairs are no-ops."""
    if evt.button != config.button_no:
        return None
    if state.state == IDLE:
        if evt.kind != "press":
            return None
        action_type = config.action_types.get(active_action)
        if action_type == "click":
            return ActionCommand(active_action, CLICK, evt.pos, evt.pos, evt.pos)
        if action_type == "drag":
            state.state = DRAG
            state.action = active_action
            state.pos_init = evt.pos
            state.pos_prev = evt.pos
            return ActionCommand(active_action, DRAG_INIT, evt.pos, evt.pos, evt.pos)
        return None
    # DRAG
    if evt.kind == "move":
        cmd = ActionCommand(state.action, DRAG_MOVE, evt.pos, state.pos_init, state.pos_prev)
        state.pos_prev = evt.pos
        return cmd
    if evt.kind == "release":
        cmd = ActionCommand(state.action, DRAG_FINISH, evt.pos, state.pos_init, state.pos_prev)
        state.state = IDLE
        state.action = None
        state.pos_init = None
        state.pos_prev = None
        return cmd
    return None


@dataclass
class AutomatonBinding:
    """An automaton attached to one image widget, delivering commands to a
    single handler on the hosted simulation."""
    config: AutomatonConfig
    handler: callable
    data_name: str
    axis_ref: str | None = None
    state: AutomatonState = field(default_factory=AutomatonState)


@dataclass
class RawBinding:
    """Raw press/move/release delivery, no state logic.  Handlers receive the
    PointerEvent and run serialized on the engine loop."""
    on_press: callable | None = None
    on_move: callable | None = None
    on_release: callable | None = None


def bind_automaton(engine, image_widget: str, data_field_name: str, axis_ref: str | None,
                   config: AutomatonConfig, handler_name: str) -> None:
    """Route pointer events on ``image_widget`` through a ClickDrag automaton
    into ``handler_name(action, pos, pos_init, pos_prev)`` on the hosted
    simulation.  In data coordinate mode positions go through the axis named
    by ``axis_ref`` (a simulation attribute)."""
    handler = getattr(engine.sim, handler_name, None)
    if not callable(handler):
        raise BindError(f"unknown handler '{handler_name}'")
    engine.add_pointer_binding(
        image_widget, AutomatonBinding(config, handler, data_field_name, axis_ref))


def bind_raw(engine, image_widget: str, on_press=None, on_move=None, on_release=None) -> None:
    """Deliver raw pointer events on ``image_widget`` straight to the given
    handlers (pixel coordinates, no state machine)."""
    engine.add_pointer_binding(image_widget, RawBinding(on_press, on_move, on_release))
