import random

import pytest

from simdeck.automaton import (
    CLICK,
    DRAG,
    DRAG_FINISH,
    DRAG_INIT,
    DRAG_MOVE,
    IDLE,
    AutomatonConfig,
    AutomatonState,
    PointerEvent,
    feed,
)

CONFIG = AutomatonConfig(
    action_param="str_action",
    action_types={"Test": "click", "New": "click", "Delete": "click", "Move": "drag"},
    button_no=1,
)


def press(pos=(1.0, 2.0), button=1):
    return PointerEvent("press", button, pos)


def move(pos=(3.0, 4.0), button=1):
    return PointerEvent("move", button, pos)


def release(pos=(5.0, 6.0), button=1):
    return PointerEvent("release", button, pos)


def test_click_action_emits_click_stays_idle():
    st = AutomatonState()
    cmd = feed(st, CONFIG, "Delete", press())
    assert cmd.phase == CLICK and cmd.action == "Delete"
    assert cmd.pos == cmd.pos_init == cmd.pos_prev == (1.0, 2.0)
    assert st.state == IDLE


def test_drag_action_enters_drag():
    st = AutomatonState()
    cmd = feed(st, CONFIG, "Move", press())
    assert cmd.phase == DRAG_INIT and st.state == DRAG
    assert st.pos_init == (1.0, 2.0)


def test_drag_move_and_finish():
    st = AutomatonState()
    feed(st, CONFIG, "Move", press((0.0, 0.0)))
    c1 = feed(st, CONFIG, "Move", move((1.0, 0.0)))
    assert c1.phase == DRAG_MOVE and c1.pos_prev == (0.0, 0.0) and c1.pos_init == (0.0, 0.0)
    c2 = feed(st, CONFIG, "Move", move((2.0, 0.0)))
    assert c2.pos_prev == (1.0, 0.0)
    c3 = feed(st, CONFIG, "Move", release((3.0, 0.0)))
    assert c3.phase == DRAG_FINISH and c3.pos_init == (0.0, 0.0)
    assert st.state == IDLE


def test_idle_move_is_noop():
    st = AutomatonState()
    assert feed(st, CONFIG, "Move", move()) is None
    assert st.state == IDLE


def test_other_button_ignored():
    st = AutomatonState()
    assert feed(st, CONFIG, "Move", press(button=3)) is None
    assert st.state == IDLE


def test_unknown_action_is_inert():
    st = AutomatonState()
    assert feed(st, CONFIG, "Zoom", press()) is None
    assert st.state == IDLE


def test_action_change_mid_drag_completes_original():
    st = AutomatonState()
    feed(st, CONFIG, "Move", press())
    cmd = feed(st, CONFIG, "Delete", move())  # user switched the listsel mid-drag
    assert cmd.phase == DRAG_MOVE and cmd.action == "Move"
    cmd = feed(st, CONFIG, "Delete", release())
    assert cmd.phase == DRAG_FINISH and cmd.action == "Move"


def exhaustive_table():
    """Enumerate {IDLE,DRAG} x {press,move,release} x {click,drag}; returns
    the set of combinations that emitted, with their phases."""
    emitted = {}
    for state_name in (IDLE, DRAG):
        for kind in ("press", "move", "release"):
            for atype in ("click", "drag"):
                st = AutomatonState()
                if state_name == DRAG:
                    feed(st, CONFIG, "Move", press((0.0, 0.0)))
                    assert st.state == DRAG
                action = {"click": "Test", "drag": "Move"}[atype]
                cmd = feed(st, CONFIG, action, PointerEvent(kind, 1, (9.0, 9.0)))
                if cmd is not None:
                    emitted[(state_name, kind, atype)] = (cmd.phase, st.state)
                else:
                    # no-op must not change state
                    assert st.state == state_name
    return emitted


def test_exactly_four_emitting_transitions():
    # the four edges: (IDLE, press, click) -> click, (IDLE, press, drag) ->
    # drag_init, (DRAG, move) -> drag_move, (DRAG, release) -> drag_finish;
    # in DRAG the action type no longer matters (drag in progress)
    emitted = exhaustive_table()
    assert emitted == {
        (IDLE, "press", "click"): (CLICK, IDLE),
        (IDLE, "press", "drag"): (DRAG_INIT, DRAG),
        (DRAG, "move", "click"): (DRAG_MOVE, DRAG),
        (DRAG, "move", "drag"): (DRAG_MOVE, DRAG),
        (DRAG, "release", "click"): (DRAG_FINISH, IDLE),
        (DRAG, "release", "drag"): (DRAG_FINISH, IDLE),
    }
    assert {phase for phase, _ in emitted.values()} == {CLICK, DRAG_INIT, DRAG_MOVE,
                                                        DRAG_FINISH}


def test_random_sequences_well_formed(seed=1234, n_events=10_000):
    rng = random.Random(seed)
    st = AutomatonState()
    actions = ["Test", "New", "Delete", "Move"]
    open_drag = False
    moves_in_drag = 0
    drag_pos_init = None
    n_finished = 0
    for i in range(n_events):
        kind = rng.choice(["press", "move", "release"])
        button = rng.choice([1, 1, 1, 2, 3])
        action = rng.choice(actions)
        pos = (rng.uniform(0, 100), rng.uniform(0, 100))
        cmd = feed(st, CONFIG, action, PointerEvent(kind, button, pos))
        if cmd is None:
            continue
        if cmd.phase == CLICK:
            assert not open_drag
        elif cmd.phase == DRAG_INIT:
            assert not open_drag
            open_drag = True
            moves_in_drag = 0
            drag_pos_init = cmd.pos_init
        elif cmd.phase == DRAG_MOVE:
            assert open_drag
            moves_in_drag += 1
            assert cmd.pos_init == drag_pos_init  # constant across one drag
        elif cmd.phase == DRAG_FINISH:
            assert open_drag and moves_in_drag >= 0
            assert cmd.pos_init == drag_pos_init
            open_drag = False
            n_finished += 1
        if kind == "release" and button == CONFIG.button_no:
            assert st.state == IDLE  # always back to IDLE after release
    assert n_finished > 0


def test_release_of_configured_button_never_strands_drag():
    st = AutomatonState()
    feed(st, CONFIG, "Move", press())
    feed(st, CONFIG, "Move", release(button=2))  # other button: ignored
    assert st.state == DRAG
    feed(st, CONFIG, "Move", release(button=1))
    assert st.state == IDLE


def test_config_validation():
    with pytest.raises(ValueError):
        AutomatonConfig("a", {"X": "wiggle"})
    with pytest.raises(ValueError):
        AutomatonConfig("a", {"X": "click"}, button_no=4)
