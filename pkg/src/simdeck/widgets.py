"""Runtime value semantics of the parameter and data widgets: slider
quantization, checkbox bit encoding, typed writes into simulation fields,
button pulse behavior and image display normalization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import KIND_FLOAT, KIND_INT, ParameterDef, ParameterWidgetDef


class WidgetValueError(ValueError):
    """A UI value that cannot be applied to its widget (bad type, bad item,
    bad encoding).  The write is suppressed; nothing else happens."""


@dataclass
class ParamWrite:
    """A typed write into one simulation parameter field, produced by a
    widget interaction and applied by the engine at the next step boundary."""
    target: str
    value: int | float | str
    list_index: int = -1
    key: str | None = None


@dataclass
class WidgetState:
    """Live state of one parameter widget: its definition, the bound
    parameter record (whose value is the current value), plus runtime-only
    bits (selected dictslider item, pending button click)."""
    wdef: ParameterWidgetDef
    pdef: ParameterDef | None = None
    selected_key: str | None = None
    clicked: bool = False

    def __post_init__(self):
        if self.wdef.widget_kind == "DICTSLIDER" and self.selected_key is None:
            items = self.wdef.config.get("items", [])
            idx = self.wdef.config.get("init_index", 0)
            if items:
                self.selected_key = items[min(idx, len(items) - 1)]["key"]


def slider_quantize(raw: float, lo: float, hi: float, increment: float) -> float:
    """Snap ``raw`` onto the lattice lo + k*increment, clamped to [lo, hi].
    Ties round toward +inf."""
    if hi <= lo:
        raise WidgetValueError(f"bad range [{lo},{hi}]")
    if increment <= 0:
        raise WidgetValueError(f"bad increment {increment}")
    k_max = math.floor((hi - lo) / increment + 1e-9)
    k = math.floor((raw - lo) / increment + 0.5)
    k = min(max(k, 0), k_max)
    return lo + k * increment


def checkbox_encode(selected, items: list[str]) -> str:
    """Position i is '1' iff items[i] is selected."""
    chosen = set(selected)
    unknown = chosen - set(items)
    if unknown:
        raise WidgetValueError(f"unknown items: {sorted(unknown)}")
    return "".join("1" if it in chosen else "0" for it in items)


def checkbox_decode(bits: str, items: list[str]) -> list[str]:
    """Exact inverse of :func:`checkbox_encode`; items keep their order."""
    if len(bits) != len(items) or any(c not in "01" for c in bits):
        raise WidgetValueError(
            f"encoding length: {len(items)} items need {len(items)} 0/1 digits, got '{bits}'")
    return [it for it, c in zip(items, bits) if c == "1"]


def _cast(decl: str, value):
    try:
        if decl == KIND_INT:
            return int(value)
        if decl == KIND_FLOAT:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise WidgetValueError(f"type conversion: {value!r} is not {decl}") from None


def apply_param_widget(state: WidgetState, ui_value) -> ParamWrite | None:
    """Turn a UI interaction value into a typed write.

    Also updates the widget's current value (the bound parameter record) so
    layout snapshots and saves reflect the interaction immediately; the live
    simulation field only changes when the engine applies the returned write.

    Buttons return no write here: a click is latched and consumed by
    :func:`button_read_and_reset` at the next step boundary.  A dictslider
    ``(key, None)`` value only switches the selected item.
    """
    wdef, pdef = state.wdef, state.pdef
    if pdef is None:
        raise WidgetValueError(f"widget '{wdef.name}' has no bound parameter")
    kind = wdef.widget_kind
    cfg = wdef.config

    if kind == "SLIDER":
        try:
            raw = float(ui_value)
        except (TypeError, ValueError):
            raise WidgetValueError(f"type conversion: {ui_value!r} is not a number") from None
        q = slider_quantize(raw, cfg["min"], cfg["max"], cfg["increment"])
        value = _cast(cfg.get("type", KIND_FLOAT), round(q) if cfg.get("type") == KIND_INT else q)
        pdef.value = value
        return ParamWrite(wdef.target, value, list_index=pdef.list_index)

    if kind == "DICTSLIDER":
        if isinstance(ui_value, dict):
            key, raw = ui_value.get("key"), ui_value.get("value")
        else:
            key, raw = ui_value
        item = next((it for it in cfg.get("items", []) if it["key"] == key), None)
        if item is None:
            raise WidgetValueError(f"unknown dictslider item '{key}'")
        state.selected_key = key
        if raw is None:
            return None
        try:
            raw = float(raw)
        except (TypeError, ValueError):
            raise WidgetValueError(f"type conversion: {raw!r} is not a number") from None
        q = slider_quantize(raw, item["min"], item["max"], item["increment"])
        value = _cast(item["type"], round(q) if item["type"] == KIND_INT else q)
        if isinstance(pdef.value, dict):
            pdef.value[key] = value
        return ParamWrite(wdef.target, value, key=key)

    if kind == "TEXT_IN":
        value = str(ui_value)
        pdef.value = value
        return ParamWrite(wdef.target, value, list_index=pdef.list_index)

    if kind in ("LISTSEL", "RADIOBUTTON"):
        item = str(ui_value)
        if item not in cfg.get("items", []):
            raise WidgetValueError(f"unknown item '{item}'")
        value = _cast(cfg.get("type", "string"), item) if kind == "LISTSEL" else item
        pdef.value = value
        return ParamWrite(wdef.target, value, list_index=pdef.list_index)

    if kind == "CHECKBOX":
        bits = str(ui_value)
        checkbox_decode(bits, cfg.get("items", []))  # validates length and digits
        pdef.value = bits
        return ParamWrite(wdef.target, bits)

    if kind == "BUTTON":
        state.clicked = True
        return None

    raise WidgetValueError(f"unknown widget kind {kind}")


def button_read_and_reset(state: WidgetState) -> str:
    """Consume a pending click: "1" for exactly the one step following the
    click(s), "0" otherwise.  Clicks within one step coalesce."""
    value = "1" if state.clicked else "0"
    state.clicked = False
    if state.pdef is not None:
        state.pdef.value = value
    return value


def image_normalize(buf, lo: float, hi: float) -> np.ndarray:
    """Map values in [lo, hi] linearly onto 8-bit [0, 255], clamping outside
    values; ties round half-up.  Shape (gray or multi-channel) is kept."""
    if hi <= lo:
        raise WidgetValueError(f"bad range [{lo},{hi}]")
    arr = np.asarray(buf, dtype=np.float64)
    t = np.clip((arr - lo) / (hi - lo), 0.0, 1.0)
    t = np.nan_to_num(t, nan=0.0)
    return np.floor(t * 255.0 + 0.5).astype(np.uint8)
