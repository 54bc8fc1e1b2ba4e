"""Widget, parameter and data definitions shared by the parser, store, engine
and wire protocol.

A :class:`WidgetCollection` holds everything belonging to one simulation
context: the parameter and data-array bindings plus the three widget tables
(parameter widgets, data widgets, comment widgets).  The collection mirrors
row-for-row what the store persists.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

DEFAULT_CONTEXT = "N.N."

# parameter value kinds
KIND_INT = "int"
KIND_FLOAT = "float"
KIND_STRING = "string"
KIND_KEYED_GROUP = "keyed_group"
PARAM_KINDS = (KIND_INT, KIND_FLOAT, KIND_STRING, KIND_KEYED_GROUP)

# data array kinds
KIND_IMAGE = "image"
KIND_TEXT = "text"
DATA_KINDS = (KIND_IMAGE, KIND_TEXT)

PARAM_WIDGET_KINDS = (
    "SLIDER", "DICTSLIDER", "TEXT_IN", "LISTSEL", "CHECKBOX", "RADIOBUTTON", "BUTTON",
)
DATA_WIDGET_KINDS = ("IMAGE", "TEXT_OUT")

JUSTIFICATIONS = ("just_left", "just_right", "just_center")

# A parameter value is a plain Python value tagged by the owning def's kind:
# int, float, str, or an ordered {label: number} mapping for keyed groups.
ParamValue = int | float | str | dict


class KindConflictError(ValueError):
    """Upsert tried to change the widget kind of an existing name."""


@dataclass
class SimulationContext:
    name: str
    app_name: str = ""


@dataclass
class ParameterDef:
    """A named simulation parameter field plus its current value.

    ``list_index`` is -1 for scalar fields; >= 0 addresses one element of a
    list-valued field (several defs may then share a name).
    """
    name: str
    kind: str
    value: ParamValue
    list_index: int = -1


@dataclass
class DataArrayDef:
    """A named simulation output field (an image matrix or a text string)."""
    name: str
    kind: str


@dataclass
class ParameterWidgetDef:
    widget_kind: str
    name: str
    geometry: tuple[int, int] = (0, 0)
    config: dict = field(default_factory=dict)
    target: str = ""


@dataclass
class DataWidgetDef:
    widget_kind: str
    name: str
    geometry: tuple[int, int] = (0, 0)
    config: dict = field(default_factory=dict)
    target: str = ""


@dataclass
class CommentWidgetDef:
    name: str
    geometry: tuple[int, int] = (0, 0)
    body: str = ""


@dataclass
class WidgetCollection:
    context: SimulationContext
    parameters: list[ParameterDef] = field(default_factory=list)
    data: list[DataArrayDef] = field(default_factory=list)
    pwidgets: list[ParameterWidgetDef] = field(default_factory=list)
    dwidgets: list[DataWidgetDef] = field(default_factory=list)
    comments: list[CommentWidgetDef] = field(default_factory=list)

    def copy(self) -> "WidgetCollection":
        return copy.deepcopy(self)

    def find_parameter(self, name: str, list_index: int = -1) -> ParameterDef | None:
        for p in self.parameters:
            if p.name == name and p.list_index == list_index:
                return p
        return None

    def find_data(self, name: str) -> DataArrayDef | None:
        for d in self.data:
            if d.name == name:
                return d
        return None


def empty_collection(context_name: str = DEFAULT_CONTEXT, app_name: str = "") -> WidgetCollection:
    return WidgetCollection(context=SimulationContext(context_name, app_name))


@dataclass
class Violation:
    """One broken invariant: which record, which rule, and a short detail."""
    record: str
    rule: str
    detail: str = ""

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return f"{self.record}: {self.rule} {self.detail}".rstrip()


def value_matches_kind(value: ParamValue, kind: str) -> bool:
    if kind == KIND_INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == KIND_FLOAT:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == KIND_STRING:
        return isinstance(value, str)
    if kind == KIND_KEYED_GROUP:
        return isinstance(value, dict) and all(
            isinstance(k, str) and isinstance(v, (int, float)) for k, v in value.items()
        )
    return False


def _check_unique(rows, table: str, out: list[Violation]) -> None:
    seen = set()
    for row in rows:
        key = getattr(row, "name"), getattr(row, "list_index", None)
        if key in seen:
            out.append(Violation(f"{table} '{row.name}'", "duplicate name"))
        seen.add(key)


def validate_collection(coll: WidgetCollection) -> list[Violation]:
    """Check every structural invariant; an empty list means the collection
    is internally consistent.  Violations are data, not exceptions."""
    out: list[Violation] = []
    if not coll.context.name:
        out.append(Violation("context", "empty name"))

    for p in coll.parameters:
        if not p.name:
            out.append(Violation("parameter ''", "empty name"))
        if p.list_index < -1:
            out.append(Violation(f"parameter '{p.name}'", "bad list index", str(p.list_index)))
        if p.kind not in PARAM_KINDS:
            out.append(Violation(f"parameter '{p.name}'", "unknown kind", p.kind))
        elif not value_matches_kind(p.value, p.kind):
            out.append(Violation(f"parameter '{p.name}'", "value/kind mismatch",
                                 f"{type(p.value).__name__} vs {p.kind}"))
    _check_unique(coll.parameters, "parameter", out)

    for d in coll.data:
        if not d.name:
            out.append(Violation("data ''", "empty name"))
        if d.kind not in DATA_KINDS:
            out.append(Violation(f"data '{d.name}'", "unknown kind", d.kind))
    _check_unique(coll.data, "data", out)

    for w in coll.pwidgets:
        rec = f"parameter widget '{w.name}'"
        if w.widget_kind not in PARAM_WIDGET_KINDS:
            out.append(Violation(rec, "unknown widget kind", w.widget_kind))
            continue
        target = coll.find_parameter(w.target, w.config.get("list_index", -1))
        if target is None:
            out.append(Violation(rec, "dangling target", w.target))
        else:
            out.extend(_check_pwidget_config(w, target))
    _check_unique(coll.pwidgets, "parameter widget", out)

    for w in coll.dwidgets:
        rec = f"data widget '{w.name}'"
        if w.widget_kind not in DATA_WIDGET_KINDS:
            out.append(Violation(rec, "unknown widget kind", w.widget_kind))
            continue
        if coll.find_data(w.target) is None:
            out.append(Violation(rec, "dangling target", w.target))
        if w.widget_kind == "IMAGE":
            cfg = w.config
            if cfg.get("scale", 1.0) <= 0:
                out.append(Violation(rec, "bad scale"))
            if cfg.get("hi", 255) <= cfg.get("lo", 0):
                out.append(Violation(rec, "bad range"))
        elif w.widget_kind == "TEXT_OUT":
            just = w.config.get("justify", "just_center")
            if just not in JUSTIFICATIONS:
                out.append(Violation(rec, "bad justification", just))
    _check_unique(coll.dwidgets, "data widget", out)

    for c in coll.comments:
        if not c.name:
            out.append(Violation("comment ''", "empty name"))
    _check_unique(coll.comments, "comment widget", out)
    return out


def _check_pwidget_config(w: ParameterWidgetDef, target: ParameterDef) -> list[Violation]:
    out: list[Violation] = []
    rec = f"parameter widget '{w.name}'"
    cfg = w.config
    kind = w.widget_kind
    if kind == "SLIDER":
        if cfg.get("increment", 1) <= 0:
            out.append(Violation(rec, "bad increment"))
        if cfg.get("nticks", 2) < 2:
            out.append(Violation(rec, "bad nticks"))
        if cfg.get("max", 1) <= cfg.get("min", 0):
            out.append(Violation(rec, "bad range"))
        elif isinstance(target.value, (int, float)) and not (
                cfg.get("min", 0) <= target.value <= cfg.get("max", 1)):
            out.append(Violation(rec, "value out of range", str(target.value)))
        if target.kind not in (KIND_INT, KIND_FLOAT):
            out.append(Violation(rec, "target kind incompatible", target.kind))
    elif kind == "DICTSLIDER":
        items = cfg.get("items", [])
        if not items:
            out.append(Violation(rec, "no items"))
        if target.kind != KIND_KEYED_GROUP:
            out.append(Violation(rec, "target kind incompatible", target.kind))
    elif kind == "CHECKBOX":
        items = cfg.get("items", [])
        if not isinstance(target.value, str) or len(target.value) != len(items):
            out.append(Violation(rec, "encoding length",
                                 f"{len(items)} items vs value {target.value!r}"))
    elif kind in ("TEXT_IN", "RADIOBUTTON", "BUTTON"):
        if target.kind != KIND_STRING:
            out.append(Violation(rec, "target kind incompatible", target.kind))
    elif kind == "LISTSEL":
        decl = cfg.get("type", KIND_STRING)
        if target.kind != decl:
            out.append(Violation(rec, "target kind incompatible",
                                 f"{target.kind} vs declared {decl}"))
    return out


def _table_of(coll: WidgetCollection, widgetdef):
    if isinstance(widgetdef, ParameterWidgetDef):
        return coll.pwidgets
    if isinstance(widgetdef, DataWidgetDef):
        return coll.dwidgets
    if isinstance(widgetdef, CommentWidgetDef):
        return coll.comments
    raise TypeError(f"not a widget definition: {type(widgetdef).__name__}")


def upsert_widget(coll: WidgetCollection, widgetdef, policy: str = "preserve_state") -> WidgetCollection:
    """Insert or update a widget by name within its table.

    ``preserve_state`` keeps the stored geometry of an existing widget and
    replaces its config/target; ``overwrite`` replaces every field.  New
    widgets are appended at geometry (0, 0) so the UI can reposition them.
    """
    if policy not in ("preserve_state", "overwrite"):
        raise ValueError(f"unknown upsert policy: {policy}")
    table = _table_of(coll, widgetdef)
    existing = next((w for w in table if w.name == widgetdef.name), None)
    if existing is None:
        new = copy.deepcopy(widgetdef)
        new.geometry = (0, 0)
        table.append(new)
        return coll
    old_kind = getattr(existing, "widget_kind", None)
    new_kind = getattr(widgetdef, "widget_kind", None)
    if old_kind != new_kind:
        raise KindConflictError(
            f"kind conflict: widget '{widgetdef.name}' is {old_kind}, got {new_kind}")
    if policy == "overwrite":
        existing.geometry = tuple(widgetdef.geometry)
    if isinstance(widgetdef, CommentWidgetDef):
        existing.body = widgetdef.body
    else:
        existing.config = copy.deepcopy(widgetdef.config)
        existing.target = widgetdef.target
    return coll


def upsert_parameter(coll: WidgetCollection, pdef: ParameterDef,
                     policy: str = "preserve_state") -> ParameterDef:
    """Insert or update the parameter record implied by a widget definition.

    Under ``preserve_state`` the current value survives a re-parse; for keyed
    groups values are merged per key (new keys take their declared init,
    removed keys are dropped).  A kind change always adopts the new record.
    """
    existing = coll.find_parameter(pdef.name, pdef.list_index)
    if existing is None:
        new = copy.deepcopy(pdef)
        coll.parameters.append(new)
        return new
    if policy == "overwrite" or existing.kind != pdef.kind:
        existing.kind = pdef.kind
        existing.value = copy.deepcopy(pdef.value)
        return existing
    if pdef.kind == KIND_KEYED_GROUP:
        merged = {}
        for key, init in pdef.value.items():
            merged[key] = existing.value.get(key, init) if isinstance(existing.value, dict) else init
        existing.value = merged
    return existing


def upsert_dataarray(coll: WidgetCollection, ddef: DataArrayDef) -> DataArrayDef:
    existing = coll.find_data(ddef.name)
    if existing is None:
        new = copy.deepcopy(ddef)
        coll.data.append(new)
        return new
    existing.kind = ddef.kind
    return existing


@dataclass
class FieldRef:
    """Descriptor of one live simulation field, as enumerated by the host.

    ``keys`` lists the available labels of a keyed-group (dict) field and
    ``size`` the length of a list-valued field (-1 for scalars).
    """
    name: str
    kind: str
    keys: tuple[str, ...] = ()
    size: int = -1


@dataclass
class BindingReport:
    """resolve_bindings result: (table, widget name) -> field, plus a list of
    human-readable messages for everything that stayed unresolved."""
    by_widget: dict[tuple[str, str], FieldRef] = field(default_factory=dict)
    unresolved: list[str] = field(default_factory=list)

    def get(self, table: str, name: str) -> FieldRef | None:
        return self.by_widget.get((table, name))


def _param_compatible(w: ParameterWidgetDef, ref: FieldRef) -> bool:
    kind = w.widget_kind
    if kind == "SLIDER":
        decl = w.config.get("type", KIND_FLOAT)
        return ref.kind == decl or (decl == KIND_INT and ref.kind == KIND_FLOAT)
    if kind == "DICTSLIDER":
        return ref.kind == KIND_KEYED_GROUP
    if kind == "LISTSEL":
        decl = w.config.get("type", KIND_STRING)
        return ref.kind == decl or (decl == KIND_INT and ref.kind == KIND_FLOAT)
    return ref.kind == KIND_STRING


def resolve_bindings(coll: WidgetCollection, sim_registry: dict[str, FieldRef]) -> BindingReport:
    """Map every widget to a live simulation field.

    Unresolved names are reported, not fatal: the widget is simply inert.
    Dictslider items whose key is missing from the keyed-group field are
    reported individually.
    """
    report = BindingReport()
    for w in coll.pwidgets:
        ref = sim_registry.get(w.target)
        if ref is None:
            report.unresolved.append(f"parameter widget '{w.name}': no field '{w.target}'")
            continue
        if not _param_compatible(w, ref):
            report.unresolved.append(
                f"parameter widget '{w.name}': field '{w.target}' kind {ref.kind} incompatible")
            continue
        idx = w.config.get("list_index", -1)
        if idx >= 0 and not (0 <= idx < ref.size):
            report.unresolved.append(
                f"parameter widget '{w.name}': index {idx} out of range for '{w.target}'")
            continue
        if w.widget_kind == "DICTSLIDER":
            for item in w.config.get("items", []):
                if item["key"] not in ref.keys:
                    report.unresolved.append(
                        f"dictslider '{w.name}': item '{item['key']}' unresolved")
        report.by_widget[("parameter", w.name)] = ref
    for w in coll.dwidgets:
        ref = sim_registry.get(w.target)
        want = KIND_IMAGE if w.widget_kind == "IMAGE" else KIND_TEXT
        if ref is None or ref.kind != want:
            report.unresolved.append(f"data widget '{w.name}': no {want} field '{w.target}'")
            continue
        report.by_widget[("data", w.name)] = ref
    return report
