"""Parser for in-source widget declaration lines.

Simulation sources may carry annotation lines of the form::

    #@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,3,0.01] & decay & -1 & float & 0.9

Each line declares one GUI widget and its binding to a simulation parameter
or output field.  ``scan_source`` extracts the raw directives, keeping their
order; ``parse_source`` turns them into widget specs; ``merge_into_collection``
upserts those specs into a widget collection without destroying saved layout
or values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .model import (
    JUSTIFICATIONS,
    KIND_FLOAT,
    KIND_IMAGE,
    KIND_INT,
    KIND_KEYED_GROUP,
    KIND_STRING,
    KIND_TEXT,
    DataArrayDef,
    DataWidgetDef,
    ParameterDef,
    ParameterWidgetDef,
    WidgetCollection,
    upsert_dataarray,
    upsert_parameter,
    upsert_widget,
)

PREFIX = "#@IVISIT:"

KEYWORDS = (
    "SIMULATION", "SLIDER", "DICTSLIDER", "DICTSLIDERITEM", "TEXT_IN",
    "LISTSEL", "CHECKBOX", "RADIOBUTTON", "BUTTON", "IMAGE", "TEXT_OUT",
)

_ARITY = {
    "SIMULATION": 1,
    "SLIDER": 7,
    "DICTSLIDER": 4,
    "DICTSLIDERITEM": 5,
    "TEXT_IN": 5,
    "LISTSEL": 7,
    "CHECKBOX": 4,
    "RADIOBUTTON": 4,
    "BUTTON": 3,
    "IMAGE": 5,
    "TEXT_OUT": 4,
}

# the prefix may sit behind leading comment markers of the host language
_LINE_RE = re.compile(r"^[\s#;/*%!'\"-]*#@IVISIT:(.*)$")


class DirectiveError(ValueError):
    """Malformed directive; carries the 1-based source line number."""

    def __init__(self, message: str, line_no: int = 0):
        super().__init__(f"line {line_no}: {message}" if line_no else message)
        self.line_no = line_no


@dataclass
class Directive:
    keyword: str
    fields: list[str]
    line_no: int


@dataclass
class RangeList:
    """Slider range: [min, max, nticks, increment]."""
    min: float
    max: float
    nticks: int
    increment: float


@dataclass
class WidgetSpec:
    """One parsed widget plus the parameter/data record it implies."""
    widget: ParameterWidgetDef | DataWidgetDef
    param: ParameterDef | None = None
    data: DataArrayDef | None = None


@dataclass
class ParseResult:
    context: str | None
    specs: list[WidgetSpec] = field(default_factory=list)


@dataclass
class MergeReport:
    created: int = 0
    updated: int = 0
    unchanged: int = 0


def scan_source(text: str) -> list[Directive]:
    """Extract directives in source order; all other lines are ignored.

    A DICTSLIDERITEM is only legal directly after a DICTSLIDER or another
    DICTSLIDERITEM (intervening non-directive lines do not matter).
    """
    out: list[Directive] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        m = _LINE_RE.match(line)
        if not m:
            continue
        pieces = [p.strip() for p in m.group(1).split("&")]
        keyword = pieces[0]
        fields = pieces[1:]
        if keyword not in KEYWORDS:
            raise DirectiveError(f"unknown directive keyword '{keyword}'", line_no)
        if len(fields) != _ARITY[keyword]:
            raise DirectiveError(
                f"{keyword} takes {_ARITY[keyword]} fields, got {len(fields)}", line_no)
        if keyword == "DICTSLIDERITEM":
            prev = out[-1].keyword if out else None
            if prev not in ("DICTSLIDER", "DICTSLIDERITEM"):
                raise DirectiveError("DICTSLIDERITEM without a preceding DICTSLIDER", line_no)
        out.append(Directive(keyword, fields, line_no))
    return out


def _bracket_list(text: str, line_no: int, what: str) -> list[str]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise DirectiveError(f"{what} must be a [..] list, got '{text}'", line_no)
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [p.strip() for p in inner.split(",")]


def _int(text: str, line_no: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise DirectiveError(f"{what}: unparseable integer '{text}'", line_no) from None


def _float(text: str, line_no: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise DirectiveError(f"{what}: unparseable number '{text}'", line_no) from None


def _typed(type_kw: str, text: str, line_no: int, what: str):
    if type_kw == KIND_INT:
        return _int(text, line_no, what)
    if type_kw == KIND_FLOAT:
        return _float(text, line_no, what)
    return text


def _type_kw(text: str, line_no: int, allowed=(KIND_INT, KIND_FLOAT)) -> str:
    if text not in allowed:
        raise DirectiveError(f"type must be one of {'/'.join(allowed)}, got '{text}'", line_no)
    return text


def _rangelist(text: str, line_no: int) -> RangeList:
    parts = _bracket_list(text, line_no, "rangelist")
    if len(parts) != 4:
        raise DirectiveError(f"rangelist arity: expected [min,max,nticks,increment], got {text}",
                             line_no)
    lo = _float(parts[0], line_no, "rangelist min")
    hi = _float(parts[1], line_no, "rangelist max")
    nticks = _int(parts[2], line_no, "rangelist nticks")
    inc = _float(parts[3], line_no, "rangelist increment")
    if hi <= lo:
        raise DirectiveError(f"rangelist needs max > min, got [{lo},{hi}]", line_no)
    if inc <= 0:
        raise DirectiveError(f"rangelist increment must be > 0, got {inc}", line_no)
    if nticks < 2:
        raise DirectiveError(f"rangelist needs nticks >= 2, got {nticks}", line_no)
    return RangeList(lo, hi, nticks, inc)


def _items_list(text: str, line_no: int, what: str) -> list[str]:
    items = _bracket_list(text, line_no, what)
    if not items:
        raise DirectiveError(f"{what} must not be empty", line_no)
    for it in items:
        if "'" in it or '"' in it:
            raise DirectiveError(f"quotation marks not allowed in {what}: {it}", line_no)
    return items


def _check_in_range(value, r: RangeList, line_no: int) -> None:
    if not (r.min <= value <= r.max):
        raise DirectiveError(f"initial value {value} outside range [{r.min},{r.max}]", line_no)


def parse_directive(d: Directive, items: list[Directive] | None = None) -> str | WidgetSpec:
    """Convert one directive (plus its DICTSLIDERITEM lines, if any) into a
    widget spec.  A SIMULATION directive yields the context name instead."""
    f, n = d.fields, d.line_no
    kw = d.keyword

    if kw == "SIMULATION":
        if not f[0]:
            raise DirectiveError("empty simulation context name", n)
        return f[0]

    if kw == "SLIDER":
        size = _bracket_list(f[1], n, "slider size")
        if len(size) != 2:
            raise DirectiveError(f"slider size arity: expected [width,height], got {f[1]}", n)
        width = _int(size[0], n, "slider width")
        height = _int(size[1], n, "slider height")
        r = _rangelist(f[2], n)
        idx = _int(f[4], n, "list index")
        decl = _type_kw(f[5], n)
        init = _typed(decl, f[6], n, "initial value")
        _check_in_range(init, r, n)
        widget = ParameterWidgetDef(
            "SLIDER", f[0],
            config={"width": width, "height": height, "min": r.min, "max": r.max,
                    "nticks": r.nticks, "increment": r.increment,
                    "type": decl, "list_index": idx},
            target=f[3])
        return WidgetSpec(widget, param=ParameterDef(f[3], decl, init, idx))

    if kw == "DICTSLIDER":
        size = _bracket_list(f[1], n, "dictslider size")
        if len(size) != 5:
            raise DirectiveError(
                f"dictslider size arity: expected [width,columns,rows,mode,fontsize], got {f[1]}", n)
        width, columns, rows, mode, font = (_int(p, n, "dictslider size") for p in size)
        if mode not in (0, 1, 2):
            raise DirectiveError(f"display mode must be 0, 1 or 2, got {mode}", n)
        if rows < -1:
            raise DirectiveError(f"rows must be >= -1, got {rows}", n)
        init_idx = _int(f[3], n, "initial item index")
        if not items:
            raise DirectiveError("DICTSLIDER needs at least one DICTSLIDERITEM", n)
        parsed_items = []
        values: dict[str, int | float] = {}
        for it in items:
            label, range_f, key, type_f, init_f = it.fields
            r = _rangelist(range_f, it.line_no)
            decl = _type_kw(type_f, it.line_no)
            init = _typed(decl, init_f, it.line_no, "item initial value")
            _check_in_range(init, r, it.line_no)
            if key in values:
                raise DirectiveError(f"duplicate dictslider item key '{key}'", it.line_no)
            parsed_items.append({"label": label, "min": r.min, "max": r.max,
                                 "nticks": r.nticks, "increment": r.increment,
                                 "key": key, "type": decl, "init": init})
            values[key] = init
        if not (0 <= init_idx < len(parsed_items)):
            raise DirectiveError(f"initial item index {init_idx} out of range", n)
        widget = ParameterWidgetDef(
            "DICTSLIDER", f[0],
            config={"width": width, "columns": columns, "rows": rows,
                    "display_mode": mode, "font_size": font,
                    "init_index": init_idx, "items": parsed_items},
            target=f[2])
        return WidgetSpec(widget, param=ParameterDef(f[2], KIND_KEYED_GROUP, values, -1))

    if kw == "TEXT_IN":
        size = _bracket_list(f[1], n, "text size")
        if len(size) != 2:
            raise DirectiveError(f"text size arity: expected [columns,rows], got {f[1]}", n)
        idx = _int(f[3], n, "list index")
        widget = ParameterWidgetDef(
            "TEXT_IN", f[0],
            config={"columns": _int(size[0], n, "columns"), "rows": _int(size[1], n, "rows"),
                    "list_index": idx},
            target=f[2])
        return WidgetSpec(widget, param=ParameterDef(f[2], KIND_STRING, f[4], idx))

    if kw == "LISTSEL":
        size = _bracket_list(f[1], n, "listsel size")
        if len(size) != 2:
            raise DirectiveError(f"listsel size arity: expected [columns,rows], got {f[1]}", n)
        items_l = _items_list(f[2], n, "item list")
        idx = _int(f[4], n, "list index")
        decl = _type_kw(f[5], n, allowed=(KIND_INT, KIND_FLOAT, KIND_STRING))
        if f[6] not in items_l:
            raise DirectiveError(f"initial value '{f[6]}' not in item list", n)
        init = _typed(decl, f[6], n, "initial value")
        widget = ParameterWidgetDef(
            "LISTSEL", f[0],
            config={"columns": _int(size[0], n, "columns"), "rows": _int(size[1], n, "rows"),
                    "items": items_l, "type": decl, "list_index": idx},
            target=f[3])
        return WidgetSpec(widget, param=ParameterDef(f[3], decl, init, idx))

    if kw == "CHECKBOX":
        items_l = _items_list(f[1], n, "item list")
        bits = f[3]
        if len(bits) != len(items_l) or any(c not in "01" for c in bits):
            raise DirectiveError(
                f"encoding length: need one 0/1 digit per item ({len(items_l)}), got '{bits}'", n)
        widget = ParameterWidgetDef("CHECKBOX", f[0], config={"items": items_l}, target=f[2])
        return WidgetSpec(widget, param=ParameterDef(f[2], KIND_STRING, bits, -1))

    if kw == "RADIOBUTTON":
        items_l = _items_list(f[1], n, "item list")
        if f[3] not in items_l:
            raise DirectiveError(f"initial value '{f[3]}' not in item list", n)
        widget = ParameterWidgetDef("RADIOBUTTON", f[0], config={"items": items_l}, target=f[2])
        return WidgetSpec(widget, param=ParameterDef(f[2], KIND_STRING, f[3], -1))

    if kw == "BUTTON":
        labels = _items_list(f[1], n, "button labels")
        if len(labels) != 2:
            raise DirectiveError(f"button labels arity: expected [labeltext,buttontext], got {f[1]}", n)
        widget = ParameterWidgetDef(
            "BUTTON", f[0],
            config={"label_text": labels[0], "button_text": labels[1]},
            target=f[2])
        return WidgetSpec(widget, param=ParameterDef(f[2], KIND_STRING, "0", -1))

    if kw == "IMAGE":
        scale = _float(f[1], n, "scale")
        if scale <= 0:
            raise DirectiveError(f"scale must be > 0, got {scale}", n)
        lohi = _bracket_list(f[2], n, "pixel range")
        if len(lohi) != 2:
            raise DirectiveError(f"pixel range arity: expected [lo,hi], got {f[2]}", n)
        lo = _float(lohi[0], n, "lo")
        hi = _float(lohi[1], n, "hi")
        if hi <= lo:
            raise DirectiveError(f"pixel range needs hi > lo, got [{lo},{hi}]", n)
        decl = _type_kw(f[4], n)
        widget = DataWidgetDef(
            "IMAGE", f[0],
            config={"scale": scale, "lo": lo, "hi": hi, "type": decl},
            target=f[3])
        return WidgetSpec(widget, data=DataArrayDef(f[3], KIND_IMAGE))

    if kw == "TEXT_OUT":
        size = _bracket_list(f[1], n, "text size")
        if len(size) != 2:
            raise DirectiveError(f"text size arity: expected [columns,rows], got {f[1]}", n)
        justify = "just_center"
        opts = f[2]
        if opts.startswith("["):
            tokens = _bracket_list(opts, n, "options")
        elif opts in ("", "None"):
            tokens = []
        else:
            tokens = [opts]
        for tok in tokens:
            if tok not in JUSTIFICATIONS:
                raise DirectiveError(f"unknown option '{tok}'", n)
            justify = tok
        widget = DataWidgetDef(
            "TEXT_OUT", f[0],
            config={"columns": _int(size[0], n, "columns"), "rows": _int(size[1], n, "rows"),
                    "justify": justify},
            target=f[3])
        return WidgetSpec(widget, data=DataArrayDef(f[3], KIND_TEXT))

    raise DirectiveError("DICTSLIDERITEM cannot stand alone", n)


def group_directives(directives: list[Directive]) -> list[tuple[Directive, list[Directive]]]:
    """Attach DICTSLIDERITEM lines to their owning DICTSLIDER."""
    out: list[tuple[Directive, list[Directive]]] = []
    for d in directives:
        if d.keyword == "DICTSLIDERITEM":
            out[-1][1].append(d)
        else:
            out.append((d, []))
    return out


def parse_source(text: str) -> ParseResult:
    """scan + group + parse.  The last SIMULATION directive (if any) names
    the simulation context for the whole file."""
    context = None
    specs: list[WidgetSpec] = []
    for d, items in group_directives(scan_source(text)):
        parsed = parse_directive(d, items)
        if isinstance(parsed, str):
            context = parsed
        else:
            specs.append(parsed)
    return ParseResult(context=context, specs=specs)


def _fmt_num(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def serialize_spec(spec: WidgetSpec) -> list[str]:
    """Render a widget spec back into canonical directive lines.  Reparsing
    the output yields an equal spec."""
    w = spec.widget
    cfg = w.config
    kind = w.widget_kind
    if kind == "SLIDER":
        p = spec.param
        return [f"{PREFIX}SLIDER & {w.name} & [{cfg['width']},{cfg['height']}] & "
                f"[{_fmt_num(cfg['min'])},{_fmt_num(cfg['max'])},{cfg['nticks']},"
                f"{_fmt_num(cfg['increment'])}] & {w.target} & {p.list_index} & "
                f"{cfg['type']} & {_fmt_num(p.value)}"]
    if kind == "DICTSLIDER":
        lines = [f"{PREFIX}DICTSLIDER & {w.name} & [{cfg['width']},{cfg['columns']},"
                 f"{cfg['rows']},{cfg['display_mode']},{cfg['font_size']}] & {w.target} & "
                 f"{cfg['init_index']}"]
        for it in cfg["items"]:
            lines.append(f"{PREFIX}DICTSLIDERITEM & {it['label']} & "
                         f"[{_fmt_num(it['min'])},{_fmt_num(it['max'])},{it['nticks']},"
                         f"{_fmt_num(it['increment'])}] & {it['key']} & {it['type']} & "
                         f"{_fmt_num(it['init'])}")
        return lines
    if kind == "TEXT_IN":
        p = spec.param
        return [f"{PREFIX}TEXT_IN & {w.name} & [{cfg['columns']},{cfg['rows']}] & "
                f"{w.target} & {p.list_index} & {p.value}"]
    if kind == "LISTSEL":
        p = spec.param
        return [f"{PREFIX}LISTSEL & {w.name} & [{cfg['columns']},{cfg['rows']}] & "
                f"[{','.join(cfg['items'])}] & {w.target} & {p.list_index} & "
                f"{cfg['type']} & {_fmt_num(p.value) if cfg['type'] != KIND_STRING else p.value}"]
    if kind == "CHECKBOX":
        return [f"{PREFIX}CHECKBOX & {w.name} & [{','.join(cfg['items'])}] & "
                f"{w.target} & {spec.param.value}"]
    if kind == "RADIOBUTTON":
        return [f"{PREFIX}RADIOBUTTON & {w.name} & [{','.join(cfg['items'])}] & "
                f"{w.target} & {spec.param.value}"]
    if kind == "BUTTON":
        return [f"{PREFIX}BUTTON & {w.name} & [{cfg['label_text']},{cfg['button_text']}] & "
                f"{w.target}"]
    if kind == "IMAGE":
        return [f"{PREFIX}IMAGE & {w.name} & {_fmt_num(cfg['scale'])} & "
                f"[{_fmt_num(cfg['lo'])},{_fmt_num(cfg['hi'])}] & {w.target} & {cfg['type']}"]
    if kind == "TEXT_OUT":
        return [f"{PREFIX}TEXT_OUT & {w.name} & [{cfg['columns']},{cfg['rows']}] & "
                f"{cfg['justify']} & {w.target}"]
    raise ValueError(f"cannot serialize widget kind {kind}")


def serialize_context(name: str) -> str:
    return f"{PREFIX}SIMULATION & {name}"


def merge_into_collection(specs: list[WidgetSpec], coll: WidgetCollection,
                          preserve_state: bool = True,
                          context: str | None = None) -> MergeReport:
    """Upsert parsed specs into the collection in order.

    With ``preserve_state`` (the default parse option) existing geometry and
    current parameter values survive; ``overwrite`` resets them to the
    declared initials.  A SIMULATION context name renames the collection's
    context.
    """
    policy = "preserve_state" if preserve_state else "overwrite"
    if context:
        coll.context.name = context
    report = MergeReport()
    for spec in specs:
        table = coll.pwidgets if isinstance(spec.widget, ParameterWidgetDef) else coll.dwidgets
        before = next((w for w in table if w.name == spec.widget.name), None)
        before_snapshot = None if before is None else (before.geometry, dict(before.config), before.target)
        if spec.param is not None:
            old_p = coll.find_parameter(spec.param.name, spec.param.list_index)
            p_snapshot = None if old_p is None else (old_p.kind, old_p.value)
            upsert_parameter(coll, spec.param, policy)
        else:
            p_snapshot = None
        if spec.data is not None:
            upsert_dataarray(coll, spec.data)
        upsert_widget(coll, spec.widget, policy)
        if before is None:
            report.created += 1
            continue
        after_snapshot = (before.geometry, dict(before.config), before.target)
        if spec.param is not None:
            new_p = coll.find_parameter(spec.param.name, spec.param.list_index)
            changed_p = p_snapshot != (new_p.kind, new_p.value)
        else:
            changed_p = False
        if before_snapshot != after_snapshot or changed_p:
            report.updated += 1
        else:
            report.unchanged += 1
    return report
