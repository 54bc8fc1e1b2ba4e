import pytest

from simdeck.directives import (
    DirectiveError,
    group_directives,
    merge_into_collection,
    parse_directive,
    parse_source,
    scan_source,
    serialize_context,
    serialize_spec,
)
from simdeck.model import empty_collection, validate_collection

# the documented in-code command examples, one per widget kind
EXAMPLE_LINES = {
    "SIMULATION": "#@IVISIT:SIMULATION & sim_name",
    "SLIDER": "#@IVISIT:SLIDER  & name    & [200,1] & [0,9,3,1] & var & -1 & int & 0",
    "DICTSLIDER": ("#@IVISIT:DICTSLIDER  & ParDict  & [200,20,-1,2,10] & dict_par & 0\n"
                   "#@IVISIT:DICTSLIDERITEM & Item1 & [0, 9,3,1] & item1 & int   & 3\n"
                   "#@IVISIT:DICTSLIDERITEM & Item2 & [0,30,4,2] & item2 & float & .5"),
    "TEXT_IN": "#@IVISIT:TEXT_IN & name     & [20,5] & strvar & -1 & InitialText",
    "LISTSEL": "#@IVISIT:LISTSEL & name &[20,5] & [A,B,C] & var & -1 & string & A",
    "CHECKBOX": "#@IVISIT:CHECKBOX & name & [AA,BB,CC,DD] & strvar & 0110",
    "RADIOBUTTON": "#@IVISIT:RADIOBUTTON & name & [AA,BB,CC,DD] & strvar & AA",
    "BUTTON": "#@IVISIT:BUTTON & name & [<,TRAIN] & strvar",
    "IMAGE": "#@IVISIT:IMAGE     & name & 1.0    & [0,255]  & img_var & int",
    "TEXT_OUT": "#@IVISIT:TEXT_OUT & name & [20,5] & None & strvar",
}


def parse_one(text):
    grouped = group_directives(scan_source(text))
    assert len(grouped) == 1
    d, items = grouped[0]
    return parse_directive(d, items)


def test_scan_keeps_order_and_skips_code():
    text = """
import numpy as np
#@IVISIT:SLIDER & a & [200,1] & [0,9,3,1] & va & -1 & int & 0
x = 1  # unrelated comment
#@IVISIT:SLIDER & b & [200,1] & [0,9,3,1] & vb & -1 & int & 0
"""
    ds = scan_source(text)
    assert [d.fields[0] for d in ds] == ["a", "b"]
    assert [d.keyword for d in ds] == ["SLIDER", "SLIDER"]


def test_scan_empty_source():
    assert scan_source("") == []


def test_scan_orphan_dictslideritem_errors_with_line():
    text = "x = 1\n#@IVISIT:DICTSLIDERITEM & I & [0,9,3,1] & k & int & 3\n"
    with pytest.raises(DirectiveError) as err:
        scan_source(text)
    assert err.value.line_no == 2


def test_scan_prefix_behind_comment_markers():
    for line in ("  #@IVISIT:SIMULATION & ctx",
                 "// #@IVISIT:SIMULATION & ctx",
                 "# #@IVISIT:SIMULATION & ctx",
                 "; #@IVISIT:SIMULATION & ctx"):
        assert scan_source(line)[0].keyword == "SIMULATION"


def test_scan_wrong_arity():
    with pytest.raises(DirectiveError):
        scan_source("#@IVISIT:CHECKBOX & name & [A] & var")  # missing bits field


def test_simulation_yields_context_name():
    assert parse_one(EXAMPLE_LINES["SIMULATION"]) == "sim_name"


def test_slider_example_fields():
    spec = parse_one(EXAMPLE_LINES["SLIDER"])
    w, p = spec.widget, spec.param
    assert w.widget_kind == "SLIDER" and w.name == "name" and w.target == "var"
    assert w.config["width"] == 200 and w.config["height"] == 1
    assert (w.config["min"], w.config["max"]) == (0.0, 9.0)
    assert w.config["nticks"] == 3 and w.config["increment"] == 1.0
    assert p.name == "var" and p.kind == "int" and p.value == 0 and p.list_index == -1


def test_dictslider_example_fields():
    spec = parse_one(EXAMPLE_LINES["DICTSLIDER"])
    w, p = spec.widget, spec.param
    cfg = w.config
    assert w.widget_kind == "DICTSLIDER" and w.name == "ParDict"
    assert (cfg["width"], cfg["columns"], cfg["rows"]) == (200, 20, -1)
    assert (cfg["display_mode"], cfg["font_size"], cfg["init_index"]) == (2, 10, 0)
    assert [it["key"] for it in cfg["items"]] == ["item1", "item2"]
    assert cfg["items"][0] == {"label": "Item1", "min": 0.0, "max": 9.0, "nticks": 3,
                               "increment": 1.0, "key": "item1", "type": "int", "init": 3}
    assert cfg["items"][1]["init"] == 0.5  # ".5" accepted
    assert p.kind == "keyed_group" and p.value == {"item1": 3, "item2": 0.5}
    assert list(p.value) == ["item1", "item2"]  # declaration order


def test_text_in_example():
    spec = parse_one(EXAMPLE_LINES["TEXT_IN"])
    assert spec.widget.config == {"columns": 20, "rows": 5, "list_index": -1}
    assert spec.param.value == "InitialText" and spec.param.kind == "string"


def test_listsel_example():
    spec = parse_one(EXAMPLE_LINES["LISTSEL"])
    assert spec.widget.config["items"] == ["A", "B", "C"]
    assert spec.param.value == "A"


def test_checkbox_example_selects_bb_cc():
    from simdeck.widgets import checkbox_decode
    spec = parse_one(EXAMPLE_LINES["CHECKBOX"])
    assert spec.param.value == "0110"
    assert checkbox_decode(spec.param.value, spec.widget.config["items"]) == ["BB", "CC"]


def test_radiobutton_example():
    spec = parse_one(EXAMPLE_LINES["RADIOBUTTON"])
    assert spec.widget.config["items"] == ["AA", "BB", "CC", "DD"]
    assert spec.param.value == "AA"


def test_button_example():
    spec = parse_one(EXAMPLE_LINES["BUTTON"])
    assert spec.widget.config == {"label_text": "<", "button_text": "TRAIN"}
    assert spec.param.value == "0"


def test_image_example():
    spec = parse_one(EXAMPLE_LINES["IMAGE"])
    cfg = spec.widget.config
    assert cfg["scale"] == 1.0 and (cfg["lo"], cfg["hi"]) == (0.0, 255.0)
    assert spec.data.name == "img_var" and spec.data.kind == "image"


def test_text_out_example_none_defaults_center():
    spec = parse_one(EXAMPLE_LINES["TEXT_OUT"])
    assert spec.widget.config["justify"] == "just_center"
    assert spec.data.kind == "text"


def test_text_out_justification_forms():
    for opts, expected in (("just_left", "just_left"),
                           ("[just_right]", "just_right"),
                           ("None", "just_center")):
        spec = parse_one(f"#@IVISIT:TEXT_OUT & name & [20,5] & {opts} & strvar")
        assert spec.widget.config["justify"] == expected
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:TEXT_OUT & name & [20,5] & just_diagonal & strvar")


def test_rangelist_arity_error():
    with pytest.raises(DirectiveError) as err:
        parse_one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3] & var & -1 & int & 0")
    assert "rangelist arity" in str(err.value)


def test_bad_number_error():
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:SLIDER & name & [200,1] & [0,nine,3,1] & var & -1 & int & 0")


def test_bad_type_keyword_error():
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & bool & 0")


def test_checkbox_bitstring_length_mismatch():
    with pytest.raises(DirectiveError) as err:
        parse_one("#@IVISIT:CHECKBOX & name & [AA,BB,CC,DD] & strvar & 011")
    assert "encoding length" in str(err.value)


def test_quotation_marks_rejected_in_items():
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:LISTSEL & name & [20,5] & ['A',B] & var & -1 & string & B")


def test_init_outside_slider_range_rejected():
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:SLIDER & name & [200,1] & [0,9,3,1] & var & -1 & int & 12")


def test_dictslider_without_items_errors():
    with pytest.raises(DirectiveError):
        parse_one("#@IVISIT:DICTSLIDER & P & [200,20,-1,2,10] & dict_par & 0")


def test_float_exponent_notation_accepted():
    spec = parse_one("#@IVISIT:SLIDER & s & [200,1] & [0,1,3,1e-2] & v & -1 & float & 5e-1")
    assert spec.widget.config["increment"] == 0.01
    assert spec.param.value == 0.5


def test_every_example_serializes_to_fixpoint():
    for kw, text in EXAMPLE_LINES.items():
        parsed = parse_one(text)
        if kw == "SIMULATION":
            canonical = serialize_context(parsed)
            assert parse_one(canonical) == parsed
            continue
        lines = serialize_spec(parsed)
        reparsed = parse_one("\n".join(lines))
        assert reparsed == parsed, kw
        # canonical form is itself a fixpoint
        assert serialize_spec(reparsed) == lines


def test_parsing_is_pure():
    text = "\n".join(EXAMPLE_LINES[k] for k in EXAMPLE_LINES)
    assert parse_source(text) == parse_source(text)


# -- merge ------------------------------------------------------------------

DEMO_SOURCE = """
#@IVISIT:SIMULATION & sim_HelloWorld1
#@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,3,0.01] & decay & -1 & float & 0.9
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,3,10] & delay & -1 & int & 0
#@IVISIT:TEXT_OUT & Results & [40,3] & None & str_results
"""


def test_merge_creates_then_reports_unchanged():
    result = parse_source(DEMO_SOURCE)
    coll = empty_collection()
    first = merge_into_collection(result.specs, coll, context=result.context)
    assert (first.created, first.updated, first.unchanged) == (3, 0, 0)
    assert coll.context.name == "sim_HelloWorld1"
    assert validate_collection(coll) == []
    coll.pwidgets[0].geometry = (40, 80)
    second = merge_into_collection(result.specs, coll, context=result.context)
    assert second.created == 0
    assert coll.pwidgets[0].geometry == (40, 80)


def test_merge_empty_specs_is_noop():
    coll = empty_collection()
    report = merge_into_collection([], coll)
    assert (report.created, report.updated, report.unchanged) == (0, 0, 0)
    assert coll == empty_collection()


def test_merge_overwrite_resets_values():
    result = parse_source(DEMO_SOURCE)
    coll = empty_collection()
    merge_into_collection(result.specs, coll, context=result.context)
    coll.parameters[0].value = 0.42
    merge_into_collection(result.specs, coll, preserve_state=False)
    assert coll.parameters[0].value == 0.9


# -- serializer fuzz ----------------------------------------------------------

from hypothesis import given, settings
from hypothesis import strategies as st

_name = st.text(alphabet="abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789",
                min_size=1, max_size=12).map(str.strip).filter(bool).filter(
    lambda s: "&" not in s and "[" not in s and "]" not in s)
_var = st.text(alphabet="abcdefghijklmnopqrstuvwxyz_", min_size=1, max_size=10)


@st.composite
def slider_lines(draw):
    lo = draw(st.integers(-50, 50))
    hi = lo + draw(st.integers(1, 100))
    nticks = draw(st.integers(2, 9))
    inc = draw(st.sampled_from([1, 2, 5, 0.5, 0.25]))
    decl = draw(st.sampled_from(["int", "float"]))
    if decl == "int":
        init = draw(st.integers(lo, hi))
    else:
        init = draw(st.floats(lo, hi, allow_nan=False)).__round__(3)
    return (f"#@IVISIT:SLIDER & {draw(_name)} & [{draw(st.integers(10, 400))},1] & "
            f"[{lo},{hi},{nticks},{inc}] & {draw(_var)} & {draw(st.integers(-1, 5))} & "
            f"{decl} & {init}")


@given(slider_lines())
@settings(max_examples=100, deadline=None)
def test_random_sliders_round_trip_to_fixpoint(line):
    grouped = group_directives(scan_source(line))
    spec = parse_directive(*grouped[0])
    canon = serialize_spec(spec)
    respec = parse_directive(*group_directives(scan_source("\n".join(canon)))[0])
    assert respec == spec
    assert serialize_spec(respec) == canon
