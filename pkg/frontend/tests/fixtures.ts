// Fixture layout covering every widget kind, mirroring the server's layout
// message shape.

import type { LayoutMsg } from "../src/protocol.js";

export function fixtureLayout(): LayoutMsg {
  return {
    type: "layout",
    context: "sim_fixture",
    step: 0,
    unresolved: [],
    widgets: [
      { id: 1, group: "parameter", kind: "SLIDER", name: "Decay Factor", x: 10, y: 10,
        target: "decay", value: 4,
        config: { width: 200, height: 1, min: 0, max: 9, nticks: 3, increment: 1,
                  type: "int", list_index: -1 } },
      { id: 2, group: "parameter", kind: "DICTSLIDER", name: "Pars", x: 10, y: 60,
        target: "dict_par", value: { item1: 3, item2: 0.5 }, selected_key: "item1",
        config: { width: 200, columns: 20, rows: -1, display_mode: 1, font_size: 10,
                  init_index: 0,
                  items: [
                    { label: "Item1", min: 0, max: 9, nticks: 3, increment: 1,
                      key: "item1", type: "int", init: 3 },
                    { label: "Item2", min: 0, max: 30, nticks: 4, increment: 2,
                      key: "item2", type: "float", init: 0.5 },
                  ] } },
      { id: 3, group: "parameter", kind: "TEXT_IN", name: "Note", x: 10, y: 120,
        target: "txt", value: "hello",
        config: { columns: 20, rows: 3, list_index: -1 } },
      { id: 4, group: "parameter", kind: "LISTSEL", name: "Action", x: 10, y: 180,
        target: "str_action", value: "New",
        config: { columns: 10, rows: 3, items: ["Test", "New", "Delete", "Move"],
                  type: "string", list_index: -1 } },
      { id: 5, group: "parameter", kind: "CHECKBOX", name: "Options", x: 10, y: 260,
        target: "strvar", value: "0110",
        config: { items: ["AA", "BB", "CC", "DD"] } },
      { id: 6, group: "parameter", kind: "RADIOBUTTON", name: "Label", x: 10, y: 340,
        target: "radio", value: "+1",
        config: { items: ["+1", "-1"] } },
      { id: 7, group: "parameter", kind: "BUTTON", name: "Train", x: 10, y: 400,
        target: "btn", value: "0",
        config: { label_text: "<", button_text: "TRAIN" } },
      { id: 8, group: "data", kind: "IMAGE", name: "View", x: 260, y: 10,
        target: "im",
        config: { scale: 2.0, lo: 0, hi: 255, type: "int" } },
      { id: 9, group: "data", kind: "TEXT_OUT", name: "Results", x: 260, y: 220,
        target: "str_results",
        config: { columns: 30, rows: 4, justify: "just_left" } },
      { id: 10, group: "comment", name: "note", x: 260, y: 330, body: "a comment" },
    ],
  };
}

export class MockSocket {
  sent: any[] = [];

  send(data: string): void {
    this.sent.push(JSON.parse(data));
  }

  ofType(type: string): any[] {
    return this.sent.filter((m) => m.type === type);
  }
}
