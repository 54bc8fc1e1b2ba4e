// One view per widget kind.  Views are absolutely positioned; dragging a
// widget's label repositions it and reports the new geometry to the server.

import { DecodedFrame, LayoutWidget, frameToRgba } from "./protocol.js";
import { encodePng } from "./png.js";
import { sliderQuantize } from "./quantize.js";

export interface Bus {
  sendParam(id: number, value: unknown, key?: string): void;
  sendPointer(id: number, kind: "press" | "move" | "release", button: number,
              x: number, y: number): void;
  sendGeometry(id: number, x: number, y: number): void;
}

export interface WidgetView {
  el: HTMLElement;
  widget: LayoutWidget;
  update(w: LayoutWidget): void;
  setText?(s: string): void;
  setFrame?(f: DecodedFrame): void;
  lastFrame?: DecodedFrame;
  saveImage?(): Uint8Array | null;
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(6).replace(/\.?0+$/, "");
}

function position(el: HTMLElement, w: LayoutWidget): void {
  el.style.left = `${w.x}px`;
  el.style.top = `${w.y}px`;
}

function chrome(doc: Document, w: LayoutWidget, bus: Bus, labelText?: string) {
  const el = doc.createElement("div");
  el.className = `widget widget-${(w.kind ?? w.group).toLowerCase()}`;
  el.style.position = "absolute";
  position(el, w);
  const label = doc.createElement("div");
  label.className = "widget-label";
  label.textContent = labelText ?? w.name;
  el.appendChild(label);
  makeDraggable(doc, label, el, w, bus);
  return { el, label };
}

function makeDraggable(doc: Document, handle: HTMLElement, el: HTMLElement,
                       w: LayoutWidget, bus: Bus): void {
  handle.addEventListener("mousedown", (e: MouseEvent) => {
    e.preventDefault();
    const startX = e.clientX;
    const startY = e.clientY;
    const baseX = parseInt(el.style.left || "0", 10);
    const baseY = parseInt(el.style.top || "0", 10);
    let lastX = baseX;
    let lastY = baseY;
    const onMove = (m: MouseEvent) => {
      lastX = Math.max(0, baseX + (m.clientX - startX));
      lastY = Math.max(0, baseY + (m.clientY - startY));
      el.style.left = `${lastX}px`;
      el.style.top = `${lastY}px`;
    };
    const onUp = () => {
      doc.removeEventListener("mousemove", onMove);
      doc.removeEventListener("mouseup", onUp);
      bus.sendGeometry(w.id, lastX, lastY);
    };
    doc.addEventListener("mousemove", onMove);
    doc.addEventListener("mouseup", onUp);
  });
}

type Cfg = Record<string, any>;

function sliderView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus);
  const input = doc.createElement("input");
  input.type = "range";
  input.min = String(cfg.min ?? 0);
  input.max = String(cfg.max ?? 1);
  input.step = String(cfg.increment ?? 1);
  input.style.width = `${cfg.width ?? 200}px`;
  const out = doc.createElement("span");
  out.className = "slider-value";
  const quantized = (raw: number) =>
    sliderQuantize(raw, Number(cfg.min ?? 0), Number(cfg.max ?? 1), Number(cfg.increment ?? 1));
  input.addEventListener("input", () => {
    out.textContent = fmt(quantized(Number(input.value)));
  });
  input.addEventListener("change", () => {
    bus.sendParam(w.id, quantized(Number(input.value)));
  });
  el.appendChild(input);
  el.appendChild(out);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      if (doc.activeElement !== input && typeof nw.value === "number") {
        input.value = String(nw.value);
        out.textContent = fmt(nw.value);
      }
    },
  };
  view.update(w);
  return view;
}

function dictSliderView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const items: Cfg[] = cfg.items ?? [];
  const { el } = chrome(doc, w, bus);
  const select = doc.createElement("select");
  for (const it of items) {
    const opt = doc.createElement("option");
    opt.value = it.key;
    opt.textContent = it.label;
    select.appendChild(opt);
  }
  const input = doc.createElement("input");
  input.type = "range";
  input.style.width = `${cfg.width ?? 200}px`;
  const out = doc.createElement("span");
  out.className = "slider-value";

  let current = items[Math.min(cfg.init_index ?? 0, items.length - 1)]?.key;
  const itemFor = (key: string) => items.find((it) => it.key === key);
  const values = (): Cfg => (w.value as Cfg) ?? {};

  function configure(key: string) {
    const it = itemFor(key);
    if (!it) return;
    current = key;
    input.min = String(it.min);
    input.max = String(it.max);
    input.step = String(it.increment);
    const v = values()[key] ?? it.init;
    input.value = String(v);
    out.textContent = fmt(Number(v));
  }
  select.addEventListener("change", () => {
    configure(select.value);
    bus.sendParam(w.id, null, select.value); // selection only
  });
  input.addEventListener("input", () => {
    const it = itemFor(current);
    if (it) out.textContent = fmt(sliderQuantize(Number(input.value), it.min, it.max, it.increment));
  });
  input.addEventListener("change", () => {
    const it = itemFor(current);
    if (it) bus.sendParam(w.id, sliderQuantize(Number(input.value), it.min, it.max, it.increment), current);
  });
  el.appendChild(select);
  el.appendChild(input);
  el.appendChild(out);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      w = nw;
      position(el, nw);
      const key = nw.selected_key ?? current;
      if (key && doc.activeElement !== input) {
        select.value = key;
        configure(key);
      }
    },
  };
  view.update(w);
  return view;
}

function textInView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus);
  const area = doc.createElement("textarea");
  area.cols = cfg.columns ?? 20;
  area.rows = cfg.rows ?? 3;
  area.addEventListener("change", () => bus.sendParam(w.id, area.value));
  el.appendChild(area);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      if (doc.activeElement !== area) area.value = String(nw.value ?? "");
    },
  };
  view.update(w);
  return view;
}

function listSelView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus);
  const select = doc.createElement("select");
  select.size = Math.max(2, cfg.rows ?? 3);
  for (const item of cfg.items ?? []) {
    const opt = doc.createElement("option");
    opt.value = String(item);
    opt.textContent = String(item);
    select.appendChild(opt);
  }
  select.addEventListener("change", () => bus.sendParam(w.id, select.value));
  el.appendChild(select);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      if (nw.value !== undefined && doc.activeElement !== select) {
        select.value = String(nw.value);
      }
    },
  };
  view.update(w);
  return view;
}

function checkboxView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const items: string[] = cfg.items ?? [];
  const { el } = chrome(doc, w, bus);
  const boxes: HTMLInputElement[] = [];
  for (const item of items) {
    const lab = doc.createElement("label");
    const box = doc.createElement("input");
    box.type = "checkbox";
    box.addEventListener("change", () => {
      bus.sendParam(w.id, boxes.map((b) => (b.checked ? "1" : "0")).join(""));
    });
    lab.appendChild(box);
    lab.appendChild(doc.createTextNode(item));
    el.appendChild(lab);
    boxes.push(box);
  }
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      const bits = String(nw.value ?? "");
      boxes.forEach((b, i) => { b.checked = bits[i] === "1"; });
    },
  };
  view.update(w);
  return view;
}

function radioView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus);
  const radios: HTMLInputElement[] = [];
  for (const item of cfg.items ?? []) {
    const lab = doc.createElement("label");
    const radio = doc.createElement("input");
    radio.type = "radio";
    radio.name = `radio-${w.id}`;
    radio.value = String(item);
    radio.addEventListener("change", () => {
      if (radio.checked) bus.sendParam(w.id, radio.value);
    });
    lab.appendChild(radio);
    lab.appendChild(doc.createTextNode(String(item)));
    el.appendChild(lab);
    radios.push(radio);
  }
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      radios.forEach((r) => { r.checked = r.value === String(nw.value); });
    },
  };
  view.update(w);
  return view;
}

function buttonView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus, cfg.label_text ?? w.name);
  const button = doc.createElement("button");
  button.textContent = cfg.button_text ?? w.name;
  button.addEventListener("click", () => bus.sendParam(w.id, "1"));
  el.appendChild(button);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
    },
  };
  view.update(w);
  return view;
}

function imageView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const scale = Number(cfg.scale ?? 1) || 1;
  const { el } = chrome(doc, w, bus);
  const canvas = doc.createElement("canvas");
  canvas.width = 1;
  canvas.height = 1;
  canvas.style.imageRendering = "pixelated";
  el.appendChild(canvas);

  // "..." menu: save image / hide
  const menuBtn = doc.createElement("button");
  menuBtn.className = "image-menu-button";
  menuBtn.textContent = "...";
  const menu = doc.createElement("div");
  menu.className = "image-menu";
  menu.style.display = "none";
  const saveItem = doc.createElement("button");
  saveItem.className = "menu-save";
  saveItem.textContent = "Save image";
  saveItem.disabled = true;
  const hideItem = doc.createElement("button");
  hideItem.className = "menu-hide";
  hideItem.textContent = "Hide";
  menu.appendChild(saveItem);
  menu.appendChild(hideItem);
  el.insertBefore(menuBtn, canvas);
  el.appendChild(menu);
  menuBtn.addEventListener("click", () => {
    menu.style.display = menu.style.display === "none" ? "block" : "none";
  });
  hideItem.addEventListener("click", () => {
    canvas.style.display = canvas.style.display === "none" ? "" : "none";
  });

  const toBuffer = (e: MouseEvent): [number, number] => {
    const rect = canvas.getBoundingClientRect();
    return [(e.clientX - rect.left) / scale, (e.clientY - rect.top) / scale];
  };
  let pressedButton = -1;
  canvas.addEventListener("mousedown", (e: MouseEvent) => {
    e.preventDefault();
    pressedButton = e.button + 1; // 1=left, 2=middle, 3=right
    const [x, y] = toBuffer(e);
    bus.sendPointer(w.id, "press", pressedButton, x, y);
    const onMove = (m: MouseEvent) => {
      const [mx, my] = toBuffer(m);
      bus.sendPointer(w.id, "move", pressedButton, mx, my);
    };
    const onUp = (u: MouseEvent) => {
      doc.removeEventListener("mousemove", onMove);
      doc.removeEventListener("mouseup", onUp);
      const [ux, uy] = toBuffer(u);
      bus.sendPointer(w.id, "release", pressedButton, ux, uy);
      pressedButton = -1;
    };
    doc.addEventListener("mousemove", onMove);
    doc.addEventListener("mouseup", onUp);
  });

  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
    },
    setFrame(f: DecodedFrame) {
      this.lastFrame = f;
      saveItem.disabled = false;
      if (canvas.width !== f.width || canvas.height !== f.height) {
        canvas.width = f.width;
        canvas.height = f.height;
        canvas.style.width = `${f.width * scale}px`;
        canvas.style.height = `${f.height * scale}px`;
      }
      if (canvas.style.display === "none") return; // hidden: keep frame only
      const ctx = canvas.getContext?.("2d");
      if (ctx && typeof ImageData !== "undefined") {
        ctx.putImageData(new ImageData(frameToRgba(f), f.width, f.height), 0, 0);
      }
    },
    saveImage() {
      if (!this.lastFrame) return null;
      const f = this.lastFrame;
      return encodePng(f.width, f.height, f.channels, f.pixels);
    },
  };
  saveItem.addEventListener("click", () => {
    const png = view.saveImage?.();
    if (png) downloadPng(doc, png, `${w.name}.png`);
  });
  view.update(w);
  return view;
}

function downloadPng(doc: Document, png: Uint8Array, filename: string): void {
  const blob = new Blob([png.buffer as ArrayBuffer], { type: "image/png" });
  const url = URL.createObjectURL(blob);
  const a = doc.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

function textOutView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const cfg = (w.config ?? {}) as Cfg;
  const { el } = chrome(doc, w, bus);
  const pre = doc.createElement("pre");
  pre.className = "text-out";
  pre.style.width = `${(cfg.columns ?? 20) * 8}px`;
  pre.style.minHeight = `${(cfg.rows ?? 3) * 16}px`;
  const justify: string = cfg.justify ?? "just_center";
  pre.style.textAlign = { just_left: "left", just_right: "right",
                          just_center: "center" }[justify] ?? "center";
  el.appendChild(pre);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
    },
    setText(s: string) {
      pre.textContent = s;
    },
  };
  view.update(w);
  return view;
}

function commentView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const { el } = chrome(doc, w, bus);
  const body = doc.createElement("div");
  body.className = "comment-body";
  body.textContent = w.body ?? "";
  el.appendChild(body);
  const view: WidgetView = {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
      body.textContent = nw.body ?? "";
    },
  };
  view.update(w);
  return view;
}

function placeholderView(doc: Document, w: LayoutWidget, bus: Bus): WidgetView {
  const { el } = chrome(doc, w, bus);
  el.classList.add("widget-unknown");
  const warn = doc.createElement("div");
  warn.className = "widget-warning";
  warn.textContent = `unknown widget kind: ${w.kind}`;
  el.appendChild(warn);
  return {
    el, widget: w,
    update(nw) {
      this.widget = nw;
      position(el, nw);
    },
  };
}

const FACTORY: Record<string, (d: Document, w: LayoutWidget, b: Bus) => WidgetView> = {
  SLIDER: sliderView,
  DICTSLIDER: dictSliderView,
  TEXT_IN: textInView,
  LISTSEL: listSelView,
  CHECKBOX: checkboxView,
  RADIOBUTTON: radioView,
  BUTTON: buttonView,
  IMAGE: imageView,
  TEXT_OUT: textOutView,
};

export function createWidgetView(w: LayoutWidget, bus: Bus,
                                 doc: Document = document): WidgetView {
  if (w.group === "comment") {
    return commentView(doc, w, bus);
  }
  const factory = FACTORY[w.kind ?? ""];
  return factory ? factory(doc, w, bus) : placeholderView(doc, w, bus);
}
