// Application shell: one websocket, an action bar, a pan-able widget panel,
// and a latest-frame buffer per image widget.

import { ClientMsg, DecodedFrame, FrameMeta, LayoutMsg, ServerMsg,
         decodeImageFrame } from "./protocol.js";
import { Bus, WidgetView, createWidgetView } from "./widgets.js";

export interface SocketLike {
  send(data: string): void;
}

const ACTIONS = ["Parse", "Init", "Step", "Run", "Stop", "Cont", "Save", "Quit"];

export class App implements Bus {
  readonly panel: HTMLElement;
  readonly views = new Map<number, WidgetView>();
  readonly latestFrames = new Map<number, DecodedFrame>();
  private readonly stepEl: HTMLElement;
  private readonly contextEl: HTMLElement;
  private readonly banner: HTMLElement;
  private connected = true;

  constructor(root: HTMLElement,
              private readonly socket: SocketLike,
              private readonly doc: Document = document) {
    const bar = doc.createElement("div");
    bar.className = "action-bar";
    for (const name of ACTIONS) {
      const b = doc.createElement("button");
      b.className = `action-${name.toLowerCase()}`;
      b.textContent = name;
      b.addEventListener("click", () => this.sendAction(name.toLowerCase()));
      bar.appendChild(b);
    }
    this.contextEl = doc.createElement("span");
    this.contextEl.className = "context-name";
    bar.appendChild(this.contextEl);
    this.stepEl = doc.createElement("span");
    this.stepEl.className = "step-counter";
    this.stepEl.textContent = "0";
    bar.appendChild(this.stepEl);
    this.banner = doc.createElement("div");
    this.banner.className = "banner";
    this.banner.style.display = "none";
    this.panel = doc.createElement("div");
    this.panel.className = "widget-panel";
    root.appendChild(bar);
    root.appendChild(this.banner);
    root.appendChild(this.panel);
  }

  // -- outgoing -------------------------------------------------------------

  private post(msg: ClientMsg): void {
    if (!this.connected) {
      return; // gestures disabled while disconnected
    }
    this.socket.send(JSON.stringify(msg));
  }

  sendAction(cmd: string): void {
    this.post({ type: "action", cmd });
  }

  sendParam(id: number, value: unknown, key?: string): void {
    this.post(key === undefined
      ? { type: "set_param", widget_id: id, value }
      : { type: "set_param", widget_id: id, value, key });
  }

  sendPointer(id: number, kind: "press" | "move" | "release", button: number,
              x: number, y: number): void {
    this.post({ type: "pointer", widget_id: id, kind, button, x_px: x, y_px: y });
  }

  sendGeometry(id: number, x: number, y: number): void {
    this.post({ type: "set_geometry", widget_id: id, x, y });
  }

  // -- incoming -------------------------------------------------------------

  handleMessage(data: string | ArrayBuffer): void {
    if (typeof data === "string") {
      this.handleServerMsg(JSON.parse(data) as ServerMsg);
    } else {
      this.handleBinary(data);
    }
  }

  private handleServerMsg(msg: ServerMsg): void {
    switch (msg.type) {
      case "layout":
        this.applyLayout(msg);
        break;
      case "frame_meta":
        this.applyFrameMeta(msg);
        break;
      case "error":
        this.showBanner(`error: ${msg.code} ${msg.detail ?? ""}`);
        break;
      case "report":
        break;
    }
  }

  private handleBinary(buf: ArrayBuffer): void {
    const frame = decodeImageFrame(buf);
    this.latestFrames.set(frame.widgetId, frame);
    this.views.get(frame.widgetId)?.setFrame?.(frame);
  }

  applyLayout(layout: LayoutMsg): void {
    this.contextEl.textContent = layout.context;
    this.stepEl.textContent = String(layout.step);
    const seen = new Set<number>();
    for (const w of layout.widgets) {
      seen.add(w.id);
      const existing = this.views.get(w.id);
      if (existing && existing.widget.kind === w.kind &&
          existing.widget.name === w.name) {
        existing.update(w);
        continue;
      }
      if (existing) {
        existing.el.remove();
      }
      const view = createWidgetView(w, this, this.doc);
      this.views.set(w.id, view);
      this.panel.appendChild(view.el);
      const frame = this.latestFrames.get(w.id);
      if (frame) {
        view.setFrame?.(frame);
      }
    }
    for (const [id, view] of [...this.views]) {
      if (!seen.has(id)) {
        view.el.remove();
        this.views.delete(id);
      }
    }
  }

  applyFrameMeta(meta: FrameMeta): void {
    this.stepEl.textContent = String(meta.step);
    for (const [id, text] of meta.texts) {
      this.views.get(id)?.setText?.(text);
    }
  }

  setConnected(up: boolean): void {
    this.connected = up;
    if (up) {
      this.banner.style.display = "none";
      this.panel.classList.remove("disconnected");
    } else {
      this.showBanner("disconnected from engine");
      this.panel.classList.add("disconnected");
    }
  }

  private showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.style.display = "block";
  }
}

/** Wire a real browser WebSocket to an App instance. */
export function connect(root: HTMLElement, url: string): App {
  const ws = new WebSocket(url);
  ws.binaryType = "arraybuffer";
  const app = new App(root, ws);
  ws.onmessage = (e: MessageEvent) => app.handleMessage(e.data);
  ws.onopen = () => app.setConnected(true);
  ws.onclose = () => app.setConnected(false);
  ws.onerror = () => app.setConnected(false);
  return app;
}
