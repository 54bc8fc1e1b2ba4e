// Wire protocol: JSON text messages plus a binary image-frame format.
//
// Binary layout (little endian, 16-byte header):
//   magic "IVIM" (4) | version u8 = 1 | widget_id u32 | width u16 |
//   height u16 | channels u8 | reserved u16 = 0 | row-major 8-bit samples

export interface LayoutWidget {
  id: number;
  group: "parameter" | "data" | "comment";
  name: string;
  x: number;
  y: number;
  kind?: string;
  config?: Record<string, unknown>;
  target?: string;
  value?: unknown;
  selected_key?: string;
  body?: string;
}

export interface LayoutMsg {
  type: "layout";
  context: string;
  step: number;
  widgets: LayoutWidget[];
  unresolved: string[];
}

export interface FrameMeta {
  type: "frame_meta";
  step: number;
  texts: [number, string][];
  images: number[];
}

export interface ReportMsg {
  type: "report";
  op?: string;
  [k: string]: unknown;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  detail?: string;
}

export type ServerMsg = LayoutMsg | FrameMeta | ReportMsg | ErrorMsg;

export type ClientMsg =
  | { type: "action"; cmd: string }
  | { type: "set_param"; widget_id: number; value: unknown; key?: string }
  | { type: "pointer"; widget_id: number; kind: "press" | "move" | "release";
      button: number; x_px: number; y_px: number }
  | { type: "set_geometry"; widget_id: number; x: number; y: number }
  | { type: "select_context"; name: string };

export interface DecodedFrame {
  widgetId: number;
  width: number;
  height: number;
  channels: 1 | 3;
  pixels: Uint8Array;
}

const MAGIC = [0x49, 0x56, 0x49, 0x4d]; // "IVIM"
const VERSION = 1;
export const HEADER_SIZE = 16;

export function decodeImageFrame(data: ArrayBuffer): DecodedFrame {
  if (data.byteLength < HEADER_SIZE) {
    throw new Error("truncated header");
  }
  const view = new DataView(data);
  for (let i = 0; i < 4; i++) {
    if (view.getUint8(i) !== MAGIC[i]) {
      throw new Error("bad magic");
    }
  }
  if (view.getUint8(4) !== VERSION) {
    throw new Error(`unsupported version ${view.getUint8(4)}`);
  }
  const widgetId = view.getUint32(5, true);
  const width = view.getUint16(9, true);
  const height = view.getUint16(11, true);
  const channels = view.getUint8(13);
  if (channels !== 1 && channels !== 3) {
    throw new Error(`bad channel count ${channels}`);
  }
  const expected = width * height * channels;
  if (data.byteLength - HEADER_SIZE !== expected) {
    throw new Error(`payload size ${data.byteLength - HEADER_SIZE} != ${expected}`);
  }
  return { widgetId, width, height, channels, pixels: new Uint8Array(data, HEADER_SIZE) };
}

// test mirror of the server-side encoder
export function encodeImageFrame(f: DecodedFrame): Uint8Array {
  const out = new Uint8Array(HEADER_SIZE + f.pixels.length);
  const view = new DataView(out.buffer);
  MAGIC.forEach((b, i) => view.setUint8(i, b));
  view.setUint8(4, VERSION);
  view.setUint32(5, f.widgetId, true);
  view.setUint16(9, f.width, true);
  view.setUint16(11, f.height, true);
  view.setUint8(13, f.channels);
  view.setUint16(14, 0, true);
  out.set(f.pixels, HEADER_SIZE);
  return out;
}

/** Expand a decoded frame to RGBA for a canvas ImageData buffer. */
export function frameToRgba(f: DecodedFrame): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(f.width * f.height * 4);
  const n = f.width * f.height;
  for (let i = 0; i < n; i++) {
    if (f.channels === 1) {
      const v = f.pixels[i];
      out[i * 4] = v;
      out[i * 4 + 1] = v;
      out[i * 4 + 2] = v;
    } else {
      out[i * 4] = f.pixels[i * 3];
      out[i * 4 + 1] = f.pixels[i * 3 + 1];
      out[i * 4 + 2] = f.pixels[i * 3 + 2];
    }
    out[i * 4 + 3] = 255;
  }
  return out;
}
