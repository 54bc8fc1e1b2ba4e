import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { describe, expect, it } from "vitest";

import { decodeImageFrame, encodeImageFrame, frameToRgba, HEADER_SIZE } from "../src/protocol.js";

// vitest runs with cwd = frontend/; the vectors are shared with the engine's suite
const vectors = JSON.parse(readFileSync(
  resolve(process.cwd(), "../conformance/frame_vectors.json"), "utf-8")).vectors;

function fromHex(hex: string): Uint8Array {
  const out = new Uint8Array(hex.length / 2);
  for (let i = 0; i < out.length; i++) {
    out[i] = parseInt(hex.slice(i * 2, i * 2 + 2), 16);
  }
  return out;
}

function toHex(bytes: Uint8Array): string {
  return [...bytes].map((b) => b.toString(16).padStart(2, "0")).join("");
}

describe("binary frame codec", () => {
  it("decodes the shared conformance vectors", () => {
    for (const vec of vectors) {
      const frame = decodeImageFrame(fromHex(vec.encoded_hex).buffer as ArrayBuffer);
      expect(frame.widgetId).toBe(vec.widget_id);
      expect(frame.width).toBe(vec.width);
      expect(frame.height).toBe(vec.height);
      expect(frame.channels).toBe(vec.channels);
      expect(toHex(frame.pixels)).toBe(vec.pixels_hex);
    }
  });

  it("encodes the shared conformance vectors bit-exactly", () => {
    for (const vec of vectors) {
      const encoded = encodeImageFrame({
        widgetId: vec.widget_id, width: vec.width, height: vec.height,
        channels: vec.channels, pixels: fromHex(vec.pixels_hex),
      });
      expect(toHex(encoded)).toBe(vec.encoded_hex);
    }
  });

  it("round-trips random buffers", () => {
    for (let trial = 0; trial < 50; trial++) {
      const width = 1 + (trial % 13);
      const height = 1 + ((trial * 7) % 11);
      const channels = trial % 2 === 0 ? 1 : 3;
      const pixels = new Uint8Array(width * height * channels);
      for (let i = 0; i < pixels.length; i++) {
        pixels[i] = (i * 31 + trial) % 256;
      }
      const back = decodeImageFrame(
        encodeImageFrame({ widgetId: trial, width, height,
                           channels: channels as 1 | 3, pixels }).buffer as ArrayBuffer);
      expect(back.widgetId).toBe(trial);
      expect([...back.pixels]).toEqual([...pixels]);
    }
  });

  it("rejects bad magic and truncated payloads", () => {
    const good = encodeImageFrame(
      { widgetId: 1, width: 2, height: 2, channels: 1, pixels: new Uint8Array(4) });
    const bad = good.slice();
    bad[0] = 0x58;
    expect(() => decodeImageFrame(bad.buffer as ArrayBuffer)).toThrow(/magic/);
    expect(() => decodeImageFrame(good.slice(0, HEADER_SIZE + 3).buffer as ArrayBuffer))
      .toThrow(/payload/);
  });

  it("expands gray frames to RGBA", () => {
    const rgba = frameToRgba(
      { widgetId: 1, width: 2, height: 1, channels: 1, pixels: new Uint8Array([7, 250]) });
    expect([...rgba]).toEqual([7, 7, 7, 255, 250, 250, 250, 255]);
  });
});
